"""Minimal CPU neural-network engine: exactly the layers the gaze policies need.

Reverse-mode gradients are hand-written per layer and are held to a central
finite-difference check in the test suite.  Parameters default to float32 so
checkpoints round-trip bit-exactly; every layer also runs in float64, which the
gradient checks use.  There is no autodiff graph: callers supply the upstream
gradient at the network output.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

CHECKPOINT_MAGIC = b"SGAIL1"


def softmax(z: np.ndarray, axis: int = -1) -> np.ndarray:
    z = z - np.max(z, axis=axis, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=axis, keepdims=True)


def log_softmax(z: np.ndarray, axis: int = -1) -> np.ndarray:
    z = z - np.max(z, axis=axis, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=axis, keepdims=True))


def one_hot(idx, n: int, dtype=np.float32) -> np.ndarray:
    idx = np.asarray(idx, dtype=np.int64)
    out = np.zeros(idx.shape + (n,), dtype=dtype)
    np.put_along_axis(out, idx[..., None], 1.0, axis=-1)
    return out


def _uniform_fan_in(rng: np.random.Generator, shape, fan_in: int, dtype) -> np.ndarray:
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape).astype(dtype)


class Layer:
    """Base layer: forward caches whatever backward needs; backward returns dx."""

    kind = "layer"

    def __init__(self):
        self.params: dict[str, np.ndarray] = {}
        self.buffers: dict[str, np.ndarray] = {}
        self.grads: dict[str, np.ndarray] = {}
        self._cache = None

    def forward(self, x, train=False):
        raise NotImplementedError

    def backward(self, dout):
        raise NotImplementedError

    def _take_cache(self):
        if self._cache is None:
            raise RuntimeError(f"{self.kind}: backward called before forward")
        cache, self._cache = self._cache, None
        return cache

    def spec(self) -> dict:
        return {"kind": self.kind}


class Dense(Layer):
    kind = "dense"

    def __init__(self, in_dim: int, out_dim: int, rng=None, dtype=np.float32):
        super().__init__()
        self.in_dim, self.out_dim = int(in_dim), int(out_dim)
        rng = rng or np.random.default_rng(0)
        self.params["w"] = _uniform_fan_in(rng, (out_dim, in_dim), in_dim, dtype)
        self.params["b"] = np.zeros(out_dim, dtype=dtype)

    def forward(self, x, train=False):
        self._cache = x
        return x @ self.params["w"].T + self.params["b"]

    def backward(self, dout):
        x = self._take_cache()
        self.grads = {"w": dout.T @ x, "b": dout.sum(axis=0)}
        return dout @ self.params["w"]

    def spec(self):
        return {"kind": self.kind, "in_dim": self.in_dim, "out_dim": self.out_dim}


def _im2col(x: np.ndarray, k: int, s: int):
    n, c, h, w = x.shape
    oh = (h - k) // s + 1
    ow = (w - k) // s + 1
    win = np.lib.stride_tricks.sliding_window_view(x, (k, k), axis=(2, 3))[:, :, ::s, ::s]
    cols = np.ascontiguousarray(win.transpose(0, 1, 4, 5, 2, 3)).reshape(n, c * k * k, oh * ow)
    return cols, oh, ow


def _col2im(dcols: np.ndarray, x_shape, k: int, s: int, oh: int, ow: int):
    n, c, h, w = x_shape
    dx = np.zeros(x_shape, dtype=dcols.dtype)
    d6 = dcols.reshape(n, c, k, k, oh, ow)
    for ki in range(k):
        for kj in range(k):
            dx[:, :, ki:ki + oh * s:s, kj:kj + ow * s:s] += d6[:, :, ki, kj]
    return dx


class Conv2d(Layer):
    """Valid (unpadded) strided 2-D convolution over (n, c, h, w) input."""

    kind = "conv2d"

    def __init__(self, in_ch: int, out_ch: int, k: int, stride: int, rng=None, dtype=np.float32):
        super().__init__()
        self.in_ch, self.out_ch, self.k, self.stride = int(in_ch), int(out_ch), int(k), int(stride)
        rng = rng or np.random.default_rng(0)
        fan_in = in_ch * k * k
        self.params["w"] = _uniform_fan_in(rng, (out_ch, in_ch, k, k), fan_in, dtype)
        self.params["b"] = np.zeros(out_ch, dtype=dtype)

    def forward(self, x, train=False):
        if x.ndim != 4 or x.shape[1] != self.in_ch:
            raise ValueError(f"conv2d expects (n, {self.in_ch}, h, w), got {x.shape}")
        if x.shape[2] < self.k or x.shape[3] < self.k:
            raise ValueError(f"conv2d kernel {self.k} exceeds unpadded input {x.shape[2:]}")
        cols, oh, ow = _im2col(x, self.k, self.stride)
        w2 = self.params["w"].reshape(self.out_ch, -1)
        out = np.matmul(w2, cols).reshape(x.shape[0], self.out_ch, oh, ow)
        out += self.params["b"][None, :, None, None]
        self._cache = (cols, x.shape, oh, ow)
        return out

    def backward(self, dout, need_dx: bool = True):
        cols, x_shape, oh, ow = self._take_cache()
        n = x_shape[0]
        d2 = dout.reshape(n, self.out_ch, oh * ow)
        d2t = np.ascontiguousarray(d2.transpose(1, 0, 2)).reshape(self.out_ch, -1)
        colst = np.ascontiguousarray(cols.transpose(1, 0, 2)).reshape(cols.shape[1], -1)
        dw = (d2t @ colst.T).reshape(self.params["w"].shape)
        db = d2.sum(axis=(0, 2))
        self.grads = {"w": dw, "b": db}
        if not need_dx:
            return None
        w2 = self.params["w"].reshape(self.out_ch, -1)
        dcols = np.matmul(w2.T, d2)
        return _col2im(dcols, x_shape, self.k, self.stride, oh, ow)

    def spec(self):
        return {"kind": self.kind, "in_ch": self.in_ch, "out_ch": self.out_ch,
                "k": self.k, "stride": self.stride}


class LeakyReLU(Layer):
    kind = "leaky_relu"

    def __init__(self, slope: float = 0.01):
        super().__init__()
        self.slope = float(slope)

    def forward(self, x, train=False):
        mask = x >= 0
        self._cache = mask
        return np.where(mask, x, self.slope * x)

    def backward(self, dout):
        mask = self._take_cache()
        return np.where(mask, dout, self.slope * dout)

    def spec(self):
        return {"kind": self.kind, "slope": self.slope}


class BatchNorm(Layer):
    """Per-channel normalization; batch statistics in train, running in eval."""

    kind = "batchnorm"

    def __init__(self, num_features: int, eps: float = 1e-5, momentum: float = 0.1,
                 dtype=np.float32):
        super().__init__()
        self.num_features = int(num_features)
        self.eps = float(eps)
        self.momentum = float(momentum)
        self.params["gamma"] = np.ones(num_features, dtype=dtype)
        self.params["beta"] = np.zeros(num_features, dtype=dtype)
        self.buffers["running_mean"] = np.zeros(num_features, dtype=dtype)
        self.buffers["running_var"] = np.ones(num_features, dtype=dtype)

    def _axes_and_shape(self, x):
        if x.ndim == 2:
            return (0,), (1, self.num_features)
        if x.ndim == 4:
            return (0, 2, 3), (1, self.num_features, 1, 1)
        raise ValueError(f"batchnorm expects 2-D or 4-D input, got shape {x.shape}")

    def forward(self, x, train=False):
        axes, bshape = self._axes_and_shape(x)
        if x.shape[1] != self.num_features:
            raise ValueError(f"batchnorm over {self.num_features} features, got {x.shape}")
        gamma = self.params["gamma"].reshape(bshape)
        beta = self.params["beta"].reshape(bshape)
        if train:
            m = x.size // self.num_features
            mu = x.mean(axis=axes)
            var = x.var(axis=axes)
            inv = 1.0 / np.sqrt(var.reshape(bshape) + self.eps)
            xhat = (x - mu.reshape(bshape)) * inv
            mom = self.momentum
            self.buffers["running_mean"] += (mom * (mu - self.buffers["running_mean"])).astype(
                self.buffers["running_mean"].dtype)
            unbiased = var * (m / max(m - 1, 1))
            self.buffers["running_var"] += (mom * (unbiased - self.buffers["running_var"])).astype(
                self.buffers["running_var"].dtype)
            self._cache = ("train", xhat, inv, axes, bshape, m)
        else:
            inv = 1.0 / np.sqrt(self.buffers["running_var"].reshape(bshape) + self.eps)
            xhat = (x - self.buffers["running_mean"].reshape(bshape)) * inv
            self._cache = ("eval", xhat, inv, axes, bshape, None)
        return gamma * xhat + beta

    def backward(self, dout):
        mode, xhat, inv, axes, bshape, m = self._take_cache()
        gamma = self.params["gamma"].reshape(bshape)
        self.grads = {"gamma": (dout * xhat).sum(axis=axes), "beta": dout.sum(axis=axes)}
        dxhat = dout * gamma
        if mode == "eval":
            return dxhat * inv
        sum_d = dxhat.sum(axis=axes).reshape(bshape)
        sum_dx = (dxhat * xhat).sum(axis=axes).reshape(bshape)
        return (inv / m) * (m * dxhat - sum_d - xhat * sum_dx)

    def spec(self):
        return {"kind": self.kind, "num_features": self.num_features,
                "eps": self.eps, "momentum": self.momentum}


class Softmax(Layer):
    kind = "softmax"

    def forward(self, x, train=False):
        out = softmax(x, axis=-1)
        self._cache = out
        return out

    def backward(self, dout):
        out = self._take_cache()
        return out * (dout - (dout * out).sum(axis=-1, keepdims=True))


class Flatten(Layer):
    kind = "flatten"

    def forward(self, x, train=False):
        self._cache = x.shape
        return x.reshape(x.shape[0], -1)

    def backward(self, dout):
        return dout.reshape(self._take_cache())


class Concat(Layer):
    """Append an auxiliary feature block (latent code or action one-hot)."""

    kind = "concat"

    def __init__(self, aux_dim: int):
        super().__init__()
        self.aux_dim = int(aux_dim)
        self.aux_grad = None

    def forward(self, x, aux=None, train=False):
        if aux is None:
            raise ValueError("concat layer needs an auxiliary input")
        aux = np.asarray(aux, dtype=x.dtype)
        if aux.ndim != 2 or aux.shape != (x.shape[0], self.aux_dim):
            raise ValueError(f"aux must be ({x.shape[0]}, {self.aux_dim}), got {aux.shape}")
        self._cache = x.shape[1]
        return np.concatenate([x, aux], axis=1)

    def backward(self, dout):
        n = self._take_cache()
        self.aux_grad = dout[:, n:]
        return dout[:, :n]

    def spec(self):
        return {"kind": self.kind, "aux_dim": self.aux_dim}


_LAYER_KINDS = {cls.kind: cls for cls in (Dense, Conv2d, LeakyReLU, BatchNorm,
                                          Softmax, Flatten, Concat)}


def layer_from_spec(spec: dict, dtype=np.float32) -> Layer:
    kind = spec["kind"]
    kwargs = {k: v for k, v in spec.items() if k != "kind"}
    cls = _LAYER_KINDS[kind]
    if kind in ("dense", "conv2d", "batchnorm"):
        kwargs["dtype"] = dtype
    return cls(**kwargs)


class Network:
    """A sequential stack of layers with a single optional auxiliary input."""

    def __init__(self, layers: list[Layer], dtype=np.float32):
        self.layers = layers
        self.dtype = np.dtype(dtype)

    def forward(self, x, aux=None, train: bool = False) -> np.ndarray:
        out = np.asarray(x, dtype=self.dtype)
        if aux is not None:
            aux = np.asarray(aux, dtype=self.dtype)
        for layer in self.layers:
            if isinstance(layer, Concat):
                out = layer.forward(out, aux=aux, train=train)
            else:
                out = layer.forward(out, train=train)
        return out

    def backward(self, dout, need_input_grad: bool = True) -> np.ndarray | None:
        dx = np.asarray(dout, dtype=self.dtype)
        for i, layer in enumerate(reversed(self.layers)):
            is_first = i == len(self.layers) - 1
            if is_first and not need_input_grad and isinstance(layer, Conv2d):
                return layer.backward(dx, need_dx=False)
            dx = layer.backward(dx)
        return dx

    def named_params(self):
        for i, layer in enumerate(self.layers):
            for name in sorted(layer.params):
                yield f"{i}.{name}", layer, name

    def named_states(self):
        """Parameters plus non-trained buffers, in checkpoint order."""
        for i, layer in enumerate(self.layers):
            for name in sorted(layer.params):
                yield f"{i}.{name}", layer.params, name
            for name in sorted(layer.buffers):
                yield f"{i}.buffer.{name}", layer.buffers, name

    def spec(self) -> list[dict]:
        return [layer.spec() for layer in self.layers]

    @classmethod
    def from_spec(cls, specs: list[dict], dtype=np.float32) -> "Network":
        return cls([layer_from_spec(s, dtype) for s in specs], dtype=dtype)


class TwinHeadNet:
    """A shared trunk with named single-purpose heads (policy/value, score/class)."""

    def __init__(self, trunk: Network, heads: dict[str, Network]):
        self.trunk = trunk
        self.heads = dict(heads)
        self._features = None

    @property
    def dtype(self):
        return self.trunk.dtype

    def forward(self, x, aux=None, head: str | None = None, train: bool = False):
        """Run the trunk once and the requested head(s); dict of outputs if head None."""
        self._features = self.trunk.forward(x, aux=aux, train=train)
        if head is not None:
            return self.heads[head].forward(self._features, train=train)
        return {name: net.forward(self._features, train=train)
                for name, net in self.heads.items()}

    def backward(self, head: str, dout) -> np.ndarray | None:
        """Backpropagate one head's upstream gradient through head and trunk.

        The gradient with respect to the image input is not materialized.
        """
        dfeat = self.heads[head].backward(dout)
        return self.trunk.backward(dfeat, need_input_grad=False)

    def backward_heads(self, douts: dict[str, np.ndarray]) -> np.ndarray | None:
        """Backpropagate several heads at once, summing their trunk gradients."""
        dfeat = None
        for name, dout in douts.items():
            d = self.heads[name].backward(dout)
            dfeat = d if dfeat is None else dfeat + d
        return self.trunk.backward(dfeat, need_input_grad=False)

    def named_params(self, head: str | None = None):
        """Trunk parameters plus one head's (or all heads') parameters."""
        for key, layer, name in self.trunk.named_params():
            yield f"trunk.{key}", layer, name
        names = sorted(self.heads) if head is None else [head]
        for hname in names:
            for key, layer, name in self.heads[hname].named_params():
                yield f"head_{hname}.{key}", layer, name

    def named_states(self):
        for key, holder, name in self.trunk.named_states():
            yield f"trunk.{key}", holder, name
        for hname in sorted(self.heads):
            for key, holder, name in self.heads[hname].named_states():
                yield f"head_{hname}.{key}", holder, name

    def spec(self) -> dict:
        return {"trunk": self.trunk.spec(),
                "heads": {name: net.spec() for name, net in sorted(self.heads.items())}}

    @classmethod
    def from_spec(cls, spec: dict, dtype=np.float32) -> "TwinHeadNet":
        trunk = Network.from_spec(spec["trunk"], dtype)
        heads = {name: Network.from_spec(s, dtype) for name, s in spec["heads"].items()}
        return cls(trunk, heads)


class RmsProp:
    """Centered=false RMSprop; optional L2 weight decay folded into the gradient."""

    def __init__(self, lr: float, alpha: float = 0.99, eps: float = 1e-8,
                 weight_decay: float = 0.0):
        self.lr, self.alpha, self.eps, self.weight_decay = lr, alpha, eps, weight_decay
        self._sq: dict[str, np.ndarray] = {}

    def step(self, named) -> None:
        for key, layer, name in named:
            p = layer.params[name]
            g = layer.grads.get(name)
            if g is None:
                raise RuntimeError(f"no gradient for {key}; run backward first")
            if not np.all(np.isfinite(g)):
                raise FloatingPointError(f"non-finite gradient in {key}")
            g = g.astype(p.dtype)
            if self.weight_decay:
                g = g + self.weight_decay * p
            sq = self._sq.setdefault(key, np.zeros_like(p))
            sq *= self.alpha
            sq += (1.0 - self.alpha) * g * g
            p -= (self.lr * g / (np.sqrt(sq) + self.eps)).astype(p.dtype)


class Adam:
    def __init__(self, lr: float, beta1: float = 0.9, beta2: float = 0.999,
                 eps: float = 1e-8, weight_decay: float = 0.0):
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.weight_decay = weight_decay
        self._m: dict[str, np.ndarray] = {}
        self._v: dict[str, np.ndarray] = {}
        self._t: dict[str, int] = {}

    def step(self, named) -> None:
        for key, layer, name in named:
            p = layer.params[name]
            g = layer.grads.get(name)
            if g is None:
                raise RuntimeError(f"no gradient for {key}; run backward first")
            if not np.all(np.isfinite(g)):
                raise FloatingPointError(f"non-finite gradient in {key}")
            g = g.astype(p.dtype)
            if self.weight_decay:
                g = g + self.weight_decay * p
            m = self._m.setdefault(key, np.zeros_like(p))
            v = self._v.setdefault(key, np.zeros_like(p))
            t = self._t.get(key, 0) + 1
            self._t[key] = t
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            mhat = m / (1.0 - self.beta1 ** t)
            vhat = v / (1.0 - self.beta2 ** t)
            p -= (self.lr * mhat / (np.sqrt(vhat) + self.eps)).astype(p.dtype)


def save_checkpoint(path, nets: dict, header_extra: dict | None = None) -> None:
    """Write magic + JSON header + little-endian float32 parameter blob.

    ``nets`` maps names to Network/TwinHeadNet instances.  Loads are bit-exact
    for float32 networks.
    """
    net_specs = {}
    manifest = []
    chunks = []
    for net_name in sorted(nets):
        net = nets[net_name]
        net_specs[net_name] = net.spec()
        for key, holder, name in net.named_states():
            arr = holder[name]
            manifest.append({"key": f"{net_name}.{key}", "shape": list(arr.shape)})
            chunks.append(np.ascontiguousarray(arr, dtype="<f4").tobytes())
    header = {"format": 1, "nets": net_specs, "arrays": manifest}
    if header_extra:
        header.update(header_extra)
    hjson = json.dumps(header, sort_keys=True).encode("utf-8")
    with open(Path(path), "wb") as fh:
        fh.write(CHECKPOINT_MAGIC)
        fh.write(struct.pack("<I", len(hjson)))
        fh.write(hjson)
        for chunk in chunks:
            fh.write(chunk)


def load_checkpoint(path, dtype=np.float32):
    """Inverse of :func:`save_checkpoint`; returns (nets, header)."""
    blob = Path(path).read_bytes()
    if blob[:len(CHECKPOINT_MAGIC)] != CHECKPOINT_MAGIC:
        raise ValueError(f"{path}: not a checkpoint (bad magic)")
    off = len(CHECKPOINT_MAGIC)
    (hlen,) = struct.unpack_from("<I", blob, off)
    off += 4
    header = json.loads(blob[off:off + hlen].decode("utf-8"))
    off += hlen
    nets = {}
    for net_name, spec in header["nets"].items():
        if isinstance(spec, dict) and "trunk" in spec:
            nets[net_name] = TwinHeadNet.from_spec(spec, dtype)
        else:
            nets[net_name] = Network.from_spec(spec, dtype)
    states = {}
    for net_name, net in nets.items():
        for key, holder, name in net.named_states():
            states[f"{net_name}.{key}"] = (holder, name)
    for entry in header["arrays"]:
        shape = tuple(entry["shape"])
        count = int(np.prod(shape)) if shape else 1
        arr = np.frombuffer(blob, dtype="<f4", count=count, offset=off).reshape(shape)
        off += count * 4
        holder, name = states[entry["key"]]
        holder[name] = arr.astype(dtype)
    return nets, header
