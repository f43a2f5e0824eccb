"""headsal: head-movement saliency on omnidirectional images.

Pipeline: head-movement logs -> I-VT fixation extraction -> saliency maps, and
an adversarial-imitation model that predicts per-subject head trajectories and
turns them into saliency maps.
"""

__version__ = "0.1.0"

from .estimator import SaliencyImitator
from .geometry import PixelCoord, SpherePoint, ViewportSpec
from .raster import EquirectImage, SaliencyMap

__all__ = [
    "EquirectImage",
    "PixelCoord",
    "SaliencyMap",
    "SaliencyImitator",
    "SpherePoint",
    "ViewportSpec",
    "__version__",
]
