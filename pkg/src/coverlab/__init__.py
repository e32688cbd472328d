"""coverlab: certified covering, packing, entropy and chaining brackets
for centrally symmetric convex bodies, plus polar-duality experiments."""

__version__ = "0.1.0"

from ._kernels import BACKEND as KERNEL_BACKEND  # noqa: F401
from .bodies import (  # noqa: F401
    ConvexBody, Ellipsoid, HPolytope, LinearImage, LpBall, VPolytope,
    gauge, linear_image, mvee, polar, scale_body, support, volume,
)
from .brackets import Bracket  # noqa: F401
from .config import DEFAULT_EFFORT, EffortConfig  # noqa: F401
