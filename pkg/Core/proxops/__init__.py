"""近端算子：软阈值、加权奇异值阈值化与权重生成。"""

from .shrinkage import shrink
from .svd import SvdTriple, thin_svd
from .weighted import (adaptive_scale, erf_weights, weighted_nuclear_norm, weighted_svt,
                       weights_for)

__all__ = [
    "shrink",
    "SvdTriple",
    "thin_svd",
    "erf_weights",
    "adaptive_scale",
    "weights_for",
    "weighted_svt",
    "weighted_nuclear_norm",
]
