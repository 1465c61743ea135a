"""相似度核。

指数核 ``exp(−d²/h²)`` 的输出位于 (0,1]；余弦核截断到 [0,1]，保证度为正。
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from Utils.Exceptions import KernelParameterException, ZeroNormException


class KernelKind(Enum):
    EXPONENTIAL = "exponential"
    COSINE = "cosine"


@dataclass(frozen=True)
class SimilarityKernel:
    """
    相似度核。

    Attributes:
        kind: 核类型
        h: 滤波参数，仅指数核使用
    """
    kind: KernelKind = KernelKind.EXPONENTIAL
    h: float = 1.0

    def __post_init__(self) -> None:
        if self.kind is KernelKind.EXPONENTIAL and not self.h > 0:
            raise KernelParameterException(
                f"Filtering parameter h must be positive, got {self.h}",
                details={"h": self.h},
            )

    def from_squared_distance(self, squared: np.ndarray) -> np.ndarray:
        """由平方距离计算指数核相似度。"""
        return np.exp(-np.asarray(squared, dtype=np.float64) / (self.h * self.h))

    def from_products(self, dots: np.ndarray, norms_u: np.ndarray, norms_v: np.ndarray) -> np.ndarray:
        """
        由内积与范数计算余弦相似度，逐元素截断到 [0,1]。

        Raises:
            ZeroNormException: 存在零范数
        """
        norms_u = np.asarray(norms_u, dtype=np.float64)
        norms_v = np.asarray(norms_v, dtype=np.float64)
        zero = (norms_u == 0) | (norms_v == 0)
        if np.any(zero):
            position = int(np.flatnonzero(zero)[0])
            raise ZeroNormException(
                f"Cosine similarity undefined for a zero-norm input (pair {position})",
                details={"pair": position},
            )
        return np.clip(np.asarray(dots, dtype=np.float64) / (norms_u * norms_v), 0.0, 1.0)


def cosine_similarity(u: np.ndarray, v: np.ndarray) -> float:
    """
    两个向量（或 patch，按元素展平）的余弦相似度，负值截断为 0。

    Args:
        u: 向量或 patch
        v: 与 ``u`` 元素个数相同的向量或 patch

    Returns:
        float: [0,1] 内的相似度

    Raises:
        ZeroNormException: 任一输入范数为零
    """
    u = np.asarray(u, dtype=np.float64).ravel()
    v = np.asarray(v, dtype=np.float64).ravel()
    if u.size != v.size:
        raise KernelParameterException(f"Inputs differ in size: {u.size} vs {v.size}")
    norm_u, norm_v = float(np.linalg.norm(u)), float(np.linalg.norm(v))
    if norm_u == 0 or norm_v == 0:
        raise ZeroNormException("Cosine similarity undefined for a zero-norm input")
    return float(min(max(np.dot(u, v) / (norm_u * norm_v), 0.0), 1.0))
