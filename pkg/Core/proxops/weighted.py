"""加权核范数及其近端算子。

权重由当前奇异值生成：``w_i = exp(−σ_i² / σ²)``。奇异值非增时权重非减，
此时加权奇异值阈值化给出 ``τ‖U‖_{W,*} + ½‖U − M‖_F²`` 的精确极小点。
"""

import logging
from typing import Optional

import numpy as np

from Utils.Exceptions import ProxException

from .svd import SvdTriple, thin_svd

logger = logging.getLogger(__name__)


def erf_weights(singular_values: np.ndarray, sigma: float) -> np.ndarray:
    """
    由奇异值生成权重向量。

    Args:
        singular_values: 非负、非增的奇异值
        sigma: 正的尺度参数

    Returns:
        np.ndarray: ``exp(−σ_i²/σ²)``，位于 [0,1] 且非减

    Raises:
        ProxException: ``sigma`` 非正或奇异值为负
    """
    if not sigma > 0:
        raise ProxException(f"Weight scale sigma must be positive, got {sigma}")
    values = np.asarray(singular_values, dtype=np.float64)
    if np.any(values < 0):
        raise ProxException("Singular values must be nonnegative")
    return np.exp(-(values * values) / (sigma * sigma))


def adaptive_scale(singular_values: np.ndarray) -> Optional[float]:
    """自适应尺度：当前奇异值的均值；全为零时返回 None。"""
    scale = float(np.mean(singular_values)) if np.size(singular_values) else 0.0
    return scale if scale > 0 else None


def weights_for(singular_values: np.ndarray, sigma: Optional[float]) -> np.ndarray:
    """
    按固定尺度或自适应尺度（``sigma`` 为 None）生成权重。

    自适应尺度无定义（奇异值全为零）时返回全 1。
    """
    if sigma is None:
        sigma = adaptive_scale(singular_values)
        if sigma is None:
            return np.ones(np.size(singular_values))
    return erf_weights(singular_values, sigma)


def _check_weights(weights: np.ndarray, length: int) -> np.ndarray:
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != (length,):
        raise ProxException(f"Expected {length} weights, got shape {weights.shape}")
    if np.any(weights < 0) or np.any(weights > 1):
        raise ProxException("Weights must lie in [0,1]")
    if np.any(np.diff(weights) < 0):
        raise ProxException("Weights must be nondecreasing for the closed-form weighted SVT")
    return weights


def weighted_svt(matrix: np.ndarray, weights: np.ndarray, tau: float,
                 svd: Optional[SvdTriple] = None) -> np.ndarray:
    """
    加权奇异值阈值化 ``A·diag(shrink(σ, w_i·τ))·B``。

    Args:
        matrix: 输入矩阵 M
        weights: 长度 ``min(rows, cols)`` 的非减权重
        tau: 非负阈值尺度
        svd: 已计算好的 M 的分解，可省去一次 SVD

    Returns:
        np.ndarray: 与 M 同形状的矩阵

    Raises:
        ProxException: 权重长度错误、越界或非单调；``tau`` 为负
        SingularValueDecompositionException: SVD 失败
    """
    if tau < 0:
        raise ProxException(f"Threshold tau must be nonnegative, got {tau}")
    matrix = np.asarray(matrix, dtype=np.float64)
    weights = _check_weights(weights, min(matrix.shape))
    if svd is None:
        svd = thin_svd(matrix)
    shrunk = np.maximum(svd.singular_values - weights * tau, 0.0)
    return svd.with_singular_values(shrunk)


def weighted_nuclear_norm(matrix: np.ndarray, weights: Optional[np.ndarray] = None) -> float:
    """
    ``Σ_i w_i σ_i(M)``；``weights`` 为 None 时即普通核范数。
    """
    values = thin_svd(matrix).singular_values
    if weights is None:
        return float(np.sum(values))
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != values.shape:
        raise ProxException(f"Expected {values.size} weights, got shape {weights.shape}")
    return float(np.dot(weights, values))
