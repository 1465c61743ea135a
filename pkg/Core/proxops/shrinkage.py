import numpy as np

from Utils.Exceptions import ProxException


def shrink(matrix: np.ndarray, mu: float) -> np.ndarray:
    """
    逐元素软阈值 ``sign(a)·max(|a| − μ, 0)``，即 ``μ‖·‖₁`` 的近端算子。

    Args:
        matrix: 任意形状的数组
        mu: 非负阈值，可以是可广播的数组

    Raises:
        ProxException: 阈值为负
    """
    mu_array = np.asarray(mu, dtype=np.float64)
    if np.any(mu_array < 0):
        raise ProxException(f"Shrinkage threshold must be nonnegative, got {mu}")
    matrix = np.asarray(matrix, dtype=np.float64)
    return np.sign(matrix) * np.maximum(np.abs(matrix) - mu_array, 0.0)
