"""稠密矩阵的薄 SVD。

数据矩阵通常是 ``n ≫ m`` 的瘦高矩阵，此时先对 ``m×m`` 的 Gram 矩阵做特征分解，
再用 QR 得到正交的左奇异向量；其余情况直接调用 LAPACK。
"""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from Utils.Exceptions import SingularValueDecompositionException

logger = logging.getLogger(__name__)

# 行数至少为列数的该倍数时走 Gram 路线
GRAM_ASPECT_RATIO = 4


@dataclass(frozen=True)
class SvdTriple:
    """
    ``M = A·diag(σ)·B``。

    Attributes:
        left: ``n×k`` 左奇异向量（列正交）
        singular_values: 长度 ``k = min(n, m)``，非负且非增
        right: ``k×m`` 右奇异向量（行正交）
    """
    left: np.ndarray
    singular_values: np.ndarray
    right: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.left * self.singular_values) @ self.right

    def with_singular_values(self, values: np.ndarray) -> np.ndarray:
        """用替换后的奇异值重建矩阵。"""
        return (self.left * values) @ self.right


def _gram_svd(matrix: np.ndarray) -> SvdTriple:
    gram = matrix.T @ matrix
    _, vectors = scipy.linalg.eigh(gram)
    vectors = vectors[:, ::-1]
    q, r = scipy.linalg.qr(matrix @ vectors, mode="economic")
    diagonal = np.diag(r)
    signs = np.where(diagonal < 0, -1.0, 1.0)
    values = np.abs(diagonal)
    order = np.argsort(-values, kind="stable")
    return SvdTriple(
        left=(q * signs)[:, order],
        singular_values=values[order],
        right=vectors.T[order, :],
    )


def thin_svd(matrix: np.ndarray) -> SvdTriple:
    """
    计算薄 SVD。

    Args:
        matrix: ``n×m`` 实矩阵

    Returns:
        SvdTriple: 奇异值非增排列

    Raises:
        SingularValueDecompositionException: 矩阵含非有限元素或分解失败
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2:
        raise SingularValueDecompositionException(f"SVD 需要二维矩阵，实际形状为 {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise SingularValueDecompositionException(
            "SVD 输入含有非有限元素",
            details={"shape": matrix.shape},
        )
    rows, cols = matrix.shape
    try:
        if cols > 0 and rows >= GRAM_ASPECT_RATIO * cols:
            return _gram_svd(matrix)
        left, values, right = scipy.linalg.svd(matrix, full_matrices=False)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise SingularValueDecompositionException(f"SVD 分解失败：{e}", details={"shape": matrix.shape}) from e
    return SvdTriple(left, values, right)
