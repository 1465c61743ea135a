"""对称归一化图拉普拉斯 ``Φ = I − W^{−1/2} A W^{−1/2}``。"""

import logging
import os
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.sparse as sp

from Utils.Exceptions import (FileNotFoundException, GraphException,
                              IsolatedVertexException, MatrixFormatException)

logger = logging.getLogger(__name__)

TRIPLET_MAGIC = "DGL1"


@dataclass(frozen=True)
class SparseLaplacian:
    """
    稀疏对称归一化拉普拉斯。

    Attributes:
        matrix (sp.csr_matrix): Φ，对角元为 1
        degrees (np.ndarray): 邻接矩阵的行和 ``d``，全部为正
        adjacency (sp.csr_matrix): 构造 Φ 所用的邻接矩阵 A
    """
    matrix: sp.csr_matrix
    degrees: np.ndarray
    adjacency: Optional[sp.csr_matrix] = None

    @property
    def dimension(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def nnz(self) -> int:
        return int(self.matrix.nnz)

    def null_vector(self) -> np.ndarray:
        """``d^{1/2}``，满足 ``Φ·d^{1/2} = 0``。"""
        return np.sqrt(self.degrees)

    def quadratic_form(self, x: np.ndarray) -> float:
        """``xᵀΦx``"""
        x = np.asarray(x, dtype=np.float64)
        return float(x @ (self.matrix @ x))

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def is_symmetric(self) -> bool:
        """按存储的坐标与数值逐项比较 Φ 与 Φᵀ。"""
        difference = (self.matrix - self.matrix.T).tocoo()
        return bool(np.all(difference.data == 0))


def normalized_laplacian(adjacency: sp.spmatrix) -> SparseLaplacian:
    """
    计算对称归一化拉普拉斯。

    Args:
        adjacency: 对称、非负的稀疏邻接矩阵

    Returns:
        SparseLaplacian: ``Φ = I − D^{−1/2} A D^{−1/2}``，CSR 存储

    Raises:
        GraphException: 矩阵非方阵、含负元素或不对称
        IsolatedVertexException: 存在度为零的顶点，异常信息给出顶点下标
    """
    adjacency = sp.csr_matrix(adjacency, dtype=np.float64)
    size, cols = adjacency.shape
    if size != cols:
        raise GraphException(f"邻接矩阵必须为方阵，实际形状为 {adjacency.shape}")
    if adjacency.nnz and adjacency.data.min() < 0:
        raise GraphException("邻接矩阵含有负元素")
    if abs(adjacency - adjacency.T).sum() > 0:
        raise GraphException("邻接矩阵不对称")

    degrees = np.asarray(adjacency.sum(axis=1)).ravel()
    isolated = np.flatnonzero(degrees <= 0)
    if isolated.size:
        vertex = int(isolated[0])
        raise IsolatedVertexException(
            f"顶点 {vertex} 的度为零，无法归一化"
            f"（共 {isolated.size} 个孤立顶点）",
            details={"vertex": vertex, "count": int(isolated.size)},
        )

    scale = 1.0 / np.sqrt(degrees)
    coo = adjacency.tocoo()
    # s_i·s_j 与 s_j·s_i 逐位相同，保证存储结果严格对称
    off_diagonal = -coo.data * (scale[coo.row] * scale[coo.col])
    diagonal = np.arange(size)
    matrix = sp.csr_matrix(
        (np.concatenate([np.ones(size), off_diagonal]),
         (np.concatenate([diagonal, coo.row]), np.concatenate([diagonal, coo.col]))),
        shape=(size, size),
    )
    matrix.sort_indices()
    return SparseLaplacian(matrix, degrees, adjacency)


def _power_iteration(operator: sp.spmatrix, iterations: int, tol: float, seed: int) -> float:
    """对称半正定算子的最大特征值（Rayleigh 商）。"""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(operator.shape[0])
    x /= np.linalg.norm(x)
    estimate = 0.0
    for _ in range(iterations):
        y = operator @ x
        previous, estimate = estimate, float(x @ y)
        norm = np.linalg.norm(y)
        if norm == 0:
            return 0.0
        x = y / norm
        if abs(estimate - previous) <= tol * max(abs(estimate), 1.0):
            break
    return estimate


def eigenvalue_range(laplacian: SparseLaplacian, iterations: int = 1000,
                     tol: float = 1e-12, seed: int = 0) -> Tuple[float, float]:
    """
    用幂迭代估计 Φ 的最小、最大特征值。

    最大值直接对 Φ 迭代；最小值由 ``2 − λ_max(2I − Φ)`` 得到。两者都是近似值，
    最小值的精度取决于谱隙。

    Returns:
        Tuple[float, float]: ``(eig_min, eig_max)``
    """
    if laplacian.dimension == 1:
        value = float(laplacian.matrix[0, 0])
        return value, value
    eig_max = _power_iteration(laplacian.matrix, iterations, tol, seed)
    shifted = 2.0 * sp.identity(laplacian.dimension, format="csr") - laplacian.matrix
    eig_min = 2.0 - _power_iteration(shifted, iterations, tol, seed)
    return eig_min, eig_max


def export_triplets(path: str, matrix: sp.spmatrix) -> None:
    """
    以文本三元组导出稀疏矩阵。

    首行为 ``DGL1 dim nnz``，之后每行 ``row col value``，按行优先排列，数值使用 ``repr``。
    """
    csr = sp.csr_matrix(matrix)
    csr.sort_indices()
    coo = csr.tocoo()
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"{TRIPLET_MAGIC} {csr.shape[0]} {csr.nnz}\n")
        for row, col, value in zip(coo.row, coo.col, coo.data):
            f.write(f"{int(row)} {int(col)} {float(value)!r}\n")


def import_triplets(path: str) -> sp.csr_matrix:
    """
    读取 :func:`export_triplets` 写出的文件。

    Raises:
        FileNotFoundException: 文件不存在
        MatrixFormatException: 头部或条目格式错误
    """
    if not os.path.isfile(path):
        raise FileNotFoundException(f"三元组文件不存在：{path}", details={"path": path})
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().split()
        if len(header) != 3 or header[0] != TRIPLET_MAGIC:
            raise MatrixFormatException(f"{path} 缺少 '{TRIPLET_MAGIC} dim nnz' 文件头",
                                        details={"path": path})
        try:
            dim, nnz = int(header[1]), int(header[2])
            entries = [line.split() for line in f if line.strip()]
            rows = np.array([int(e[0]) for e in entries], dtype=int)
            cols = np.array([int(e[1]) for e in entries], dtype=int)
            values = np.array([float(e[2]) for e in entries], dtype=np.float64)
        except (ValueError, IndexError) as e:
            raise MatrixFormatException(f"{path} 中的三元组格式错误：{e}", details={"path": path}) from e
    if rows.size != nnz:
        raise MatrixFormatException(f"{path} 声明 {nnz} 个条目，实际 {rows.size} 个",
                                    details={"path": path})
    matrix = sp.csr_matrix((values, (rows, cols)), shape=(dim, dim))
    matrix.sort_indices()
    return matrix
