"""时空邻接矩阵的构造。

- 时间图：帧 ``i`` 与前后各 ``k`` 帧相连，权重由两帧列向量的距离决定
- 空间图：像素与上下左右十字臂内的像素相连，权重由两像素周围 ``p×p×m`` 时空 patch 的距离决定

越界邻居按镜像延拓映射回图内；映射到自身的邻居被丢弃，重复的邻居只保留一次。
"""

import logging
from dataclasses import dataclass
from typing import Dict, List

import numpy as np
import scipy.sparse as sp
from numpy.lib.stride_tricks import sliding_window_view

from Core.video.frames import DataMatrix, matrix_to_volume
from Utils.Exceptions import GraphException, NeighborhoodException

from .kernels import KernelKind, SimilarityKernel

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NeighborhoodPolicy:
    """
    邻域策略。

    Attributes:
        half_width: 时间邻居每侧个数 ``k``；空间十字臂长为 ``max(1, k // 2)``
        patch_size: 空间 patch 边长 ``p``，必须为奇数
    """
    half_width: int = 2
    patch_size: int = 3

    def __post_init__(self) -> None:
        if self.half_width < 1:
            raise NeighborhoodException(f"Neighborhood half-width must be at least 1, got {self.half_width}")
        if self.patch_size < 1 or self.patch_size % 2 == 0:
            raise NeighborhoodException(f"Patch side must be a positive odd number, got {self.patch_size}")

    @property
    def spatial_arm(self) -> int:
        return max(1, self.half_width // 2)


def mirror_index(index: np.ndarray, size: int) -> np.ndarray:
    """
    镜像延拓的下标映射（边界像素重复一次）：``-1 → 0``，``size → size−1``。
    """
    period = 2 * size
    folded = np.mod(index, period)
    return np.where(folded >= size, period - 1 - folded, folded)


def neighbor_pairs(size: int, half_width: int) -> np.ndarray:
    """
    一维格点上的邻居对。

    Args:
        size: 格点数
        half_width: 每侧邻居数

    Returns:
        np.ndarray: ``(P, 2)`` 整数数组，每行 ``(i, j)`` 且 ``i < j``，按字典序排列
    """
    base = np.arange(size)
    offsets = np.concatenate([-np.arange(half_width, 0, -1), np.arange(1, half_width + 1)])
    first = np.repeat(base, offsets.size)
    second = mirror_index(first + np.tile(offsets, size), size)
    keep = first != second
    if not keep.any():
        return np.empty((0, 2), dtype=int)
    pairs = np.stack([np.minimum(first, second), np.maximum(first, second)], axis=1)[keep]
    return np.unique(pairs, axis=0)


def _assemble(size: int, first: np.ndarray, second: np.ndarray, weights: np.ndarray) -> sp.csr_matrix:
    rows = np.concatenate([first, second])
    cols = np.concatenate([second, first])
    data = np.concatenate([weights, weights])
    return sp.csr_matrix((data, (rows, cols)), shape=(size, size))


def _group_by_offset(pairs: np.ndarray) -> Dict[int, np.ndarray]:
    offsets = pairs[:, 1] - pairs[:, 0]
    return {int(d): pairs[offsets == d, 0] for d in np.unique(offsets)}


def temporal_adjacency(matrix: DataMatrix, kernel: SimilarityKernel,
                       policy: NeighborhoodPolicy = NeighborhoodPolicy()) -> sp.csr_matrix:
    """
    构造 ``m×m`` 时间邻接矩阵 A_t。

    指数核下 ``A_ij = exp(−‖v_i − v_j‖₂² / h_t²)``，``v_i`` 为第 ``i`` 帧的列向量。

    Args:
        matrix: 数据矩阵 D
        kernel: 相似度核
        policy: 邻域策略

    Returns:
        sp.csr_matrix: 对称、无自环的稀疏邻接矩阵

    Raises:
        GraphException: 帧数不足 2
        ZeroNormException: 余弦核下存在全零帧
    """
    m = matrix.cols
    if m < 2:
        raise GraphException(f"Temporal graph needs at least 2 frames, got {m}")
    values = matrix.values
    firsts: List[np.ndarray] = [np.empty(0, dtype=int)]
    seconds: List[np.ndarray] = [np.empty(0, dtype=int)]
    weights: List[np.ndarray] = [np.empty(0)]
    for d, starts in _group_by_offset(neighbor_pairs(m, policy.half_width)).items():
        left, right = values[:, starts], values[:, starts + d]
        if kernel.kind is KernelKind.EXPONENTIAL:
            w = kernel.from_squared_distance(np.sum((left - right) ** 2, axis=0))
        else:
            w = kernel.from_products(np.sum(left * right, axis=0),
                                     np.linalg.norm(left, axis=0), np.linalg.norm(right, axis=0))
        firsts.append(starts)
        seconds.append(starts + d)
        weights.append(w)
    adjacency = _assemble(m, np.concatenate(firsts), np.concatenate(seconds), np.concatenate(weights))
    logger.debug(f"时间图：{m} 个顶点，{adjacency.nnz} 个非零元")
    return adjacency


def _patch_statistics(padded: np.ndarray, d: int, axis: int, patch: int,
                      kind: KernelKind) -> np.ndarray:
    """
    沿 ``axis`` 方向偏移 ``d`` 的像素对之间的 patch 统计量（平方距离或内积）。

    ``padded`` 为 ``(m, n₁+2h, n₂+2h)`` 的镜像延拓视频，返回值下标 ``(r, c)``
    对应像素对 ``(r, c)`` 与偏移 ``d`` 之后的像素。
    """
    if axis == 0:
        a, b = padded[:, :-d, :], padded[:, d:, :]
    else:
        a, b = padded[:, :, :-d], padded[:, :, d:]
    if kind is KernelKind.EXPONENTIAL:
        per_pixel = np.sum((a - b) ** 2, axis=0)
    else:
        per_pixel = np.sum(a * b, axis=0)
    return sliding_window_view(per_pixel, (patch, patch)).sum(axis=(-2, -1))


def spatial_adjacency(matrix: DataMatrix, kernel: SimilarityKernel,
                      policy: NeighborhoodPolicy = NeighborhoodPolicy()) -> sp.csr_matrix:
    """
    构造 ``n×n`` 空间邻接矩阵 A_s。

    指数核下 ``A_ij = exp(−‖𝒩(v_i) − 𝒩(v_j)‖_F² / h_s²)``，``𝒩(v)`` 为像素周围
    ``p×p`` patch 在所有帧上的堆叠；图像边界处 patch 按镜像延拓补齐。
    像素下标与数据矩阵的行一致（列优先，``r + c·n₁``）。

    Raises:
        NeighborhoodException: patch 边长超过图像短边
        ZeroNormException: 余弦核下存在全零 patch
    """
    n1, n2, _ = matrix.shape
    patch = policy.patch_size
    if patch > min(n1, n2):
        raise NeighborhoodException(
            f"Patch side {patch} exceeds the frame size {n1}x{n2}",
            details={"patch_size": patch, "height": n1, "width": n2},
        )
    half = patch // 2
    volume = matrix_to_volume(matrix)
    padded = np.pad(volume, ((0, 0), (half, half), (half, half)), mode="symmetric")
    norms = None
    if kernel.kind is KernelKind.COSINE:
        norms = np.sqrt(sliding_window_view(np.sum(padded ** 2, axis=0), (patch, patch)).sum(axis=(-2, -1)))

    def pixel(r: np.ndarray, c: np.ndarray) -> np.ndarray:
        return r + c * n1

    firsts: List[np.ndarray] = [np.empty(0, dtype=int)]
    seconds: List[np.ndarray] = [np.empty(0, dtype=int)]
    weights: List[np.ndarray] = [np.empty(0)]
    for axis, size in ((0, n1), (1, n2)):
        for d, starts in _group_by_offset(neighbor_pairs(size, policy.spatial_arm)).items():
            stats = _patch_statistics(padded, d, axis, patch, kernel.kind)
            if axis == 0:
                r, c = np.meshgrid(starts, np.arange(n2), indexing="ij")
                r2, c2 = r + d, c
            else:
                r, c = np.meshgrid(np.arange(n1), starts, indexing="ij")
                r2, c2 = r, c + d
            r, c, r2, c2 = r.ravel(), c.ravel(), r2.ravel(), c2.ravel()
            selected = stats[r, c]
            if kernel.kind is KernelKind.EXPONENTIAL:
                w = kernel.from_squared_distance(selected)
            else:
                w = kernel.from_products(selected, norms[r, c], norms[r2, c2])
            firsts.append(pixel(r, c))
            seconds.append(pixel(r2, c2))
            weights.append(w)
    adjacency = _assemble(n1 * n2, np.concatenate(firsts), np.concatenate(seconds),
                          np.concatenate(weights))
    logger.debug(f"空间图：{n1 * n2} 个顶点，{adjacency.nnz} 个非零元")
    return adjacency


def neighbor_counts(adjacency: sp.spmatrix) -> np.ndarray:
    """每行存储的邻居个数。"""
    return np.diff(sp.csr_matrix(adjacency).indptr)
