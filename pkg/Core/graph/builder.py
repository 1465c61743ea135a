"""由数据矩阵一次构造空间、时间两个拉普拉斯。"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from Core.video.frames import DataMatrix
from Utils.types import GraphSummary

from .adjacency import (NeighborhoodPolicy, neighbor_counts, spatial_adjacency,
                        temporal_adjacency)
from .kernels import KernelKind, SimilarityKernel
from .laplacian import SparseLaplacian, eigenvalue_range, normalized_laplacian

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GraphParams:
    """
    图构造参数。

    Attributes:
        kernel: 相似度核类型，空间、时间图共用
        h_spatial: 空间图滤波参数 h_s
        h_temporal: 时间图滤波参数 h_t
        patch_size: 空间 patch 边长 p
        half_width: 邻域半宽 k
    """
    kernel: KernelKind = KernelKind.EXPONENTIAL
    h_spatial: float = 1.0
    h_temporal: float = 1.0
    patch_size: int = 3
    half_width: int = 2

    def spatial_kernel(self) -> SimilarityKernel:
        return SimilarityKernel(self.kernel, self.h_spatial)

    def temporal_kernel(self) -> SimilarityKernel:
        return SimilarityKernel(self.kernel, self.h_temporal)

    def policy(self) -> NeighborhoodPolicy:
        return NeighborhoodPolicy(self.half_width, self.patch_size)


def build_laplacians(matrix: DataMatrix, params: GraphParams = GraphParams()) -> Tuple[SparseLaplacian, SparseLaplacian]:
    """
    构造 ``(Φ_s, Φ_t)``。

    Args:
        matrix: 数据矩阵 D
        params: 图构造参数

    Returns:
        Tuple[SparseLaplacian, SparseLaplacian]: ``n×n`` 空间拉普拉斯与 ``m×m`` 时间拉普拉斯
    """
    policy = params.policy()
    spatial = normalized_laplacian(spatial_adjacency(matrix, params.spatial_kernel(), policy))
    temporal = normalized_laplacian(temporal_adjacency(matrix, params.temporal_kernel(), policy))
    logger.info(
        f"图构造完成：Φ_s {spatial.dimension}×{spatial.dimension}（nnz {spatial.nnz}），"
        f"Φ_t {temporal.dimension}×{temporal.dimension}（nnz {temporal.nnz}）"
    )
    return spatial, temporal


def summarize(name: str, laplacian: SparseLaplacian, seed: int = 0) -> GraphSummary:
    """汇总单个拉普拉斯的维度、度、相似度范围与特征值估计。"""
    adjacency = laplacian.adjacency
    similarities = adjacency.data if adjacency is not None and adjacency.nnz else np.zeros(1)
    eig_min, eig_max = eigenvalue_range(laplacian, seed=seed)
    summary: GraphSummary = {
        "name": name,
        "dimension": laplacian.dimension,
        "nnz": laplacian.nnz,
        "min_degree": float(laplacian.degrees.min()),
        "max_degree": float(laplacian.degrees.max()),
        "min_similarity": float(similarities.min()),
        "max_similarity": float(similarities.max()),
        "eig_min": eig_min,
        "eig_max": eig_max,
    }
    if adjacency is not None:
        summary["neighbors_per_row"] = [int(c) for c in neighbor_counts(adjacency)]
    return summary
