"""时空图与归一化拉普拉斯。"""

from .adjacency import (NeighborhoodPolicy, mirror_index, neighbor_counts, neighbor_pairs,
                        spatial_adjacency, temporal_adjacency)
from .builder import GraphParams, build_laplacians, summarize
from .kernels import KernelKind, SimilarityKernel, cosine_similarity
from .laplacian import (SparseLaplacian, eigenvalue_range, export_triplets, import_triplets,
                        normalized_laplacian)

__all__ = [
    "KernelKind",
    "SimilarityKernel",
    "NeighborhoodPolicy",
    "SparseLaplacian",
    "GraphParams",
    "cosine_similarity",
    "mirror_index",
    "neighbor_pairs",
    "neighbor_counts",
    "temporal_adjacency",
    "spatial_adjacency",
    "normalized_laplacian",
    "eigenvalue_range",
    "export_triplets",
    "import_triplets",
    "build_laplacians",
    "summarize",
]
