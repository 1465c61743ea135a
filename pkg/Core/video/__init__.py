"""视频读写、预处理与合成。

视频统一表示为 :class:`VideoFrames`（帧序列）或 :class:`DataMatrix`（每列一帧的矩阵）。
"""

from .formats import (ScalingMode, ingest_frames, read_frame, read_mask, read_masks,
                      read_matrix, write_frame, write_frames, write_mask, write_masks,
                      write_matrix)
from .frames import (DataMatrix, VideoFrames, add_gaussian_noise, from_matrix,
                     mean_background_image, remove_motionless_frames, to_matrix,
                     unvectorize, vectorize)
from .synthetic import (BackgroundKind, ObjectKind, SyntheticSpec, default_benchmark_spec,
                        load_synthetic_spec, parse_synthetic_spec, synthesize)

__all__ = [
    "VideoFrames",
    "DataMatrix",
    "ScalingMode",
    "BackgroundKind",
    "ObjectKind",
    "SyntheticSpec",
    "ingest_frames",
    "read_frame",
    "write_frame",
    "read_mask",
    "write_mask",
    "read_masks",
    "write_masks",
    "write_frames",
    "read_matrix",
    "write_matrix",
    "to_matrix",
    "from_matrix",
    "vectorize",
    "unvectorize",
    "remove_motionless_frames",
    "add_gaussian_noise",
    "mean_background_image",
    "synthesize",
    "default_benchmark_spec",
    "parse_synthetic_spec",
    "load_synthetic_spec",
]
