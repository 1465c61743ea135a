"""视频帧与数据矩阵。

一段 ``m`` 帧、每帧 ``n₁×n₂`` 的灰度视频被重排为 ``n×m`` 的数据矩阵 ``D``
（``n = n₁·n₂``），第 ``j`` 列是第 ``j`` 帧按 **列优先** 顺序展开的向量：

    [[a, b],
     [c, d]]   ->   (a, c, b, d)

所有从矩阵恢复帧的地方（掩码、背景图像）都使用同一顺序。
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from Utils.Exceptions import (FrameShapeException, InsufficientMotionException,
                              VideoException)

logger = logging.getLogger(__name__)

# 向量化顺序，全项目唯一约定
VECTOR_ORDER = "F"


@dataclass(frozen=True)
class VideoFrames:
    """灰度视频帧序列。

    Attributes:
        frames (np.ndarray): 形状为 ``(m, n₁, n₂)`` 的浮点数组
    """
    frames: np.ndarray

    def __post_init__(self) -> None:
        frames = np.array(self.frames, dtype=np.float64)
        if frames.ndim != 3:
            raise FrameShapeException(
                f"Frames must be a (count, height, width) stack, got shape {frames.shape}"
            )
        if frames.shape[0] < 1 or frames.shape[1] < 1 or frames.shape[2] < 1:
            raise FrameShapeException(f"Empty frame stack of shape {frames.shape}")
        frames.setflags(write=False)
        object.__setattr__(self, "frames", frames)

    @property
    def height(self) -> int:
        return int(self.frames.shape[1])

    @property
    def width(self) -> int:
        return int(self.frames.shape[2])

    @property
    def count(self) -> int:
        return int(self.frames.shape[0])

    def __len__(self) -> int:
        return self.count

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VideoFrames):
            return NotImplemented
        return np.array_equal(self.frames, other.frames)

    __hash__ = None


@dataclass(frozen=True)
class DataMatrix:
    """``n×m`` 实矩阵及其空间形状元数据。

    ``D``、``L``、``S``、``U``、``V`` 以及对偶变量都用这一类型携带。

    Attributes:
        values (np.ndarray): ``n×m`` 浮点矩阵，每列一帧
        shape (Tuple[int, int, int]): ``(n₁, n₂, m)``
    """
    values: np.ndarray
    shape: Tuple[int, int, int]

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        n1, n2, m = (int(x) for x in self.shape)
        if values.shape != (n1 * n2, m):
            raise FrameShapeException(
                f"Matrix of shape {values.shape} does not match video shape {(n1, n2, m)}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "shape", (n1, n2, m))

    @property
    def rows(self) -> int:
        return self.shape[0] * self.shape[1]

    @property
    def cols(self) -> int:
        return self.shape[2]

    @property
    def frame_shape(self) -> Tuple[int, int]:
        return self.shape[0], self.shape[1]

    def with_values(self, values: np.ndarray) -> "DataMatrix":
        """返回形状元数据相同、数值替换后的新矩阵。"""
        return DataMatrix(values, self.shape)

    def select_columns(self, indices: List[int]) -> "DataMatrix":
        return DataMatrix(self.values[:, indices], (self.shape[0], self.shape[1], len(indices)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DataMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.values, other.values)

    __hash__ = None


def vectorize(frame: np.ndarray) -> np.ndarray:
    """将单帧按列优先展开为向量。"""
    return np.asarray(frame, dtype=np.float64).reshape(-1, order=VECTOR_ORDER)


def unvectorize(column: np.ndarray, frame_shape: Tuple[int, int]) -> np.ndarray:
    """:func:`vectorize` 的逆操作。"""
    return np.asarray(column).reshape(frame_shape, order=VECTOR_ORDER)


def to_matrix(video: VideoFrames) -> DataMatrix:
    """
    将视频帧序列重排为数据矩阵 D。

    Args:
        video: 视频帧序列

    Returns:
        DataMatrix: ``n₁n₂`` 行、``m`` 列
    """
    m, n1, n2 = video.frames.shape
    # (m, n1, n2) -> (n1, n2, m)，列优先展开前两维即得每列一帧
    values = np.transpose(video.frames, (1, 2, 0)).reshape(n1 * n2, m, order=VECTOR_ORDER)
    return DataMatrix(values, (n1, n2, m))


def from_matrix(matrix: DataMatrix) -> VideoFrames:
    """
    将数据矩阵还原为视频帧序列，与 :func:`to_matrix` 互逆。
    """
    n1, n2, m = matrix.shape
    cube = matrix.values.reshape(n1, n2, m, order=VECTOR_ORDER)
    return VideoFrames(np.transpose(cube, (2, 0, 1)))


def matrix_to_volume(matrix: DataMatrix) -> np.ndarray:
    """返回 ``(m, n₁, n₂)`` 形状的数组视图，便于逐帧处理（不做范围校验）。"""
    n1, n2, m = matrix.shape
    return np.transpose(matrix.values.reshape(n1, n2, m, order=VECTOR_ORDER), (2, 0, 1))


def default_motionless_threshold(matrix: DataMatrix) -> float:
    """默认静止帧阈值：``0.01·n``，即平均每像素变化 0.01。"""
    return 0.01 * matrix.rows


def remove_motionless_frames(matrix: DataMatrix,
                             threshold: Optional[float] = None) -> Tuple[DataMatrix, List[int]]:
    """
    去除静止帧。

    从左到右扫描，若某帧与 **最后一个保留帧** 的 ℓ₁ 差严格小于阈值则丢弃；
    第一帧总是保留。

    Args:
        matrix: 数据矩阵，至少两列
        threshold: 非负阈值，为 None 时使用 :func:`default_motionless_threshold`

    Returns:
        Tuple[DataMatrix, List[int]]: 保留列构成的新矩阵，以及输出列到输入列的索引

    Raises:
        VideoException: 阈值为负或列数不足
        InsufficientMotionException: 只剩下一帧
    """
    if threshold is None:
        threshold = default_motionless_threshold(matrix)
    if threshold < 0:
        raise VideoException(f"Motionless threshold must be nonnegative, got {threshold}")
    if matrix.cols < 2:
        raise VideoException(f"Motionless-frame removal needs at least 2 frames, got {matrix.cols}")

    values = matrix.values
    kept: List[int] = [0]
    for j in range(1, matrix.cols):
        gap = float(np.abs(values[:, j] - values[:, kept[-1]]).sum())
        if gap < threshold:
            logger.debug(f"丢弃静止帧 {j}（ℓ1 差 {gap:.6g} < {threshold:.6g}）")
            continue
        kept.append(j)

    if len(kept) < 2:
        raise InsufficientMotionException(
            f"Only frame 0 survives motionless-frame removal at threshold {threshold:g}",
            details={"threshold": threshold, "frames": matrix.cols},
        )
    if len(kept) < matrix.cols:
        logger.info(f"去除静止帧：{matrix.cols} -> {len(kept)} 帧")
    return matrix.select_columns(kept), kept


def add_gaussian_noise(matrix: DataMatrix, sigma: float, seed: Optional[int] = 0) -> DataMatrix:
    """
    添加独立同分布的零均值高斯噪声。

    结果 **不** 截断回 [0,1]，与加性噪声模型一致。

    Args:
        matrix: 已缩放到 [0,1] 的数据矩阵
        sigma: 非负标准差
        seed: 随机种子；相同种子结果相同

    Returns:
        DataMatrix: 加噪后的矩阵
    """
    if sigma < 0:
        raise VideoException(f"Noise sigma must be nonnegative, got {sigma}")
    if sigma == 0:
        return matrix.with_values(matrix.values.copy())
    rng = np.random.default_rng(seed)
    noise = rng.normal(0.0, sigma, size=matrix.values.shape)
    return matrix.with_values(matrix.values + noise)


def mean_background_image(matrix: DataMatrix) -> np.ndarray:
    """
    取低秩矩阵的列均值并重排为 ``n₁×n₂`` 背景图像。
    """
    column = matrix.values.mean(axis=1)
    return unvectorize(column, matrix.frame_shape)
