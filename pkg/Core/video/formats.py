"""帧、矩阵与掩码文件格式。

- 帧：二进制 PGM（P5，8 位或 16 位），可选读取灰度/彩色 PNG，均通过 Pillow
- 矩阵：``DGM1`` 魔数 + 三个小端 u64（n₁, n₂, m）+ 行优先小端 f64 负载
- 掩码：取值 {0, 255} 的 PGM
"""

import logging
import os
from enum import Enum
from typing import List, Optional, Sequence

import numpy as np
from PIL import Image, UnidentifiedImageError

from Utils.Exceptions import (FileNotFoundException, FrameFormatException,
                              FrameShapeException, MatrixFormatException,
                              UnsupportedBitDepthException, VideoException)

from .frames import DataMatrix, VideoFrames, matrix_to_volume, mean_background_image

logger = logging.getLogger(__name__)

FRAME_EXTENSIONS = (".pgm", ".png")
MANIFEST_NAME = "frames.txt"
MATRIX_MAGIC = b"DGM1"

# ITU-R BT.601 亮度权重
LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])

# Pillow 模式 -> 该格式的最大像素值
_MODE_MAXVAL = {
    "L": 255.0,
    # maxval > 255 的 PGM：Pillow 已按文件头 maxval 线性映射到 0..65535
    "I": 65535.0,
    "I;16": 65535.0,
    "I;16B": 65535.0,
    "I;16L": 65535.0,
    "RGB": 255.0,
    "RGBA": 255.0,
    "LA": 255.0,
}


class ScalingMode(Enum):
    """读取帧时的强度缩放方式"""
    MAXVAL = "maxval"       # 除以格式最大值（8 位为 255）
    MINMAX = "minmax"       # 整段视频仿射缩放到 [0,1]


def _image_to_array(image: Image.Image, path: str) -> np.ndarray:
    """将 Pillow 图像转为按格式最大值缩放到 [0,1] 的灰度浮点数组。"""
    mode = image.mode
    if mode == "P":
        image = image.convert("RGB")
        mode = "RGB"
    if mode not in _MODE_MAXVAL:
        raise UnsupportedBitDepthException(
            f"{path} 的像素模式 {mode!r} 不受支持",
            details={"path": path, "mode": mode},
        )
    maxval = _MODE_MAXVAL[mode]
    pixels = np.asarray(image, dtype=np.float64)
    if mode in ("RGB", "RGBA"):
        pixels = pixels[..., :3] @ LUMA_WEIGHTS
    elif mode == "LA":
        pixels = pixels[..., 0]
    return pixels / maxval


def read_frame(path: str) -> np.ndarray:
    """
    读取单帧图像并缩放到 [0,1]。

    Args:
        path: PGM 或 PNG 文件路径

    Returns:
        np.ndarray: ``n₁×n₂`` 浮点数组

    Raises:
        FileNotFoundException: 文件不存在
        FrameFormatException: 无法识别的图像文件
        UnsupportedBitDepthException: 不支持的位深
    """
    if not os.path.isfile(path):
        raise FileNotFoundException(f"帧文件不存在：{path}", details={"path": path})
    try:
        with Image.open(path) as image:
            image.load()
            return _image_to_array(image, path)
    except UnidentifiedImageError as e:
        raise FrameFormatException(f"无法解码帧 {path}：{e}", details={"path": path}) from e


def write_frame(path: str, frame: np.ndarray) -> None:
    """
    将 [0,1] 浮点图像量化为 8 位并写为二进制 PGM (P5)。

    超出范围的值先截断。
    """
    pixels = np.rint(np.clip(np.asarray(frame, dtype=np.float64), 0.0, 1.0) * 255.0).astype(np.uint8)
    Image.fromarray(pixels).save(path, format="PPM")


def write_mask(path: str, mask: np.ndarray) -> None:
    """将二值掩码写为取值 {0,255} 的 PGM。"""
    pixels = np.where(np.asarray(mask, dtype=bool), 255, 0).astype(np.uint8)
    Image.fromarray(pixels).save(path, format="PPM")


def read_mask(path: str) -> np.ndarray:
    """读取掩码 PGM，非零像素为前景。"""
    return read_frame(path) > 0.5


def list_frame_files(directory: str) -> List[str]:
    """
    列出目录中的帧文件。

    若目录中存在 ``frames.txt`` 清单，则按清单中的文件名顺序；否则按文件名字典序。
    """
    if not os.path.isdir(directory):
        raise FileNotFoundException(f"帧目录不存在：{directory}",
                                    details={"path": directory})
    manifest = os.path.join(directory, MANIFEST_NAME)
    if os.path.isfile(manifest):
        with open(manifest, "r", encoding="utf-8") as f:
            names = [line.strip() for line in f if line.strip() and not line.startswith("#")]
        logger.debug(f"使用帧清单 {manifest}，共 {len(names)} 帧")
    else:
        names = sorted(name for name in os.listdir(directory)
                       if name.lower().endswith(FRAME_EXTENSIONS))
    return [os.path.join(directory, name) for name in names]


def ingest_frames(directory: str, scaling: ScalingMode = ScalingMode.MAXVAL) -> VideoFrames:
    """
    读取目录中的帧序列。

    Args:
        directory: 帧目录
        scaling: 强度缩放方式

    Returns:
        VideoFrames: 强度位于 [0,1] 的视频

    Raises:
        FileNotFoundException: 目录不存在
        VideoException: 帧数少于 2
        FrameShapeException: 帧尺寸不一致
    """
    paths = list_frame_files(directory)
    if len(paths) < 2:
        raise VideoException(
            f"{directory} 中至少需要 2 个帧文件，实际 {len(paths)} 个",
            details={"path": directory},
        )
    frames: List[np.ndarray] = []
    for path in paths:
        frame = read_frame(path)
        if frames and frame.shape != frames[0].shape:
            raise FrameShapeException(
                f"帧 {os.path.basename(path)} 的形状为 {frame.shape}，应为 {frames[0].shape}",
                details={"path": path},
            )
        frames.append(frame)
    stack = np.stack(frames)
    if scaling is ScalingMode.MINMAX:
        low, high = float(stack.min()), float(stack.max())
        stack = (stack - low) / (high - low) if high > low else np.zeros_like(stack)
    logger.info(f"读取 {len(paths)} 帧，尺寸 {stack.shape[1]}×{stack.shape[2]}")
    return VideoFrames(stack)


def write_frames(directory: str, video: VideoFrames, prefix: str = "frame",
                 indices: Optional[Sequence[int]] = None) -> List[str]:
    """将帧序列写为 ``<prefix>_XXXX.pgm``，返回写出的路径。"""
    os.makedirs(directory, exist_ok=True)
    indices = list(indices) if indices is not None else list(range(video.count))
    paths = []
    for index, frame in zip(indices, video.frames):
        path = os.path.join(directory, f"{prefix}_{index:04d}.pgm")
        write_frame(path, frame)
        paths.append(path)
    return paths


def write_masks(directory: str, masks: np.ndarray,
                indices: Optional[Sequence[int]] = None) -> List[str]:
    """将 ``(m, n₁, n₂)`` 布尔体写为 ``mask_XXXX.pgm``。"""
    os.makedirs(directory, exist_ok=True)
    indices = list(indices) if indices is not None else list(range(masks.shape[0]))
    paths = []
    for index, mask in zip(indices, masks):
        path = os.path.join(directory, f"mask_{index:04d}.pgm")
        write_mask(path, mask)
        paths.append(path)
    return paths


def read_masks(directory: str) -> np.ndarray:
    """按文件名顺序读取掩码目录，返回 ``(m, n₁, n₂)`` 布尔体。"""
    paths = list_frame_files(directory)
    if not paths:
        raise FileNotFoundException(f"{directory} 中没有掩码文件", details={"path": directory})
    masks = [read_mask(path) for path in paths]
    if any(mask.shape != masks[0].shape for mask in masks):
        raise FrameShapeException(f"{directory} 中的掩码形状不一致")
    return np.stack(masks)


def masks_from_matrix(matrix: DataMatrix) -> np.ndarray:
    """把按列存放的布尔矩阵还原为 ``(m, n₁, n₂)`` 体。"""
    return matrix_to_volume(matrix).astype(bool)


def write_matrix(path: str, matrix: DataMatrix) -> None:
    """
    写出 DGM1 矩阵文件。

    布局：``b"DGM1"``，小端 u64 的 n₁、n₂、m，随后是 ``n×m`` 矩阵的行优先小端 f64。
    """
    header = np.array(matrix.shape, dtype="<u8").tobytes()
    payload = np.ascontiguousarray(matrix.values, dtype="<f8").tobytes(order="C")
    with open(path, "wb") as f:
        f.write(MATRIX_MAGIC)
        f.write(header)
        f.write(payload)


def read_matrix(path: str) -> DataMatrix:
    """
    读取 DGM1 矩阵文件。

    Raises:
        FileNotFoundException: 文件不存在
        MatrixFormatException: 魔数错误或负载长度不符
    """
    if not os.path.isfile(path):
        raise FileNotFoundException(f"矩阵文件不存在：{path}", details={"path": path})
    with open(path, "rb") as f:
        blob = f.read()
    if blob[:4] != MATRIX_MAGIC or len(blob) < 28:
        raise MatrixFormatException(f"{path} 不是 DGM1 矩阵文件", details={"path": path})
    n1, n2, m = (int(x) for x in np.frombuffer(blob, dtype="<u8", count=3, offset=4))
    expected = 28 + 8 * n1 * n2 * m
    if len(blob) != expected:
        raise MatrixFormatException(
            f"{path} 共 {len(blob)} 字节，应为 {expected} 字节",
            details={"path": path},
        )
    values = np.frombuffer(blob, dtype="<f8", offset=28).reshape(n1 * n2, m)
    return DataMatrix(values.astype(np.float64), (n1, n2, m))


def read_image_or_matrix_background(path: str) -> np.ndarray:
    """读取真值背景：PGM/PNG 图像，或 DGM1 矩阵（取其列均值）。"""
    if path.lower().endswith(".dgm"):
        return mean_background_image(read_matrix(path))
    return read_frame(path)
