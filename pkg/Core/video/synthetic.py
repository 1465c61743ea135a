"""合成视频：已知真值背景与前景掩码的测试视频。

描述文件为扁平 ``key = value`` 文本，例如::

    height = 40
    width = 50
    frames = 30
    background = linear-gradient
    background_low = 0.2
    background_high = 0.4
    object = square
    object_size = 8
    object_intensity = 0.8
    start_row = 20
    start_col = 6
    step_col = 1.3

也可以用 ``trajectory = r,c; r,c; ...`` 显式给出每帧的中心位置。
"""

import logging
import os
from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np

from Utils.Exceptions import FileNotFoundException, SyntheticSpecException

from .frames import VideoFrames
from .formats import read_frame

logger = logging.getLogger(__name__)


class BackgroundKind(Enum):
    CONSTANT = "constant"
    LINEAR_GRADIENT = "linear-gradient"     # 沿列方向从 low 线性变化到 high
    IMAGE_FILE = "image-file"


class ObjectKind(Enum):
    SQUARE = "square"
    DISK = "disk"


@dataclass(frozen=True)
class SyntheticSpec:
    """
    合成视频描述。

    Attributes:
        height: 帧高 n₁
        width: 帧宽 n₂
        trajectory: 每帧物体中心 ``(row, col)``，长度即帧数 m；允许非整数，绘制时四舍五入
        background: 背景类型
        background_level: 常数背景的强度
        background_low: 渐变背景最左列的强度
        background_high: 渐变背景最右列的强度
        background_image: 图像背景的文件路径
        object_kind: 物体形状
        object_size: 方块边长或圆盘直径（像素），0 表示无物体
        object_intensity: 物体强度
        noise_sigma: 高斯噪声标准差
    """
    height: int
    width: int
    trajectory: Tuple[Tuple[float, float], ...]
    background: BackgroundKind = BackgroundKind.CONSTANT
    background_level: float = 0.5
    background_low: float = 0.2
    background_high: float = 0.4
    background_image: Optional[str] = None
    object_kind: ObjectKind = ObjectKind.SQUARE
    object_size: int = 8
    object_intensity: float = 0.8
    noise_sigma: float = 0.0

    @property
    def frames(self) -> int:
        return len(self.trajectory)

    def validate(self) -> None:
        """
        校验描述的合法性。

        Raises:
            SyntheticSpecException: 任一字段越界
        """
        if not self.trajectory:
            raise SyntheticSpecException("Synthetic trajectory is empty")
        if self.height < 1 or self.width < 1:
            raise SyntheticSpecException(f"Invalid frame size {self.height}x{self.width}")
        if self.object_size < 0:
            raise SyntheticSpecException(f"Object size must be nonnegative, got {self.object_size}")
        if self.noise_sigma < 0:
            raise SyntheticSpecException(f"Noise sigma must be nonnegative, got {self.noise_sigma}")
        for name in ("background_level", "background_low", "background_high", "object_intensity"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise SyntheticSpecException(f"{name} must lie in [0,1], got {value}")
        if self.background is BackgroundKind.IMAGE_FILE and not self.background_image:
            raise SyntheticSpecException("background_image is required for an image-file background")
        if self.object_size > 0:
            for index, (row, col) in enumerate(self.trajectory):
                if not _overlaps_frame(row, col, self.object_size, self.height, self.width):
                    raise SyntheticSpecException(
                        f"Object at frame {index} centered ({row}, {col}) lies outside the frame",
                        details={"frame": index},
                    )


def _overlaps_frame(row: float, col: float, size: int, height: int, width: int) -> bool:
    r, c = int(np.rint(row)), int(np.rint(col))
    top, left = r - size // 2, c - size // 2
    return top + size > 0 and left + size > 0 and top < height and left < width


def linear_trajectory(frames: int, start: Tuple[float, float],
                      step: Tuple[float, float]) -> Tuple[Tuple[float, float], ...]:
    """匀速直线轨迹：第 ``j`` 帧中心为 ``start + j·step``。"""
    return tuple((start[0] + j * step[0], start[1] + j * step[1]) for j in range(frames))


def default_benchmark_spec(noise_sigma: float = 0.0) -> SyntheticSpec:
    """
    端到端基准：40×50×30，列方向 0.2→0.4 的渐变背景上，
    8×8、强度 0.8 的方块自左向右移动。
    """
    return SyntheticSpec(
        height=40,
        width=50,
        trajectory=linear_trajectory(30, (20.0, 6.0), (0.0, 1.3)),
        background=BackgroundKind.LINEAR_GRADIENT,
        background_low=0.2,
        background_high=0.4,
        object_kind=ObjectKind.SQUARE,
        object_size=8,
        object_intensity=0.8,
        noise_sigma=noise_sigma,
    )


def background_image(spec: SyntheticSpec) -> np.ndarray:
    """按描述生成真值背景图像。"""
    if spec.background is BackgroundKind.CONSTANT:
        return np.full((spec.height, spec.width), spec.background_level, dtype=np.float64)
    if spec.background is BackgroundKind.LINEAR_GRADIENT:
        ramp = np.linspace(spec.background_low, spec.background_high, spec.width)
        return np.tile(ramp, (spec.height, 1))
    image = read_frame(spec.background_image)
    if image.shape != (spec.height, spec.width):
        raise SyntheticSpecException(
            f"Background image {spec.background_image} has shape {image.shape}, "
            f"expected {(spec.height, spec.width)}",
            details={"path": spec.background_image},
        )
    return image


def object_mask(spec: SyntheticSpec, center: Tuple[float, float]) -> np.ndarray:
    """
    物体在单帧中覆盖的像素。

    方块覆盖行 ``r − s//2 … r − s//2 + s − 1``（列同理）；圆盘覆盖到中心距离
    不超过 ``s/2`` 的像素。越界部分被裁掉。
    """
    mask = np.zeros((spec.height, spec.width), dtype=bool)
    size = spec.object_size
    if size == 0:
        return mask
    r, c = int(np.rint(center[0])), int(np.rint(center[1]))
    if spec.object_kind is ObjectKind.SQUARE:
        top, left = r - size // 2, c - size // 2
        mask[max(top, 0):max(top + size, 0), max(left, 0):max(left + size, 0)] = True
        return mask
    rows, cols = np.ogrid[:spec.height, :spec.width]
    radius = size / 2.0
    mask[(rows - r) ** 2 + (cols - c) ** 2 <= radius * radius] = True
    return mask


def synthesize(spec: SyntheticSpec, seed: Optional[int] = 0) -> Tuple[VideoFrames, np.ndarray, np.ndarray]:
    """
    生成合成视频及其真值。

    Args:
        spec: 合成视频描述
        seed: 噪声随机种子

    Returns:
        Tuple[VideoFrames, np.ndarray, np.ndarray]: 视频、``n₁×n₂`` 真值背景、
        ``(m, n₁, n₂)`` 布尔真值掩码

    Raises:
        SyntheticSpecException: 描述无效
    """
    spec.validate()
    background = background_image(spec)
    masks = np.stack([object_mask(spec, center) for center in spec.trajectory])
    frames = np.repeat(background[np.newaxis, :, :], spec.frames, axis=0)
    frames[masks] = spec.object_intensity
    if spec.noise_sigma > 0:
        rng = np.random.default_rng(seed)
        frames = frames + rng.normal(0.0, spec.noise_sigma, size=frames.shape)
    logger.info(
        f"合成视频 {spec.height}×{spec.width}×{spec.frames}，"
        f"前景像素 {int(masks.sum())}，噪声 σ={spec.noise_sigma:g}"
    )
    return VideoFrames(frames), background, masks


# ===== 描述文件 =====

_INT_KEYS = ("height", "width", "frames", "object_size")
_FLOAT_KEYS = ("background_level", "background_low", "background_high", "object_intensity",
               "noise_sigma", "start_row", "start_col", "step_row", "step_col")
_TEXT_KEYS = ("background", "background_image", "object", "trajectory")


def _parse_lines(text: str, source: str) -> Dict[str, str]:
    entries: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise SyntheticSpecException(f"{source}:{number}: expected 'key = value', got {raw!r}",
                                         details={"line": number})
        if key not in _INT_KEYS + _FLOAT_KEYS + _TEXT_KEYS:
            raise SyntheticSpecException(f"{source}:{number}: unknown key {key!r}",
                                         details={"line": number, "key": key})
        entries[key] = value
    return entries


def _parse_trajectory(text: str) -> Tuple[Tuple[float, float], ...]:
    points: List[Tuple[float, float]] = []
    for item in text.split(";"):
        if not item.strip():
            continue
        row, _, col = item.partition(",")
        points.append((float(row), float(col)))
    return tuple(points)


def parse_synthetic_spec(text: str, source: str = "<spec>",
                         base_dir: Optional[str] = None) -> SyntheticSpec:
    """
    解析合成视频描述文本；未给出的键取 :func:`default_benchmark_spec` 的值。

    Raises:
        SyntheticSpecException: 格式错误、未知键或取值无效
    """
    entries = _parse_lines(text, source)
    default = default_benchmark_spec()
    try:
        ints = {key: int(entries[key]) for key in _INT_KEYS if key in entries}
        floats = {key: float(entries[key]) for key in _FLOAT_KEYS if key in entries}
        background = BackgroundKind(entries.get("background", default.background.value))
        object_kind = ObjectKind(entries.get("object", default.object_kind.value))
        if "trajectory" in entries:
            trajectory = _parse_trajectory(entries["trajectory"])
        else:
            first = default.trajectory[0]
            trajectory = linear_trajectory(
                ints.get("frames", default.frames),
                (floats.get("start_row", first[0]), floats.get("start_col", first[1])),
                (floats.get("step_row", 0.0), floats.get("step_col", 1.3)),
            )
    except ValueError as e:
        raise SyntheticSpecException(f"{source}: invalid value: {e}")

    image = entries.get("background_image")
    if image and base_dir and not os.path.isabs(image):
        image = os.path.join(base_dir, image)

    spec = replace(
        default,
        height=ints.get("height", default.height),
        width=ints.get("width", default.width),
        trajectory=trajectory,
        background=background,
        background_level=floats.get("background_level", default.background_level),
        background_low=floats.get("background_low", default.background_low),
        background_high=floats.get("background_high", default.background_high),
        background_image=image,
        object_kind=object_kind,
        object_size=ints.get("object_size", default.object_size),
        object_intensity=floats.get("object_intensity", default.object_intensity),
        noise_sigma=floats.get("noise_sigma", default.noise_sigma),
    )
    spec.validate()
    return spec


def load_synthetic_spec(path: str) -> SyntheticSpec:
    """读取合成视频描述文件。"""
    if not os.path.isfile(path):
        raise FileNotFoundException(f"Synthetic spec not found: {path}", details={"path": path})
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    return parse_synthetic_spec(text, source=path, base_dir=os.path.dirname(os.path.abspath(path)))
