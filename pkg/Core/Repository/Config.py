"""运行配置。

配置文件为扁平 ``key = value`` 文本，``#`` 之后为注释，支持科学计数法::

    input_synthetic = default
    lambda1 = 1e2
    v_sign = printed

取值优先级：默认值 < 预设 < 配置文件 < 命令行参数。
"""

import logging
import os
from typing import Any, Callable, Dict, Optional, Tuple

from Core.graph import GraphParams, KernelKind
from Core.solver import PRESETS, SolverConfig, VSign
from Core.video import ScalingMode
from Utils.abc import Repository
from Utils.Exceptions import ConfigNotFoundException, InvalidConfigException
from Utils.tools import format_value

try:
    import _version
    _VERSION = _version.__version__
except ImportError:     # 未经 setuptools-scm 构建的源码树
    _VERSION = "0.0.0"

logger = logging.getLogger(__name__)

ADAPTIVE = "adaptive"
AUTO = "auto"


def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"expected true or false, got {raw!r}")


def _parse_float_or(keyword: str) -> Callable[[str], Any]:
    def parse(raw: str) -> Any:
        return keyword if raw.strip().lower() == keyword else float(raw)
    return parse


def _parse_choice(enum_type) -> Callable[[str], str]:
    def parse(raw: str) -> str:
        return enum_type(raw.strip().lower()).value
    return parse


# 键 -> (解析函数, 默认值)
SCHEMA: Dict[str, Tuple[Callable[[str], Any], Any]] = {
    # 输入，三者只能给出一个
    "input_frames": (str, ""),
    "input_matrix": (str, ""),
    "input_synthetic": (str, ""),
    "scaling": (_parse_choice(ScalingMode), ScalingMode.MAXVAL.value),
    # 求解器
    "lambda1": (float, 5.0),
    "lambda2": (float, 0.1),
    "gamma1": (float, 0.3),
    "gamma2": (float, 0.3),
    "rho1": (float, 1.0),
    "rho2": (float, 1.0),
    "dt": (float, 0.3),
    "beta": (float, 1.0),
    "lambda2_floor": (float, 1e-6),
    "erf_sigma": (_parse_float_or(ADAPTIVE), 6.75),
    "tol": (float, 1e-4),
    "max_outer": (int, 100),
    "inner_steps": (int, 20),
    "decay_period": (int, 5),
    "v_sign": (_parse_choice(VSign), VSign.PRINTED.value),
    "freeze_weights": (_parse_bool, False),
    # 图构造
    "kernel": (_parse_choice(KernelKind), KernelKind.EXPONENTIAL.value),
    "h_spatial": (float, 1.0),
    "h_temporal": (float, 1.0),
    "patch_size": (int, 3),
    "half_width": (int, 2),
    "export_triplets": (_parse_bool, False),
    # 预处理
    "remove_motionless": (_parse_bool, False),
    "motionless_threshold": (_parse_float_or(AUTO), AUTO),
    "noise_sigma": (float, 0.0),
    "seed": (int, 0),
    # 评估
    "truth_background": (str, ""),
    "truth_masks": (str, ""),
    "fg_threshold": (float, 0.05),
    # 输出
    "output_dir": (str, ""),
}

INPUT_KEYS = ("input_frames", "input_matrix", "input_synthetic")


class RunConfig(Repository):
    """
    一次运行的全部有效参数。

    以默认值初始化；之后的每次写入都经过类型解析。对缺失键的访问返回 None。
    """

    def __init__(self) -> None:
        super().__init__()
        self.update({key: default for key, (_, default) in SCHEMA.items()})
        self.preset: Optional[str] = None

    def set_value(self, key: str, raw: Any, source: str = "<override>", line: Optional[int] = None) -> None:
        """
        解析并写入单个键。

        Raises:
            InvalidConfigException: 未知键或取值无法解析
        """
        where = f"{source}:{line}" if line is not None else source
        if key not in SCHEMA:
            raise InvalidConfigException(f"{where}: unknown key {key!r}", details={"key": key, "line": line})
        parse, _ = SCHEMA[key]
        try:
            value = parse(raw) if isinstance(raw, str) else raw
            if parse is float and isinstance(value, int) and not isinstance(value, bool):
                value = float(value)
        except ValueError as e:
            raise InvalidConfigException(f"{where}: invalid value for {key!r}: {e}",
                                         details={"key": key, "line": line})
        self[key] = value

    def apply_preset(self, name: str) -> None:
        """
        写入预设参数组。

        Raises:
            InvalidConfigException: 未知的预设名
        """
        if name not in PRESETS:
            raise InvalidConfigException(
                f"Unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}",
                details={"preset": name},
            )
        for key, value in PRESETS[name].items():
            self.set_value(key, value, source=f"preset {name}")
        self.preset = name
        logger.debug(f"应用预设 {name}")

    def parse_text(self, text: str, source: str = "<config>") -> None:
        """
        逐行解析 ``key = value`` 文本并写入。

        Raises:
            InvalidConfigException: 格式错误、未知键或取值无效，异常信息包含行号
        """
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip()
            if not sep or not key:
                raise InvalidConfigException(f"{source}:{number}: expected 'key = value', got {raw.strip()!r}",
                                             details={"line": number})
            self.set_value(key, value.strip(), source, number)

    # ===== 类型化视图 =====

    def solver_config(self) -> SolverConfig:
        erf_sigma = self["erf_sigma"]
        return SolverConfig(
            lambda1=self["lambda1"],
            lambda2=self["lambda2"],
            gamma1=self["gamma1"],
            gamma2=self["gamma2"],
            rho1=self["rho1"],
            rho2=self["rho2"],
            dt=self["dt"],
            beta=self["beta"],
            lambda2_floor=self["lambda2_floor"],
            erf_sigma=None if erf_sigma == ADAPTIVE else erf_sigma,
            tol=self["tol"],
            max_outer=self["max_outer"],
            inner_steps=self["inner_steps"],
            decay_period=self["decay_period"],
            v_sign=VSign(self["v_sign"]),
            freeze_weights=self["freeze_weights"],
        )

    def graph_params(self) -> GraphParams:
        return GraphParams(
            kernel=KernelKind(self["kernel"]),
            h_spatial=self["h_spatial"],
            h_temporal=self["h_temporal"],
            patch_size=self["patch_size"],
            half_width=self["half_width"],
        )

    def scaling_mode(self) -> ScalingMode:
        return ScalingMode(self["scaling"])

    def motionless_threshold(self) -> Optional[float]:
        """None 表示使用默认阈值 ``0.01·n``。"""
        threshold = self["motionless_threshold"]
        return None if threshold == AUTO else threshold

    def input_source(self) -> Tuple[str, str]:
        """
        返回 ``(kind, value)``，kind 为 ``frames``、``matrix`` 或 ``synthetic``。

        Raises:
            InvalidConfigException: 未给出或给出多个输入
        """
        given = [(key.split("_", 1)[1], self[key]) for key in INPUT_KEYS if self[key]]
        if len(given) != 1:
            raise InvalidConfigException(
                f"Exactly one of {', '.join(INPUT_KEYS)} must be set, got {len(given)}",
                details={"inputs": [kind for kind, _ in given]},
            )
        return given[0]

    def validate(self) -> None:
        """
        检查全部取值范围。

        Raises:
            InvalidConfigException: 任一取值越界
        """
        self.solver_config()
        try:
            self.graph_params().spatial_kernel()
            self.graph_params().temporal_kernel()
            self.graph_params().policy()
        except ValueError as e:
            raise InvalidConfigException(str(e))
        for key in ("noise_sigma", "fg_threshold"):
            if self[key] < 0:
                raise InvalidConfigException(f"{key} must be nonnegative, got {self[key]}", details={"key": key})
        threshold = self.motionless_threshold()
        if threshold is not None and threshold < 0:
            raise InvalidConfigException(f"motionless_threshold must be nonnegative, got {threshold}",
                                         details={"key": "motionless_threshold"})

    # ===== 序列化 =====

    def to_text(self, exclude: Tuple[str, ...] = ()) -> str:
        """按键名排序写出全部键，浮点数使用 ``repr``，可被 :meth:`parse_text` 逐位还原。"""
        return "".join(f"{key} = {format_value(value)}\n" for key, value in self.sorted_items()
                       if key not in exclude)

    def write_resolved(self, path: str) -> None:
        """写出生效配置。输出目录不写入，从该文件重跑到其他目录得到逐位相同的产物。"""
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.to_text(exclude=("output_dir",)))


def parse_config(path: Optional[str] = None, preset: Optional[str] = None,
                 overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """
    按 默认值 < 预设 < 配置文件 < 覆盖项 的顺序构造并校验运行配置。

    Args:
        path: 配置文件路径
        preset: 预设名
        overrides: 命令行覆盖的键值

    Raises:
        ConfigNotFoundException: 配置文件不存在
        InvalidConfigException: 解析或校验失败
    """
    config = RunConfig()
    if preset:
        config.apply_preset(preset)
    if path:
        if not os.path.isfile(path):
            raise ConfigNotFoundException(f"Config file not found: {path}", details={"path": path})
        with open(path, "r", encoding="utf-8") as f:
            config.parse_text(f.read(), source=path)
    for key, value in (overrides or {}).items():
        if value is not None:
            config.set_value(key, value, source="command line")
    config.validate()
    return config


class Constant(Repository):
    """只读配置，用于存储一些固定不变的配置项"""
    name: str = "dgmotion"
    description: str = "Dual-graph regularized motion detection"
    license: str = "GNU LGPL-2.1 license"
    version: str = _VERSION
