"""求解器参数与预设。"""

import logging
from dataclasses import asdict, dataclass, fields, replace
from enum import Enum
from typing import Any, Dict, Optional

from Utils.Exceptions import InvalidConfigException

logger = logging.getLogger(__name__)


class VSign(Enum):
    """Ṽ 的更新方式"""
    PRINTED = "printed"         # Ṽ ← Ṽ + (D − L − S + V)
    CORRECTED = "corrected"     # Ṽ ← Ṽ + (D − L − S − V)，与约束 D − L − S = V 一致


@dataclass(frozen=True)
class SolverConfig:
    """
    模型与迭代调度的全部标量参数。

    Attributes:
        lambda1: 加权核范数系数 λ₁
        lambda2: 前景 ℓ₁ 系数 λ₂ 的初值
        gamma1: 空间图正则系数 γ₁
        gamma2: 时间图正则系数 γ₂
        rho1: U 约束的罚参数 ρ₁
        rho2: V 约束的罚参数 ρ₂
        dt: L 子问题梯度下降步长
        beta: λ₂ 衰减因子，1 表示不衰减
        lambda2_floor: λ₂ 下限
        erf_sigma: 权重尺度 σ；None 表示取当前奇异值的均值
        tol: 相对变化停止阈值
        max_outer: 外层迭代上限 T_out
        inner_steps: 每次外层迭代内的梯度步数 T_in
        decay_period: 每隔多少次外层迭代衰减一次 λ₂
        v_sign: Ṽ 更新的符号约定
        freeze_weights: 为 True 时权重恒为 1，U 步退化为普通奇异值阈值化
    """
    lambda1: float = 5.0
    lambda2: float = 0.1
    gamma1: float = 0.3
    gamma2: float = 0.3
    rho1: float = 1.0
    rho2: float = 1.0
    dt: float = 0.3
    beta: float = 1.0
    lambda2_floor: float = 1e-6
    # 固定尺度，奇异值按 [0,1] 强度计
    erf_sigma: Optional[float] = 6.75
    tol: float = 1e-4
    max_outer: int = 100
    inner_steps: int = 20
    decay_period: int = 5
    v_sign: VSign = VSign.PRINTED
    freeze_weights: bool = False

    def __post_init__(self) -> None:
        for name in ("lambda1", "lambda2", "gamma1", "gamma2"):
            if getattr(self, name) < 0:
                raise InvalidConfigException(f"{name} must be nonnegative, got {getattr(self, name)}",
                                             details={"key": name})
        for name in ("rho1", "rho2", "dt", "lambda2_floor", "tol"):
            if not getattr(self, name) > 0:
                raise InvalidConfigException(f"{name} must be positive, got {getattr(self, name)}",
                                             details={"key": name})
        if self.beta < 1:
            raise InvalidConfigException(f"beta must be at least 1, got {self.beta}", details={"key": "beta"})
        for name in ("max_outer", "inner_steps", "decay_period"):
            if getattr(self, name) < 1:
                raise InvalidConfigException(f"{name} must be at least 1, got {getattr(self, name)}",
                                             details={"key": name})
        if self.erf_sigma is not None and not self.erf_sigma > 0:
            raise InvalidConfigException(f"erf_sigma must be positive or adaptive, got {self.erf_sigma}",
                                         details={"key": "erf_sigma"})
        if self.dt * self.lipschitz_bound() >= 2:
            logger.warning(
                f"步长 dt={self.dt:g} 不满足 dt < 2/{self.lipschitz_bound():g}，L 子问题可能不收敛"
            )

    def lipschitz_bound(self) -> float:
        """L 子问题梯度的 Lipschitz 常数上界（归一化拉普拉斯特征值不超过 2）。"""
        return 2 * self.gamma1 + 2 * self.gamma2 + self.rho1 + self.rho2

    def with_overrides(self, **kwargs: Any) -> "SolverConfig":
        return replace(self, **kwargs)

    def to_dict(self) -> Dict[str, Any]:
        values = asdict(self)
        values["v_sign"] = self.v_sign.value
        values["erf_sigma"] = "adaptive" if self.erf_sigma is None else self.erf_sigma
        return values


SOLVER_FIELDS = tuple(f.name for f in fields(SolverConfig))

# 三组无噪声实验参数与含噪实验的设置
PRESETS: Dict[str, Dict[str, float]] = {
    "exp1": {"lambda1": 1e2, "lambda2": 1e-1, "gamma1": 1e-6, "gamma2": 1e-8,
             "rho1": 1.0, "rho2": 1.0, "dt": 1e-1, "beta": 1.0},
    "exp2": {"lambda1": 1e-4, "lambda2": 1e-1, "gamma1": 1e-5, "gamma2": 1e5,
             "rho1": 1e-3, "rho2": 1e1, "dt": 1e-5, "beta": 1.05},
    "exp3": {"lambda1": 1e5, "lambda2": 1.0, "gamma1": 1e-6, "gamma2": 1e-8,
             "rho1": 1e1, "rho2": 1e-2, "dt": 1e-1, "beta": 1.0},
    "noisy": {"lambda1": 1.0, "lambda2": 0.1, "rho1": 0.1, "rho2": 0.1},
}


def preset(name: str) -> SolverConfig:
    """
    返回预设参数组，未列出的字段取默认值。

    Raises:
        InvalidConfigException: 未知的预设名
    """
    if name not in PRESETS:
        raise InvalidConfigException(f"Unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}",
                                     details={"preset": name})
    return SolverConfig(**PRESETS[name])
