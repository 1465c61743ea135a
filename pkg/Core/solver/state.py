"""迭代状态与分离结果。"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from Core.video.frames import DataMatrix
from Utils.types import IterationRecord

from .config import SolverConfig


@dataclass
class SolverState:
    """
    ADMM 的当前迭代量。

    单个求解独占一个状态；每次外层迭代结束时各历史列表恰好增加一项。

    Attributes:
        L, S, U, V: 原始变量
        U_dual, V_dual: 对偶变量 Ũ、Ṽ
        weights: 加权核范数的权重，长度 ``min(n, m)``
        lambda2: 当前 λ₂（可能已衰减）
        iteration: 已完成的外层迭代数
    """
    L: np.ndarray
    S: np.ndarray
    U: np.ndarray
    V: np.ndarray
    U_dual: np.ndarray
    V_dual: np.ndarray
    weights: np.ndarray
    lambda2: float
    iteration: int = 0
    objective: List[float] = field(default_factory=list)
    rel_change_L: List[float] = field(default_factory=list)
    rel_change_S: List[float] = field(default_factory=list)
    residual_U: List[float] = field(default_factory=list)
    residual_V: List[float] = field(default_factory=list)

    @classmethod
    def initial(cls, data: np.ndarray, config: SolverConfig) -> "SolverState":
        """``L = D, S = 0, U = L, V = 0``，对偶变量为 0，权重为 1。"""
        data = np.asarray(data, dtype=np.float64)
        zeros = np.zeros_like(data)
        return cls(
            L=data.copy(),
            S=zeros.copy(),
            U=data.copy(),
            V=zeros.copy(),
            U_dual=zeros.copy(),
            V_dual=zeros.copy(),
            weights=np.ones(min(data.shape)),
            lambda2=config.lambda2,
        )

    @property
    def shape(self):
        return self.L.shape

    def append(self, record: IterationRecord) -> None:
        self.objective.append(record["objective"])
        self.rel_change_L.append(record["rel_change_L"])
        self.rel_change_S.append(record["rel_change_S"])
        self.residual_U.append(record["residual_U"])
        self.residual_V.append(record["residual_V"])


@dataclass(frozen=True)
class SeparationResult:
    """
    求解结果。

    Attributes:
        background: 低秩部分 L
        foreground: 稀疏部分 S
        iterations: 实际外层迭代数
        converged: 两个相对变化均低于 tol 时为 True
        rel_change_L: 最后一次 L 的相对变化
        rel_change_S: 最后一次 S 的相对变化
        wall_time: 求解耗时（秒）
        history: 每次外层迭代的进度记录
        lambda2: 结束时的 λ₂
        weights: 结束时的权重
    """
    background: DataMatrix
    foreground: DataMatrix
    iterations: int
    converged: bool
    rel_change_L: float
    rel_change_S: float
    wall_time: float
    history: List[IterationRecord]
    lambda2: float
    weights: Optional[np.ndarray] = None
