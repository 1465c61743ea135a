"""双图正则加权核范数 RPCA 的 ADMM 求解器。"""

from .admm import (decay_lambda2, gradient_L, iterate, objective, relative_change,
                   smooth_objective, solve, step_duals, step_L, step_S, step_U, step_V)
from .config import PRESETS, SOLVER_FIELDS, SolverConfig, VSign, preset
from .state import SeparationResult, SolverState

__all__ = [
    "SolverConfig",
    "VSign",
    "PRESETS",
    "SOLVER_FIELDS",
    "preset",
    "SolverState",
    "SeparationResult",
    "objective",
    "smooth_objective",
    "gradient_L",
    "step_L",
    "step_S",
    "step_U",
    "step_V",
    "step_duals",
    "decay_lambda2",
    "relative_change",
    "iterate",
    "solve",
]
