"""双图正则的鲁棒前景/背景分离 ADMM。

模型::

    min ‖D−L−S‖₁ + λ₁‖L‖_{W,*} + λ₂‖S‖₁ + (γ₁/2)tr(LᵀΦ_sL) + (γ₂/2)tr(LΦ_tLᵀ)

引入 ``U = L`` 与 ``V = D − L − S`` 两个分裂变量后交替更新：

1. L：对光滑部分做 ``T_in`` 步固定步长梯度下降
2. S：``shrink(D − L − V + Ṽ, λ₂/ρ₂)``
3. U：``L − Ũ`` 的加权奇异值阈值化，随后用其奇异值刷新权重
4. V：``shrink(D − L − S + Ṽ, 1/ρ₂)``
5. 对偶上升：``Ũ ← Ũ + (U − L)``，``Ṽ ← Ṽ + (D − L − S ± V)``
"""

import logging
import time
from typing import Optional, Tuple, Union

import numpy as np
import scipy.sparse as sp

from Core.graph.laplacian import SparseLaplacian
from Core.proxops import shrink, thin_svd, weighted_nuclear_norm, weighted_svt, weights_for
from Core.video.frames import DataMatrix
from Utils.callbacks import SolverCallbacks
from Utils.Exceptions import (ShapeMismatchException, SolverDivergenceException,
                              SolverException)
from Utils.types import IterationRecord

from .config import SolverConfig, VSign
from .state import SeparationResult, SolverState

logger = logging.getLogger(__name__)

Laplacian = Union[SparseLaplacian, sp.spmatrix, np.ndarray]


def _operator(laplacian: Laplacian) -> Union[sp.spmatrix, np.ndarray]:
    if isinstance(laplacian, SparseLaplacian):
        return laplacian.matrix
    return laplacian


def _values(matrix: Union[DataMatrix, np.ndarray]) -> np.ndarray:
    if isinstance(matrix, DataMatrix):
        return matrix.values
    return np.asarray(matrix, dtype=np.float64)


def _check_shapes(data: np.ndarray, phi_s: Laplacian, phi_t: Laplacian) -> None:
    rows, cols = data.shape
    spatial, temporal = _operator(phi_s), _operator(phi_t)
    if spatial.shape != (rows, rows):
        raise ShapeMismatchException(
            f"Spatial Laplacian has shape {spatial.shape}, expected {(rows, rows)}",
            details={"expected": rows, "actual": spatial.shape[0]},
        )
    if temporal.shape != (cols, cols):
        raise ShapeMismatchException(
            f"Temporal Laplacian has shape {temporal.shape}, expected {(cols, cols)}",
            details={"expected": cols, "actual": temporal.shape[0]},
        )


def _spatial_product(phi_s: Laplacian, L: np.ndarray) -> np.ndarray:
    """Φ_s·L（稀疏乘稠密）"""
    return np.asarray(_operator(phi_s) @ L)


def _temporal_product(L: np.ndarray, phi_t: Laplacian) -> np.ndarray:
    """L·Φ_t，由 (Φ_tᵀ·Lᵀ)ᵀ 计算"""
    return np.asarray(_operator(phi_t).T @ L.T).T


def objective(data: Union[DataMatrix, np.ndarray], L: np.ndarray, S: np.ndarray,
              weights: Optional[np.ndarray], config: SolverConfig,
              phi_s: Laplacian, phi_t: Laplacian, lambda2: Optional[float] = None) -> float:
    """
    模型目标函数值。

    Args:
        data: 数据矩阵 D
        L: 低秩部分
        S: 稀疏部分
        weights: 核范数权重，None 表示全 1
        config: 求解器参数
        phi_s: 空间拉普拉斯
        phi_t: 时间拉普拉斯
        lambda2: 覆盖 ``config.lambda2``（λ₂ 衰减后使用）

    Raises:
        ShapeMismatchException: 维度不一致
    """
    D = _values(data)
    L, S = np.asarray(L, dtype=np.float64), np.asarray(S, dtype=np.float64)
    if L.shape != D.shape or S.shape != D.shape:
        raise ShapeMismatchException(f"L {L.shape} and S {S.shape} must match D {D.shape}")
    _check_shapes(D, phi_s, phi_t)
    lambda2 = config.lambda2 if lambda2 is None else lambda2
    value = float(np.abs(D - L - S).sum())
    if config.lambda1:
        value += config.lambda1 * weighted_nuclear_norm(L, weights)
    value += lambda2 * float(np.abs(S).sum())
    if config.gamma1:
        value += 0.5 * config.gamma1 * float(np.sum(L * _spatial_product(phi_s, L)))
    if config.gamma2:
        value += 0.5 * config.gamma2 * float(np.sum(L * _temporal_product(L, phi_t)))
    return value


def smooth_objective(L: np.ndarray, state: SolverState, data: Union[DataMatrix, np.ndarray],
                     config: SolverConfig, phi_s: Laplacian, phi_t: Laplacian) -> float:
    """
    L 子问题的光滑目标，:func:`gradient_L` 即其梯度::

        (γ₁/2)tr(LᵀΦ_sL) + (γ₂/2)tr(LΦ_tLᵀ) + (ρ₁/2)‖L−U−Ũ‖² + (ρ₂/2)‖L+S−D+V−Ṽ‖²
    """
    D = _values(data)
    return float(
        0.5 * config.gamma1 * np.sum(L * _spatial_product(phi_s, L))
        + 0.5 * config.gamma2 * np.sum(L * _temporal_product(L, phi_t))
        + 0.5 * config.rho1 * np.sum((L - state.U - state.U_dual) ** 2)
        + 0.5 * config.rho2 * np.sum((L + state.S - D + state.V - state.V_dual) ** 2)
    )


def gradient_L(state: SolverState, data: Union[DataMatrix, np.ndarray], config: SolverConfig,
               phi_s: Laplacian, phi_t: Laplacian, L: Optional[np.ndarray] = None) -> np.ndarray:
    """
    ``∇f(L) = γ₁Φ_sL + γ₂LΦ_t + ρ₁(L−U−Ũ) + ρ₂(L+S−D+V−Ṽ)``

    ``L`` 缺省时取 ``state.L``。
    """
    D = _values(data)
    L = state.L if L is None else L
    if L.shape != D.shape:
        raise ShapeMismatchException(f"L {L.shape} must match D {D.shape}")
    _check_shapes(D, phi_s, phi_t)
    grad = config.rho1 * (L - state.U - state.U_dual) + config.rho2 * (L + state.S - D + state.V - state.V_dual)
    if config.gamma1:
        grad += config.gamma1 * _spatial_product(phi_s, L)
    if config.gamma2:
        grad += config.gamma2 * _temporal_product(L, phi_t)
    return grad


def step_L(state: SolverState, data: Union[DataMatrix, np.ndarray], config: SolverConfig,
           phi_s: Laplacian, phi_t: Laplacian) -> np.ndarray:
    """
    ``T_in`` 步梯度下降 ``L ← L − dt·∇f(L)``。

    Raises:
        SolverDivergenceException: 出现非有限值
    """
    L = state.L.copy()
    for _ in range(config.inner_steps):
        L = L - config.dt * gradient_L(state, data, config, phi_s, phi_t, L)
    if not np.all(np.isfinite(L)):
        raise SolverDivergenceException(
            f"L diverged at outer iteration {state.iteration + 1}; "
            f"try a smaller step size than dt={config.dt:g} (bound 2/{config.lipschitz_bound():g})",
            details={"iteration": state.iteration + 1, "dt": config.dt},
        )
    return L


def step_S(state: SolverState, data: Union[DataMatrix, np.ndarray], config: SolverConfig,
           lambda2: Optional[float] = None) -> np.ndarray:
    """``S = shrink(D − L − V + Ṽ, λ₂/ρ₂)``，λ₂ 缺省取状态中的当前值。"""
    lambda2 = state.lambda2 if lambda2 is None else lambda2
    return shrink(_values(data) - state.L - state.V + state.V_dual, lambda2 / config.rho2)


def step_U(state: SolverState, config: SolverConfig) -> Tuple[np.ndarray, np.ndarray]:
    """
    ``U = weighted_svt(L − Ũ, w, λ₁/ρ₁)``，随后由 ``σ(L − Ũ)`` 刷新权重。

    Returns:
        Tuple[np.ndarray, np.ndarray]: 新的 U 与新的权重
    """
    target = state.L - state.U_dual
    svd = thin_svd(target)
    U = weighted_svt(target, state.weights, config.lambda1 / config.rho1, svd)
    if config.freeze_weights:
        weights = np.ones_like(svd.singular_values)
    else:
        weights = weights_for(svd.singular_values, config.erf_sigma)
    return U, weights


def step_V(state: SolverState, data: Union[DataMatrix, np.ndarray], config: SolverConfig) -> np.ndarray:
    """``V = shrink(D − L − S + Ṽ, 1/ρ₂)``"""
    return shrink(_values(data) - state.L - state.S + state.V_dual, 1.0 / config.rho2)


def _constraint_residual(state: SolverState, data: np.ndarray, config: SolverConfig) -> np.ndarray:
    if config.v_sign is VSign.CORRECTED:
        return data - state.L - state.S - state.V
    return data - state.L - state.S + state.V


def step_duals(state: SolverState, data: Union[DataMatrix, np.ndarray],
               config: SolverConfig = SolverConfig()) -> Tuple[np.ndarray, np.ndarray]:
    """
    ``Ũ ← Ũ + (U − L)``；``Ṽ ← Ṽ + (D − L − S + V)``（``v_sign = corrected`` 时为 ``− V``）。
    """
    U_dual = state.U_dual + (state.U - state.L)
    V_dual = state.V_dual + _constraint_residual(state, _values(data), config)
    return U_dual, V_dual


def decay_lambda2(config: SolverConfig, iteration: int, current: Optional[float] = None) -> float:
    """
    每 ``decay_period`` 次外层迭代执行一次 ``λ₂ ← max(λ₂/β, floor)``。

    Args:
        config: 求解器参数
        iteration: 刚完成的外层迭代序号（从 1 开始）
        current: 当前 λ₂，缺省为 ``config.lambda2``

    Returns:
        float: 更新后的 λ₂；已在下限或以下时保持不变
    """
    current = config.lambda2 if current is None else current
    if config.beta == 1 or iteration % config.decay_period != 0:
        return current
    if current <= config.lambda2_floor:
        return current
    return max(current / config.beta, config.lambda2_floor)


def relative_change(new: np.ndarray, old: np.ndarray) -> float:
    """``‖new − old‖_F / ‖old‖_F``；``‖old‖_F = 0`` 时退化为绝对变化。"""
    change = float(np.linalg.norm(new - old))
    reference = float(np.linalg.norm(old))
    return change / reference if reference > 0 else change


def iterate(state: SolverState, data: np.ndarray, config: SolverConfig,
            phi_s: Laplacian, phi_t: Laplacian) -> IterationRecord:
    """执行一次完整的外层迭代（不含 λ₂ 衰减），原地更新状态并返回进度记录。"""
    L_prev, S_prev = state.L, state.S
    state.L = step_L(state, data, config, phi_s, phi_t)
    state.S = step_S(state, data, config)
    state.U, state.weights = step_U(state, config)
    state.V = step_V(state, data, config)
    state.U_dual, state.V_dual = step_duals(state, data, config)
    state.iteration += 1

    record: IterationRecord = {
        "iteration": state.iteration,
        "objective": objective(data, state.L, state.S, state.weights, config, phi_s, phi_t, state.lambda2),
        "rel_change_L": relative_change(state.L, L_prev),
        "rel_change_S": relative_change(state.S, S_prev),
        "lambda2": state.lambda2,
        "residual_U": float(np.linalg.norm(state.U - state.L)),
        "residual_V": float(np.linalg.norm(_constraint_residual(state, data, config))),
    }
    if not np.isfinite(record["objective"]):
        raise SolverDivergenceException(
            f"Objective became non-finite at outer iteration {state.iteration}",
            details={"iteration": state.iteration},
        )
    state.append(record)
    return record


def solve(data: Union[DataMatrix, np.ndarray], phi_s: Laplacian, phi_t: Laplacian,
          config: SolverConfig = SolverConfig(),
          callbacks: Optional[SolverCallbacks] = None) -> SeparationResult:
    """
    求解前景/背景分离。

    从第二次外层迭代起，当 L 与 S 的相对变化都小于 ``tol`` 时提前停止；
    判断在当次 λ₂ 衰减之前进行。

    Args:
        data: 数据矩阵 D
        phi_s: ``n×n`` 空间拉普拉斯
        phi_t: ``m×m`` 时间拉普拉斯
        config: 求解器参数
        callbacks: 进度回调，参见 :class:`Utils.callbacks.ISolverProgress`

    Returns:
        SeparationResult: L、S 及完整迭代历史

    Raises:
        ShapeMismatchException: 拉普拉斯与 D 维度不符
        SolverException: D 含非有限元素
        SolverDivergenceException: 迭代发散
    """
    callbacks = callbacks or SolverCallbacks()
    shape = data.shape if isinstance(data, DataMatrix) else None
    D = _values(data)
    if D.ndim != 2:
        raise ShapeMismatchException(f"D must be a matrix, got shape {D.shape}")
    if not np.all(np.isfinite(D)):
        raise SolverException("D contains non-finite entries")
    _check_shapes(D, phi_s, phi_t)
    if shape is None:
        shape = (D.shape[0], 1, D.shape[1])

    start = time.perf_counter()
    state = SolverState.initial(D, config)
    callbacks.start(*D.shape)
    history = []
    converged = False
    logger.debug(f"开始求解：D 为 {D.shape[0]}×{D.shape[1]}，参数 {config.to_dict()}")

    for outer in range(1, config.max_outer + 1):
        record = iterate(state, D, config, phi_s, phi_t)
        history.append(record)
        callbacks.iteration(record)
        if outer >= 2 and record["rel_change_L"] < config.tol and record["rel_change_S"] < config.tol:
            converged = True
            break
        decayed = decay_lambda2(config, outer, state.lambda2)
        if decayed != state.lambda2:
            state.lambda2 = decayed
            callbacks.lambda2_decayed(outer, decayed)

    wall_time = time.perf_counter() - start
    last = history[-1]
    result = SeparationResult(
        background=DataMatrix(state.L, shape),
        foreground=DataMatrix(state.S, shape),
        iterations=state.iteration,
        converged=converged,
        rel_change_L=last["rel_change_L"],
        rel_change_S=last["rel_change_S"],
        wall_time=wall_time,
        history=history,
        lambda2=state.lambda2,
        weights=state.weights.copy(),
    )
    if converged:
        logger.info(f"在第 {state.iteration} 次迭代收敛，用时 {wall_time:.2f}s")
    else:
        logger.warning(
            f"{config.max_outer} 次迭代后未收敛（ΔL={last['rel_change_L']:.3g}，ΔS={last['rel_change_S']:.3g}）"
        )
    callbacks.finished(result)
    return result
