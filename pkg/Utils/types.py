import sys
from typing import TypedDict, List

if sys.version_info >= (3, 11):
    from typing import NotRequired
else:
    from typing_extensions import NotRequired


class IterationRecord(TypedDict):
    """外层迭代一次的进度记录"""
    iteration: int
    objective: float
    rel_change_L: float
    rel_change_S: float
    lambda2: float
    residual_U: float           # ‖U−L‖_F
    residual_V: float           # ‖D−L−S+V‖_F（按 v_sign 取号）


class SweepRecord(TypedDict):
    """噪声实验中单个噪声水平的结果"""
    sigma: float
    psnr_full: float
    psnr_baseline: float
    re_full: float
    re_baseline: float
    iterations_full: NotRequired[int]
    iterations_baseline: NotRequired[int]


class GraphSummary(TypedDict):
    """graph-info 子命令的单个拉普拉斯摘要"""
    name: str
    dimension: int
    nnz: int
    min_degree: float
    max_degree: float
    min_similarity: float
    max_similarity: float
    eig_min: float
    eig_max: float
    neighbors_per_row: NotRequired[List[int]]
