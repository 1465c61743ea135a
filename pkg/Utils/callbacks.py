from typing import Dict, Any, Callable, Protocol, Literal, overload
import logging
import traceback

from Utils.types import IterationRecord, SweepRecord

logger = logging.getLogger(__name__)


class Callbacks:
    """按名称分发的回调集合，未注册的名称返回空操作。

    Example:
        callbacks = Callbacks(iteration=lambda record: print(record["objective"]))
        callbacks.iteration(record)      # 调用注册的回调
        callbacks.finished(result)       # 未注册，静默忽略
    """

    def __init__(self,
                 **kwargs: Callable[..., Any],
                 ):
        self._callbacks: Dict[str, Callable[..., Any]] = kwargs

    def _noop(*args, **kwargs) -> None:
        if logger.getEffectiveLevel() <= logging.DEBUG:
            # 除非 Debug 级别以下，否则不耗费资源用于打印堆栈信息
            stack: traceback.StackSummary = traceback.extract_stack()
            caller: traceback.FrameSummary = stack[-3]      # 跳过 _noop 和 __getattr__
            logger.debug(
                f"Default callback '_noop' was called by {caller.name} in {caller.filename}:{caller.lineno}"
            )
        return None

    def __getitem__(self, key: str) -> Callable[..., Any]:
        return self._callbacks.get(key, self._noop)

    def __getattr__(self, name: str) -> Callable[..., Any]:
        if name.startswith("__"):
            raise AttributeError(name)
        return self._callbacks.get(name, self._noop)


class ISolverProgress(Protocol):
    """
    ADMM 求解进度信号
    """
    def start(self, rows: int, cols: int):
        """求解开始；数据矩阵的行数与列数"""
    def iteration(self, record: IterationRecord):
        """每次外层迭代结束时发出"""
    def lambda2_decayed(self, iteration: int, value: float):
        """λ₂ 衰减后发出"""
    def finished(self, result: Any):
        """求解结束，传递 SeparationResult"""


class INoiseSweep(Protocol):
    """
    噪声实验进度信号
    """
    def level_started(self, sigma: float):
        """开始处理一个噪声水平"""
    def level_finished(self, record: SweepRecord):
        """一个噪声水平处理完成"""


class SolverCallbacks(Callbacks):
    """
    类型化的求解器回调
    """
    @overload
    def __getattr__(self, name: Literal["iteration"]) -> Callable[[IterationRecord], None]:
        ...

    @overload
    def __getattr__(self, name: Literal["start"]) -> Callable[[int, int], None]:
        ...

    def __getattr__(self, name: str) -> Any:
        return super().__getattr__(name)
