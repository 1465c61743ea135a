import abc
import os
import logging
from enum import IntEnum
from typing import Optional

from Core.Repository import RunConfig, path
from Utils.Exceptions import (DgmotionException, SolverDivergenceException,
                              WrappedSystemException)


class ExitCode(IntEnum):
    """子命令退出码"""
    SUCCESS = 0
    NOT_CONVERGED = 1       # 求解未收敛，产物照常写出
    INPUT_ERROR = 2         # 输入、配置或流程错误


class BaseController(abc.ABC):
    """控制器基类，作为命令行与Core功能模块交互的桥梁。

    所有控制器应继承此类，并实现 :meth:`run` 方法。
    :meth:`execute` 负责把异常统一转换为退出码并写入日志。

    Example:
        创建一个自定义控制器::

            class MyController(BaseController):
                def run(self) -> ExitCode:
                    # 执行逻辑
                    return ExitCode.SUCCESS
    """

    def __init__(self, config: RunConfig, dry_run: bool = False):
        """初始化控制器基类。

        Args:
            config: 已校验的运行配置
            dry_run: 为 True 时只校验与构造，不写出任何文件
        """
        self.config = config
        self.dry_run = dry_run
        self.logger = logging.getLogger(f"{__name__}.{type(self).__name__}")

    @abc.abstractmethod
    def run(self) -> ExitCode:
        """执行子命令。

        子类必须实现此方法。

        Returns:
            退出码

        Raises:
            NotImplementedError: 如果子类未实现此方法
        """
        raise NotImplementedError("子类必须实现run方法")

    def execute(self) -> int:
        """运行并把异常映射为退出码。

        Returns:
            int: 0 成功，1 未收敛，2 输入/配置/流程错误
        """
        try:
            return int(self.run())
        except SolverDivergenceException as e:
            self.logger.error(f"求解发散: {e}")
            return int(ExitCode.INPUT_ERROR)
        except DgmotionException as e:
            self.logger.error(str(e))
            return int(ExitCode.INPUT_ERROR)
        except OSError as e:
            wrapped = WrappedSystemException(e)
            self.logger.error(str(wrapped))
            return int(ExitCode.INPUT_ERROR)
        except Exception as e:
            wrapped = WrappedSystemException(e, f"Unexpected failure: {e}")
            self.logger.exception(str(wrapped))
            return int(ExitCode.INPUT_ERROR)

    def output_dir(self) -> Optional[str]:
        """输出目录；dry-run 时返回 None 且不创建目录。"""
        if self.dry_run:
            return None
        directory = path.output_dir(self.config["output_dir"])
        os.makedirs(directory, exist_ok=True)
        return directory
