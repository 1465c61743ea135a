"""仓库管理模块。

该模块包含运行配置、常量与路径管理。
"""

from .Config import Constant, RunConfig, parse_config, SCHEMA
from .Path import path

__all__ = ["RunConfig", "Constant", "parse_config", "SCHEMA", "path"]
