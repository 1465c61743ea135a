import os

from Utils import path as user_paths
from Utils.abc import Repository


class Path(Repository):
    """运行期路径表。"""

    def __init__(self):
        super().__init__()

    def output_dir(self, configured: str = "") -> str:
        """命令行或配置给出的输出目录；均未给出时落到用户数据目录。"""
        if configured:
            return os.path.abspath(configured)
        return user_paths.default_output_dir()


path = Path()
path.update({
    "data_path": user_paths.data_path,
})
