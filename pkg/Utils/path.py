import os

import appdirs

# 用户数据目录，未指定输出目录时的运行结果存放于此
data_path: str = appdirs.user_data_dir("dgmotion")


def default_output_dir(run_name: str = "latest") -> str:
    """返回（并按需创建）用户数据目录下的运行输出目录。"""
    path = os.path.join(data_path, "runs", run_name)
    os.makedirs(path, exist_ok=True)
    return path
