"""Core核心模块。

该模块包含 dgmotion 的全部算法与数据处理逻辑，包括：

- 视频模块：帧读写、数据矩阵、预处理与合成视频
- 图模块：时空邻接矩阵与归一化拉普拉斯
- 近端算子模块：软阈值、加权奇异值阈值化
- 求解器模块：ADMM 迭代
- 评估模块：RE、PSNR、Pr/Re/Fm
- 仓库模块：运行配置与路径管理

子模块按依赖顺序导入。
"""

from . import video, graph, proxops, solver, metrics, Repository

__all__ = ["video", "graph", "proxops", "solver", "metrics", "Repository"]
