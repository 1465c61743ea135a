"""
图信息控制器模块

负责 graph-info 子命令
"""

import os
import sys

from Core.graph import build_laplacians, export_triplets, summarize
from Utils.tools import format_key_values

from .base_controller import BaseController, ExitCode
from .pipeline import prepare_input

PHI_S_TRIPLETS = "phi_s.dgl"
PHI_T_TRIPLETS = "phi_t.dgl"


class GraphInfoController(BaseController):
    """构造 Φ_s、Φ_t 并输出摘要；``export_triplets`` 为真时另外写出三元组文件。"""

    def run(self) -> ExitCode:
        prepared = prepare_input(self.config)
        phi_s, phi_t = build_laplacians(prepared.matrix, self.config.graph_params())
        seed = self.config["seed"]
        for name, laplacian in (("phi_s", phi_s), ("phi_t", phi_t)):
            summary = dict(summarize(name, laplacian, seed=seed))
            counts = summary.pop("neighbors_per_row", None)
            if counts:
                summary["min_neighbors"] = min(counts)
                summary["max_neighbors"] = max(counts)
            sys.stdout.write(format_key_values(summary) + "\n")

        if self.config["export_triplets"]:
            directory = self.output_dir()
            if directory is not None:
                export_triplets(os.path.join(directory, PHI_S_TRIPLETS), phi_s.matrix)
                export_triplets(os.path.join(directory, PHI_T_TRIPLETS), phi_t.matrix)
                self.logger.info(f"三元组已写出到 {directory}")
        return ExitCode.SUCCESS
