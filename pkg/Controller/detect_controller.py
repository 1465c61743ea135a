"""
前景检测控制器模块

负责 detect 子命令：构图、求解并写出全部产物
"""

import os
from typing import IO, Dict, List, Optional

from Core.graph import build_laplacians
from Core.metrics import threshold_foreground
from Core.solver import SeparationResult, solve
from Core.video import mean_background_image, write_frame, write_masks, write_matrix
from Utils.callbacks import SolverCallbacks
from Utils.tools import format_key_values, parse_key_values
from Utils.types import IterationRecord

from .base_controller import BaseController, ExitCode
from .pipeline import PreparedInput, prepare_input

# 产物文件名
MATRIX_L = "L.dgm"
MATRIX_S = "S.dgm"
BACKGROUND = "background.pgm"
MASKS_DIR = "masks"
KEPT_FRAMES = "kept-frames.txt"
PROGRESS_LOG = "progress.log"
RESOLVED_CONFIG = "resolved-config.txt"
SUMMARY = "summary.txt"

# summary.txt 中随运行环境变化的键，复现比较时忽略
TIMING_KEYS = ("wall_time",)


def read_kept_frames(path: str) -> List[int]:
    """读取 ``kept-frames.txt``，每行一个原始帧下标。"""
    with open(path, "r", encoding="utf-8") as f:
        return [int(line) for line in f if line.strip()]


def read_summary(path: str) -> Dict[str, str]:
    """读取 ``summary.txt``，每行一个 ``key=value``，值不做类型转换。"""
    summary: Dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            summary.update(parse_key_values(line))
    return summary


class DetectController(BaseController):
    """
    检测控制器

    构造 Φ_s、Φ_t，运行 ADMM，写出 L、S、平均背景、逐帧掩码与运行记录
    """

    def __init__(self, config, dry_run: bool = False):
        super().__init__(config, dry_run)
        self._progress: Optional[IO[str]] = None

    def _on_iteration(self, record: IterationRecord) -> None:
        line = format_key_values(record)
        self.logger.info(line)
        if self._progress is not None:
            self._progress.write(line + "\n")

    def _on_decay(self, iteration: int, value: float) -> None:
        self.logger.debug(f"第 {iteration} 次迭代后 λ₂ 衰减为 {value:g}")

    def run(self) -> ExitCode:
        prepared = prepare_input(self.config)
        phi_s, phi_t = build_laplacians(prepared.matrix, self.config.graph_params())
        solver_config = self.config.solver_config()

        directory = self.output_dir()
        if directory is None:
            self.logger.info(
                f"dry-run：配置有效，D 为 {prepared.matrix.rows}×{prepared.matrix.cols}，"
                f"Φ_s nnz {phi_s.nnz}，Φ_t nnz {phi_t.nnz}；未写出任何文件"
            )
            return ExitCode.SUCCESS

        self.config.write_resolved(os.path.join(directory, RESOLVED_CONFIG))
        callbacks = SolverCallbacks(iteration=self._on_iteration, lambda2_decayed=self._on_decay)
        with open(os.path.join(directory, PROGRESS_LOG), "w", encoding="utf-8") as progress:
            self._progress = progress
            try:
                result = solve(prepared.matrix, phi_s, phi_t, solver_config, callbacks)
            finally:
                self._progress = None
            progress.write(format_key_values({"converged": result.converged,
                                              "iterations": result.iterations}) + "\n")

        self.write_artifacts(directory, prepared, result)
        self.logger.info(f"求解耗时 {result.wall_time:.2f}s，产物位于 {directory}")
        return ExitCode.SUCCESS if result.converged else ExitCode.NOT_CONVERGED

    def write_artifacts(self, directory: str, prepared: PreparedInput, result: SeparationResult) -> None:
        """写出矩阵、背景、掩码、保留帧列表与摘要。"""
        write_matrix(os.path.join(directory, MATRIX_L), result.background)
        write_matrix(os.path.join(directory, MATRIX_S), result.foreground)
        write_frame(os.path.join(directory, BACKGROUND), mean_background_image(result.background))
        masks = threshold_foreground(result.foreground, self.config["fg_threshold"])
        write_masks(os.path.join(directory, MASKS_DIR), masks, prepared.kept)
        with open(os.path.join(directory, KEPT_FRAMES), "w", encoding="utf-8") as f:
            f.writelines(f"{index}\n" for index in prepared.kept)
        summary = {
            "rows": prepared.matrix.rows,
            "cols": prepared.matrix.cols,
            "iterations": result.iterations,
            "converged": result.converged,
            "rel_change_L": result.rel_change_L,
            "rel_change_S": result.rel_change_S,
            "lambda2": result.lambda2,
            "fg_threshold": self.config["fg_threshold"],
            "wall_time": result.wall_time,
        }
        with open(os.path.join(directory, SUMMARY), "w", encoding="utf-8") as f:
            f.write(format_key_values(summary, separator="\n") + "\n")
