"""
评估控制器模块

负责 eval 与 noise-sweep 子命令
"""

import os
import sys
from typing import List, Optional, Sequence, Tuple

import numpy as np

from Core.graph import build_laplacians
from Core.metrics import evaluate, psnr, relative_error, sweep_csv
from Core.Repository import path
from Core.solver import solve
from Core.video import mean_background_image, read_masks, read_matrix
from Core.video.formats import read_image_or_matrix_background
from Utils.callbacks import INoiseSweep, Callbacks
from Utils.Exceptions import ConfigException, FileNotFoundException
from Utils.types import SweepRecord

from .base_controller import BaseController, ExitCode
from .detect_controller import (KEPT_FRAMES, MATRIX_L, MATRIX_S, SUMMARY, read_kept_frames,
                                read_summary)
from .pipeline import load_clean_input, preprocess

EVAL_TEXT = "eval-report.txt"
EVAL_CSV = "eval-report.csv"
SWEEP_CSV = "noise-sweep.csv"

# 噪声实验的默认标准差
DEFAULT_NOISE_LEVELS = (0.0005, 0.001, 0.0015, 0.002, 0.0025)


class EvaluationController(BaseController):
    """
    评估控制器

    读取 detect 的产物（``L.dgm``、``S.dgm``、``kept-frames.txt``）并与真值比较
    """

    def _require(self, filename: str) -> str:
        if not os.path.exists(filename):
            raise FileNotFoundException(f"Missing file: {filename}", details={"path": filename})
        return filename

    def _truths(self, kept: List[int]) -> Tuple[Optional[np.ndarray], Optional[np.ndarray]]:
        """配置给出的真值；未给出且输入为合成视频时重新合成。"""
        background_path, masks_path = self.config["truth_background"], self.config["truth_masks"]
        background = masks = None
        if background_path:
            background = read_image_or_matrix_background(self._require(background_path))
        if masks_path:
            masks = read_masks(self._require(masks_path))
            if masks.shape[0] > len(kept) and max(kept) < masks.shape[0]:
                # 真值按原始帧编号，去除静止帧后只比较保留的帧
                masks = masks[kept]
        if background is None and masks is None:
            kind, _ = self.config.input_source()
            if kind != "synthetic":
                raise ConfigException("No truth given: set truth_background and/or truth_masks")
            clean = load_clean_input(self.config)
            background = clean.truth_background
            masks = clean.truth_masks[kept]
            self.logger.info("未给出真值，已由合成描述重新生成")
        return background, masks

    def _runtime(self, directory: str) -> Optional[float]:
        """detect 写在 ``summary.txt`` 中的求解耗时；文件或键缺失时为 None。"""
        summary_path = os.path.join(directory, SUMMARY)
        if not os.path.isfile(summary_path):
            return None
        value = read_summary(summary_path).get("wall_time")
        return float(value) if value else None

    def run(self) -> ExitCode:
        directory = path.output_dir(self.config["output_dir"])
        background = read_matrix(self._require(os.path.join(directory, MATRIX_L)))
        foreground = read_matrix(self._require(os.path.join(directory, MATRIX_S)))
        kept_path = os.path.join(directory, KEPT_FRAMES)
        kept = read_kept_frames(kept_path) if os.path.isfile(kept_path) else list(range(foreground.cols))

        truth_background, truth_masks = self._truths(kept)
        if truth_masks is not None and truth_masks.shape[0] != foreground.cols:
            raise ConfigException(
                f"Truth masks hold {truth_masks.shape[0]} frames but S has {foreground.cols} columns"
            )
        report = evaluate(background, foreground, self.config["fg_threshold"],
                          truth_background, truth_masks, runtime=self._runtime(directory))
        sys.stdout.write(report.to_text())
        if not self.dry_run:
            with open(os.path.join(directory, EVAL_TEXT), "w", encoding="utf-8") as f:
                f.write(report.to_text())
            with open(os.path.join(directory, EVAL_CSV), "w", encoding="utf-8") as f:
                f.write(report.csv_header() + "\n" + report.to_csv_row() + "\n")
        return ExitCode.SUCCESS


class NoiseSweepController(BaseController):
    """
    噪声实验控制器

    对每个噪声水平，在同一含噪输入上分别运行完整模型与 γ₁ = γ₂ = 0 的对照，
    比较平均背景的 PSNR 与 RE
    """

    def __init__(self, config, levels: Sequence[float] = DEFAULT_NOISE_LEVELS,
                 dry_run: bool = False, callbacks: Optional[INoiseSweep] = None):
        super().__init__(config, dry_run)
        self.levels = tuple(levels)
        self.callbacks = callbacks or Callbacks()

    def sweep(self) -> List[SweepRecord]:
        clean = load_clean_input(self.config)
        truth = clean.truth_background
        if self.config["truth_background"]:
            truth = read_image_or_matrix_background(self.config["truth_background"])
        if truth is None:
            raise ConfigException("Noise sweep needs a truth background (synthetic input or truth_background)")

        full = self.config.solver_config()
        baseline = full.with_overrides(gamma1=0.0, gamma2=0.0)
        records: List[SweepRecord] = []
        for sigma in self.levels:
            self.callbacks.level_started(sigma)
            prepared = preprocess(clean, self.config, noise_sigma=sigma)
            phi_s, phi_t = build_laplacians(prepared.matrix, self.config.graph_params())
            result_full = solve(prepared.matrix, phi_s, phi_t, full)
            result_base = solve(prepared.matrix, phi_s, phi_t, baseline)
            estimate_full = mean_background_image(result_full.background)
            estimate_base = mean_background_image(result_base.background)
            record: SweepRecord = {
                "sigma": sigma,
                "psnr_full": psnr(estimate_full, truth),
                "psnr_baseline": psnr(estimate_base, truth),
                "re_full": relative_error(estimate_full, truth),
                "re_baseline": relative_error(estimate_base, truth),
                "iterations_full": result_full.iterations,
                "iterations_baseline": result_base.iterations,
            }
            self.logger.info(
                f"σ={sigma:g}: PSNR {record['psnr_full']:.2f} dB（完整）/ "
                f"{record['psnr_baseline']:.2f} dB（无图正则）"
            )
            self.callbacks.level_finished(record)
            records.append(record)
        return records

    def run(self) -> ExitCode:
        if any(level < 0 for level in self.levels):
            raise ConfigException(f"Noise levels must be nonnegative, got {list(self.levels)}")
        records = self.sweep()
        text = sweep_csv(records)
        sys.stdout.write(text)
        directory = self.output_dir()
        if directory is not None:
            with open(os.path.join(directory, SWEEP_CSV), "w", encoding="utf-8") as f:
                f.write(text)
        return ExitCode.SUCCESS
