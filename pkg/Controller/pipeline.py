"""
输入准备

按运行配置读取或合成视频，执行静止帧去除与加噪，并在可能时给出真值
"""

import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from Core.Repository import RunConfig
from Core.video import (DataMatrix, add_gaussian_noise, default_benchmark_spec, ingest_frames,
                        load_synthetic_spec, read_matrix, remove_motionless_frames, synthesize,
                        to_matrix)
from Core.video.synthetic import SyntheticSpec

logger = logging.getLogger(__name__)

DEFAULT_SYNTHETIC = "default"


@dataclass(frozen=True)
class PreparedInput:
    """
    预处理后的求解输入。

    Attributes:
        matrix: 数据矩阵 D（已去除静止帧、已加噪）
        kept: D 的列对应的原始帧下标
        truth_background: 合成输入的真值背景
        truth_masks: 合成输入的真值掩码，只含保留的帧
    """
    matrix: DataMatrix
    kept: List[int]
    truth_background: Optional[np.ndarray] = None
    truth_masks: Optional[np.ndarray] = None


def synthetic_spec(value: str) -> SyntheticSpec:
    """``default`` 表示内置基准，否则为描述文件路径。"""
    if value == DEFAULT_SYNTHETIC:
        return default_benchmark_spec()
    return load_synthetic_spec(value)


def load_clean_input(config: RunConfig) -> PreparedInput:
    """读取或合成视频，不做静止帧去除与加噪。"""
    kind, value = config.input_source()
    if kind == "frames":
        matrix = to_matrix(ingest_frames(value, config.scaling_mode()))
        return PreparedInput(matrix, list(range(matrix.cols)))
    if kind == "matrix":
        matrix = read_matrix(value)
        return PreparedInput(matrix, list(range(matrix.cols)))
    video, background, masks = synthesize(synthetic_spec(value), seed=config["seed"])
    matrix = to_matrix(video)
    return PreparedInput(matrix, list(range(matrix.cols)), background, masks)


def preprocess(prepared: PreparedInput, config: RunConfig, noise_sigma: Optional[float] = None) -> PreparedInput:
    """
    静止帧去除（可选）与加噪。

    Args:
        prepared: :func:`load_clean_input` 的结果
        config: 运行配置
        noise_sigma: 覆盖配置中的噪声标准差
    """
    matrix, kept = prepared.matrix, prepared.kept
    if config["remove_motionless"]:
        matrix, columns = remove_motionless_frames(matrix, config.motionless_threshold())
        kept = [kept[j] for j in columns]
    sigma = config["noise_sigma"] if noise_sigma is None else noise_sigma
    if sigma > 0:
        matrix = add_gaussian_noise(matrix, sigma, seed=config["seed"])
        logger.info(f"加入高斯噪声 σ={sigma:g}（种子 {config['seed']}）")
    masks = prepared.truth_masks[kept] if prepared.truth_masks is not None else None
    return PreparedInput(matrix, kept, prepared.truth_background, masks)


def prepare_input(config: RunConfig) -> PreparedInput:
    return preprocess(load_clean_input(config), config)
