"""背景恢复与前景检测的定量评估。"""

import logging
from dataclasses import dataclass, fields
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from Core.video.frames import (DataMatrix, matrix_to_volume, mean_background_image,
                               vectorize)
from Utils.Exceptions import MetricsException
from Utils.tools import format_value

logger = logging.getLogger(__name__)

# 估计与真值完全相同时的 PSNR
PSNR_CAP = 99.0


def _as_array(value: Union[DataMatrix, np.ndarray]) -> np.ndarray:
    if isinstance(value, DataMatrix):
        return value.values
    return np.asarray(value, dtype=np.float64)


def _check_same_shape(estimate: np.ndarray, truth: np.ndarray) -> None:
    if estimate.shape != truth.shape:
        raise MetricsException(f"Estimate shape {estimate.shape} differs from truth shape {truth.shape}")


def relative_error(estimate: Union[DataMatrix, np.ndarray], truth: Union[DataMatrix, np.ndarray]) -> float:
    """
    ``‖truth − estimate‖_F / ‖truth‖_F``

    Raises:
        MetricsException: 形状不同或真值范数为零
    """
    estimate, truth = _as_array(estimate), _as_array(truth)
    _check_same_shape(estimate, truth)
    reference = float(np.linalg.norm(truth))
    if reference == 0:
        raise MetricsException("Relative error is undefined for a zero truth")
    return float(np.linalg.norm(truth - estimate)) / reference


def psnr(estimate: Union[DataMatrix, np.ndarray], truth: Union[DataMatrix, np.ndarray],
         i_max: float = 1.0) -> float:
    """
    峰值信噪比 ``20·log10(I_max / RMSE)``，单位 dB。

    均方误差按元素个数平均；估计与真值相同时返回 :data:`PSNR_CAP`。
    """
    estimate, truth = _as_array(estimate), _as_array(truth)
    _check_same_shape(estimate, truth)
    mse = float(np.mean((estimate - truth) ** 2))
    if mse == 0:
        return PSNR_CAP
    return 20.0 * float(np.log10(i_max / np.sqrt(mse)))


def threshold_foreground(foreground: Union[DataMatrix, np.ndarray], threshold: float) -> np.ndarray:
    """
    硬阈值提取前景：``|S| > threshold`` 的像素为真。

    Args:
        foreground: 稀疏部分 S；为 :class:`DataMatrix` 时返回 ``(m, n₁, n₂)`` 体
        threshold: 非负阈值

    Raises:
        MetricsException: 阈值为负
    """
    if threshold < 0:
        raise MetricsException(f"Foreground threshold must be nonnegative, got {threshold}")
    if isinstance(foreground, DataMatrix):
        return np.abs(matrix_to_volume(foreground)) > threshold
    return np.abs(np.asarray(foreground, dtype=np.float64)) > threshold


@dataclass(frozen=True)
class MaskPair:
    """同形状的预测掩码与真值掩码。"""
    predicted: np.ndarray
    truth: np.ndarray

    def __post_init__(self) -> None:
        predicted, truth = np.asarray(self.predicted), np.asarray(self.truth)
        if predicted.shape != truth.shape:
            raise MetricsException(f"Mask shapes differ: {predicted.shape} vs {truth.shape}")
        for name, mask in (("predicted", predicted), ("truth", truth)):
            if mask.dtype != bool and not np.isin(mask, (0, 1)).all():
                raise MetricsException(f"{name} mask is not binary")
        object.__setattr__(self, "predicted", predicted.astype(bool))
        object.__setattr__(self, "truth", truth.astype(bool))

    def counts(self) -> Tuple[int, int, int]:
        """``(TP, FP, FN)``"""
        tp = int(np.count_nonzero(self.predicted & self.truth))
        fp = int(np.count_nonzero(self.predicted & ~self.truth))
        fn = int(np.count_nonzero(~self.predicted & self.truth))
        return tp, fp, fn

    def swapped(self) -> "MaskPair":
        return MaskPair(self.truth, self.predicted)


@dataclass(frozen=True)
class PrecisionRecall:
    """
    Attributes:
        precision: TP/(TP+FP)
        recall: TP/(TP+FN)
        f_measure: Pr 与 Re 的调和平均
        degenerate: 出现 0/0 时为 True，对应指标记为 0
    """
    precision: float
    recall: float
    f_measure: float
    degenerate: bool = False

    def as_tuple(self) -> Tuple[float, float, float]:
        return self.precision, self.recall, self.f_measure


def _ratio(numerator: int, denominator: int) -> Tuple[float, bool]:
    if denominator == 0:
        return 0.0, True
    return numerator / denominator, False


def pr_re_fm(masks: MaskPair) -> PrecisionRecall:
    """
    计算精确率、召回率与 F 值。

    F 值按 ``2TP / (2TP + FP + FN)`` 计算，与 ``2·Pr·Re / (Pr + Re)`` 相等。
    """
    tp, fp, fn = masks.counts()
    precision, bad_pr = _ratio(tp, tp + fp)
    recall, bad_re = _ratio(tp, tp + fn)
    f_measure, bad_fm = _ratio(2 * tp, 2 * tp + fp + fn)
    degenerate = bad_pr or bad_re or bad_fm
    if degenerate:
        logger.debug(f"退化的掩码对：TP={tp} FP={fp} FN={fn}")
    return PrecisionRecall(precision, recall, f_measure, degenerate)


@dataclass(frozen=True)
class EvalReport:
    """
    评估报告。

    ``re``/``psnr`` 在平均背景图像上计算，``re_full``/``psnr_full`` 在整个低秩矩阵
    （与逐帧重复的真值背景比较）上计算。缺少真值的项为 None。
    """
    re: Optional[float]
    psnr: Optional[float]
    re_full: Optional[float]
    psnr_full: Optional[float]
    precision: Optional[float]
    recall: Optional[float]
    f_measure: Optional[float]
    threshold: float
    runtime: Optional[float] = None
    degenerate: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def to_text(self) -> str:
        """每行一个 ``key=value``。"""
        return "".join(f"{key}={format_value(value)}\n" for key, value in self.to_dict().items())

    @staticmethod
    def csv_header() -> str:
        return ",".join(f.name for f in fields(EvalReport))

    def to_csv_row(self) -> str:
        return ",".join(format_value(value) for value in self.to_dict().values())


def evaluate(background: DataMatrix, foreground: DataMatrix, threshold: float,
             truth_background: Optional[np.ndarray] = None,
             truth_masks: Optional[np.ndarray] = None,
             runtime: Optional[float] = None) -> EvalReport:
    """
    由分离结果与真值生成评估报告。

    Args:
        background: 低秩部分 L
        foreground: 稀疏部分 S
        threshold: 前景硬阈值
        truth_background: ``n₁×n₂`` 真值背景
        truth_masks: ``(m, n₁, n₂)`` 真值掩码，帧须与 S 的列一一对应
        runtime: 求解耗时（秒）
    """
    re = psnr_mean = re_full = psnr_full = None
    if truth_background is not None:
        truth_background = np.asarray(truth_background, dtype=np.float64)
        estimate = mean_background_image(background)
        re = relative_error(estimate, truth_background)
        psnr_mean = psnr(estimate, truth_background)
        tiled = np.tile(vectorize(truth_background)[:, np.newaxis], (1, background.cols))
        re_full = relative_error(background.values, tiled)
        psnr_full = psnr(background.values, tiled)

    precision = recall = f_measure = None
    degenerate = False
    if truth_masks is not None:
        scores = pr_re_fm(MaskPair(threshold_foreground(foreground, threshold), truth_masks))
        precision, recall, f_measure = scores.as_tuple()
        degenerate = scores.degenerate

    return EvalReport(re, psnr_mean, re_full, psnr_full, precision, recall, f_measure,
                      threshold, runtime, degenerate)


def sweep_csv(records: List[Dict[str, Any]]) -> str:
    """将噪声实验记录写为带表头的 CSV 文本。"""
    if not records:
        return ""
    header = list(records[0].keys())
    lines = [",".join(header)]
    lines.extend(",".join(format_value(record.get(key)) for key in header) for record in records)
    return "\n".join(lines) + "\n"
