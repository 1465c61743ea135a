"""评估指标：RE、PSNR、Pr/Re/Fm。"""

from .evaluation import (PSNR_CAP, EvalReport, MaskPair, PrecisionRecall, evaluate,
                         pr_re_fm, psnr, relative_error, sweep_csv, threshold_foreground)

__all__ = [
    "PSNR_CAP",
    "MaskPair",
    "PrecisionRecall",
    "EvalReport",
    "relative_error",
    "psnr",
    "threshold_foreground",
    "pr_re_fm",
    "evaluate",
    "sweep_csv",
]
