"""
dgmotion 控制器模块

此模块包含所有控制器类，作为命令行与Core功能模块交互的桥梁
"""

from .base_controller import BaseController, ExitCode
from .detect_controller import DetectController
from .evaluation_controller import DEFAULT_NOISE_LEVELS, EvaluationController, NoiseSweepController
from .graph_controller import GraphInfoController
from .synthesis_controller import SynthesisController

__all__ = [
    "BaseController",
    "ExitCode",
    "DetectController",
    "EvaluationController",
    "NoiseSweepController",
    "GraphInfoController",
    "SynthesisController",
    "DEFAULT_NOISE_LEVELS",
]
