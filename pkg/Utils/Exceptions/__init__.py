from typing import Optional

from .code import (decode_error_code, format_error_code,
                   get_error_code_for_exception)


class DgmotionException(Exception):
    """
    dgmotion 异常基类

    所有自定义异常都应继承此类，以便于统一处理和识别。

    Attributes:
        message (str): 异常消息
        code (int): 错误代码
        details (dict): 附加的错误详情
    """

    def __init__(self, message: str, code: int = None, details: Optional[dict] = None):
        """
        初始化DgmotionException实例

        Args:
            message (str): 异常消息
            code (int, optional): 错误代码，如果为None则根据类名自动获取
            details (dict, optional): 附加的错误详情，默认为None
        """
        self.message = message
        if code is None:
            code = get_error_code_for_exception(self.__class__.__name__)
        self.code = code
        self.details = details or {}
        super().__init__(self.message)

    def __str__(self) -> str:
        """返回异常的字符串表示"""
        if self.code:
            formatted_code = format_error_code(self.code)
            return f"[{formatted_code}] {self.message}"
        return self.message

    def to_dict(self) -> dict:
        """将异常转换为字典格式"""
        return {
            "message": self.message,
            "code": self.code,
            "formatted_code": format_error_code(self.code),
            "exception_type": self.__class__.__name__,
            "details": self.details,
        }


# ===== 核心异常 =====


class CoreException(DgmotionException):
    """核心模块异常基类"""

    pass


# ----- 视频与文件格式相关异常 -----


class VideoException(CoreException, ValueError):
    """视频数据相关异常基类"""

    pass


class InsufficientMotionException(VideoException):
    """去除静止帧后剩余帧数不足"""

    pass


class FrameShapeException(VideoException):
    """帧尺寸不一致"""

    pass


class FrameFormatException(VideoException):
    """帧文件格式无法识别"""

    pass


class UnsupportedBitDepthException(FrameFormatException):
    """不支持的像素位深"""

    pass


class MatrixFormatException(VideoException):
    """DGM1 矩阵文件或 DGL1 三元组文件损坏"""

    pass


class SyntheticSpecException(VideoException):
    """合成视频描述无效"""

    pass


# ----- 文件系统相关异常 -----


class FileSystemException(CoreException):
    """文件系统相关异常基类"""

    pass


class FileNotFoundException(FileSystemException):
    """文件或目录未找到异常"""

    pass


# ----- 图构造相关异常 -----


class GraphException(CoreException, ValueError):
    """图构造异常基类"""

    pass


class KernelParameterException(GraphException):
    """相似度核参数无效（如滤波参数 h 非正）"""

    pass


class IsolatedVertexException(GraphException):
    """度为零的孤立顶点，无法归一化"""

    pass


class ZeroNormException(GraphException):
    """余弦相似度的输入范数为零"""

    pass


class NeighborhoodException(GraphException):
    """邻域策略无效（偶数 patch 边长、patch 超出图像等）"""

    pass


# ----- 配置相关异常 -----


class ConfigException(CoreException):
    """配置相关异常基类"""

    pass


class InvalidConfigException(ConfigException, ValueError):
    """无效配置异常"""

    pass


class ConfigNotFoundException(ConfigException):
    """配置未找到异常"""

    pass


# ----- 近端算子与求解器相关异常 -----


class ProxException(CoreException, ValueError):
    """近端算子异常基类"""

    pass


class SingularValueDecompositionException(ProxException):
    """SVD 失败（通常由非有限元素引起）"""

    pass


class SolverException(CoreException):
    """求解器异常基类"""

    pass


class ShapeMismatchException(SolverException, ValueError):
    """矩阵或拉普拉斯算子维度不匹配"""

    pass


class SolverDivergenceException(SolverException, ArithmeticError):
    """迭代出现非有限值"""

    pass


# ----- 评估相关异常 -----


class MetricsException(CoreException, ValueError):
    """评估指标异常"""

    pass


# ===== 系统异常包装器 =====


class WrappedSystemException(DgmotionException):
    """
    系统异常包装器

    用于包装系统异常，将其转换为DgmotionException

    Attributes:
        original_exception (Exception): 原始系统异常
    """

    def __init__(self, original_exception: Exception, message: Optional[str] = None):
        """
        初始化WrappedSystemException实例

        Args:
            original_exception (Exception): 原始系统异常
            message (str, optional): 自定义消息，如果为None则使用原始异常消息
        """
        self.original_exception = original_exception
        message = message or str(original_exception)
        details = {"exception_type": type(original_exception).__name__}
        super().__init__(message, details=details)


__all__ = [
    # 基础异常类
    "DgmotionException",
    # Core层异常
    "CoreException",
    "VideoException",
    "InsufficientMotionException",
    "FrameShapeException",
    "FrameFormatException",
    "UnsupportedBitDepthException",
    "MatrixFormatException",
    "SyntheticSpecException",
    "FileSystemException",
    "FileNotFoundException",
    "GraphException",
    "KernelParameterException",
    "IsolatedVertexException",
    "ZeroNormException",
    "NeighborhoodException",
    "ConfigException",
    "InvalidConfigException",
    "ConfigNotFoundException",
    "ProxException",
    "SingularValueDecompositionException",
    "SolverException",
    "ShapeMismatchException",
    "SolverDivergenceException",
    "MetricsException",
    # 系统异常包装器
    "WrappedSystemException",
    # 工具函数
    "decode_error_code",
    "get_error_code_for_exception",
    "format_error_code",
]
