"""
通用工具模块

本模块提供 ``key=value`` 文本的格式化与解析，进度日志、评估报告、
运行摘要等机器可读输出都使用这里的函数。
"""

import math
from typing import Any, Dict, Mapping


def format_value(value: Any) -> str:
    """
    将单个值格式化为稳定、可回读的文本。

    浮点数使用 ``repr``，保证重新解析后逐位相同；布尔值写为 ``true``/``false``。

    Args:
        value: 任意标量值

    Returns:
        str: 文本形式
    """
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(value)
    if value is None:
        return ""
    return str(value)


def format_key_values(record: Mapping[str, Any], separator: str = " ") -> str:
    """
    将映射格式化为一行 ``key=value`` 对。

    Args:
        record: 键值映射，保持插入顺序
        separator: 键值对之间的分隔符

    Returns:
        str: 例如 ``iter=3 objective=12.5``
    """
    return separator.join(f"{key}={format_value(value)}" for key, value in record.items())


def parse_key_values(line: str) -> Dict[str, str]:
    """
    解析 :func:`format_key_values` 写出的一行文本。

    Args:
        line: ``key=value`` 以空白分隔的文本

    Returns:
        Dict[str, str]: 未做类型转换的键值对
    """
    result: Dict[str, str] = {}
    for token in line.split():
        key, _, value = token.partition("=")
        result[key] = value
    return result
