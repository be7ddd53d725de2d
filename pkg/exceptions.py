"""
异常定义
库代码只负责抛出异常，退出码的转换由 main.py 完成
"""

from typing import Optional


class TedError(Exception):
    """项目内所有异常的基类"""


class GraphParseError(TedError):
    """交换格式中存在无法解析的行"""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"第 {line_number} 行: {message}")


class GraphStructureError(TedError):
    """图结构不合法（悬空顶点、重复边、自环、不连通等）"""

    def __init__(self, message: str, graph_index: Optional[int] = None):
        self.graph_index = graph_index
        if graph_index is not None:
            message = f"图 {graph_index}: {message}"
        super().__init__(message)


class ConfigError(TedError, ValueError):
    """参数取值非法"""


class PatternIndexError(TedError):
    """PES-Index 前置条件不满足"""


class IndexCapacityError(PatternIndexError):
    """模式集合已满 k 个"""


class DuplicatePatternError(PatternIndexError):
    """同构模式已在模式集合中"""


class AbsentPatternError(PatternIndexError):
    """模式不在模式集合中"""


class EmptyIndexError(PatternIndexError):
    """模式集合为空"""


class ResourceLimitError(TedError):
    """嵌入数量或候选池大小超过保护上限"""


class CapacityError(TedError):
    """精确求解的候选数量或子集数量超过上限"""


class TimeLimitExceeded(TedError):
    """运行超过 --time-limit，携带部分结果"""

    def __init__(self, message: str, partial=None):
        self.partial = partial
        super().__init__(message)
