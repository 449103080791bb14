"""
异常定义模块

所有对外抛出的错误都继承自 GroupToolError，
CLI 根据类别映射退出码：输入类错误 -> 1，预算耗尽 -> 2
"""

from typing import Any, Optional


class GroupToolError(Exception):
    """工具箱内所有错误的基类"""
    pass


class InputError(GroupToolError, ValueError):
    """输入数据不合法（文件格式、字母表、子群参数等）"""
    pass


class UnknownLetter(InputError):
    """单词中出现了字母表之外的字母"""

    def __init__(self, letter: str, alphabet: Any = None):
        self.letter = letter
        hint = f"，可用生成元: {' '.join(alphabet)}" if alphabet else ""
        super().__init__(f"未知字母 '{letter}'{hint}")


class ParseError(InputError):
    """文件解析失败，附带行号"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"第 {line_number} 行: {message}"
        super().__init__(message)


class DuplicateGenerator(ParseError):
    """生成元重复声明"""

    def __init__(self, symbol: str, line_number: Optional[int] = None):
        self.symbol = symbol
        super().__init__(f"生成元 '{symbol}' 重复声明", line_number)


class UnsupportedPresentation(InputError):
    """展示既不是自由群也不满足 C'(1/6)，没有可用的字问题后端"""
    pass


class NotInSubgroup(InputError):
    """给定元素不在指定子群中"""
    pass


class TrivialGenerator(InputError):
    """生成元约化后为单位元"""
    pass


class ExponentNotRecovered(InputError):
    """成员关系成立，但在给定指数范围内找不到对应的幂次"""
    pass


class BudgetExceeded(GroupToolError, RuntimeError):
    """
    搜索预算耗尽

    Attributes:
        limit: 触发的上限值
        partial: 已得到的最佳中间结果（可能为 None）
    """

    def __init__(self, message: str, limit: Optional[int] = None, partial: Any = None):
        self.limit = limit
        self.partial = partial
        super().__init__(message)
