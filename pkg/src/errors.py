"""异常定义模块

所有异常同时继承 HybridMatrixError 与最贴近的内置异常，
调用方可以按任一类型捕获。
"""

from typing import Any, Sequence


class HybridMatrixError(Exception):
    """混合集与块矩阵计算的异常基类"""


class UnboundParameter(HybridMatrixError, LookupError):
    """参数未在环境中绑定"""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"参数未绑定: {name}")


class NonAffineExpression(HybridMatrixError, ValueError):
    """出现参数之间的乘积（非仿射表达式）"""


class SizeSyntaxError(HybridMatrixError, ValueError):
    """尺寸表达式或区间文本无法解析"""

    def __init__(self, text: str, reason: str):
        self.text = text
        self.reason = reason
        super().__init__(f"无法解析 {text!r}: {reason}")


class EndpointMismatch(HybridMatrixError, ValueError):
    """拼接区间时连接端点不一致"""

    def __init__(self, left_upper: Any, right_lower: Any):
        self.left_upper = left_upper
        self.right_lower = right_lower
        super().__init__(f"区间端点不一致: {left_upper} ≠ {right_lower}")


class IncompatibleFlavors(HybridMatrixError, ValueError):
    """两个区间的开闭类型无法在连接点抵消"""

    def __init__(self, left: Any, right: Any):
        self.left = left
        self.right = right
        super().__init__(f"区间类型不可拼接: {left} ⊕ {right}")


class ArityMismatch(HybridMatrixError, ValueError):
    """元组区间两端维数不同"""

    def __init__(self, lower_arity: int, upper_arity: int):
        self.lower_arity = lower_arity
        self.upper_arity = upper_arity
        super().__init__(f"维数不一致: {lower_arity} vs {upper_arity}")


class ShapeMismatch(HybridMatrixError, ValueError):
    """块矩阵的符号尺寸不可相加/相乘"""


class UndefinedTermForced(HybridMatrixError):
    """在部分函数定义域之外强制求值"""

    def __init__(self, symbol: str, point: tuple[int, ...]):
        self.symbol = symbol
        self.point = point
        super().__init__(f"{symbol} 在 {point} 处未定义，但其净重数非零")


class DivisionByZero(HybridMatrixError, ZeroDivisionError):
    """×-归约中负指数因子的值为零"""

    def __init__(self, symbol: str, point: tuple[int, ...]):
        self.symbol = symbol
        self.point = point
        super().__init__(f"{symbol} 在 {point} 处为零，无法取负指数")


class InstanceValidationError(HybridMatrixError, ValueError):
    """实例文件解析或校验失败"""

    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
