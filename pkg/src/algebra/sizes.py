"""符号尺寸表达式模块

块矩阵的尺寸与切分点都是符号参数的仿射整数表达式，例如 q、n - q、2*q + 1。
本模块提供：
- SizeExpr：规范形式的仿射表达式（系数中不含 0）
- ParamEnv：参数到整数的绑定环境
- parse_size：命令行实例文件使用的文本语法
"""

import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Union

from src.errors import NonAffineExpression, SizeSyntaxError, UnboundParameter


@dataclass(frozen=True)
class ParamEnv:
    """参数绑定环境"""
    bindings: Mapping[str, int] = field(default_factory=dict)

    def lookup(self, name: str) -> int:
        """查找参数值，未绑定时抛出 UnboundParameter"""
        try:
            return self.bindings[name]
        except KeyError:
            raise UnboundParameter(name) from None

    def with_bindings(self, **values: int) -> "ParamEnv":
        """返回追加了新绑定的环境"""
        merged = dict(self.bindings)
        merged.update(values)
        return ParamEnv(merged)

    def __contains__(self, name: object) -> bool:
        return name in self.bindings

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.bindings.items())))

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}={v}" for k, v in sorted(self.bindings.items()))
        return f"ParamEnv({inner})"


EMPTY_ENV = ParamEnv()


@dataclass(frozen=True)
class SizeExpr:
    """仿射整数表达式 constant + Σ coeff·param

    terms 按参数名排序且不含零系数，因此结构相等即语义相等。
    请使用 SizeExpr.of / const / param 构造。
    """
    constant: int = 0
    terms: tuple[tuple[str, int], ...] = ()

    @classmethod
    def of(cls, constant: int = 0, coefficients: Optional[Mapping[str, int]] = None) -> "SizeExpr":
        """由常数项与系数映射构造规范形式"""
        items = tuple(sorted((k, v) for k, v in (coefficients or {}).items() if v != 0))
        return cls(int(constant), items)

    @classmethod
    def const(cls, value: int) -> "SizeExpr":
        return cls(int(value), ())

    @classmethod
    def param(cls, name: str) -> "SizeExpr":
        return cls(0, ((name, 1),))

    @property
    def coefficients(self) -> dict[str, int]:
        return dict(self.terms)

    @property
    def parameters(self) -> frozenset[str]:
        return frozenset(name for name, _ in self.terms)

    @property
    def is_constant(self) -> bool:
        return not self.terms

    def evaluate(self, env: ParamEnv) -> int:
        """在环境下求值"""
        total = self.constant
        for name, coeff in self.terms:
            total += coeff * env.lookup(name)
        return total

    def __add__(self, other: "SizeLike") -> "SizeExpr":
        other = as_size(other)
        merged = self.coefficients
        for name, coeff in other.terms:
            merged[name] = merged.get(name, 0) + coeff
        return SizeExpr.of(self.constant + other.constant, merged)

    __radd__ = __add__

    def __neg__(self) -> "SizeExpr":
        return SizeExpr.of(-self.constant, {k: -v for k, v in self.terms})

    def __sub__(self, other: "SizeLike") -> "SizeExpr":
        return self + (-as_size(other))

    def __rsub__(self, other: "SizeLike") -> "SizeExpr":
        return as_size(other) - self

    def __mul__(self, other: "SizeLike") -> "SizeExpr":
        other = as_size(other)
        if self.is_constant:
            self, other = other, self
        if not other.is_constant:
            raise NonAffineExpression(f"参数乘积不是仿射表达式: ({self}) * ({other})")
        factor = other.constant
        return SizeExpr.of(self.constant * factor, {k: v * factor for k, v in self.terms})

    __rmul__ = __mul__

    def __str__(self) -> str:
        parts: list[str] = []
        for name, coeff in self.terms:
            magnitude = abs(coeff)
            body = name if magnitude == 1 else f"{magnitude}*{name}"
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
        if self.constant or not parts:
            if not parts:
                parts.append(str(self.constant))
            elif self.constant > 0:
                parts.append(f"+ {self.constant}")
            else:
                parts.append(f"- {-self.constant}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"SizeExpr({str(self)!r})"


SizeLike = Union[SizeExpr, int, str]


def as_size(value: SizeLike) -> SizeExpr:
    """把 int / str / SizeExpr 统一转换为 SizeExpr"""
    if isinstance(value, SizeExpr):
        return value
    if isinstance(value, bool):
        raise TypeError("布尔值不是尺寸表达式")
    if isinstance(value, int):
        return SizeExpr.const(value)
    if isinstance(value, str):
        return parse_size(value)
    raise TypeError(f"无法转换为尺寸表达式: {value!r}")


def size_add(a: SizeExpr, b: SizeExpr) -> SizeExpr:
    """两个尺寸表达式相加（保持规范形式）"""
    return a + b


def size_eval(e: SizeExpr, env: ParamEnv) -> int:
    """求值；参数未绑定时抛出 UnboundParameter"""
    return e.evaluate(env)


def negate(e: SizeExpr) -> SizeExpr:
    return -e


# ==================== 文本语法 ====================

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[^\W\d]\w*)|(?P<op>[-+*()]))")


def _tokenize(text: str) -> Iterator[tuple[str, str]]:
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        match = _TOKEN.match(stripped, pos)
        if match is None:
            raise SizeSyntaxError(text, f"位置 {pos} 处有非法字符")
        kind = match.lastgroup
        assert kind is not None
        yield kind, match.group(kind)
        pos = match.end()


class _Parser:
    """递归下降解析器: expr := term (('+'|'-') term)*, term := unary ('*' unary)*"""

    def __init__(self, text: str):
        self.text = text
        self.tokens = list(_tokenize(text))
        self.pos = 0

    def peek(self) -> Optional[tuple[str, str]]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> tuple[str, str]:
        token = self.peek()
        if token is None:
            raise SizeSyntaxError(self.text, "表达式意外结束")
        self.pos += 1
        return token

    def parse(self) -> SizeExpr:
        if not self.tokens:
            raise SizeSyntaxError(self.text, "空表达式")
        result = self.expr()
        leftover = self.peek()
        if leftover is not None:
            raise SizeSyntaxError(self.text, f"多余的符号 {leftover[1]!r}")
        return result

    def expr(self) -> SizeExpr:
        result = self.term()
        while (token := self.peek()) is not None and token[1] in "+-":
            self.take()
            rhs = self.term()
            result = result + rhs if token[1] == "+" else result - rhs
        return result

    def term(self) -> SizeExpr:
        result = self.unary()
        while (token := self.peek()) is not None and token[1] == "*":
            self.take()
            result = result * self.unary()
        return result

    def unary(self) -> SizeExpr:
        kind, value = self.take()
        if value == "-":
            return -self.unary()
        if value == "+":
            return self.unary()
        if kind == "int":
            return SizeExpr.const(int(value))
        if kind == "name":
            return SizeExpr.param(value)
        if value == "(":
            inner = self.expr()
            if self.take()[1] != ")":
                raise SizeSyntaxError(self.text, "缺少右括号")
            return inner
        raise SizeSyntaxError(self.text, f"意外的符号 {value!r}")


def parse_size(text: str) -> SizeExpr:
    """解析尺寸表达式文本，例如 "2*q + n - 1" """
    return _Parser(text).parse()
