"""混合区间模块

在全序集（这里固定为整数）上定义四种混合区间：
    [[a,b)) = [a,b) ⊖ [b,a)      ((a,b]] = (a,b] ⊖ (b,a]
    [[a,b]] = [a,b] ⊖ (b,a)      ((a,b)) = (a,b) ⊖ [b,a]
端点为符号尺寸表达式，绑定参数后逐点求重数。“反向”区间不为空，而是带 -1 重数。

另外提供：
- 取反与拼接恒等式（不依赖端点的相对顺序）
- 区间的笛卡尔积：二维矩形 Rectangle、一般 k 维 TupleInterval / CartesianProduct
- 命令行使用的文本语法 "[[0,q))"、"[[q,n)) x [[0,r))"
"""

import re
from dataclasses import dataclass
from enum import Enum
from typing import Any, Hashable, Sequence

from src.algebra.hybridset import HybridSet, PointAtom, Region
from src.algebra.sizes import EMPTY_ENV, ParamEnv, SizeExpr, SizeLike, as_size
from src.errors import ArityMismatch, EndpointMismatch, IncompatibleFlavors, SizeSyntaxError


class Flavor(str, Enum):
    """区间开闭类型"""
    CLOSED_CLOSED = "[]"
    CLOSED_OPEN = "[)"
    OPEN_CLOSED = "(]"
    OPEN_OPEN = "()"

    @property
    def left_closed(self) -> bool:
        return self.value[0] == "["

    @property
    def right_closed(self) -> bool:
        return self.value[1] == "]"

    @classmethod
    def from_closedness(cls, left_closed: bool, right_closed: bool) -> "Flavor":
        return cls(("[" if left_closed else "(") + ("]" if right_closed else ")"))


def _inside(x: int, a: int, b: int, left_closed: bool, right_closed: bool) -> bool:
    above = a <= x if left_closed else a < x
    below = x <= b if right_closed else x < b
    return above and below


@dataclass(frozen=True)
class TraditionalInterval:
    """传统区间（重数只取 0/1），端点 a > b 时为空"""
    lower: SizeExpr
    upper: SizeExpr
    flavor: Flavor = Flavor.CLOSED_OPEN

    def indicator(self, point: Any, env: ParamEnv = EMPTY_ENV) -> int:
        a, b = self.lower.evaluate(env), self.upper.evaluate(env)
        return int(_inside(point, a, b, self.flavor.left_closed, self.flavor.right_closed))

    def __str__(self) -> str:
        left, right = self.flavor.value
        return f"{left}{self.lower},{self.upper}{right}"


@dataclass(frozen=True)
class HybridInterval:
    """混合区间 forward ⊖ backward

    对于不同的端点，前后两项恰有一项为空，所以单个区间内不会出现符号混杂。
    """
    lower: SizeExpr
    upper: SizeExpr
    flavor: Flavor = Flavor.CLOSED_OPEN

    @property
    def forward(self) -> TraditionalInterval:
        return TraditionalInterval(self.lower, self.upper, self.flavor)

    @property
    def backward(self) -> TraditionalInterval:
        # 反向项交换端点，并翻转两侧开闭
        flavor = Flavor.from_closedness(not self.flavor.right_closed, not self.flavor.left_closed)
        return TraditionalInterval(self.upper, self.lower, flavor)

    def as_hybrid_set(self) -> HybridSet:
        """按定义展开为两个传统区间之差"""
        return HybridSet.from_region(self.forward) - HybridSet.from_region(self.backward)

    def bounds(self, env: ParamEnv) -> tuple[int, int]:
        return self.lower.evaluate(env), self.upper.evaluate(env)

    def indicator(self, point: Any, env: ParamEnv = EMPTY_ENV) -> int:
        a, b = self.bounds(env)
        lc, rc = self.flavor.left_closed, self.flavor.right_closed
        return int(_inside(point, a, b, lc, rc)) - int(_inside(point, b, a, not rc, not lc))

    def orientation(self, env: ParamEnv) -> int:
        """+1 表示正向（a < b），-1 表示反向（a > b），端点相等时为 0"""
        a, b = self.bounds(env)
        return (a < b) - (a > b)

    def negate(self) -> "HybridInterval":
        return interval_negate(self)

    def __neg__(self) -> "HybridInterval":
        return interval_negate(self)

    def __str__(self) -> str:
        left, right = self.flavor.value
        return f"{left * 2}{self.lower},{self.upper}{right * 2}"


def hybrid_interval(
    a: SizeLike, b: SizeLike, flavor: Flavor = Flavor.CLOSED_OPEN
) -> HybridInterval:
    return HybridInterval(as_size(a), as_size(b), flavor)


def closed_open(a: SizeLike, b: SizeLike) -> HybridInterval:
    return hybrid_interval(a, b, Flavor.CLOSED_OPEN)


def open_closed(a: SizeLike, b: SizeLike) -> HybridInterval:
    return hybrid_interval(a, b, Flavor.OPEN_CLOSED)


def closed_closed(a: SizeLike, b: SizeLike) -> HybridInterval:
    return hybrid_interval(a, b, Flavor.CLOSED_CLOSED)


def open_open(a: SizeLike, b: SizeLike) -> HybridInterval:
    return hybrid_interval(a, b, Flavor.OPEN_OPEN)


def traditional(a: SizeLike, b: SizeLike, flavor: Flavor = Flavor.CLOSED_OPEN) -> HybridSet:
    """传统区间作为混合集"""
    return HybridSet.from_region(TraditionalInterval(as_size(a), as_size(b), flavor))


# ==================== 恒等式 ====================

_NEGATED_FLAVOR = {
    Flavor.CLOSED_OPEN: Flavor.CLOSED_OPEN,
    Flavor.OPEN_CLOSED: Flavor.OPEN_CLOSED,
    Flavor.CLOSED_CLOSED: Flavor.OPEN_OPEN,
    Flavor.OPEN_OPEN: Flavor.CLOSED_CLOSED,
}


def interval_mult_at(interval: HybridInterval, env: ParamEnv, x: int) -> int:
    """绑定参数后在 x 处的重数"""
    return interval.indicator(x, env)


def interval_negate(interval: HybridInterval) -> HybridInterval:
    """⊖I：交换端点，[[ ]] 与 (( )) 互换，半开区间类型不变"""
    return HybridInterval(interval.upper, interval.lower, _NEGATED_FLAVOR[interval.flavor])


def interval_concat(left: HybridInterval, right: HybridInterval) -> HybridInterval:
    """I(a,b) ⊕ J(b,c) 合并为一个区间，对 a、b、c 的任意相对顺序成立

    连接点 b 处左区间的右端与右区间的左端必须一开一闭才能抵消，
    例如 [[a,b)) ⊕ [[b,c)) = [[a,c))，[[a,b]] ⊕ ((b,c)) = [[a,c))。

    Raises:
        EndpointMismatch: left.upper 与 right.lower 结构不同
        IncompatibleFlavors: 连接点两侧同开或同闭
    """
    if left.upper != right.lower:
        raise EndpointMismatch(left.upper, right.lower)
    if left.flavor.right_closed == right.flavor.left_closed:
        raise IncompatibleFlavors(left.flavor, right.flavor)
    flavor = Flavor.from_closedness(left.flavor.left_closed, right.flavor.right_closed)
    return HybridInterval(left.lower, right.upper, flavor)


def concat_chain(intervals: Sequence[HybridInterval]) -> HybridInterval:
    """依次拼接一串首尾相接的区间"""
    if not intervals:
        raise ValueError("至少需要一个区间")
    result = intervals[0]
    for nxt in intervals[1:]:
        result = interval_concat(result, nxt)
    return result


# ==================== 笛卡尔积 ====================

@dataclass(frozen=True)
class Rectangle:
    """二维混合矩形 rows × cols，(i,j) 处重数为 rows(i)·cols(j)"""
    rows: HybridInterval
    cols: HybridInterval

    def indicator(self, point: Any, env: ParamEnv = EMPTY_ENV) -> int:
        i, j = point
        r = self.rows.indicator(i, env)
        if r == 0:
            return 0
        return r * self.cols.indicator(j, env)

    def slice(self, axis: int, value: int, env: ParamEnv) -> HybridSet:
        """固定行（axis=0）或列（axis=1）后得到另一轴上的一维混合集"""
        if axis == 0:
            return HybridSet.from_region(self.cols, self.rows.indicator(value, env))
        if axis == 1:
            return HybridSet.from_region(self.rows, self.cols.indicator(value, env))
        raise ValueError(f"矩形只有两个轴: {axis}")

    def __str__(self) -> str:
        return f"{self.rows} x {self.cols}"


def rect_product(rows: HybridInterval, cols: HybridInterval) -> Rectangle:
    return Rectangle(rows, cols)


@dataclass(frozen=True)
class CartesianProduct:
    """任意区域的笛卡尔积，重数为各分量重数之积"""
    factors: tuple[Region, ...]

    def indicator(self, point: Any, env: ParamEnv = EMPTY_ENV) -> int:
        if len(point) != len(self.factors):
            raise ArityMismatch(len(self.factors), len(point))
        result = 1
        for factor, coord in zip(self.factors, point):
            result *= factor.indicator(coord, env)
            if result == 0:
                break
        return result

    def __str__(self) -> str:
        return " x ".join(str(f) for f in self.factors)


@dataclass(frozen=True)
class TupleInterval:
    """元组端点的混合区间 [[a, b]] = [[a1,b1]] × ... × [[an,bn]]"""
    lowers: tuple[SizeExpr, ...]
    uppers: tuple[SizeExpr, ...]
    flavors: tuple[Flavor, ...]

    @property
    def axes(self) -> tuple[HybridInterval, ...]:
        return tuple(
            HybridInterval(a, b, f) for a, b, f in zip(self.lowers, self.uppers, self.flavors)
        )

    def indicator(self, point: Any, env: ParamEnv = EMPTY_ENV) -> int:
        return CartesianProduct(self.axes).indicator(point, env)

    def dimension(self, env: ParamEnv) -> int:
        """端点不同的轴数；端点相同的轴是 0-矩形"""
        bounds = zip(self.lowers, self.uppers)
        return sum(1 for a, b in bounds if a.evaluate(env) != b.evaluate(env))

    def sign(self, env: ParamEnv) -> int:
        """反向轴（a_i > b_i）个数为奇数时为 -1"""
        bounds = zip(self.lowers, self.uppers)
        reversed_axes = sum(1 for a, b in bounds if a.evaluate(env) > b.evaluate(env))
        return -1 if reversed_axes % 2 else 1

    def __str__(self) -> str:
        return " x ".join(str(axis) for axis in self.axes)


def tuple_interval(
    a: Sequence[SizeLike],
    b: Sequence[SizeLike],
    flavor: Flavor | Sequence[Flavor] = Flavor.CLOSED_CLOSED,
) -> TupleInterval:
    """由两个 n 元组构造 k-矩形

    Raises:
        ArityMismatch: 两个元组（或逐轴类型）长度不同
    """
    if len(a) != len(b):
        raise ArityMismatch(len(a), len(b))
    flavors = (flavor,) * len(a) if isinstance(flavor, Flavor) else tuple(flavor)
    if len(flavors) != len(a):
        raise ArityMismatch(len(a), len(flavors))
    return TupleInterval(
        tuple(as_size(x) for x in a),
        tuple(as_size(x) for x in b),
        flavors,
    )


def signed_point(value: Hashable, sign: int = 1) -> HybridSet:
    """0-矩形：只含一个点、重数为 ±1 的混合集"""
    if sign not in (1, -1):
        raise ValueError("0-矩形的重数只能是 1 或 -1")
    return HybridSet.from_region(PointAtom(value), sign)


# ==================== 文本语法 ====================

_INTERVAL = re.compile(r"^\s*(\[\[|\(\()\s*([^,]+?)\s*,\s*([^,]+?)\s*(\]\]|\)\))\s*$")
_PRODUCT_SEP = re.compile(r"(?<=\]\]|\)\))\s*[x×]\s*(?=\[\[|\(\()")


def parse_interval(text: str) -> HybridInterval:
    """解析 "[[0,q))"、"((k,n]]" 这类区间文本"""
    match = _INTERVAL.match(text)
    if match is None:
        raise SizeSyntaxError(text, "不是合法的混合区间")
    left, lower, upper, right = match.groups()
    flavor = Flavor.from_closedness(left == "[[", right == "]]")
    return HybridInterval(as_size(lower), as_size(upper), flavor)


def parse_region(text: str) -> HybridInterval | Rectangle | TupleInterval:
    """解析区间或区间乘积，例如 "[[q,n)) x [[0,r))" """
    pieces = [parse_interval(p) for p in _PRODUCT_SEP.split(text)]
    if len(pieces) == 1:
        return pieces[0]
    if len(pieces) == 2:
        return Rectangle(pieces[0], pieces[1])
    return TupleInterval(
        tuple(p.lower for p in pieces),
        tuple(p.upper for p in pieces),
        tuple(p.flavor for p in pieces),
    )
