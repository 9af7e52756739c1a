"""混合函数模块

f^H 把一个（未求值的）项 f 附着到混合集 H 的每一点上。这里所有项都按伪函数处理：
先按点汇总每个项的净重数，净重数为零的项直接删除，从不求值；
只有幸存的项才会调用其部分函数。这正是“顺序猜错也能自行抵消”的引擎。

主要内容：
- BlockTerm / SumTerm：块函数项与复合和项
- TermLayer / HybridFunctionExpr：f^H 以及它们的 ⊕
- net_layers_at / net_terms_at / reduce_plus：+-归约
- restrict_row / restrict_col / reduce_times：限制（柯里化）与 ×-归约
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Hashable, Iterable, Iterator, Optional, Protocol, Union, runtime_checkable

from loguru import logger

from src.algebra.hybridset import HybridSet, Region, SliceableRegion
from src.algebra.sizes import EMPTY_ENV, ParamEnv, SizeExpr, SizeLike, as_size
from src.errors import DivisionByZero, ShapeMismatch, UndefinedTermForced

Scalar = Union[Fraction, int, float]
Point = tuple[int, ...]


def as_point(x: Any) -> Point:
    """一维下标 i 视为 (i,)"""
    return tuple(x) if isinstance(x, tuple) else (x,)


@runtime_checkable
class Payload(Protocol):
    """块的部分函数：局部下标 → 标量

    defined_at 不得有副作用；在未定义处调用 value_at 属于调用方错误。
    """

    def defined_at(self, local: Point) -> bool:
        ...

    def value_at(self, local: Point) -> Scalar:
        ...


class Term(Protocol):
    """可附着到混合集上的（未求值）项"""

    @property
    def key(self) -> Hashable:
        ...

    @property
    def symbol(self) -> str:
        ...

    def atoms(self) -> Iterable[tuple["Term", int]]:
        ...

    def defined_at(self, point: Point, env: ParamEnv) -> bool:
        ...

    def value_at(self, point: Point, env: ParamEnv) -> Scalar:
        ...


# ==================== 项 ====================

@dataclass(frozen=True)
class BlockTerm:
    """块函数项，例如 u'_{i-k}

    全局点 p 处的值为 payload(p - offsets)。用于抵消的身份是 (owner, symbol, offsets)，
    payload 不参与比较（它可能恰好在抵消点上无定义）。owner 标识块的来源
    （所属块矩阵与块下标），同名的不同块矩阵因此不会互相抵消。
    """
    symbol: str
    offsets: tuple[SizeExpr, ...] = ()
    payload: Optional[Payload] = field(default=None, compare=False, repr=False)
    owner: Optional[Hashable] = field(default=None, repr=False)

    @classmethod
    def create(
        cls, symbol: str, *offsets: SizeLike, payload: Optional[Payload] = None
    ) -> "BlockTerm":
        return cls(symbol, tuple(as_size(o) for o in offsets), payload)

    @property
    def row_offset(self) -> SizeExpr:
        return self.offsets[0]

    @property
    def col_offset(self) -> SizeExpr:
        return self.offsets[1]

    @property
    def key(self) -> Hashable:
        return (self.owner, self.symbol, self.offsets)

    def atoms(self) -> Iterator[tuple[Term, int]]:
        yield self, 1

    def local(self, point: Point, env: ParamEnv) -> Point:
        if len(point) != len(self.offsets):
            raise ValueError(
                f"{self.symbol}: 下标维数 {len(point)} 与偏移维数 {len(self.offsets)} 不符"
            )
        return tuple(p - o.evaluate(env) for p, o in zip(point, self.offsets))

    def defined_at(self, point: Point, env: ParamEnv) -> bool:
        if self.payload is None:
            return False
        return self.payload.defined_at(self.local(point, env))

    def value_at(self, point: Point, env: ParamEnv) -> Scalar:
        if not self.defined_at(point, env):
            raise UndefinedTermForced(self.symbol, point)
        assert self.payload is not None
        return self.payload.value_at(self.local(point, env))

    def __str__(self) -> str:
        if all(o == SizeExpr.const(0) for o in self.offsets):
            return self.symbol
        return f"{self.symbol}@({', '.join(str(o) for o in self.offsets)})"


@dataclass(frozen=True)
class SumTerm:
    """复合项 (A_ij + B_kl)：值为各分量之和

    +-归约时先按分量重新分组，所以分量可以各自抵消。
    """
    components: tuple[Term, ...]

    @classmethod
    def of(cls, *components: Term) -> "SumTerm":
        return cls(tuple(components))

    @property
    def key(self) -> Hashable:
        return ("+", tuple(c.key for c in self.components))

    @property
    def symbol(self) -> str:
        return "+".join(c.symbol for c in self.components)

    def atoms(self) -> Iterator[tuple[Term, int]]:
        for component in self.components:
            yield from component.atoms()

    def defined_at(self, point: Point, env: ParamEnv) -> bool:
        return all(c.defined_at(point, env) for c in self.components)

    def value_at(self, point: Point, env: ParamEnv) -> Scalar:
        total: Scalar = Fraction(0)
        for c in self.components:
            total += c.value_at(point, env)
        return total

    def __str__(self) -> str:
        return f"({self.symbol})"


@dataclass(frozen=True)
class TermAt:
    """固定在某个全局点上的项，×-归约按 (项, 点) 抵消"""
    term: Term
    point: Point

    @property
    def key(self) -> Hashable:
        return (self.term.key, self.point)

    @property
    def symbol(self) -> str:
        return self.term.symbol

    def defined(self, env: ParamEnv) -> bool:
        return self.term.defined_at(self.point, env)

    def value(self, env: ParamEnv) -> Scalar:
        return self.term.value_at(self.point, env)


@dataclass(frozen=True)
class CurriedTerm:
    """限制 M|_{X=i} 或 M|_{Y=j} 之后的项，只剩一个自由坐标"""
    term: Term
    axis: int
    fixed: int

    @property
    def key(self) -> Hashable:
        return ("|", self.term.key, self.axis, self.fixed)

    @property
    def symbol(self) -> str:
        name = "X" if self.axis == 0 else "Y"
        return f"{self.term.symbol}|{name}={self.fixed}"

    def full_point(self, free: int) -> Point:
        return (self.fixed, free) if self.axis == 0 else (free, self.fixed)

    def at(self, free: int) -> TermAt:
        return TermAt(self.term, self.full_point(free))

    def atoms(self) -> Iterator[tuple[Term, int]]:
        yield self, 1

    def defined_at(self, point: Point, env: ParamEnv) -> bool:
        return self.term.defined_at(self.full_point(as_point(point)[0]), env)

    def value_at(self, point: Point, env: ParamEnv) -> Scalar:
        return self.term.value_at(self.full_point(as_point(point)[0]), env)


# ==================== 混合函数 ====================

@dataclass(frozen=True)
class TermLayer:
    """f^H：项 term 附着在区域 region 上"""
    term: Term
    region: Region

    def mult_at(self, x: Any, env: ParamEnv = EMPTY_ENV) -> int:
        return self.region.indicator(x, env)

    def __str__(self) -> str:
        return f"{self.term}^{{{self.region}}}"


@dataclass(frozen=True)
class HybridFunctionExpr:
    """若干 TermLayer 的 ⊕，语义上是混合关系

    shape 记录符号总尺寸（行数, 列数），用于物化为稠密矩阵。
    """
    layers: tuple[TermLayer, ...] = ()
    shape: Optional[tuple[SizeExpr, ...]] = None

    def __add__(self, other: "HybridFunctionExpr") -> "HybridFunctionExpr":
        return fn_oplus(self, other)

    def __len__(self) -> int:
        return len(self.layers)

    def __str__(self) -> str:
        if not self.layers:
            return "∅"
        return " ⊕ ".join(str(layer) for layer in self.layers)


def _as_hybrid_set(region: Region) -> HybridSet:
    return region if isinstance(region, HybridSet) else HybridSet.from_region(region)


def fn_oplus(f: HybridFunctionExpr, g: HybridFunctionExpr) -> HybridFunctionExpr:
    """f^A ⊕ g^B：拼接各层，同一项的区域用 ⊕ 合并（f^A ⊕ f^B = f^{A⊕B}），不求值"""
    if f.shape is not None and g.shape is not None and f.shape != g.shape:
        raise ShapeMismatch(f"形状不一致: {f.shape} vs {g.shape}")
    merged: dict[Hashable, TermLayer] = {}
    for layer in f.layers + g.layers:
        existing = merged.get(layer.term.key)
        if existing is None:
            merged[layer.term.key] = layer
        else:
            region = _as_hybrid_set(existing.region) + _as_hybrid_set(layer.region)
            merged[layer.term.key] = TermLayer(existing.term, region)
    return HybridFunctionExpr(tuple(merged.values()), f.shape if f.shape is not None else g.shape)


def net_layers_at(expr: HybridFunctionExpr, env: ParamEnv, x: Any) -> list[tuple[Term, int]]:
    """按项（复合项不拆开）汇总 x 处的净重数，去掉净重数为零的项"""
    totals: dict[Hashable, list[Any]] = {}
    for layer in expr.layers:
        m = layer.mult_at(x, env)
        if m == 0:
            continue
        slot = totals.setdefault(layer.term.key, [layer.term, 0])
        slot[1] += m
    return [(term, net) for term, net in totals.values() if net != 0]


def net_terms_at(expr: HybridFunctionExpr, env: ParamEnv, x: Any) -> list[tuple[Term, int]]:
    """把复合项拆成原子项后汇总 x 处的净重数

    净重数为零的原子项被删除且从不求值（伪函数抵消）。
    """
    totals: dict[Hashable, list[Any]] = {}
    for layer in expr.layers:
        m = layer.mult_at(x, env)
        if m == 0:
            continue
        for atom, coeff in layer.term.atoms():
            slot = totals.setdefault(atom.key, [atom, 0])
            slot[1] += m * coeff
    return [(atom, net) for atom, net in totals.values() if net != 0]


def is_reducible_at(expr: HybridFunctionExpr, env: ParamEnv, x: Any) -> bool:
    """x 处每个原子项的净重数都属于 {0, 1}（复合项先拆开再汇总）"""
    return all(net == 1 for _, net in net_terms_at(expr, env, x))


def reduce_plus(expr: HybridFunctionExpr, env: ParamEnv, x: Any) -> Scalar:
    """+-归约：Σ 净重数 · 项值，只对幸存项求值

    Raises:
        UndefinedTermForced: 幸存项在 x 处无定义
    """
    point = as_point(x)
    total: Scalar = Fraction(0)
    for atom, net in net_terms_at(expr, env, x):
        if not atom.defined_at(point, env):
            logger.error(f"+-归约强制求值失败: {atom.symbol} @ {point}, 净重数 {net}")
            raise UndefinedTermForced(atom.symbol, point)
        total += net * atom.value_at(point, env)
    return total


# ==================== 限制与 ×-归约 ====================

def _slice(region: Region, axis: int, value: int, env: ParamEnv) -> HybridSet:
    if isinstance(region, (HybridSet, SliceableRegion)):
        return region.slice(axis, value, env)
    raise TypeError(f"区域类型不支持切片: {type(region).__name__}")


def _restrict(expr: HybridFunctionExpr, env: ParamEnv, axis: int, value: int) -> HybridFunctionExpr:
    layers = tuple(
        TermLayer(CurriedTerm(layer.term, axis, value), _slice(layer.region, axis, value, env))
        for layer in expr.layers
    )
    return HybridFunctionExpr(layers)


def restrict_row(expr: HybridFunctionExpr, env: ParamEnv, i: int) -> HybridFunctionExpr:
    """M|_{X=i}：二维区域在第 i 行切片，得到列坐标上的一维区域；项不求值"""
    return _restrict(expr, env, 0, i)


def restrict_col(expr: HybridFunctionExpr, env: ParamEnv, j: int) -> HybridFunctionExpr:
    """M|_{Y=j}：二维区域在第 j 列切片，得到行坐标上的一维区域；项不求值"""
    return _restrict(expr, env, 1, j)


def factors_at(
    restricted: HybridFunctionExpr, env: ParamEnv, free: int
) -> list[tuple[TermAt, int]]:
    """柯里化表达式在自由坐标 free 处给出的 (项@点, 指数) 列表"""
    factors = []
    for layer in restricted.layers:
        exponent = layer.mult_at(free, env)
        if exponent == 0:
            continue
        term = layer.term
        if not isinstance(term, CurriedTerm):
            raise TypeError("factors_at 需要 restrict_row / restrict_col 的结果")
        factors.append((term.at(free), exponent))
    return factors


def reduce_times(factors: Iterable[tuple[TermAt, int]], env: ParamEnv = EMPTY_ENV) -> Scalar:
    """×-归约：先按 (项, 点) 合并指数，再计算 Π value^exponent

    同一项的 +1 与 -1 在求值前抵消，因此 0 ×^{-1} 0 = 1 不会出现除零。
    空积为乘法单位元 1。

    Raises:
        UndefinedTermForced: 幸存因子在其点上无定义
        DivisionByZero: 幸存的负指数因子值为零
    """
    grouped: dict[Hashable, list[Any]] = {}
    for factor, exponent in factors:
        slot = grouped.setdefault(factor.key, [factor, 0])
        slot[1] += exponent

    product: Scalar = Fraction(1)
    for factor, exponent in grouped.values():
        if exponent == 0:
            continue
        if not factor.defined(env):
            raise UndefinedTermForced(factor.symbol, factor.point)
        value = factor.value(env)
        if isinstance(value, int):
            value = Fraction(value)
        if exponent < 0 and value == 0:
            raise DivisionByZero(factor.symbol, factor.point)
        product *= value ** exponent
    return product
