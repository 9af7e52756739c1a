"""混合集模块

混合集是取值于整数（可为负）的重数函数 U → Z。这里用“原子区域的整系数线性组合”
来表示它：区间端点可以是尚未绑定的符号参数，只有在绑定参数之后才能逐点查询。

任何暴露 indicator(point, env) -> int 的对象都可以作为原子区域；
HybridSet 本身也满足该协议，因此混合集可以嵌套。
"""

from dataclasses import dataclass
from typing import (
    Any,
    Hashable,
    Iterable,
    Mapping,
    Optional,
    Protocol,
    Sequence,
    Union,
    runtime_checkable,
)

from src.algebra.sizes import EMPTY_ENV, ParamEnv


@runtime_checkable
class Region(Protocol):
    """原子区域协议：给出某点处的整数重数"""

    def indicator(self, point: Any, env: ParamEnv = EMPTY_ENV) -> int:
        ...


@runtime_checkable
class SliceableRegion(Protocol):
    """可沿某一坐标轴切片的二维区域"""

    def slice(self, axis: int, value: int, env: ParamEnv) -> "HybridSet":
        ...


@dataclass(frozen=True)
class PointAtom:
    """单点原子，用于 ⟅a^i, b^j⟆ 记法"""
    value: Hashable

    def indicator(self, point: Any, env: ParamEnv = EMPTY_ENV) -> int:
        return 1 if point == self.value else 0

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class ProductAtom:
    """两个区域的逐点乘积（⊗ 的原子形式）"""
    left: Region
    right: Region

    def indicator(self, point: Any, env: ParamEnv = EMPTY_ENV) -> int:
        lhs = self.left.indicator(point, env)
        if lhs == 0:
            return 0
        return lhs * self.right.indicator(point, env)

    def __str__(self) -> str:
        return f"({self.left} ⊗ {self.right})"


def _merge(pairs: Iterable[tuple[Region, int]]) -> tuple[tuple[Region, int], ...]:
    """合并相同原子的系数并丢弃零系数，保持首次出现的顺序"""
    merged: dict[Region, int] = {}
    for atom, coeff in pairs:
        merged[atom] = merged.get(atom, 0) + coeff
    return tuple((atom, coeff) for atom, coeff in merged.items() if coeff != 0)


@dataclass(frozen=True)
class HybridSet:
    """混合集：原子区域的有限整系数线性组合

    语义完全由 mult_at 决定：H(x) = Σ coeff · atom.indicator(x)。
    不维护规范形式，相等性需在给定有限域上逐点判断（见 equals_on）。
    """
    terms: tuple[tuple[Region, int], ...] = ()

    @classmethod
    def of(cls, multiplicities: Mapping[Hashable, int]) -> "HybridSet":
        """由 {元素: 重数} 构造点集，例如 HybridSet.of({"a": 2, "b": -1})"""
        return cls(_merge((PointAtom(x), m) for x, m in multiplicities.items()))

    @classmethod
    def from_region(cls, region: Region, coefficient: int = 1) -> "HybridSet":
        if coefficient == 0:
            return EMPTY
        return cls(((region, coefficient),))

    @classmethod
    def sum(cls, sets: Iterable["HybridSet"]) -> "HybridSet":
        """⊕ 多个混合集"""
        return cls(_merge(pair for h in sets for pair in h.terms))

    def mult_at(self, point: Any, env: ParamEnv = EMPTY_ENV) -> int:
        return sum(coeff * atom.indicator(point, env) for atom, coeff in self.terms)

    def indicator(self, point: Any, env: ParamEnv = EMPTY_ENV) -> int:
        return self.mult_at(point, env)

    def oplus(self, other: "HybridSet") -> "HybridSet":
        return HybridSet(_merge(self.terms + other.terms))

    def ominus(self, other: Optional["HybridSet"] = None) -> "HybridSet":
        """二元形式 A ⊖ B；不带参数时为一元 ⊖A = ∅ ⊖ A"""
        if other is None:
            return self.scale(-1)
        return self.oplus(other.scale(-1))

    def otimes(self, other: "HybridSet") -> "HybridSet":
        pairs = []
        for left, lc in self.terms:
            for right, rc in other.terms:
                same_point = left == right and isinstance(left, PointAtom)
                atom = left if same_point else ProductAtom(left, right)
                pairs.append((atom, lc * rc))
        return HybridSet(_merge(pairs))

    def scale(self, c: int) -> "HybridSet":
        if c == 0:
            return EMPTY
        return HybridSet(tuple((atom, c * coeff) for atom, coeff in self.terms))

    def slice(self, axis: int, value: int, env: ParamEnv) -> "HybridSet":
        """把二维混合集在某一轴的固定坐标处切成一维混合集"""
        parts = []
        for atom, coeff in self.terms:
            if not isinstance(atom, SliceableRegion):
                raise TypeError(f"区域类型不支持切片: {type(atom).__name__}")
            parts.append(atom.slice(axis, value, env).scale(coeff))
        return HybridSet.sum(parts)

    def __add__(self, other: "HybridSet") -> "HybridSet":
        return self.oplus(other)

    def __sub__(self, other: "HybridSet") -> "HybridSet":
        return self.ominus(other)

    def __neg__(self) -> "HybridSet":
        return self.ominus()

    def __mul__(self, other: Union[int, "HybridSet"]) -> "HybridSet":
        if isinstance(other, HybridSet):
            return self.otimes(other)
        return self.scale(other)

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        # 仅为语法判空；语义上的空集请用 equals_on(H, EMPTY, ...)
        return bool(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "∅"
        return " ⊕ ".join(str(atom) if c == 1 else f"{c}·{atom}" for atom, c in self.terms)


EMPTY = HybridSet()


# ==================== 运算 ====================

def mult_at(h: HybridSet, x: Any, env: ParamEnv = EMPTY_ENV) -> int:
    """H(x)"""
    return h.mult_at(x, env)


def oplus(a: HybridSet, b: HybridSet) -> HybridSet:
    return a.oplus(b)


def ominus(a: HybridSet, b: Optional[HybridSet] = None) -> HybridSet:
    return a.ominus(b)


def otimes(a: HybridSet, b: HybridSet) -> HybridSet:
    return a.otimes(b)


def scale(c: int, a: HybridSet) -> HybridSet:
    return a.scale(c)


# ==================== 需要有限域的谓词 ====================

def is_disjoint(
    a: HybridSet,
    b: HybridSet,
    domain: Iterable[Any],
    env: ParamEnv = EMPTY_ENV,
) -> bool:
    """A ⊗ B = ∅（在给定有限域上）"""
    return all(a.mult_at(x, env) * b.mult_at(x, env) == 0 for x in domain)


def is_reducible(a: HybridSet, domain: Iterable[Any], env: ParamEnv = EMPTY_ENV) -> bool:
    """所有重数都属于 {0, 1}"""
    return all(a.mult_at(x, env) in (0, 1) for x in domain)


def generalized_partition_check(
    parts: Sequence[HybridSet],
    h: HybridSet,
    domain: Iterable[Any],
    env: ParamEnv = EMPTY_ENV,
    strict: bool = False,
) -> bool:
    """判断 parts 是否为 h 的广义划分

    Args:
        parts: 候选划分 P_1..P_n
        h: 目标混合集
        domain: 覆盖所有支撑集的有限点集
        env: 参数绑定
        strict: 为 True 时还要求两两不相交（严格划分）

    Returns:
        P_1 ⊕ ... ⊕ P_n 与 h 在域上逐点相等（且 strict 时两两不相交）
    """
    points = list(domain)
    for x in points:
        values = [p.mult_at(x, env) for p in parts]
        if sum(values) != h.mult_at(x, env):
            return False
        if strict and sum(1 for v in values if v != 0) > 1:
            return False
    return True


def support(h: HybridSet, domain: Iterable[Any], env: ParamEnv = EMPTY_ENV) -> frozenset[Any]:
    """绑定参数后的支撑集 supp H"""
    return frozenset(x for x in domain if h.mult_at(x, env) != 0)


def equals_on(
    a: HybridSet,
    b: HybridSet,
    domain: Iterable[Any],
    env: ParamEnv = EMPTY_ENV,
) -> bool:
    """语义相等：在域上逐点重数相同"""
    return all(a.mult_at(x, env) == b.mult_at(x, env) for x in domain)


def reduction(h: HybridSet, domain: Iterable[Any], env: ParamEnv = EMPTY_ENV) -> frozenset[Any]:
    """可约混合集的约化 R(H)，即具有相同成员关系的传统集合"""
    points = list(domain)
    if not is_reducible(h, points, env):
        raise ValueError(f"混合集不可约: {h}")
    return support(h, points, env)
