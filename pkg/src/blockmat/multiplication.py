"""块矩阵乘法（无分情形构造）

A（N x M）的列切分与 B（M x P）的行切分在共享轴 M 上用链式精化合并为
M_1, ..., M_L。输出块 C_ij 位于 N_i x P_j 上，其在 (x,y) 处的值为
    Σ_{m ∈ [[0,M))} R[×]( A|_{X=x}(m) 的各层 , B|_{Y=y}(m) 的各层 )
其中 A 的第 l 层为 A_{i,first(l)}^{N_i x M_l}，B 的第 l 层为 B_{second(l),j}^{M_l x P_j}。
猜错顺序时某些 M_l 为反向区间，同一 (项, 点) 的正负指数在 ×-归约中先行抵消。
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterator, Optional

from loguru import logger

from src.algebra.hybridfn import (
    HybridFunctionExpr,
    Point,
    Scalar,
    Term,
    TermAt,
    TermLayer,
    factors_at,
    reduce_times,
    restrict_col,
    restrict_row,
)
from src.algebra.intervals import HybridInterval, Rectangle, closed_open
from src.algebra.sizes import ParamEnv
from src.blockmat.refinement import chain_refinement
from src.blockmat.spec import BlockSpec
from src.errors import ShapeMismatch


@dataclass
class _SliceCache:
    """某一绑定下 A|_{X=x} 与 B|_{Y=y} 在共享轴各点上的因子，换绑定即清空"""
    env: Optional[ParamEnv] = None
    shared: list[tuple[int, int]] = field(default_factory=list)
    tables: dict[tuple[int, int], dict[int, list[tuple[TermAt, int]]]] = field(
        default_factory=dict
    )


@dataclass(frozen=True)
class ProductBlockTerm:
    """输出块 C_ij 的项：按需在每个点上做限制与 ×-归约

    身份由左右两侧各层的项决定，不同操作数的乘积即使块名相同也不会合并。
    同一行 x 的限制 A|_{X=x}（同一列 y 的 B|_{Y=y}）在整个块内只构造一次。
    """
    symbol: str
    left: HybridFunctionExpr
    right: HybridFunctionExpr
    shared: HybridInterval
    rows: HybridInterval
    cols: HybridInterval
    _cache: _SliceCache = field(default_factory=_SliceCache, compare=False, repr=False)

    @property
    def key(self) -> Hashable:
        return (
            "×",
            tuple(layer.term.key for layer in self.left.layers),
            tuple(layer.term.key for layer in self.right.layers),
            self.rows,
            self.cols,
        )

    def atoms(self) -> Iterator[tuple[Term, int]]:
        yield self, 1

    def defined_at(self, point: Point, env: ParamEnv) -> bool:
        x, y = point
        return self.rows.indicator(x, env) != 0 and self.cols.indicator(y, env) != 0

    def _bind(self, env: ParamEnv) -> _SliceCache:
        cache = self._cache
        if cache.env != env:
            lo, hi = sorted(self.shared.bounds(env))
            cache.env = env
            cache.shared = [
                (m, w) for m in range(lo, hi + 1) if (w := self.shared.indicator(m, env)) != 0
            ]
            cache.tables.clear()
        return cache

    def _factors(
        self, axis: int, fixed: int, env: ParamEnv
    ) -> dict[int, list[tuple[TermAt, int]]]:
        cache = self._bind(env)
        table = cache.tables.get((axis, fixed))
        if table is None:
            if axis == 0:
                restricted = restrict_row(self.left, env, fixed)
            else:
                restricted = restrict_col(self.right, env, fixed)
            table = {m: factors_at(restricted, env, m) for m, _ in cache.shared}
            cache.tables[(axis, fixed)] = table
        return table

    def value_at(self, point: Point, env: ParamEnv) -> Scalar:
        x, y = point
        row_factors = self._factors(0, x, env)
        col_factors = self._factors(1, y, env)
        total: Scalar = Fraction(0)
        for m, weight in self._cache.shared:
            total += weight * reduce_times(row_factors[m] + col_factors[m], env)
        return total

    def __str__(self) -> str:
        return self.symbol


def _check_conformable(a: BlockSpec, b: BlockSpec) -> None:
    if a.cols_total != b.rows_total:
        raise ShapeMismatch(
            f"乘法要求 {a.name} 的列数与 {b.name} 的行数结构相同: "
            f"{a.cols_total} vs {b.rows_total}"
        )


def product_term(a: BlockSpec, b: BlockSpec, i: int, j: int) -> ProductBlockTerm:
    """输出块 C_ij 的求值项"""
    _check_conformable(a, b)
    pieces = chain_refinement(a.col_cuts, b.row_cuts)
    rows = a.row_interval(i)
    cols = b.col_interval(j)
    left = HybridFunctionExpr(tuple(
        TermLayer(a.term(i, p.first_index), Rectangle(rows, p.interval)) for p in pieces
    ))
    right = HybridFunctionExpr(tuple(
        TermLayer(b.term(p.second_index, j), Rectangle(p.interval, cols)) for p in pieces
    ))
    symbol = f"C{i + 1}{j + 1}" if i < 9 and j < 9 else f"C{i + 1},{j + 1}"
    return ProductBlockTerm(symbol, left, right, closed_open(0, a.cols_total), rows, cols)


def build_product(a: BlockSpec, b: BlockSpec) -> HybridFunctionExpr:
    """A · B 的混合函数表达式：每个输出块 C_ij 一层，区域为 N_i x P_j

    Raises:
        ShapeMismatch: A 的列总数与 B 的行总数结构不同
    """
    _check_conformable(a, b)
    layers = []
    for i in range(a.block_rows):
        for j in range(b.block_cols):
            term = product_term(a, b, i, j)
            layers.append(TermLayer(term, Rectangle(term.rows, term.cols)))
    logger.debug(
        f"构造 {a.name} · {b.name}: 共享轴 {a.block_cols} + {b.block_rows} 块, "
        f"输出 {len(layers)} 块"
    )
    return HybridFunctionExpr(tuple(layers), (a.rows_total, b.cols_total))
