"""块矩阵加法（无分情形构造）

对 A（k x l 块）与 B（n x m 块），以 A、B 各自的非末块区域以及
    P = U ⊖ (A 的非末块区域 ⊕ B 的非末块区域)
作为精化：
    ⊕_{a ≠ last} (A_a + B_last)^{A_a} ⊕ ⊕_{b ≠ last} (A_last + B_b)^{B_b} ⊕ (A_last + B_last)^P
任意一点上，多余的末块项都会在 +-归约中抵消，因而无需知道 A、B 切分点的相对顺序。
"""

from typing import Literal

from loguru import logger

from src.algebra.hybridfn import HybridFunctionExpr, SumTerm, TermLayer
from src.algebra.hybridset import HybridSet
from src.algebra.intervals import Rectangle, closed_open
from src.blockmat.refinement import chain_refinement
from src.blockmat.spec import BlockSpec
from src.errors import ShapeMismatch


def _check_conformable(a: BlockSpec, b: BlockSpec) -> None:
    if a.shape != b.shape:
        raise ShapeMismatch(
            f"加法要求相同的符号尺寸: {a.name} 为 ({a.rows_total}, {a.cols_total}), "
            f"{b.name} 为 ({b.rows_total}, {b.cols_total})"
        )


def universe(spec: BlockSpec) -> Rectangle:
    """整个下标矩形 [[0,rows)) x [[0,cols))"""
    return Rectangle(closed_open(0, spec.rows_total), closed_open(0, spec.cols_total))


def _sum_layers(a: BlockSpec, b: BlockSpec) -> list[TermLayer]:
    _check_conformable(a, b)
    a_last = a.term(*a.last_block)
    b_last = b.term(*b.last_block)
    layers: list[TermLayer] = []
    covered: list[HybridSet] = []

    for i, j in a.blocks():
        if (i, j) == a.last_block:
            continue
        region = a.region(i, j)
        layers.append(TermLayer(SumTerm.of(a.term(i, j), b_last), region))
        covered.append(HybridSet.from_region(region))

    for i, j in b.blocks():
        if (i, j) == b.last_block:
            continue
        region = b.region(i, j)
        layers.append(TermLayer(SumTerm.of(a_last, b.term(i, j)), region))
        covered.append(HybridSet.from_region(region))

    remainder = HybridSet.from_region(universe(a)) - HybridSet.sum(covered)
    layers.append(TermLayer(SumTerm.of(a_last, b_last), remainder))
    return layers


def refinement_regions(a: BlockSpec, b: BlockSpec) -> list[HybridSet]:
    """加法精化的全部区域（按层的顺序），其 ⊕ 恰为整个下标矩形"""
    return [
        layer.region if isinstance(layer.region, HybridSet) else HybridSet.from_region(layer.region)
        for layer in _sum_layers(a, b)
    ]


def build_sum(a: BlockSpec, b: BlockSpec) -> HybridFunctionExpr:
    """A + B 的混合函数表达式，共 (kl - 1) + (nm - 1) + 1 层

    Raises:
        ShapeMismatch: 符号总尺寸结构不同
    """
    layers = _sum_layers(a, b)
    logger.debug(
        f"构造 {a.name} + {b.name}: {a.block_rows}x{a.block_cols} 块 + "
        f"{b.block_rows}x{b.block_cols} 块 → {len(layers)} 层"
    )
    return HybridFunctionExpr(tuple(layers), a.shape)


def build_vector_sum(
    u: BlockSpec,
    v: BlockSpec,
    through: Literal["first", "second"] = "first",
) -> HybridFunctionExpr:
    """列向量加法的链式精化形式

    through="first" 时先放 u 的内部切分点再放 v 的，"second" 则相反；
    两种顺序在任意绑定下逐点相同。

    Raises:
        ShapeMismatch: 不是 n x 1 向量或长度结构不同
    """
    _check_conformable(u, v)
    if u.block_cols != 1 or v.block_cols != 1:
        raise ShapeMismatch("build_vector_sum 只接受 n x 1 的块向量")
    column = closed_open(0, u.cols_total)

    if through == "first":
        pieces = chain_refinement(u.row_cuts, v.row_cuts)
        pairs = [(p.interval, p.first_index, p.second_index) for p in pieces]
    elif through == "second":
        pieces = chain_refinement(v.row_cuts, u.row_cuts)
        pairs = [(p.interval, p.second_index, p.first_index) for p in pieces]
    else:
        raise ValueError(f"未知的精化顺序: {through}")

    layers = tuple(
        TermLayer(SumTerm.of(u.term(iu, 0), v.term(iv, 0)), Rectangle(interval, column))
        for interval, iu, iv in pairs
    )
    logger.debug(f"构造向量和 {u.name} + {v.name} ({through}): {len(layers)} 层")
    return HybridFunctionExpr(layers, u.shape)
