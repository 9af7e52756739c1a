"""单轴精化（“猜测顺序”）

两条切分序列共享同一轴时，把两者的内部切分点按固定顺序拼成一条链：
    [0, first 的内部切分..., second 的内部切分..., total]
相邻两点构成一个混合区间。若真实顺序与猜测不同，某些区间为反向区间（重数 -1），
由混合区间的拼接恒等式自动抵消，因此该精化对任意参数绑定都成立。
"""

from dataclasses import dataclass
from typing import Sequence

from loguru import logger

from src.algebra.intervals import HybridInterval, closed_open
from src.algebra.sizes import SizeExpr
from src.errors import ShapeMismatch


@dataclass(frozen=True)
class RefinementPiece:
    """精化中的一段：区间及其所属的两侧块号"""
    interval: HybridInterval
    first_index: int
    second_index: int


def chain_refinement(
    first_cuts: Sequence[SizeExpr],
    second_cuts: Sequence[SizeExpr],
) -> list[RefinementPiece]:
    """构造共享轴上的链式精化

    第 p 段属于 first 的块 min(p, K-1) 与 second 的块 max(0, p-(K-1))，
    其中 K 为 first 的块数。对 2x2 情形即 M1=[[0,r)), M2=[[r,s)), M3=[[s,m))。

    Raises:
        ShapeMismatch: 两条序列的起点或终点结构不同
    """
    if first_cuts[0] != second_cuts[0] or first_cuts[-1] != second_cuts[-1]:
        raise ShapeMismatch(
            f"共享轴不一致: [{first_cuts[0]}, {first_cuts[-1]}] "
            f"vs [{second_cuts[0]}, {second_cuts[-1]}]"
        )
    k = len(first_cuts) - 1
    chain = [first_cuts[0], *first_cuts[1:-1], *second_cuts[1:-1], first_cuts[-1]]
    pieces = [
        RefinementPiece(closed_open(chain[p], chain[p + 1]), min(p, k - 1), max(0, p - (k - 1)))
        for p in range(len(chain) - 1)
    ]
    logger.debug(f"链式精化: {k} + {len(second_cuts) - 1} 块 → {len(pieces)} 段")
    return pieces
