"""混合集代数

尺寸表达式、混合集、混合区间与混合函数（伪函数）。
"""

from src.algebra.hybridfn import (
    BlockTerm,
    CurriedTerm,
    HybridFunctionExpr,
    Payload,
    SumTerm,
    TermAt,
    TermLayer,
    factors_at,
    fn_oplus,
    is_reducible_at,
    net_layers_at,
    net_terms_at,
    reduce_plus,
    reduce_times,
    restrict_col,
    restrict_row,
)
from src.algebra.hybridset import (
    EMPTY,
    HybridSet,
    PointAtom,
    generalized_partition_check,
    is_disjoint,
    is_reducible,
    mult_at,
    ominus,
    oplus,
    otimes,
    scale,
)
from src.algebra.intervals import (
    Flavor,
    HybridInterval,
    Rectangle,
    TupleInterval,
    closed_closed,
    closed_open,
    interval_concat,
    interval_mult_at,
    interval_negate,
    open_closed,
    open_open,
    parse_interval,
    parse_region,
    rect_product,
    tuple_interval,
)
from src.algebra.sizes import (
    EMPTY_ENV,
    ParamEnv,
    SizeExpr,
    as_size,
    parse_size,
    size_add,
    size_eval,
)

__all__ = [
    # sizes
    "EMPTY_ENV",
    "ParamEnv",
    "SizeExpr",
    "as_size",
    "parse_size",
    "size_add",
    "size_eval",
    # hybridset
    "EMPTY",
    "HybridSet",
    "PointAtom",
    "generalized_partition_check",
    "is_disjoint",
    "is_reducible",
    "mult_at",
    "ominus",
    "oplus",
    "otimes",
    "scale",
    # intervals
    "Flavor",
    "HybridInterval",
    "Rectangle",
    "TupleInterval",
    "closed_closed",
    "closed_open",
    "interval_concat",
    "interval_mult_at",
    "interval_negate",
    "open_closed",
    "open_open",
    "parse_interval",
    "parse_region",
    "rect_product",
    "tuple_interval",
    # hybridfn
    "BlockTerm",
    "CurriedTerm",
    "HybridFunctionExpr",
    "Payload",
    "SumTerm",
    "TermAt",
    "TermLayer",
    "factors_at",
    "fn_oplus",
    "is_reducible_at",
    "net_layers_at",
    "net_terms_at",
    "reduce_plus",
    "reduce_times",
    "restrict_col",
    "restrict_row",
]
