"""稠密对照模块

对照计算直接在 numpy object 数组上做精确的加法与矩阵乘法，
完全不经过混合集构造，因此是独立的交叉检查。
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from src.algebra.hybridfn import Scalar
from src.algebra.sizes import ParamEnv
from src.blockmat.addition import build_sum
from src.blockmat.evaluate import evaluate
from src.blockmat.multiplication import build_product
from src.blockmat.spec import BlockSpec, DenseMatrix, dense_of
from src.cli.instance import Operation
from src.errors import ShapeMismatch


def dense_add(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    if a.shape != b.shape:
        raise ShapeMismatch(f"稠密加法形状不一致: {a.shape} vs {b.shape}")
    return DenseMatrix(a.entries + b.entries)


def dense_mul(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    if a.cols != b.rows:
        raise ShapeMismatch(f"稠密乘法形状不一致: {a.shape} · {b.shape}")
    if a.cols == 0:
        # 内维为 0 时 object 数组的 @ 不会产生 Fraction 零
        return DenseMatrix(np.full((a.rows, b.cols), Fraction(0), dtype=object))
    return DenseMatrix(a.entries @ b.entries)


def oracle_result(operation: Operation, a: BlockSpec, b: BlockSpec, env: ParamEnv) -> DenseMatrix:
    """先拼装两个稠密矩阵，再做普通的加法或乘法"""
    left, right = dense_of(a, env), dense_of(b, env)
    if operation == Operation.ADD:
        return dense_add(left, right)
    return dense_mul(left, right)


def hybrid_result(operation: Operation, a: BlockSpec, b: BlockSpec, env: ParamEnv) -> DenseMatrix:
    """混合集构造后逐点归约"""
    expr = build_sum(a, b) if operation == Operation.ADD else build_product(a, b)
    return evaluate(expr, env)


@dataclass
class Mismatch:
    """第一处不一致"""
    row: int
    col: int
    expected: Scalar
    actual: Scalar

    def to_dict(self) -> dict:
        return {
            "row": self.row,
            "col": self.col,
            "expected": str(self.expected),
            "actual": str(self.actual),
        }


@dataclass
class DiffReport:
    """对照结果，mismatch_count 为 0 当且仅当两矩阵一致"""
    max_abs_diff: Union[Fraction, float]
    mismatch_count: int
    first_mismatch: Optional[Mismatch] = None
    shape_expected: Optional[tuple[int, int]] = None
    shape_actual: Optional[tuple[int, int]] = None

    @property
    def ok(self) -> bool:
        return self.mismatch_count == 0

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "max_abs_diff": str(self.max_abs_diff),
            "mismatch_count": self.mismatch_count,
            "first_mismatch": self.first_mismatch.to_dict() if self.first_mismatch else None,
            "shape_expected": list(self.shape_expected) if self.shape_expected else None,
            "shape_actual": list(self.shape_actual) if self.shape_actual else None,
        }


def compare(
    expected: DenseMatrix, actual: DenseMatrix, tolerance: Fraction = Fraction(0)
) -> DiffReport:
    """逐元素比较

    两侧都是精确标量时要求完全相等；任一侧为浮点数时允许 |差| <= tolerance。
    形状不同时所有元素都计为不一致。
    """
    if expected.shape != actual.shape:
        return DiffReport(
            max_abs_diff=Fraction(0),
            mismatch_count=max(expected.rows * expected.cols, actual.rows * actual.cols, 1),
            shape_expected=expected.shape,
            shape_actual=actual.shape,
        )

    max_diff: Union[Fraction, float] = Fraction(0)
    count = 0
    first: Optional[Mismatch] = None
    for (i, j), want in np.ndenumerate(expected.entries):
        got = actual.entries[i, j]
        diff = abs(want - got)
        inexact = isinstance(want, float) or isinstance(got, float)
        bad = diff > tolerance if inexact else diff != 0
        max_diff = max(max_diff, diff)
        if bad:
            count += 1
            if first is None:
                first = Mismatch(int(i), int(j), want, got)
    return DiffReport(max_diff, count, first, expected.shape, actual.shape)
