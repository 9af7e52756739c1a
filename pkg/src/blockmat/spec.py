"""块矩阵描述模块

BlockSpec 用两条符号切分序列（行、列）描述一个块矩阵，每个块附带一个部分函数
（局部下标 → 标量）。块 (i,j) 占据混合矩形
    [[row_cuts[i], row_cuts[i+1])) x [[col_cuts[j], col_cuts[j+1]))
切分点只在绑定参数之后才有具体数值，不同矩阵之间的切分顺序不做任何假设。
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterator, Mapping, Optional, Sequence

import numpy as np
from loguru import logger

from src.algebra.hybridfn import BlockTerm, Payload, Point, Scalar
from src.algebra.intervals import HybridInterval, Rectangle, closed_open
from src.algebra.sizes import ParamEnv, SizeExpr, SizeLike, as_size
from src.errors import UnboundParameter

BlockIndex = tuple[int, int]

_SPEC_IDS = itertools.count()


class TablePayload:
    """显式数值表形式的块函数，定义域为 [0,rows) x [0,cols)"""

    def __init__(self, values: Any, shape: Optional[tuple[int, int]] = None):
        """初始化

        Args:
            values: 二维嵌套序列或 numpy 数组
            shape: 行数为 0 时无法从 values 推断列数，需要显式给出
        """
        table = np.array(values, dtype=object)
        if shape is not None:
            table = table.reshape(shape)
        if table.ndim != 2:
            raise ValueError(f"块数值表必须是二维的，实际维数 {table.ndim}")
        self.table = table

    @property
    def shape(self) -> tuple[int, int]:
        rows, cols = self.table.shape
        return int(rows), int(cols)

    def defined_at(self, local: Point) -> bool:
        if len(local) != 2:
            return False
        i, j = local
        rows, cols = self.shape
        return 0 <= i < rows and 0 <= j < cols

    def value_at(self, local: Point) -> Scalar:
        # numpy 的负下标会回绕，越界必须显式拒绝
        if not self.defined_at(local):
            raise IndexError(f"局部下标 {local} 超出数值表 {self.shape}")
        value: Scalar = self.table[local[0], local[1]]
        return value

    def __repr__(self) -> str:
        return f"TablePayload(shape={self.shape})"


@dataclass
class DenseMatrix:
    """稠密矩阵：numpy object 数组中存放精确标量"""
    entries: np.ndarray

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "DenseMatrix":
        return cls(np.full((rows, cols), Fraction(0), dtype=object))

    @classmethod
    def from_rows(
        cls, rows: Sequence[Sequence[Scalar]], cols: Optional[int] = None
    ) -> "DenseMatrix":
        if not rows:
            return cls.zeros(0, cols or 0)
        return cls(np.array([list(r) for r in rows], dtype=object))

    @property
    def rows(self) -> int:
        return int(self.entries.shape[0])

    @property
    def cols(self) -> int:
        return int(self.entries.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def equals(self, other: "DenseMatrix") -> bool:
        return self.shape == other.shape and bool(np.array_equal(self.entries, other.entries))

    def to_dict(self) -> dict:
        """转换为字典（标量以字符串输出，有理数形如 "3/7"）"""
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[str(v) for v in row] for row in self.entries.tolist()],
        }

    def to_text(self) -> str:
        """右对齐的文本形式"""
        cells = [[str(v) for v in row] for row in self.entries.tolist()]
        if not cells or not cells[0]:
            return f"({self.rows}x{self.cols} 空矩阵)"
        width = max(len(c) for row in cells for c in row)
        return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)


@dataclass
class BlockSpec:
    """符号块矩阵

    row_cuts / col_cuts 是完整的切分栅栏：第一个为 0，最后一个为总尺寸。
    payloads 以 0 起始的 (块行, 块列) 为键，symbols 可覆盖默认块名（如 "u'"）。
    uid 在进程内唯一，块函数项以 (uid, 块下标) 区分来源，与 name 和 symbols 无关。
    """
    name: str
    row_cuts: tuple[SizeExpr, ...]
    col_cuts: tuple[SizeExpr, ...]
    payloads: dict[BlockIndex, Payload] = field(default_factory=dict)
    symbols: dict[BlockIndex, str] = field(default_factory=dict)
    uid: int = field(default_factory=lambda: next(_SPEC_IDS), compare=False, repr=False)

    @classmethod
    def create(
        cls,
        name: str,
        row_cuts: Sequence[SizeLike],
        col_cuts: Sequence[SizeLike],
        payloads: Optional[Mapping[BlockIndex, Payload]] = None,
        symbols: Optional[Mapping[BlockIndex, str]] = None,
    ) -> "BlockSpec":
        if len(row_cuts) < 2 or len(col_cuts) < 2:
            raise ValueError(f"{name}: 每条切分序列至少需要两个端点")
        return cls(
            name,
            tuple(as_size(c) for c in row_cuts),
            tuple(as_size(c) for c in col_cuts),
            dict(payloads or {}),
            dict(symbols or {}),
        )

    @classmethod
    def vector(
        cls,
        name: str,
        cuts: Sequence[SizeLike],
        payloads: Optional[Mapping[int, Payload]] = None,
        symbols: Optional[Mapping[int, str]] = None,
    ) -> "BlockSpec":
        """n x 1 列向量，块以单个下标编号"""
        return cls.create(
            name,
            cuts,
            [0, 1],
            {(i, 0): p for i, p in (payloads or {}).items()},
            {(i, 0): s for i, s in (symbols or {}).items()},
        )

    @property
    def block_rows(self) -> int:
        return len(self.row_cuts) - 1

    @property
    def block_cols(self) -> int:
        return len(self.col_cuts) - 1

    @property
    def rows_total(self) -> SizeExpr:
        return self.row_cuts[-1]

    @property
    def cols_total(self) -> SizeExpr:
        return self.col_cuts[-1]

    @property
    def shape(self) -> tuple[SizeExpr, SizeExpr]:
        return self.rows_total, self.cols_total

    @property
    def last_block(self) -> BlockIndex:
        return self.block_rows - 1, self.block_cols - 1

    @property
    def parameters(self) -> frozenset[str]:
        names: set[str] = set()
        for cut in self.row_cuts + self.col_cuts:
            names |= cut.parameters
        return frozenset(names)

    def blocks(self) -> Iterator[BlockIndex]:
        """按行优先遍历块下标"""
        for i in range(self.block_rows):
            for j in range(self.block_cols):
                yield i, j

    def block_symbol(self, i: int, j: int) -> str:
        """块名，例如 A11；下标超过 9 时写作 A10,2"""
        if (i, j) in self.symbols:
            return self.symbols[(i, j)]
        if i >= 9 or j >= 9:
            return f"{self.name}{i + 1},{j + 1}"
        return f"{self.name}{i + 1}{j + 1}"

    def row_interval(self, i: int) -> HybridInterval:
        return closed_open(self.row_cuts[i], self.row_cuts[i + 1])

    def col_interval(self, j: int) -> HybridInterval:
        return closed_open(self.col_cuts[j], self.col_cuts[j + 1])

    def region(self, i: int, j: int) -> Rectangle:
        return Rectangle(self.row_interval(i), self.col_interval(j))

    def term(self, i: int, j: int) -> BlockTerm:
        """块 (i,j) 的块函数项，偏移为块的左上角"""
        return BlockTerm(
            self.block_symbol(i, j),
            (self.row_cuts[i], self.col_cuts[j]),
            self.payloads.get((i, j)),
            owner=(self.uid, i, j),
        )

    def block_shape(self, i: int, j: int, env: ParamEnv) -> tuple[int, int]:
        rows = (self.row_cuts[i + 1] - self.row_cuts[i]).evaluate(env)
        cols = (self.col_cuts[j + 1] - self.col_cuts[j]).evaluate(env)
        return rows, cols


def regions_of(spec: BlockSpec) -> dict[BlockIndex, Rectangle]:
    """每个块对应的混合矩形"""
    return {(i, j): spec.region(i, j) for i, j in spec.blocks()}


# ==================== 校验 ====================

@dataclass
class ValidationReport:
    """校验结果：errors 非空即不可求值"""
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def to_dict(self) -> dict:
        return {"ok": self.ok, "errors": self.errors, "warnings": self.warnings}


def _check_axis(
    name: str,
    axis: str,
    cuts: Sequence[SizeExpr],
    env: ParamEnv,
    report: ValidationReport,
) -> bool:
    try:
        values = [c.evaluate(env) for c in cuts]
    except UnboundParameter as e:
        report.errors.append(f"{name} 的{axis}切分引用了未绑定参数 {e.name}")
        return False
    if values[0] != 0:
        report.errors.append(f"{name} 的{axis}切分首项为 {values[0]}，应为 0")
    if values[-1] < 0:
        report.errors.append(f"{name} 的{axis}总尺寸为负: {values[-1]}")
    for k, (lo, hi) in enumerate(zip(values, values[1:])):
        if lo > hi:
            report.errors.append(
                f"{name} 的{axis}切分不单调: 第 {k} 项 {lo} > 第 {k + 1} 项 {hi}"
            )
    return report.ok


def validate_spec(
    spec: BlockSpec, env: ParamEnv, require_payloads: bool = True
) -> ValidationReport:
    """在绑定环境下校验块矩阵

    单个矩阵内部的切分必须单调（跨矩阵的相对顺序不做要求）。
    空块合法，只给出警告。

    Args:
        spec: 块矩阵
        env: 参数绑定
        require_payloads: 是否要求每个非空块都有形状匹配的数值表

    Returns:
        ValidationReport
    """
    report = ValidationReport()
    rows_ok = _check_axis(spec.name, "行", spec.row_cuts, env, report)
    cols_ok = _check_axis(spec.name, "列", spec.col_cuts, env, report)
    if not (rows_ok and cols_ok):
        return report

    for i, j in spec.blocks():
        rows, cols = spec.block_shape(i, j, env)
        symbol = spec.block_symbol(i, j)
        if rows == 0 or cols == 0:
            report.warnings.append(f"{symbol} 在当前绑定下为空块 ({rows}x{cols})")
        payload = spec.payloads.get((i, j))
        if payload is None:
            if require_payloads and rows > 0 and cols > 0:
                report.errors.append(f"{symbol} 缺少数值表")
            continue
        if isinstance(payload, TablePayload) and payload.shape != (rows, cols):
            report.errors.append(
                f"{symbol} 数值表形状 {payload.shape} 与块尺寸 {(rows, cols)} 不符"
            )

    for message in report.errors + report.warnings:
        logger.debug(f"校验 {spec.name}: {message}")
    return report


def dense_of(spec: BlockSpec, env: ParamEnv) -> DenseMatrix:
    """按块直接拼装稠密矩阵（仅用于对照），要求 spec 已通过校验"""
    matrix = DenseMatrix.zeros(spec.rows_total.evaluate(env), spec.cols_total.evaluate(env))
    for i, j in spec.blocks():
        payload = spec.payloads.get((i, j))
        rows, cols = spec.block_shape(i, j, env)
        if payload is None or rows == 0 or cols == 0:
            continue
        r0 = spec.row_cuts[i].evaluate(env)
        c0 = spec.col_cuts[j].evaluate(env)
        for li in range(rows):
            for lj in range(cols):
                matrix.entries[r0 + li, c0 + lj] = payload.value_at((li, lj))
    return matrix
