"""实例文件模块

实例文件为 JSON：
    {
      "operation": "add" | "mul",
      "operands": [{"name", "row_cuts", "col_cuts", "blocks", "symbols"}, {...}],
      "env": {"q": 2, ...},
      "seed": 7,
      "payload_bound": 9
    }
切分点是尺寸表达式文本；blocks 以 1 起始的 "i,j" 为键，元素可以是整数、"3/7" 或浮点数。
缺少数值表的块在给出 seed 时按绑定尺寸随机生成。
"""

import json
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from src.algebra.hybridfn import Scalar
from src.algebra.sizes import ParamEnv, SizeExpr, parse_size
from src.blockmat.spec import BlockIndex, BlockSpec, DenseMatrix, TablePayload, validate_spec
from src.errors import HybridMatrixError, InstanceValidationError

RawScalar = Union[int, float, str]


class Operation(str, Enum):
    """实例的运算类型"""
    ADD = "add"
    MUL = "mul"


def parse_scalar(value: Any) -> Scalar:
    """整数与 "3/7" 文本转为 Fraction，浮点数保持为 float"""
    if isinstance(value, bool):
        raise ValueError(f"布尔值不是标量: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"无法解析标量: {value!r}") from None
    raise ValueError(f"无法解析标量: {value!r}")


def parse_block_key(key: str) -> BlockIndex:
    """把 1 起始的 "i,j" 转为 0 起始的块下标"""
    parts = key.split(",")
    if len(parts) != 2 or not all(p.strip().isdigit() for p in parts):
        raise ValueError(f"块键应形如 \"1,2\": {key!r}")
    i, j = (int(p) for p in parts)
    if i < 1 or j < 1:
        raise ValueError(f"块键从 1 开始编号: {key!r}")
    return i - 1, j - 1


class OperandModel(BaseModel):
    """单个块矩阵的描述"""
    name: str = Field(min_length=1)
    row_cuts: list[str] = Field(min_length=2)
    col_cuts: list[str] = Field(min_length=2)
    blocks: dict[str, list[list[RawScalar]]] = Field(default_factory=dict)
    symbols: dict[str, str] = Field(default_factory=dict)

    @field_validator("row_cuts", "col_cuts", mode="before")
    @classmethod
    def _stringify_cuts(cls, value: Any) -> Any:
        if isinstance(value, list):
            return [
                str(v) if isinstance(v, int) and not isinstance(v, bool) else v for v in value
            ]
        return value

    @field_validator("row_cuts", "col_cuts")
    @classmethod
    def _check_cut_syntax(cls, value: list[str]) -> list[str]:
        for text in value:
            parse_size(text)
        return value

    @field_validator("blocks", "symbols")
    @classmethod
    def _check_block_keys(cls, value: dict[str, Any]) -> dict[str, Any]:
        for key in value:
            parse_block_key(key)
        return value

    @field_validator("blocks")
    @classmethod
    def _check_tables(
        cls, value: dict[str, list[list[RawScalar]]]
    ) -> dict[str, list[list[RawScalar]]]:
        for key, rows in value.items():
            widths = {len(r) for r in rows}
            if len(widths) > 1:
                raise ValueError(f"块 {key} 的各行长度不一致")
            for row in rows:
                for entry in row:
                    parse_scalar(entry)
        return value

    @model_validator(mode="after")
    def _check_block_range(self) -> "OperandModel":
        rows, cols = len(self.row_cuts) - 1, len(self.col_cuts) - 1
        for field_name, keys in (("blocks", list(self.blocks)), ("symbols", list(self.symbols))):
            for key in keys:
                i, j = parse_block_key(key)
                if i >= rows or j >= cols:
                    raise ValueError(f"{field_name} 的键 {key!r} 超出 {rows}x{cols} 块网格")
        return self

    @property
    def row_exprs(self) -> tuple[SizeExpr, ...]:
        return tuple(parse_size(c) for c in self.row_cuts)

    @property
    def col_exprs(self) -> tuple[SizeExpr, ...]:
        return tuple(parse_size(c) for c in self.col_cuts)

    @property
    def parameters(self) -> frozenset[str]:
        names: set[str] = set()
        for expr in self.row_exprs + self.col_exprs:
            names |= expr.parameters
        return frozenset(names)

    def to_spec(
        self,
        env: ParamEnv,
        rng: Optional[np.random.Generator] = None,
        payload_bound: int = 9,
    ) -> BlockSpec:
        """转换为 BlockSpec；缺失的块在提供 rng 时按绑定尺寸随机生成"""
        spec = BlockSpec(
            self.name,
            self.row_exprs,
            self.col_exprs,
            symbols={parse_block_key(k): v for k, v in self.symbols.items()},
        )
        explicit = {parse_block_key(k): rows for k, rows in self.blocks.items()}
        for index in spec.blocks():
            if index in explicit:
                rows = explicit[index]
                width = len(rows[0]) if rows else spec.block_shape(*index, env)[1]
                table = [[parse_scalar(v) for v in row] for row in rows]
                spec.payloads[index] = TablePayload(table, (len(rows), width))
            elif rng is not None:
                shape = spec.block_shape(*index, env)
                if shape[0] < 0 or shape[1] < 0:
                    continue
                values = rng.integers(-payload_bound, payload_bound + 1, size=shape)
                spec.payloads[index] = TablePayload(
                    [[Fraction(int(v)) for v in row] for row in values.tolist()], shape
                )
        return spec


class InstanceFile(BaseModel):
    """实例文件"""
    operation: Operation
    operands: list[OperandModel] = Field(min_length=2, max_length=2)
    env: dict[str, int] = Field(default_factory=dict)
    seed: Optional[int] = None
    payload_bound: Optional[int] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def _check_bindings(self) -> "InstanceFile":
        missing = sorted(set().union(*(o.parameters for o in self.operands)) - set(self.env))
        if missing:
            raise ValueError(f"切分引用的参数未在 env 中绑定: {', '.join(missing)}")
        return self

    def param_env(self, overrides: Optional[dict[str, int]] = None) -> ParamEnv:
        merged = dict(self.env)
        merged.update(overrides or {})
        return ParamEnv(merged)

    def to_specs(self, env: ParamEnv, payload_bound: int = 9) -> tuple[BlockSpec, BlockSpec]:
        """在给定绑定下构造两个操作数

        随机块使用 default_rng(seed)，按操作数、块的行优先顺序依次生成，同一绑定下可复现。
        """
        bound = self.payload_bound if self.payload_bound is not None else payload_bound
        rng = np.random.default_rng(self.seed) if self.seed is not None else None
        left, right = (o.to_spec(env, rng, bound) for o in self.operands)
        return left, right


def _format_pydantic_errors(error: ValidationError) -> list[str]:
    return [
        f"{'.'.join(str(p) for p in item['loc']) or '<root>'}: {item['msg']}"
        for item in error.errors()
    ]


def parse_instance(text: str, source: str = "<string>") -> InstanceFile:
    """解析实例 JSON 文本

    Raises:
        InstanceValidationError: JSON 或字段校验失败
    """
    try:
        return InstanceFile.model_validate_json(text)
    except ValidationError as e:
        problems = _format_pydantic_errors(e)
        logger.error(f"实例 {source} 校验失败: {problems}")
        raise InstanceValidationError(problems) from e


def load_instance(path: Path) -> InstanceFile:
    """读取并解析实例文件"""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InstanceValidationError([f"无法读取 {path}: {e}"]) from e
    return parse_instance(text, str(path))


def prepare(
    instance: InstanceFile,
    env: ParamEnv,
    payload_bound: int = 9,
) -> tuple[BlockSpec, BlockSpec]:
    """构造并校验两个操作数

    Raises:
        InstanceValidationError: 任一操作数在该绑定下不合法
    """
    try:
        left, right = instance.to_specs(env, payload_bound)
    except (HybridMatrixError, ValueError) as e:
        raise InstanceValidationError([str(e)]) from e

    problems: list[str] = []
    for spec in (left, right):
        problems.extend(validate_spec(spec, env).errors)
    if not problems:
        problems.extend(_shape_problems(instance.operation, left, right))
    if problems:
        raise InstanceValidationError(problems)
    return left, right


def _shape_problems(operation: Operation, left: BlockSpec, right: BlockSpec) -> list[str]:
    if operation == Operation.ADD and left.shape != right.shape:
        return [f"加法要求相同的符号尺寸: {left.name} 与 {right.name} 不同"]
    if operation == Operation.MUL and left.cols_total != right.rows_total:
        return [f"乘法要求 {left.name} 的列数与 {right.name} 的行数结构相同"]
    return []


class MatrixFile(BaseModel):
    """期望矩阵文件，与 eval 输出中的 result 字段格式相同"""
    rows: int = Field(ge=0)
    cols: int = Field(ge=0)
    entries: list[list[RawScalar]]

    @model_validator(mode="after")
    def _check_shape(self) -> "MatrixFile":
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(f"entries 与声明的形状 {self.rows}x{self.cols} 不符")
        for row in self.entries:
            for entry in row:
                parse_scalar(entry)
        return self

    def to_dense(self) -> DenseMatrix:
        return DenseMatrix.from_rows(
            [[parse_scalar(v) for v in row] for row in self.entries], cols=self.cols
        )


def load_matrix(path: Path) -> DenseMatrix:
    """读取期望矩阵；文件可以是矩阵本身，也可以是带 result 字段的 eval 输出"""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise InstanceValidationError([f"无法读取期望矩阵 {path}: {e}"]) from e
    if isinstance(data, dict) and "result" in data:
        data = data["result"]
    try:
        return MatrixFile.model_validate(data).to_dense()
    except ValidationError as e:
        raise InstanceValidationError(_format_pydantic_errors(e)) from e
