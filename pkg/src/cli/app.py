"""命令行入口

    hybridblock eval  <file> [--format json|text]
    hybridblock check <file> [--expect file] [--tolerance rat] [--sweep "q=0..5,r=0..5"]
    hybridblock fuzz  [--n N] [--seed S] [--max-dim D] [--max-blocks B] [--save-failures DIR]

退出码：0 成功，1 与对照不一致，2 解析/校验错误，3 求值错误。
"""

import json
from contextlib import contextmanager
from enum import IntEnum
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, Iterator, NoReturn, Optional

import typer
from loguru import logger

from src.cli.fuzz import run_fuzz
from src.cli.instance import load_instance, load_matrix, prepare
from src.cli.oracle import compare, hybrid_result, oracle_result
from src.cli.sweep import parse_sweep, run_sweep
from src.config import OutputFormat, get_settings
from src.errors import HybridMatrixError, InstanceValidationError

app = typer.Typer(
    name="hybridblock",
    help="符号块矩阵的无分情形加法与乘法：求值、对照检查与随机测试",
    no_args_is_help=True,
    add_completion=False,
)


class ExitCode(IntEnum):
    OK = 0
    MISMATCH = 1
    INVALID = 2
    EVALUATION = 3


def _fail(code: ExitCode, message: str) -> NoReturn:
    logger.error(message)
    typer.echo(message, err=True)
    raise typer.Exit(int(code))


@contextmanager
def _exit_codes() -> Iterator[None]:
    """把领域异常映射为退出码"""
    try:
        yield
    except InstanceValidationError as e:
        _fail(ExitCode.INVALID, "实例不合法: " + "; ".join(e.problems))
    except (HybridMatrixError, ArithmeticError) as e:
        _fail(ExitCode.EVALUATION, f"求值失败: {e}")


def _emit(payload: dict[str, Any]) -> None:
    typer.echo(json.dumps(payload, ensure_ascii=False, indent=2))


def _parse_tolerance(text: str) -> Fraction:
    try:
        tolerance = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InstanceValidationError([f"无法解析容差: {text!r}"]) from None
    if tolerance < 0:
        raise InstanceValidationError([f"容差不能为负: {text}"])
    return tolerance


@app.command("eval")
def eval_command(
    path: Annotated[Path, typer.Argument(help="实例文件 (JSON)")],
    output_format: Annotated[
        Optional[OutputFormat], typer.Option("--format", help="输出格式")
    ] = None,
) -> None:
    """构造混合函数表达式并物化为稠密矩阵"""
    settings = get_settings()
    fmt = output_format or settings.check.output_format
    with _exit_codes():
        instance = load_instance(path)
        env = instance.param_env()
        left, right = prepare(instance, env, settings.fuzz.payload_bound)
        result = hybrid_result(instance.operation, left, right, env)

    if fmt == OutputFormat.TEXT:
        typer.echo(result.to_text())
    else:
        _emit({
            "operation": instance.operation.value,
            "env": dict(env.bindings),
            "result": result.to_dict(),
        })


@app.command("check")
def check_command(
    path: Annotated[Path, typer.Argument(help="实例文件 (JSON)")],
    expect: Annotated[
        Optional[Path], typer.Option("--expect", help="期望矩阵文件，替代稠密对照")
    ] = None,
    tolerance: Annotated[
        Optional[str], typer.Option("--tolerance", help="浮点元素的容差（有理数）")
    ] = None,
    sweep: Annotated[
        Optional[str], typer.Option("--sweep", help="参数扫描，例如 q=0..5,r=0..5")
    ] = None,
    output_format: Annotated[
        Optional[OutputFormat], typer.Option("--format", help="输出格式")
    ] = None,
) -> None:
    """与稠密对照（或期望矩阵）逐元素比较"""
    settings = get_settings()
    fmt = output_format or settings.check.output_format
    with _exit_codes():
        tol = _parse_tolerance(tolerance if tolerance is not None else settings.check.tolerance)
        instance = load_instance(path)
        if sweep is not None:
            if expect is not None:
                raise InstanceValidationError(["--sweep 与 --expect 不能同时使用"])
            summary = run_sweep(instance, parse_sweep(sweep), tol, settings.fuzz.payload_bound)
            ok, payload = summary.ok, {"sweep": summary.to_dict()}
            text = (
                f"{'OK' if ok else 'MISMATCH'} total={summary.total} passed={summary.passed} "
                f"failed={summary.failed} skipped={summary.skipped}"
            )
        else:
            env = instance.param_env()
            left, right = prepare(instance, env, settings.fuzz.payload_bound)
            actual = hybrid_result(instance.operation, left, right, env)
            if expect is not None:
                expected = load_matrix(expect)
            else:
                expected = oracle_result(instance.operation, left, right, env)
            report = compare(expected, actual, tol)
            ok, payload = report.ok, {"report": report.to_dict()}
            text = (
                f"{'OK' if ok else 'MISMATCH'} mismatch_count={report.mismatch_count} "
                f"max_abs_diff={report.max_abs_diff}"
            )

    if fmt == OutputFormat.TEXT:
        typer.echo(text)
    else:
        _emit(payload)
    if not ok:
        raise typer.Exit(int(ExitCode.MISMATCH))


@app.command("fuzz")
def fuzz_command(
    n: Annotated[Optional[int], typer.Option("--n", min=0, help="实例个数")] = None,
    seed: Annotated[Optional[int], typer.Option("--seed", help="起始种子")] = None,
    max_dim: Annotated[
        Optional[int], typer.Option("--max-dim", min=0, help="每轴最大尺寸")
    ] = None,
    max_blocks: Annotated[
        Optional[int], typer.Option("--max-blocks", min=1, help="每轴最大块数")
    ] = None,
    save_failures: Annotated[
        Optional[Path], typer.Option("--save-failures", help="保存失败实例的目录")
    ] = None,
) -> None:
    """生成随机实例并与稠密对照比较，遇到第一个失败即停止"""
    fuzz = get_settings().fuzz
    with _exit_codes():
        summary = run_fuzz(
            count=fuzz.count if n is None else n,
            seed=fuzz.seed if seed is None else seed,
            max_dim=fuzz.max_dim if max_dim is None else max_dim,
            max_blocks=fuzz.max_blocks if max_blocks is None else max_blocks,
            payload_bound=fuzz.payload_bound,
            save_failures=save_failures,
        )
    _emit({"fuzz": summary.to_dict()})
    if not summary.ok:
        typer.echo(f"failing seed: {summary.first_failing_seed}", err=True)
        raise typer.Exit(int(ExitCode.MISMATCH))
