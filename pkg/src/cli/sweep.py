"""参数扫描

扫描语法为逗号分隔的 "name=lo..hi"（闭区间），例如 "q=0..5,r=0..5"。
对每一组绑定构造实例并与稠密对照比较；该绑定下操作数不合法（例如切分不单调）时计为跳过。
"""

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterator, Mapping, Optional

from loguru import logger

from src.algebra.sizes import ParamEnv
from src.cli.instance import InstanceFile, prepare
from src.cli.oracle import compare, hybrid_result, oracle_result
from src.errors import InstanceValidationError

_RANGE = re.compile(r"^\s*(?P<name>[^\W\d]\w*)\s*=\s*(?P<lo>-?\d+)\s*\.\.\s*(?P<hi>-?\d+)\s*$")


def parse_sweep(text: str) -> dict[str, range]:
    """解析扫描范围

    Raises:
        InstanceValidationError: 语法错误、重复参数或空范围
    """
    ranges: dict[str, range] = {}
    problems = []
    for part in text.split(","):
        match = _RANGE.match(part)
        if match is None:
            problems.append(f"无法解析扫描范围 {part.strip()!r}，应形如 q=0..5")
            continue
        name, lo, hi = match["name"], int(match["lo"]), int(match["hi"])
        if name in ranges:
            problems.append(f"参数 {name} 重复出现")
        elif lo > hi:
            problems.append(f"参数 {name} 的范围为空: {lo}..{hi}")
        else:
            ranges[name] = range(lo, hi + 1)
    if problems:
        raise InstanceValidationError(problems)
    return ranges


def iter_envs(base: ParamEnv, ranges: Mapping[str, range]) -> Iterator[ParamEnv]:
    """按参数声明顺序的笛卡尔积遍历所有绑定（最后一个参数变化最快）"""
    names = list(ranges)
    for values in itertools.product(*(ranges[n] for n in names)):
        yield base.with_bindings(**dict(zip(names, values)))


@dataclass
class SweepSummary:
    """扫描汇总"""
    total: int = 0
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    first_failure: Optional[dict[str, Any]] = None
    failures: list[dict[str, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "total": self.total,
            "passed": self.passed,
            "failed": self.failed,
            "skipped": self.skipped,
            "first_failure": self.first_failure,
        }


def run_sweep(
    instance: InstanceFile,
    ranges: Mapping[str, range],
    tolerance: Fraction = Fraction(0),
    payload_bound: int = 9,
) -> SweepSummary:
    """对每个绑定做一次 check；评估错误向上传播

    Raises:
        InstanceValidationError: 所有绑定都被跳过，没有比较任何结果
    """
    summary = SweepSummary()
    for env in iter_envs(instance.param_env(), ranges):
        summary.total += 1
        try:
            left, right = prepare(instance, env, payload_bound)
        except InstanceValidationError:
            summary.skipped += 1
            continue
        report = compare(
            oracle_result(instance.operation, left, right, env),
            hybrid_result(instance.operation, left, right, env),
            tolerance,
        )
        if report.ok:
            summary.passed += 1
            continue
        summary.failed += 1
        bindings = dict(env.bindings)
        summary.failures.append(bindings)
        if summary.first_failure is None:
            summary.first_failure = {"env": bindings, "report": report.to_dict()}
            logger.warning(f"扫描发现不一致: env={env}")
    logger.info(
        f"扫描完成: 共 {summary.total}, 通过 {summary.passed}, "
        f"失败 {summary.failed}, 跳过 {summary.skipped}"
    )
    if summary.passed == 0 and summary.failed == 0:
        raise InstanceValidationError(
            [f"扫描的 {summary.total} 组绑定全部不合法，没有可比较的结果"]
        )
    return summary
