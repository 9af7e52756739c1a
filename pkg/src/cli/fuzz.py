"""随机实例生成与批量检查

第 k 个实例使用种子 seed + k，因此 `fuzz --n 1 --seed <失败种子>` 可以逐字节重放。
参数命名沿用块矩阵的惯例：A 的行切分 q*、列切分 r*，B 的行切分 s*、列切分 t*，
总尺寸为 n、m（乘法另有 p）。
"""

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np
from loguru import logger

from src.cli.instance import InstanceFile, OperandModel, Operation, prepare
from src.cli.oracle import compare, hybrid_result, oracle_result


def _cuts(
    rng: np.random.Generator,
    prefix: str,
    total_name: str,
    total: int,
    max_blocks: int,
    env: dict[str, int],
) -> list[str]:
    """随机块数与单调切分点，切分点以参数形式写入 env"""
    blocks = int(rng.integers(1, max_blocks + 1))
    points = sorted(int(v) for v in rng.integers(0, total + 1, size=blocks - 1))
    names = [f"{prefix}{k}" for k in range(1, blocks)]
    env.update(zip(names, points))
    return ["0", *names, total_name]


def generate_instance(
    seed: int,
    max_dim: int = 6,
    max_blocks: int = 4,
    payload_bound: int = 9,
) -> InstanceFile:
    """由种子确定地生成一个加法或乘法实例（块元素由同一种子随机生成）"""
    rng = np.random.default_rng(seed)
    operation = Operation.ADD if rng.integers(0, 2) == 0 else Operation.MUL
    env: dict[str, int] = {}
    n, m, p = (int(v) for v in rng.integers(0, max_dim + 1, size=3))
    env.update(n=n, m=m)

    if operation == Operation.ADD:
        a = OperandModel(
            name="A",
            row_cuts=_cuts(rng, "q", "n", n, max_blocks, env),
            col_cuts=_cuts(rng, "r", "m", m, max_blocks, env),
        )
        b = OperandModel(
            name="B",
            row_cuts=_cuts(rng, "s", "n", n, max_blocks, env),
            col_cuts=_cuts(rng, "t", "m", m, max_blocks, env),
        )
    else:
        env["p"] = p
        a = OperandModel(
            name="A",
            row_cuts=_cuts(rng, "q", "n", n, max_blocks, env),
            col_cuts=_cuts(rng, "r", "m", m, max_blocks, env),
        )
        b = OperandModel(
            name="B",
            row_cuts=_cuts(rng, "s", "m", m, max_blocks, env),
            col_cuts=_cuts(rng, "t", "p", p, max_blocks, env),
        )
    return InstanceFile(
        operation=operation,
        operands=[a, b],
        env=env,
        seed=seed,
        payload_bound=payload_bound,
    )


def instance_json(instance: InstanceFile) -> str:
    """实例的规范 JSON 文本（重放时逐字节一致）"""
    return instance.model_dump_json(indent=2, exclude_none=True) + "\n"


@dataclass
class FuzzSummary:
    """批量检查汇总"""
    count: int = 0
    passed: int = 0
    failed_seeds: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failed_seeds

    @property
    def first_failing_seed(self) -> Optional[int]:
        return self.failed_seeds[0] if self.failed_seeds else None

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "count": self.count,
            "passed": self.passed,
            "failed_seeds": self.failed_seeds,
        }


def run_fuzz(
    count: int,
    seed: int,
    max_dim: int = 6,
    max_blocks: int = 4,
    payload_bound: int = 9,
    save_failures: Optional[Path] = None,
    stop_on_failure: bool = True,
) -> FuzzSummary:
    """生成 count 个实例并逐个与稠密对照比较"""
    summary = FuzzSummary()
    for k in range(count):
        instance_seed = seed + k
        instance = generate_instance(instance_seed, max_dim, max_blocks, payload_bound)
        env = instance.param_env()
        left, right = prepare(instance, env, payload_bound)
        report = compare(
            oracle_result(instance.operation, left, right, env),
            hybrid_result(instance.operation, left, right, env),
            Fraction(0),
        )
        summary.count += 1
        if report.ok:
            summary.passed += 1
            continue

        summary.failed_seeds.append(instance_seed)
        logger.warning(f"实例 seed={instance_seed} 与对照不一致: {report.to_dict()}")
        if save_failures is not None:
            save_failures.mkdir(parents=True, exist_ok=True)
            target = save_failures / f"fuzz_{instance_seed}.json"
            target.write_text(instance_json(instance), encoding="utf-8")
            logger.info(f"失败实例已保存: {target}")
        if stop_on_failure:
            break

    logger.info(f"随机检查完成: {summary.passed}/{summary.count} 通过")
    return summary
