"""逐个求值 data/instances 下的实例，并与 tests/golden 中的结果比较

    python scripts/run_golden.py            # 只比较
    python scripts/run_golden.py --update   # 用当前结果覆盖 golden 文件
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT))

from src.cli.instance import load_instance, prepare  # noqa: E402
from src.cli.oracle import compare, hybrid_result, oracle_result  # noqa: E402
from src.config import get_settings  # noqa: E402
from src.errors import HybridMatrixError  # noqa: E402

INSTANCES = ROOT / get_settings().instances_dir
GOLDEN = ROOT / "tests" / "golden"


def log(msg, status="INFO"):
    print(f"[{status}] {msg}")


def eval_payload(path: Path) -> tuple[dict, bool]:
    instance = load_instance(path)
    env = instance.param_env()
    left, right = prepare(instance, env)
    result = hybrid_result(instance.operation, left, right, env)

    report = compare(oracle_result(instance.operation, left, right, env), result)
    if not report.ok:
        log(f"{path.name} 与稠密对照不一致: {report.to_dict()}", "ERROR")
    payload = {
        "operation": instance.operation.value,
        "env": dict(env.bindings),
        "result": result.to_dict(),
    }
    return payload, report.ok


def main() -> int:
    update = "--update" in sys.argv[1:]
    failures = 0
    for path in sorted(INSTANCES.glob("*.json")):
        try:
            payload, ok = eval_payload(path)
        except HybridMatrixError as e:
            log(f"{path.name}: {e}", "ERROR")
            failures += 1
            continue
        if not ok:
            # 与稠密对照不一致的结果不写入 golden
            failures += 1
            continue

        golden = GOLDEN / f"{path.stem}.eval.json"
        if update:
            golden.write_text(json.dumps(payload, ensure_ascii=False, indent=2) + "\n", "utf-8")
            log(f"已写入 {golden.relative_to(ROOT)}")
        elif not golden.exists():
            log(f"{path.name}: 没有 golden 文件，跳过", "WARNING")
        elif json.loads(golden.read_text(encoding="utf-8")) == payload:
            log(f"✔ {path.name}")
        else:
            log(f"✘ {path.name} 与 {golden.name} 不一致", "ERROR")
            failures += 1

    log(f"完成，失败 {failures} 个", "ERROR" if failures else "INFO")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
