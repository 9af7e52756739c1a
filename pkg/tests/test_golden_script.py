"""scripts/run_golden.py 测试"""

import importlib.util
import json
import shutil
from pathlib import Path

import pytest

from src.blockmat import DenseMatrix

ROOT = Path(__file__).parent.parent


@pytest.fixture
def run_golden(tmp_path, monkeypatch):
    """加载脚本模块，实例与 golden 目录指向临时目录"""
    spec = importlib.util.spec_from_file_location("run_golden", ROOT / "scripts" / "run_golden.py")
    assert spec is not None and spec.loader is not None
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)

    instances = tmp_path / "instances"
    golden = tmp_path / "golden"
    instances.mkdir()
    golden.mkdir()
    shutil.copy(ROOT / "data" / "instances" / "vector_example.json", instances)
    monkeypatch.setattr(module, "INSTANCES", instances)
    monkeypatch.setattr(module, "GOLDEN", golden)
    monkeypatch.setattr(module, "ROOT", tmp_path)
    return module


def test_update_writes_golden(run_golden, monkeypatch):
    monkeypatch.setattr("sys.argv", ["run_golden.py", "--update"])
    assert run_golden.main() == 0
    written = run_golden.GOLDEN / "vector_example.eval.json"
    expected = ROOT / "tests" / "golden" / "vector_example.eval.json"
    assert json.loads(written.read_text(encoding="utf-8")) == json.loads(
        expected.read_text(encoding="utf-8")
    )

    monkeypatch.setattr("sys.argv", ["run_golden.py"])
    assert run_golden.main() == 0


def test_oracle_mismatch_fails_and_skips_update(run_golden, monkeypatch):
    """与稠密对照不一致时计为失败，--update 也不写入 golden"""
    monkeypatch.setattr(
        run_golden, "hybrid_result", lambda operation, a, b, env: DenseMatrix.zeros(5, 1)
    )
    monkeypatch.setattr("sys.argv", ["run_golden.py", "--update"])
    assert run_golden.main() == 1
    assert list(run_golden.GOLDEN.iterdir()) == []

    monkeypatch.setattr("sys.argv", ["run_golden.py"])
    assert run_golden.main() == 1
