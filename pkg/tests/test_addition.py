"""块矩阵加法测试"""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.algebra.hybridfn import net_layers_at
from src.algebra.hybridset import HybridSet, generalized_partition_check
from src.algebra.sizes import ParamEnv
from src.blockmat import (
    BlockSpec,
    build_sum,
    build_vector_sum,
    dense_of,
    evaluate,
    refinement_regions,
    regions_of,
    universe,
    validate_spec,
)
from src.cli.oracle import dense_add
from src.errors import ShapeMismatch
from tests.samples import StrictPayload, create_sample_2x2, create_sample_spec


def create_sample_pair(env: ParamEnv, seed: int = 0) -> tuple[BlockSpec, BlockSpec]:
    """A 的切分为 q、r，B 的切分为 s、t"""
    a = create_sample_2x2("A", "q", "r", env, seed=seed)
    b = create_sample_2x2("B", "s", "t", env, seed=seed + 1)
    return a, b


def assert_sum_matches_oracle(a: BlockSpec, b: BlockSpec, env: ParamEnv) -> None:
    actual = evaluate(build_sum(a, b), env)
    expected = dense_add(dense_of(a, env), dense_of(b, env))
    assert actual.equals(expected), dict(env.bindings)


def test_regions_of_2x2():
    """四个块区域逐点划分整个矩形"""
    env = ParamEnv({"n": 5, "m": 4, "q": 2, "r": 3})
    spec = create_sample_2x2("A", "q", "r", env)
    regions = regions_of(spec)
    assert str(regions[(0, 0)]) == "[[0,q)) x [[0,r))"
    assert str(regions[(1, 1)]) == "[[q,n)) x [[r,m))"
    domain = list(itertools.product(range(-1, 7), repeat=2))
    parts = [HybridSet.from_region(r) for r in regions.values()]
    whole = HybridSet.from_region(universe(spec))
    assert generalized_partition_check(parts, whole, domain, env, strict=True)


def test_regions_of_trivial_and_2x3():
    env = ParamEnv({"n": 3, "m": 5, "q": 1, "r1": 2, "r2": 4})
    single = BlockSpec.create("A", [0, "n"], [0, "m"])
    assert list(regions_of(single)) == [(0, 0)]
    assert str(regions_of(single)[(0, 0)]) == "[[0,n)) x [[0,m))"

    spec = BlockSpec.create("A", [0, "q", "n"], [0, "r1", "r2", "m"])
    regions = regions_of(spec)
    assert len(regions) == 6
    domain = list(itertools.product(range(-1, 7), repeat=2))
    for q, r1, r2 in itertools.product(range(4), range(6), range(6)):
        bound = env.with_bindings(q=q, r1=r1, r2=r2)
        parts = [HybridSet.from_region(r) for r in regions.values()]
        whole = HybridSet.from_region(universe(spec))
        assert generalized_partition_check(parts, whole, domain, bound)


def test_build_sum_layer_count():
    """2x2 + 2x2 共 3 + 3 + 1 = 7 层，最后一层为 (A22 + B22)^P"""
    env = ParamEnv({"n": 4, "m": 4, "q": 1, "r": 2, "s": 3, "t": 1})
    a, b = create_sample_pair(env)
    expr = build_sum(a, b)
    assert len(expr) == 7
    assert expr.layers[-1].term.symbol == "A22+B22"
    assert [layer.term.symbol for layer in expr.layers[:3]] == ["A11+B22", "A12+B22", "A21+B22"]
    assert [layer.term.symbol for layer in expr.layers[3:6]] == ["A22+B11", "A22+B12", "A22+B21"]


def test_build_sum_general_layer_count():
    """(kl - 1) + (nm - 1) + 1 层"""
    env = ParamEnv({"n": 6, "m": 6})
    a = BlockSpec.create("A", [0, 1, 2, "n"], [0, 3, "m"])
    b = BlockSpec.create("B", [0, 4, "n"], [0, 1, 2, 5, "m"])
    assert len(build_sum(a, b)) == (3 * 2 - 1) + (2 * 4 - 1) + 1


def test_build_sum_shape_mismatch():
    a = BlockSpec.create("A", [0, "q", "n"], [0, "r", "m"])
    b = BlockSpec.create("B", [0, "s", "n"], [0, "t", "p"])
    with pytest.raises(ShapeMismatch):
        build_sum(a, b)


def test_refinement_completeness():
    """七个精化区域在任意绑定下逐点给出重数 1"""
    rng = np.random.default_rng(3)
    a = BlockSpec.create("A", [0, "q", "n"], [0, "r", "m"])
    b = BlockSpec.create("B", [0, "s", "n"], [0, "t", "m"])
    regions = refinement_regions(a, b)
    assert len(regions) == 7
    for _ in range(100):
        n, m = (int(v) for v in rng.integers(0, 8, size=2))
        q, s = (int(v) for v in rng.integers(0, n + 1, size=2))
        r, t = (int(v) for v in rng.integers(0, m + 1, size=2))
        env = ParamEnv({"n": n, "m": m, "q": q, "r": r, "s": s, "t": t})
        for i, j in itertools.product(range(n), range(m)):
            assert sum(region.mult_at((i, j), env) for region in regions) == 1


def test_point_case_negative_remainder():
    """(i,j) 位于 A11 与 B12 中：P 的重数为 -1，幸存的是 A11 + B12"""
    env = ParamEnv({"n": 6, "m": 6, "q": 4, "r": 4, "s": 2, "t": 2})
    a, b = create_sample_pair(env)
    expr = build_sum(a, b)
    nets = {term.symbol: net for term, net in net_layers_at(expr, env, (0, 3))}
    assert nets == {"A11+B22": 1, "A22+B12": 1, "A22+B22": -1}
    assert expr.layers[-1].mult_at((0, 3), env) == -1

    value = evaluate(expr, env).entries[0, 3]
    assert value == a.payloads[(0, 0)].value_at((0, 3)) + b.payloads[(0, 1)].value_at((0, 1))


def test_point_case_zero_remainder():
    """(i,j) 位于 A22 与 B12 中：P 的重数为 1-(0+0+0+0+1+0) = 0"""
    env = ParamEnv({"n": 6, "m": 6, "q": 2, "r": 2, "s": 4, "t": 2})
    a, b = create_sample_pair(env)
    expr = build_sum(a, b)
    nets = {term.symbol: net for term, net in net_layers_at(expr, env, (3, 3))}
    assert nets == {"A22+B12": 1}
    assert expr.layers[-1].mult_at((3, 3), env) == 0


def test_sum_exhaustive():
    """n = m = 6 时全部 2401 种 (q, r, s, t) 都与稠密加法一致"""
    base = {"n": 6, "m": 6}
    for q, r, s, t in itertools.product(range(7), repeat=4):
        env = ParamEnv({**base, "q": q, "r": r, "s": s, "t": t})
        a, b = create_sample_pair(env, seed=q * 7 + r)
        assert_sum_matches_oracle(a, b, env)


def test_sum_with_itself_doubles():
    env = ParamEnv({"n": 3, "m": 4, "q": 1, "r": 3})
    a = create_sample_2x2("A", "q", "r", env)
    result = evaluate(build_sum(a, a), env)
    assert result.equals(dense_add(dense_of(a, env), dense_of(a, env)))
    assert np.array_equal(result.entries, 2 * dense_of(a, env).entries)


def test_sum_zero_size():
    """n = 0 时得到空矩阵"""
    env = ParamEnv({"n": 0, "m": 3, "q": 0, "r": 1, "s": 0, "t": 2})
    a, b = create_sample_pair(env)
    assert evaluate(build_sum(a, b), env).shape == (0, 3)


@st.composite
def block_pairs(draw):
    """随机 k x l 与 k' x l' 块矩阵（每轴至多 4 块，尺寸至多 8）"""
    n, m = draw(st.integers(0, 8)), draw(st.integers(0, 8))
    env = {"n": n, "m": m}

    def cuts(prefix, total_name, total):
        points = sorted(draw(st.lists(st.integers(0, total), min_size=0, max_size=3)))
        names = [f"{prefix}{k}" for k in range(1, len(points) + 1)]
        env.update(zip(names, points))
        return [0, *names, total_name]

    rows_a, cols_a = cuts("q", "n", n), cuts("r", "m", m)
    rows_b, cols_b = cuts("s", "n", n), cuts("t", "m", m)
    seed = draw(st.integers(0, 1000))
    bound = ParamEnv(env)
    a = create_sample_spec("A", rows_a, cols_a, bound, seed=seed)
    b = create_sample_spec("B", rows_b, cols_b, bound, seed=seed + 1)
    return a, b, bound


@settings(max_examples=250, deadline=None)
@given(block_pairs())
def test_sum_larger_blocks(pair):
    a, b, env = pair
    assert validate_spec(a, env).ok and validate_spec(b, env).ok
    assert_sum_matches_oracle(a, b, env)


def create_sample_vectors() -> tuple[BlockSpec, BlockSpec]:
    """U = [u0..u3, u'0]，V = [v0, v'0..v'3]（从 0 编号）"""
    u = BlockSpec.vector(
        "U",
        [0, "k", "n"],
        {0: StrictPayload([[10], [20], [30], [40]]), 1: StrictPayload([[50]])},
        {0: "u", 1: "u'"},
    )
    v = BlockSpec.vector(
        "V",
        [0, "l", "n"],
        {0: StrictPayload([[1]]), 1: StrictPayload([[2], [3], [4], [5]])},
        {0: "v", 1: "v'"},
    )
    return u, v


@pytest.mark.parametrize("through", ["first", "second"])
def test_vector_example(through):
    """n=5, k=4, l=1：[u1+v1, u2+v'1, u3+v'2, u4+v'3, u'1+v'4]"""
    env = ParamEnv({"n": 5, "k": 4, "l": 1})
    u, v = create_sample_vectors()
    expr = build_vector_sum(u, v, through=through)
    assert len(expr) == 3
    result = evaluate(expr, env)
    assert result.shape == (5, 1)
    assert [row[0] for row in result.entries.tolist()] == [11, 22, 33, 44, 55]
    assert evaluate(build_sum(u, v), env).equals(result)


def test_vector_orders_agree():
    """两种精化顺序在任意 k、l 下逐点相同"""
    for n in range(0, 6):
        for k, l in itertools.product(range(n + 1), repeat=2):
            env = ParamEnv({"n": n, "k": k, "l": l})
            u = create_sample_spec("U", [0, "k", "n"], [0, 1], env, seed=n)
            v = create_sample_spec("V", [0, "l", "n"], [0, 1], env, seed=n + 1)
            first = evaluate(build_vector_sum(u, v, "first"), env)
            second = evaluate(build_vector_sum(u, v, "second"), env)
            assert first.equals(second)
            assert first.equals(dense_add(dense_of(u, env), dense_of(v, env)))


def test_vector_sum_rejects_matrices():
    a = BlockSpec.create("A", [0, "n"], [0, 1, 2])
    with pytest.raises(ShapeMismatch):
        build_vector_sum(a, a)


def test_sum_of_same_named_operands():
    """同名、同切分的两个块矩阵按各自的块求值"""
    for q in range(4):
        env = ParamEnv({"n": 3, "m": 2, "q": q})
        a = create_sample_spec("A", [0, "q", "n"], [0, "m"], env, seed=5)
        b = create_sample_spec("A", [0, "q", "n"], [0, "m"], env, seed=6)
        assert a.term(1, 0) != b.term(1, 0)
        assert_sum_matches_oracle(a, b, env)

