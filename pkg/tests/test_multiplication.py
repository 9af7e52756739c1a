"""块矩阵乘法测试"""

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import src.blockmat.multiplication as multiplication
from src.algebra.hybridfn import fn_oplus
from src.algebra.sizes import ParamEnv, as_size
from src.blockmat import (
    BlockSpec,
    DenseMatrix,
    build_product,
    chain_refinement,
    dense_of,
    evaluate,
    product_term,
)
from src.cli.oracle import dense_add, dense_mul
from src.errors import ShapeMismatch
from tests.samples import StrictPayload, create_sample_spec


def assert_product_matches_oracle(a: BlockSpec, b: BlockSpec, env: ParamEnv) -> None:
    actual = evaluate(build_product(a, b), env)
    expected = dense_mul(dense_of(a, env), dense_of(b, env))
    assert actual.equals(expected), dict(env.bindings)


def test_chain_refinement_2x2():
    """M1=[[0,r)), M2=[[r,s)), M3=[[s,m))，依次属于 (A_1,B_1)、(A_2,B_1)、(A_2,B_2)"""
    first = [as_size(c) for c in (0, "r", "m")]
    second = [as_size(c) for c in (0, "s", "m")]
    pieces = chain_refinement(first, second)
    assert [str(p.interval) for p in pieces] == ["[[0,r))", "[[r,s))", "[[s,m))"]
    assert [(p.first_index, p.second_index) for p in pieces] == [(0, 0), (1, 0), (1, 1)]


def test_chain_refinement_general():
    """K + K' - 1 段，每一侧的段按块拼接回原来的区间"""
    first = [as_size(c) for c in (0, "a1", "a2", "m")]
    second = [as_size(c) for c in (0, "b1", "b2", "b3", "m")]
    pieces = chain_refinement(first, second)
    assert len(pieces) == 3 + 4 - 1
    assert [p.first_index for p in pieces] == [0, 1, 2, 2, 2, 2]
    assert [p.second_index for p in pieces] == [0, 0, 0, 1, 2, 3]

    env = ParamEnv({"m": 6, "a1": 4, "a2": 5, "b1": 1, "b2": 3, "b3": 6})
    for block in range(3):
        for x in range(-1, 8):
            total = sum(p.interval.indicator(x, env) for p in pieces if p.first_index == block)
            expected = 1 if first[block].evaluate(env) <= x < first[block + 1].evaluate(env) else 0
            assert total == expected


def test_chain_refinement_mismatch():
    with pytest.raises(ShapeMismatch):
        chain_refinement([as_size(0), as_size("m")], [as_size(0), as_size("k")])


PRIMES = {
    "a": [2, 3, 5, 7], "b": [11, 13], "c": [17, 19, 23, 29], "d": [31, 37],
    "e": [41], "f": [43, 47, 53, 59], "g": [61, 67], "h": [71, 73, 79, 83, 89, 97, 101, 103],
}


def create_sample_qr() -> tuple[BlockSpec, BlockSpec, ParamEnv]:
    """4x3 的 Q 与 3x5 的 R，块元素为互不相同的素数"""
    a, b, c, d = PRIMES["a"], PRIMES["b"], PRIMES["c"], PRIMES["d"]
    e, f, g, h = PRIMES["e"], PRIMES["f"], PRIMES["g"], PRIMES["h"]
    q = BlockSpec.create(
        "Q",
        [0, "q", "n"],
        [0, "r", "m"],
        {
            (0, 0): StrictPayload([a[0:2], a[2:4]]),
            (0, 1): StrictPayload([[b[0]], [b[1]]]),
            (1, 0): StrictPayload([c[0:2], c[2:4]]),
            (1, 1): StrictPayload([[d[0]], [d[1]]]),
        },
        {(0, 0): "A", (0, 1): "B", (1, 0): "C", (1, 1): "D"},
    )
    r = BlockSpec.create(
        "R",
        [0, "s", "m"],
        [0, "t", "p"],
        {
            (0, 0): StrictPayload([e]),
            (0, 1): StrictPayload([f]),
            (1, 0): StrictPayload([[g[0]], [g[1]]]),
            (1, 1): StrictPayload([h[0:4], h[4:8]]),
        },
        {(0, 0): "E", (0, 1): "F", (1, 0): "G", (1, 1): "H"},
    )
    env = ParamEnv({"n": 4, "m": 3, "p": 5, "q": 2, "r": 2, "s": 1, "t": 1})
    return q, r, env


def test_qr_example():
    """M2 = [[2,1)) 为负重数，结果仍与稠密乘积的全部 20 个元素一致

    S1 = [a1 e1 + a2 g1 + b1 g2 ; a3 e1 + a4 g1 + b2 g2]。
    """
    q, r, env = create_sample_qr()
    pieces = chain_refinement(q.col_cuts, r.row_cuts)
    assert [p.interval.indicator(1, env) for p in pieces] == [1, -1, 1]

    result = evaluate(build_product(q, r), env)
    assert result.shape == (4, 5)
    assert result.equals(dense_mul(dense_of(q, env), dense_of(r, env)))

    a, b, e, g = PRIMES["a"], PRIMES["b"], PRIMES["e"], PRIMES["g"]
    s1 = [result.entries[0, 0], result.entries[1, 0]]
    assert s1 == [
        a[0] * e[0] + a[1] * g[0] + b[0] * g[1],
        a[2] * e[0] + a[3] * g[0] + b[1] * g[1],
    ]
    assert s1 == [1002, 1503]


def test_qr_never_evaluates_outside_domains():
    """E|_{Y=0}(1) 与 B|_{X=0}(1) 在 ×-归约中抵消，从不求值"""
    q, r, env = create_sample_qr()
    term = product_term(q, r, 0, 0)
    assert term.value_at((0, 0), env) == 1002
    e_payload = r.payloads[(0, 0)]
    assert all(local == (0, 0) for local in e_payload.visits)


def test_product_unblocked():
    """1x1 块时精化退化为普通乘法"""
    env = ParamEnv({"n": 3, "m": 4, "p": 2})
    a = create_sample_spec("A", [0, "n"], [0, "m"], env, seed=1)
    b = create_sample_spec("B", [0, "m"], [0, "p"], env, seed=2)
    expr = build_product(a, b)
    assert len(expr) == 1
    assert_product_matches_oracle(a, b, env)


def test_product_shape_mismatch():
    a = BlockSpec.create("A", [0, "n"], [0, "m"])
    b = BlockSpec.create("B", [0, "k"], [0, "p"])
    with pytest.raises(ShapeMismatch):
        build_product(a, b)


def test_product_empty_inner_dimension():
    """m = 0 时乘积为全零矩阵"""
    env = ParamEnv({"n": 2, "m": 0, "p": 3, "q": 1, "r": 0, "s": 0, "t": 2})
    a = create_sample_spec("A", [0, "q", "n"], [0, "r", "m"], env)
    b = create_sample_spec("B", [0, "s", "m"], [0, "t", "p"], env)
    result = evaluate(build_product(a, b), env)
    assert result.equals(DenseMatrix.zeros(2, 3))
    assert result.entries[1, 2] == Fraction(0)


def split_dense(
    name: str, dense: np.ndarray, row_cuts: list, col_cuts: list, env: ParamEnv
) -> BlockSpec:
    """把绑定尺寸下的稠密矩阵按切分拆成严格块函数"""
    spec = BlockSpec.create(name, row_cuts, col_cuts)
    rows = [c.evaluate(env) for c in spec.row_cuts]
    cols = [c.evaluate(env) for c in spec.col_cuts]
    for i, j in spec.blocks():
        window = dense[rows[i]:rows[i + 1], cols[j]:cols[j + 1]]
        spec.payloads[(i, j)] = StrictPayload(window.tolist(), window.shape)
    return spec


@pytest.mark.parametrize("n,m,p", list(itertools.product(range(6), repeat=3)))
def test_product_exhaustive(n, m, p):
    """n, m, p ≤ 5 时的全部 (q, r, s, t)，包含 r < s、r = s、r > s"""
    rng = np.random.default_rng(36 * n + 6 * m + p)
    a_dense = rng.integers(-9, 10, size=(n, m))
    b_dense = rng.integers(-9, 10, size=(m, p))
    expected = DenseMatrix(np.array((a_dense @ b_dense).tolist(), dtype=object).reshape(n, p))
    seen_orders = set()
    for q, r, s, t in itertools.product(range(n + 1), range(m + 1), range(m + 1), range(p + 1)):
        env = ParamEnv({"n": n, "m": m, "p": p, "q": q, "r": r, "s": s, "t": t})
        a = split_dense("A", a_dense, [0, "q", "n"], [0, "r", "m"], env)
        b = split_dense("B", b_dense, [0, "s", "m"], [0, "t", "p"], env)
        assert evaluate(build_product(a, b), env).equals(expected), dict(env.bindings)
        seen_orders.add((r > s) - (r < s))
    if m > 0:
        assert seen_orders == {-1, 0, 1}


@st.composite
def product_pairs(draw):
    """随机 I x K 与 K' x J 块矩阵（每轴至多 4 块，尺寸至多 8）"""
    n, m, p = draw(st.integers(0, 8)), draw(st.integers(0, 8)), draw(st.integers(0, 8))
    env = {"n": n, "m": m, "p": p}

    def cuts(prefix, total_name, total):
        points = sorted(draw(st.lists(st.integers(0, total), min_size=0, max_size=3)))
        names = [f"{prefix}{k}" for k in range(1, len(points) + 1)]
        env.update(zip(names, points))
        return [0, *names, total_name]

    rows_a, cols_a = cuts("q", "n", n), cuts("r", "m", m)
    rows_b, cols_b = cuts("s", "m", m), cuts("t", "p", p)
    seed = draw(st.integers(0, 1000))
    bound = ParamEnv(env)
    a = create_sample_spec("A", rows_a, cols_a, bound, seed=seed)
    b = create_sample_spec("B", rows_b, cols_b, bound, seed=seed + 1)
    return a, b, bound


@settings(max_examples=250, deadline=None)
@given(product_pairs())
def test_product_larger_blocks(pair):
    a, b, env = pair
    assert_product_matches_oracle(a, b, env)


def test_oplus_of_two_products():
    """A·B ⊕ C·D 保留两组输出块，各自求值后相加"""
    env = ParamEnv({"n": 2, "m": 3, "p": 2, "q": 1, "r": 2, "s": 1, "t": 1})
    a = create_sample_spec("A", [0, "q", "n"], [0, "r", "m"], env, seed=1)
    b = create_sample_spec("B", [0, "s", "m"], [0, "t", "p"], env, seed=2)
    c = create_sample_spec("C", [0, "q", "n"], [0, "r", "m"], env, seed=3)
    d = create_sample_spec("D", [0, "s", "m"], [0, "t", "p"], env, seed=4)
    expr = fn_oplus(build_product(a, b), build_product(c, d))
    assert len(expr) == 8
    expected = dense_add(
        dense_mul(dense_of(a, env), dense_of(b, env)),
        dense_mul(dense_of(c, env), dense_of(d, env)),
    )
    assert evaluate(expr, env).equals(expected)


def test_oplus_of_same_product_doubles():
    """同一个乘积 ⊕ 两次时逐块合并为 2·A·B"""
    env = ParamEnv({"n": 2, "m": 3, "p": 2, "q": 1, "r": 2, "s": 1, "t": 1})
    a = create_sample_spec("A", [0, "q", "n"], [0, "r", "m"], env, seed=1)
    b = create_sample_spec("B", [0, "s", "m"], [0, "t", "p"], env, seed=2)
    product = build_product(a, b)
    expr = fn_oplus(product, product)
    assert len(expr) == 4
    once = dense_mul(dense_of(a, env), dense_of(b, env))
    assert evaluate(expr, env).equals(dense_add(once, once))


def test_product_slices_built_once_per_row_and_column(monkeypatch):
    """每个输出块内，每行只构造一次 A|_{X=x}，每列只构造一次 B|_{Y=y}"""
    calls: list[tuple[str, int]] = []
    restrict_row, restrict_col = multiplication.restrict_row, multiplication.restrict_col

    def counting_row(expr, env, i):
        calls.append(("row", i))
        return restrict_row(expr, env, i)

    def counting_col(expr, env, j):
        calls.append(("col", j))
        return restrict_col(expr, env, j)

    monkeypatch.setattr(multiplication, "restrict_row", counting_row)
    monkeypatch.setattr(multiplication, "restrict_col", counting_col)
    q, r, env = create_sample_qr()
    result = evaluate(build_product(q, r), env)
    assert result.equals(dense_mul(dense_of(q, env), dense_of(r, env)))
    # 4 行 x 2 个列块，5 列 x 2 个行块
    assert sum(1 for kind, _ in calls if kind == "row") == 4 * 2
    assert sum(1 for kind, _ in calls if kind == "col") == 5 * 2
