import math
import random

import networkx as nx
import pytest

from lilperm import _purepy
from lilperm.permanent import (
    BACKEND,
    DimensionError,
    MatrixParseError,
    SquareBitMatrix,
    bregman_minc_log_bound,
    has_perfect_matching,
    log_permanent,
    permanent_bruteforce,
    permanent_glynn,
    permanent_ryser,
)

try:
    from lilperm import _kernels
except ImportError:
    _kernels = None

BACKENDS = [pytest.param(_purepy, id="python")]
if _kernels is not None:
    BACKENDS.append(pytest.param(_kernels, id="compiled"))


def random_matrix(rng, n, p):
    return SquareBitMatrix.from_rows([sum(1 << j for j in range(n) if rng.random() < p) for _ in range(n)])


def test_compiled_backend_active():
    assert BACKEND == ("compiled" if _kernels is not None else "python")


@pytest.mark.parametrize("n, expected", [(1, 1), (2, 2), (3, 6), (4, 24), (8, 40320)])
def test_all_ones(n, expected):
    m = SquareBitMatrix.ones(n)
    assert permanent_ryser(m) == permanent_glynn(m) == permanent_bruteforce(m) == expected


def test_known_small_values():
    assert permanent_ryser(SquareBitMatrix.identity(5)) == 1
    assert permanent_ryser(SquareBitMatrix.from_rows([0b11, 0b01])) == 1
    # 1 on the diagonal and superdiagonal (cyclically): two perfect matchings
    cyc = SquareBitMatrix.from_rows([(1 << i) | (1 << ((i + 1) % 6)) for i in range(6)])
    assert permanent_ryser(cyc) == 2


@pytest.mark.parametrize("mod", BACKENDS)
def test_backend_engines_agree(mod):
    rng = random.Random(7)
    for n in range(1, 9):
        for _ in range(15):
            m = random_matrix(rng, n, rng.choice([0.2, 0.5, 0.8]))
            b = mod.bruteforce(m.rows)
            assert mod.ryser(m.rows) == b
            assert mod.glynn(m.rows) == b


@pytest.mark.skipif(_kernels is None, reason="extension not built")
def test_backends_match_at_moderate_n():
    rng = random.Random(11)
    for n in (12, 14, 16):
        m = random_matrix(rng, n, 0.6)
        assert _kernels.ryser(m.rows) == _purepy.ryser(m.rows) == _kernels.glynn(m.rows)


@pytest.mark.skipif(_kernels is None, reason="extension not built")
def test_large_factorials_compiled():
    for n in (20, 25, 26):
        assert _kernels.ryser(SquareBitMatrix.ones(n).rows) == math.factorial(n)
        assert _kernels.glynn(SquareBitMatrix.ones(n).rows) == math.factorial(n)


def test_ryser_glynn_agree_random_large():
    rng = random.Random(3)
    for n in (16, 20):
        m = random_matrix(rng, n, 0.5)
        assert permanent_ryser(m) == permanent_glynn(m)


def test_invariances():
    rng = random.Random(5)
    for n in (5, 9, 12):
        m = random_matrix(rng, n, 0.5)
        x = permanent_ryser(m)
        perm = list(range(n))
        rng.shuffle(perm)
        assert permanent_ryser(m.permute_rows(perm)) == x
        rng.shuffle(perm)
        assert permanent_ryser(m.permute_columns(perm)) == x
        assert permanent_ryser(m.transpose()) == x


def test_monotone_in_entries():
    rng = random.Random(9)
    for _ in range(40):
        n = rng.randint(2, 8)
        m = random_matrix(rng, n, 0.4)
        i, j = rng.randrange(n), rng.randrange(n)
        assert permanent_ryser(m.with_entry(i, j, 1)) >= permanent_ryser(m)


def test_zero_law_against_networkx():
    rng = random.Random(13)
    for _ in range(150):
        n = rng.randint(1, 12)
        m = random_matrix(rng, n, rng.choice([0.1, 0.2, 0.3]))
        g = nx.Graph()
        g.add_nodes_from(range(2 * n))
        g.add_edges_from((i, n + j) for i in range(n) for j in range(n) if m.entry(i, j))
        matching = nx.bipartite.hopcroft_karp_matching(g, top_nodes=range(n))
        has_pm = len(matching) == 2 * n
        assert (permanent_ryser(m) > 0) == has_pm == has_perfect_matching(m)


def test_log_permanent_absent_for_zero():
    m = SquareBitMatrix.from_rows([0b11, 0b00])
    assert permanent_ryser(m) == 0
    assert log_permanent(m) is None
    assert log_permanent(SquareBitMatrix.ones(5)) == pytest.approx(math.log(120), rel=1e-15)


def test_bregman_minc():
    rng = random.Random(17)
    ones = SquareBitMatrix.ones(6)
    assert bregman_minc_log_bound(ones) == pytest.approx(math.log(720), rel=1e-12)
    for _ in range(100):
        m = random_matrix(rng, 8, 0.5)
        lp = log_permanent(m)
        if lp is not None:
            assert bregman_minc_log_bound(m) >= lp - 1e-12


def test_bregman_zero_row():
    m = SquareBitMatrix.from_rows([0b11, 0b00])
    assert bregman_minc_log_bound(m) == -math.inf


def test_dimension_limits():
    with pytest.raises(DimensionError):
        permanent_bruteforce(SquareBitMatrix.ones(11))
    with pytest.raises(DimensionError):
        permanent_ryser(SquareBitMatrix.ones(35))


def test_text_roundtrip():
    rng = random.Random(19)
    m = random_matrix(rng, 7, 0.5)
    assert SquareBitMatrix.from_text(m.to_text()) == m


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 1),
        ("x\n", 1),
        ("2\n10\n", 3),
        ("2\n10\n1a\n", 3),
        ("2\n101\n11\n", 2),
    ],
)
def test_parse_errors_carry_position(text, line):
    with pytest.raises(MatrixParseError) as info:
        SquareBitMatrix.from_text(text)
    assert info.value.line == line


def test_parse_error_column():
    with pytest.raises(MatrixParseError) as info:
        SquareBitMatrix.from_text("3\n101\n1x1\n111\n")
    assert (info.value.line, info.value.column) == (3, 2)
    assert "line 3, column 2" in str(info.value)


def test_array_roundtrip():
    import numpy as np

    a = np.array([[1, 0, 1], [0, 1, 1], [1, 1, 0]])
    m = SquareBitMatrix.from_array(a)
    assert (m.to_array() == a).all()
    assert m.edge_count == 6
    assert m.row_degrees() == [2, 2, 2]
    assert m.leading(2) == SquareBitMatrix.from_array(a[:2, :2])


def test_pure_python_fallback_selected_by_env():
    import os
    import subprocess
    import sys

    env = dict(os.environ, LILPERM_PURE_PYTHON="1")
    code = "from lilperm import permanent as p, SquareBitMatrix as M; print(p.BACKEND, p.permanent_ryser(M.ones(6)))"
    res = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
    assert res.stdout.split() == ["python", "720"]
