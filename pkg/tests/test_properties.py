import math

from hypothesis import given, settings
from hypothesis import strategies as st

from lilperm.asymptotics import log_falling_factorial_approx, log_falling_factorial_exact
from lilperm.lil import ExperimentConfig, run_path
from lilperm.models import NestedMatrixStream
from lilperm.moments import LogSumExp
from lilperm.permanent import (
    SquareBitMatrix,
    bregman_minc_log_bound,
    has_perfect_matching,
    permanent_bruteforce,
    permanent_glynn,
    permanent_ryser,
)


@st.composite
def matrices(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    rows = draw(st.lists(st.integers(0, (1 << n) - 1), min_size=n, max_size=n))
    return SquareBitMatrix.from_rows(rows)


@given(matrices())
def test_engines_agree(m):
    assert permanent_ryser(m) == permanent_glynn(m) == permanent_bruteforce(m)


@given(matrices(max_n=10), st.randoms(use_true_random=False))
def test_permutation_invariance(m, rnd):
    perm = list(range(m.n))
    rnd.shuffle(perm)
    x = permanent_ryser(m)
    assert permanent_ryser(m.permute_rows(perm)) == x
    assert permanent_ryser(m.permute_columns(perm)) == x
    assert permanent_ryser(m.transpose()) == x


@given(matrices(), st.data())
def test_monotone(m, data):
    i = data.draw(st.integers(0, m.n - 1))
    j = data.draw(st.integers(0, m.n - 1))
    assert permanent_ryser(m.with_entry(i, j, 1)) >= permanent_ryser(m.with_entry(i, j, 0))


@given(matrices(max_n=12))
def test_zero_law_and_bregman(m):
    x = permanent_ryser(m)
    assert (x > 0) == has_perfect_matching(m)
    if x:
        assert bregman_minc_log_bound(m) >= math.log(x) - 1e-12


@settings(max_examples=30)
@given(st.integers(0, 2**64 - 1), st.sampled_from([0.1, 0.5, 0.9]), st.integers(1, 33), st.integers(1, 34))
def test_nesting(seed, p, a, b):
    lo, hi = sorted((a, b))
    s = NestedMatrixStream(seed, p)
    assert s.minor(lo) == s.minor(hi).leading(lo)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**64 - 1), st.lists(st.integers(1, 14), min_size=1, max_size=4, unique=True))
def test_path_coupling(seed, dims):
    dims = tuple(sorted(dims))
    path = run_path(ExperimentConfig(seed, 0.5, dims))
    for rec in path:
        assert rec == run_path(ExperimentConfig(seed, 0.5, (rec.n,)))[0]


@given(st.lists(st.floats(-700, 700), min_size=1, max_size=50))
def test_logsumexp_matches_direct(xs):
    acc = LogSumExp()
    for x in xs:
        acc.add(x)
    top = max(xs)
    direct = top + math.log(math.fsum(math.exp(x - top) for x in xs))
    assert math.isclose(acc.value, direct, rel_tol=1e-12, abs_tol=1e-12)


@given(st.integers(2, 10**6), st.data())
def test_falling_factorial_envelope(N, data):
    l = data.draw(st.integers(0, int(N**0.6)))
    assert abs(log_falling_factorial_approx(N, l) - log_falling_factorial_exact(N, l)) <= 2 * l**3 / N**2 + 1e-9
