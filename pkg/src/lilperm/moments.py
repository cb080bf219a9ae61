"""Moments of the perfect-matching count X_{n,m} of G(n,n,m).

Monte Carlo estimates of E X^k, the exact census a -> M(a) of k-tuples of
perfect matchings of K_{n,n} by union size, and exhaustive checks of the
moment identity E X^k = sum_a M(a) (m)_{kn-a} / (n^2)_{kn-a}.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import stats

from lilperm.asymptotics import ModelParams, log_expected_matchings_exact, log_moment_bound
from lilperm.models import TAG_GNNM, replicate_rng, sample_gnnm
from lilperm.permanent import SquareBitMatrix, permanent_ryser

MAX_MC_N = 28
EXHAUSTIVE_BUDGET = 10**7
CENSUS_BUDGET = 10**8


class BudgetError(ValueError):
    """Requested enumeration or sampling exceeds the configured budget."""


class LogSumExp:
    """Streaming log(sum exp(x_i)) with a running maximum.

    ``add(None)`` records a term equal to 0 (log absent); it counts toward
    ``count`` but not the sum.
    """

    def __init__(self):
        self.max = -math.inf
        self.scaled = 0.0  # sum exp(x_i - max)
        self.count = 0

    def add(self, x: float | None) -> None:
        self.count += 1
        if x is None or x == -math.inf:
            return
        if x <= self.max:
            self.scaled += math.exp(x - self.max)
        else:
            self.scaled = self.scaled * math.exp(self.max - x) + 1.0
            self.max = x

    @property
    def value(self) -> float | None:
        """log of the sum, or None if every term was 0."""
        if self.scaled == 0.0:
            return None
        return self.max + math.log(self.scaled)


@dataclass(frozen=True)
class MomentEstimate:
    n: int
    m: int
    k: int
    log_mean: float | None
    stderr: float | None  # standard error of the mean relative to the mean
    replicates: int
    seed: int | None

    @property
    def mean(self) -> float:
        return 0.0 if self.log_mean is None else math.exp(self.log_mean)

    @property
    def abs_stderr(self) -> float:
        return 0.0 if self.stderr is None else self.mean * self.stderr


def _ryser_rows(rows):
    return permanent_ryser(SquareBitMatrix(len(rows), rows))


def sample_matchings(n: int, m: int, replicates: int, seed: int, threads: int = 1) -> list[int]:
    """X_{n,m} for independent G(n,n,m) samples, in replicate order.

    Replicate r draws from a generator keyed by (seed, r); thread count only
    changes scheduling.
    """
    if replicates < 1:
        raise BudgetError("replicate budget must be >= 1")
    if n > MAX_MC_N:
        raise BudgetError(f"n = {n} exceeds the Monte Carlo limit {MAX_MC_N}")
    mats = [sample_gnnm(n, m, replicate_rng(seed, r, TAG_GNNM)).rows for r in range(replicates)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_ryser_rows, mats, chunksize=max(1, replicates // (4 * threads))))
    return [_ryser_rows(rows) for rows in mats]


def moment_from_samples(n: int, m: int, k: int, values: list[int], seed: int | None) -> MomentEstimate:
    """Fold sample values into a log-domain mean of X^k, in the given order."""
    reps = len(values)
    if k == 0:
        return MomentEstimate(n, m, 0, 0.0, 0.0, reps, seed)
    first = LogSumExp()
    second = LogSumExp()
    for x in values:
        lx = math.log(x) if x else None
        first.add(None if lx is None else k * lx)
        second.add(None if lx is None else 2 * k * lx)
    log_s1 = first.value
    if log_s1 is None:
        return MomentEstimate(n, m, k, None, None, reps, seed)
    log_mean = log_s1 - math.log(reps)
    if reps < 2:
        return MomentEstimate(n, m, k, log_mean, None, reps, seed)
    # relative variance of X^k: (R S2 / S1^2 - 1) R / (R - 1)
    rel = math.exp(second.value + math.log(reps) - 2 * log_s1) - 1.0
    rel_var = max(rel, 0.0) * reps / (reps - 1)
    return MomentEstimate(n, m, k, log_mean, math.sqrt(rel_var / reps), reps, seed)


def estimate_kth_moment(n: int, m: int, k: int, replicates: int, seed: int, threads: int = 1) -> MomentEstimate:
    values = sample_matchings(n, m, replicates, seed, threads)
    return moment_from_samples(n, m, k, values, seed)


@dataclass(frozen=True)
class MomentRatio:
    """E X^k / (E X)^k estimated from one sample, with a delta-method error."""

    k: int
    ratio: float
    stderr: float
    replicates: int


def moment_ratio(values: list[int], k: int) -> MomentRatio:
    x = np.array([float(v) for v in values])
    scale = x.mean()
    if scale == 0:
        raise ValueError("every sample is 0; ratio undefined")
    x = x / scale
    xk = x**k
    mu1, muk = x.mean(), xk.mean()
    r = muk / mu1**k
    cov = np.cov(np.vstack([xk, x]), ddof=1) / len(x)
    grad = np.array([1 / mu1**k, -k * muk / mu1 ** (k + 1)])
    return MomentRatio(k, float(r), float(math.sqrt(max(grad @ cov @ grad, 0.0))), len(x))


def _graph_rows(n: int, cells) -> tuple[int, ...]:
    rows = [0] * n
    for c in cells:
        rows[c // n] |= 1 << (c % n)
    return tuple(rows)


def exhaustive_kth_moment(n: int, m: int, k: int) -> Fraction:
    """E X_{n,m}^k exactly, averaging over every m-subset of the n^2 cells."""
    total_graphs = math.comb(n * n, m)
    if total_graphs > EXHAUSTIVE_BUDGET:
        raise BudgetError(f"C({n * n}, {m}) = {total_graphs} graphs exceeds {EXHAUSTIVE_BUDGET}")
    total = 0
    for cells in itertools.combinations(range(n * n), m):
        x = _ryser_rows(_graph_rows(n, cells))
        total += x**k
    return Fraction(total, total_graphs)


@dataclass(frozen=True)
class TupleCensus:
    """M(a) for a = 0..(k-1)n: ordered k-tuples of perfect matchings of K_{n,n}
    whose union has exactly kn - a edges."""

    n: int
    k: int
    counts: tuple[int, ...]

    def __getitem__(self, a: int) -> int:
        return self.counts[a]

    @property
    def total(self) -> int:
        return sum(self.counts)


def census_tuples(n: int, k: int) -> TupleCensus:
    """Exact census over all (n!)^k tuples.

    Tuples are folded one matching at a time into a table keyed by the union
    edge set, so the work is (distinct unions) x n! per step rather than (n!)^k.
    """
    if n < 1 or k < 1:
        raise ValueError("n and k must be >= 1")
    if math.factorial(n) ** k > CENSUS_BUDGET:
        raise BudgetError(f"(n!)^k = {math.factorial(n) ** k} exceeds {CENSUS_BUDGET}")
    if k == 1:
        return TupleCensus(n, 1, (math.factorial(n),))
    perm_masks = np.array(
        [sum(1 << (i * n + s[i]) for i in range(n)) for s in itertools.permutations(range(n))],
        dtype=np.uint64,
    )
    masks = perm_masks
    counts = np.ones(len(masks), dtype=np.int64)
    for _ in range(k - 1):
        merged = (masks[:, None] | perm_masks[None, :]).ravel()
        weights = np.repeat(counts, len(perm_masks))
        masks, inverse = np.unique(merged, return_inverse=True)
        counts = np.bincount(inverse.ravel(), weights=weights).astype(np.int64)
    table = [0] * ((k - 1) * n + 1)
    for mask, c in zip(masks.tolist(), counts.tolist()):
        size = mask.bit_count()
        table[k * n - size] += c
    return TupleCensus(n, k, tuple(table))


@dataclass(frozen=True)
class BoundRow:
    a: int
    count: int
    log_count: float  # -inf when the count is 0
    log_bound: float
    holds: bool

    @property
    def slack(self) -> float:
        return self.log_bound - self.log_count


@dataclass(frozen=True)
class Bound1Report:
    n: int
    k: int
    rows: tuple[BoundRow, ...]

    @property
    def violations(self) -> list[int]:
        return [r.a for r in self.rows if not r.holds]

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_bound1(census: TupleCensus) -> Bound1Report:
    """Check M(a) <= (n!)^k C(k,2)^a / a! for every a, exactly (integer
    comparison M(a) a! <= (n!)^k C(k,2)^a), with log slack per row."""
    n, k = census.n, census.k
    pairs = math.comb(k, 2)
    nk = math.factorial(n) ** k
    rows = []
    for a, count in enumerate(census.counts):
        holds = count * math.factorial(a) <= nk * pairs**a
        log_count = math.log(count) if count else -math.inf
        rows.append(BoundRow(a, count, log_count, log_moment_bound(n, k, a, "basic"), holds))
    return Bound1Report(n, k, tuple(rows))


def _falling(N: int, l: int) -> int:
    return math.perm(N, l) if l <= N else 0


def rearranged_terms(census: TupleCensus, m: int) -> list[Fraction]:
    """Summands M(a) (m)_{kn-a} / (n^2)_{kn-a}, a = 0..(k-1)n."""
    n, k = census.n, census.k
    # a union of kn - a > n^2 edges is impossible, so those M(a) are 0
    return [
        Fraction(c * _falling(m, k * n - a), _falling(n * n, k * n - a)) if c else Fraction(0)
        for a, c in enumerate(census.counts)
    ]


@dataclass(frozen=True)
class RearrangedReport:
    n: int
    m: int
    k: int
    lhs: Fraction
    rhs: Fraction

    @property
    def relative_error(self) -> float:
        if self.lhs == self.rhs:
            return 0.0
        return float(abs(self.lhs - self.rhs) / max(abs(self.lhs), abs(self.rhs)))

    @property
    def ok(self) -> bool:
        return self.relative_error <= 1e-9


def verify_rearranged(n: int, m: int, k: int) -> RearrangedReport:
    lhs = exhaustive_kth_moment(n, m, k)
    rhs = sum(rearranged_terms(census_tuples(n, k), m), Fraction(0))
    return RearrangedReport(n, m, k, lhs, rhs)


@dataclass(frozen=True)
class MomentSplit:
    """The moment sum split at a threshold T into S1 (a <= T) and S2 (a > T)."""

    threshold: int
    s1: Fraction
    s2: Fraction


def split_moment_sum(census: TupleCensus, m: int, threshold: int) -> MomentSplit:
    terms = rearranged_terms(census, m)
    cut = max(min(threshold, len(terms) - 1), -1)
    return MomentSplit(threshold, sum(terms[: cut + 1], Fraction(0)), sum(terms[cut + 1 :], Fraction(0)))


@dataclass(frozen=True)
class TailEstimate:
    n: int
    m: int
    k_factor: float
    hits: int
    replicates: int
    frequency: float
    ci_low: float
    ci_high: float
    seed: int = 0


def expected_matchings_fraction(n: int, m: int) -> Fraction:
    """E X_{n,m} = n! (m)_n / (n^2)_n as an exact rational."""
    return Fraction(math.factorial(n) * _falling(m, n), _falling(n * n, n))


def tail_from_samples(n: int, m: int, k_factor: float, values: list[int], seed: int = 0) -> TailEstimate:
    threshold = Fraction(k_factor) * expected_matchings_fraction(n, m)
    hits = sum(1 for x in values if x >= threshold)
    ci = stats.binomtest(hits, len(values)).proportion_ci(confidence_level=0.95, method="wilson")
    return TailEstimate(n, m, k_factor, hits, len(values), hits / len(values), float(ci.low), float(ci.high), seed)


def tail_probability(
    n: int, m: int, k_factor: float, replicates: int, seed: int, threads: int = 1
) -> TailEstimate:
    """Empirical P(X_{n,m} >= K E X_{n,m}) with a 95% Wilson interval."""
    values = sample_matchings(n, m, replicates, seed, threads)
    return tail_from_samples(n, m, k_factor, values, seed)


def log_ratio_to_mean_power(est: MomentEstimate) -> float | None:
    """log of E X^k / (E X)^k using the exact E X."""
    if est.log_mean is None:
        return None
    log_ex = log_expected_matchings_exact(ModelParams(est.n, est.m))
    if log_ex is None:
        return None
    return est.log_mean - est.k * log_ex
