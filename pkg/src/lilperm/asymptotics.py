"""Closed-form expectations, normalizers and counting bounds, in log domain.

Functions return ``None`` where the underlying quantity is 0 (its log is
absent) or undefined, and raise :class:`AsymptoticsDomainError` when a bound
is asked for outside the regime it is stated for.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class AsymptoticsDomainError(ValueError):
    pass


@dataclass(frozen=True)
class ModelParams:
    """Dimension with either an edge count m (for G(n,n,m)) or a probability p."""

    n: int
    m: int | None = None
    p: float | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.m is not None and not 0 <= self.m <= self.n * self.n:
            raise ValueError(f"m must lie in [0, n^2], got {self.m}")

    @property
    def p_m(self) -> float:
        if self.m is None:
            raise ValueError("p_m needs an edge count")
        return self.m / (self.n * self.n)


def log_falling_factorial_exact(N: int, l: int) -> float | None:
    """log (N)_l = sum_{i<l} log(N - i); None when l > N (the product is 0)."""
    if l < 0 or N < 0:
        raise ValueError("N and l must be nonnegative")
    if l > N:
        return None
    if l == 0:
        return 0.0
    # log(N - i) = log N + log1p(-i/N); keeps the small corrections exact-ish
    log_n = math.log(N)
    return math.fsum([l * log_n] + [math.log1p(-i / N) for i in range(1, l)])


def log_falling_factorial_approx(N: int, l: int) -> float:
    """l log N - l(l-1)/(2N); the dropped term is O(l^3 / N^2)."""
    if l > N:
        raise ValueError(f"l = {l} exceeds N = {N}")
    if l == 0:
        return 0.0
    return l * math.log(N) - l * (l - 1) / (2 * N)


def log_expected_matchings_exact(params: ModelParams) -> float | None:
    """log E X_{n,m} = log n! + log (m)_n - log (n^2)_n; None when m < n."""
    n, m = params.n, params.m
    if m is None:
        raise ValueError("edge count required")
    if m < n:
        return None
    return math.lgamma(n + 1) + log_falling_factorial_exact(m, n) - log_falling_factorial_exact(n * n, n)


def log_expected_matchings_approx(params: ModelParams) -> float:
    """log n! + n log p_m + (p_m - 1)/(2 p_m), dropping the O(1/n) term."""
    n, p_m = params.n, params.p_m
    if not 0 < p_m <= 1:
        raise AsymptoticsDomainError(f"p_m = {p_m} outside (0, 1]")
    return math.lgamma(n + 1) + n * math.log(p_m) + (p_m - 1) / (2 * p_m)


def lil_centering(n: int, p: float) -> float:
    """log(n! p^n)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return math.lgamma(n + 1) + n * math.log(p)


def loglog(x: float) -> float | None:
    """log log x, or None when x <= 1."""
    if x <= 1:
        return None
    return math.log(math.log(x))


def lil_scale(n: int, p: float) -> float | None:
    """sqrt(2 log log n) * sqrt((1-p)/p); None for n <= 3."""
    if n <= 3:
        return None
    return math.sqrt(2 * math.log(math.log(n))) * math.sqrt((1 - p) / p)


def log_moment_bound(n: int, k: int, a: int, variant: str = "basic") -> float:
    """log of the bound on M(a), the k-tuples of perfect matchings of K_{n,n}
    whose union has kn - a edges.

    basic:   (n!)^k C(k,2)^a / a!
    refined: 2^k exp(-k(k-1)/2) (n!)^k C(k,2)^a / a!, only for k a <= n/10
    """
    if k < 2:
        raise AsymptoticsDomainError(f"k must be >= 2, got {k}")
    if not 0 <= a <= (k - 1) * n:
        raise AsymptoticsDomainError(f"a = {a} outside [0, (k-1)n]")
    pairs = k * (k - 1) // 2
    value = k * math.lgamma(n + 1) + a * math.log(pairs) - math.lgamma(a + 1)
    if variant == "basic":
        return value
    if variant == "refined":
        if 10 * k * a > n:
            raise AsymptoticsDomainError(f"refined bound needs k a <= n/10 (k a = {k * a}, n = {n})")
        return value + k * math.log(2) - k * (k - 1) / 2
    raise ValueError(f"unknown variant {variant!r}")


def stirling_log_bounds(s: int) -> tuple[float, float]:
    """Bracket log s! between log(sqrt(2 pi s)(s/e)^s) and that plus 1/(12 s).

    Past s ~ 10^3 the true upper margin (about 1/(360 s^3)) is below one ulp
    of log s!, so both ends are pushed outward by a few ulps; the float pair
    is then a genuine enclosure.
    """
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    core = math.fsum([0.5 * math.log(2 * math.pi * s), s * math.log(s), -s])
    pad = _STIRLING_PAD_ULPS * math.ulp(abs(core) + 1.0)
    return core - pad, core + 1 / (12 * s) + pad


_STIRLING_PAD_ULPS = 8


def refinement_factor(n: int, k: int, a: int, t: int, l_t: int) -> float:
    """log [(d!)^(1/d) / (D!)^(1/D)]^(n - k a) with d = n - l_t - (t-1), D = n - l_t.

    Tends to -(t - 1) when k a = o(n).
    """
    d = n - l_t - (t - 1)
    big_d = n - l_t
    if d < 1:
        raise AsymptoticsDomainError(f"d = {d} < 1")
    if 10 * k * a > n:
        raise AsymptoticsDomainError(f"needs k a <= n/10 (k a = {k * a}, n = {n})")
    if d == big_d:
        return 0.0
    return (n - k * a) * (math.lgamma(d + 1) / d - math.lgamma(big_d + 1) / big_d)


def s2_tail_envelope(k: int, p_m: float, threshold: int, a_max: int) -> float:
    """sum_{threshold < a <= a_max} (e k^2 / (2 p_m a))^a, the Stirling envelope
    for the large-a part of the moment sum."""
    total = []
    for a in range(threshold + 1, a_max + 1):
        total.append(math.exp(a * math.log(math.e * k * k / (2 * p_m * a))))
    return math.fsum(total)
