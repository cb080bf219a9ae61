"""Log-permanent paths along nested minors of one infinite Bernoulli matrix.

``run_path`` follows a single stream as n grows (the coupled sequence the
iterated-logarithm law is about).  ``clt_sample`` instead draws a fresh
matrix per replicate at fixed n.  The two are kept separate on purpose:
independent samples say nothing about a limsup along one sequence.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats

from lilperm.asymptotics import lil_centering, lil_scale, loglog
from lilperm.models import NestedMatrixStream, edge_stats, replicate_seed
from lilperm.permanent import MAX_EXACT_N, SquareBitMatrix, permanent_ryser

MAX_CLT_N = 28


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int
    p: float
    dims: tuple[int, ...]
    replicates: int = 1

    def __post_init__(self):
        if not self.dims:
            raise ValueError("no dimensions")
        if list(self.dims) != sorted(set(self.dims)):
            raise ValueError("dimensions must be strictly ascending")
        if self.dims[0] < 1 or self.dims[-1] > MAX_EXACT_N:
            raise ValueError(f"dimensions must lie in [1, {MAX_EXACT_N}]")

    @classmethod
    def geometric(cls, seed: int, p: float, c: int, n_min: int, n_max: int, replicates: int = 1):
        """Dimensions c, c^2, c^3, ... clipped to [n_min, n_max]."""
        if c < 2:
            raise ValueError(f"subsequence base must be an integer >= 2, got {c}")
        return cls(seed, p, geometric_dims(c, n_min, n_max), replicates)


def geometric_dims(c: int, n_min: int, n_max: int) -> tuple[int, ...]:
    dims = []
    v = c
    while v <= n_max:
        if v >= n_min:
            dims.append(v)
        v *= c
    return tuple(dims)


@dataclass(frozen=True)
class PathRecord:
    n: int
    p: float
    edges: int
    e_star: float
    in_window: bool
    y: float | None
    centering: float
    scale: float | None

    @property
    def spread(self) -> float:
        """sqrt((1 - p)/p), the per-unit scale of the deviation."""
        return math.sqrt((1 - self.p) / self.p)

    @property
    def deviation(self) -> float | None:
        if self.y is None:
            return None
        return (self.y - self.centering) / self.spread

    @property
    def loglog_n(self) -> float | None:
        return loglog(self.n)

    @property
    def loglog_n2(self) -> float | None:
        return loglog(self.n * self.n)

    @property
    def normalized(self) -> float | None:
        """deviation / sqrt(2 log log n); None for absent y or n <= 3."""
        if self.y is None or self.scale is None:
            return None
        return (self.y - self.centering) / self.scale

    @property
    def residual(self) -> float | None:
        dev = self.deviation
        return None if dev is None else dev - self.e_star


def path_record(matrix: SquareBitMatrix, p: float) -> PathRecord:
    x = permanent_ryser(matrix)
    return _record(matrix, p, x)


def _record(matrix: SquareBitMatrix, p: float, x: int) -> PathRecord:
    es = edge_stats(matrix, p)
    return PathRecord(
        n=matrix.n,
        p=p,
        edges=es.e,
        e_star=es.e_star,
        in_window=es.in_window,
        y=math.log(x) if x else None,
        centering=lil_centering(matrix.n, p),
        scale=lil_scale(matrix.n, p),
    )


def _perms(mats, threads):
    if threads > 1 and len(mats) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(permanent_ryser, mats))
    return [permanent_ryser(m) for m in mats]


def run_path(config: ExperimentConfig, threads: int = 1) -> list[PathRecord]:
    """One record per dimension, all minors of the same stream, ascending n."""
    stream = NestedMatrixStream(config.seed, config.p)
    full = stream.minor(config.dims[-1])
    mats = [full.leading(n) for n in config.dims]
    return [_record(m, config.p, x) for m, x in zip(mats, _perms(mats, threads))]


@dataclass(frozen=True)
class ResidualSummary:
    points: tuple[tuple[int, float], ...]
    max_abs: float | None
    slope: float | None  # least-squares slope of |residual| against log n
    slope_stderr: float | None


def residual_summary(points) -> ResidualSummary:
    points = tuple(points)
    if not points:
        return ResidualSummary((), None, None, None)
    ns = np.array([n for n, _ in points], dtype=float)
    res = np.abs(np.array([r for _, r in points]))
    slope = stderr = None
    if len(set(ns.tolist())) >= 2 and len(points) >= 3:
        fit = stats.linregress(np.log(ns), res)
        slope, stderr = float(fit.slope), float(fit.stderr)
    return ResidualSummary(points, float(res.max()), slope, stderr)


def comparison_residuals(path) -> ResidualSummary:
    """(n, residual) for every present record, with max |residual| and the
    |residual| vs log n slope."""
    return residual_summary((r.n, r.residual) for r in path if r.residual is not None)


def running_sup(path) -> list[tuple[int, float]]:
    """Prefix maxima of the normalized deviation, skipping absent values."""
    out = []
    best = -math.inf
    for r in path:
        v = r.normalized
        if v is None:
            continue
        best = max(best, v)
        out.append((r.n, best))
    return out


@dataclass(frozen=True)
class CltSample:
    records: tuple[PathRecord, ...]
    correlation: float | None
    ks_distance: float | None

    @property
    def deviations(self) -> list[float | None]:
        return [r.deviation for r in self.records]

    @property
    def e_stars(self) -> list[float]:
        return [r.e_star for r in self.records]


def clt_sample(n: int, p: float, replicates: int, seed: int, threads: int = 1) -> CltSample:
    """Replicate r uses its own stream seeded from (seed, r); nothing is nested."""
    if n > MAX_CLT_N:
        raise ValueError(f"n = {n} exceeds {MAX_CLT_N}")
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    mats = [NestedMatrixStream(replicate_seed(seed, r), p).minor(n) for r in range(replicates)]
    records = tuple(_record(m, p, x) for m, x in zip(mats, _perms(mats, threads)))
    if replicates == 1:
        return CltSample(records, None, None)
    pairs = [(r.deviation, r.e_star) for r in records if r.deviation is not None]
    corr = None
    if len(pairs) >= 2:
        dev, es = np.array(pairs).T
        if dev.std() > 0 and es.std() > 0:
            corr = float(np.corrcoef(dev, es)[0, 1])
    ks = float(stats.kstest([r.e_star for r in records], "norm").statistic)
    return CltSample(records, corr, ks)
