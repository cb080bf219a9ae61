"""Random bipartite graph models.

``NestedMatrixStream`` is the infinite Bernoulli matrix: entry (i, j) depends
only on (seed, i, j), so the n x n minors of one stream are nested.  Row i is
the output of a Philox counter-based generator keyed by (seed, i); entry
(i, j) is its j-th 64-bit word compared against floor(p * 2^64).  Indices are
0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from lilperm.permanent import MAX_EXACT_N, DimensionError, SquareBitMatrix

SEED_BITS = 64

# Domain tags keep replicate streams for different experiments disjoint.
TAG_GNNM = 1
TAG_CLT = 2


def parse_seed(text: str | int) -> int:
    """Accept a decimal or 0x-prefixed hexadecimal seed."""
    if isinstance(text, int):
        seed = text
    else:
        s = text.strip().lower()
        seed = int(s, 16) if s.startswith("0x") else int(s, 10)
    if not 0 <= seed < 1 << SEED_BITS:
        raise ValueError(f"seed must be in [0, 2^64), got {seed}")
    return seed


def _check_probability(p: float) -> None:
    if not 0.0 < p < 1.0:
        raise ValueError(f"edge probability must lie in (0, 1), got {p}")


def bernoulli_threshold(p: float) -> int:
    """floor(p * 2^64), computed exactly from the binary value of p."""
    return math.floor(Fraction(p) * (1 << 64))


@dataclass(frozen=True)
class NestedMatrixStream:
    seed: int
    p: float

    def __post_init__(self):
        parse_seed(self.seed)
        _check_probability(self.p)

    @property
    def threshold(self) -> int:
        return bernoulli_threshold(self.p)

    def row_words(self, i: int, count: int) -> np.ndarray:
        """First ``count`` uniform 64-bit words of row i."""
        if i < 0 or count < 0:
            raise ValueError("row index and count must be nonnegative")
        key = self.seed | (i << SEED_BITS)
        return np.random.Philox(key=key).random_raw(count)

    def entry(self, i: int, j: int) -> int:
        return int(self.row_words(i, j + 1)[j] < np.uint64(self.threshold))

    def minor(self, n: int) -> SquareBitMatrix:
        """Leading n x n block of the infinite matrix."""
        if not 1 <= n <= MAX_EXACT_N:
            raise DimensionError(f"minor dimension {n} outside [1, {MAX_EXACT_N}]")
        thr = np.uint64(self.threshold)
        weights = [1 << j for j in range(n)]
        rows = []
        for i in range(n):
            bits = self.row_words(i, n) < thr
            rows.append(sum(w for w, b in zip(weights, bits) if b))
        return SquareBitMatrix(n, tuple(rows))


def replicate_rng(seed: int, index: int, tag: int = TAG_GNNM) -> np.random.Generator:
    """Independent generator for replicate ``index`` of a seeded experiment."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([tag, seed, index])))


def replicate_seed(seed: int, index: int, tag: int = TAG_CLT) -> int:
    """A derived 64-bit stream seed for replicate ``index``."""
    state = np.random.SeedSequence([tag, seed, index]).generate_state(1, np.uint64)
    return int(state[0])


def sample_gnnm(n: int, m: int, rng: np.random.Generator) -> SquareBitMatrix:
    """Uniform bipartite graph with exactly m of the n^2 edges (partial Fisher-Yates)."""
    if n < 1:
        raise DimensionError(f"dimension must be >= 1, got {n}")
    cells = n * n
    if not 0 <= m <= cells:
        raise ValueError(f"edge count {m} outside [0, {cells}]")
    order = list(range(cells))
    if m:
        picks = rng.integers(np.arange(m), cells).tolist()
        for i, j in enumerate(picks):
            order[i], order[j] = order[j], order[i]
    rows = [0] * n
    for c in order[:m]:
        rows[c // n] |= 1 << (c % n)
    return SquareBitMatrix(n, tuple(rows))


@dataclass(frozen=True)
class EdgeCountStats:
    n: int
    e: int
    p: float

    @property
    def e_star(self) -> float:
        """(e - p n^2) / sqrt(p (1 - p) n^2)."""
        n2 = self.n * self.n
        return (self.e - self.p * n2) / math.sqrt(self.p * (1.0 - self.p) * n2)

    @property
    def in_window(self) -> bool:
        """Edge count inside [p n^2 / 2, (1 + p) n^2 / 2]."""
        n2 = self.n * self.n
        return self.p * n2 / 2 <= self.e <= (1 + self.p) * n2 / 2


def edge_stats(m: SquareBitMatrix, p: float) -> EdgeCountStats:
    _check_probability(p)
    return EdgeCountStats(m.n, m.edge_count, p)
