"""Exact permanents of square 0/1 matrices and the Bregman-Minc bound.

Matrices are stored as row bitmasks (bit ``j`` of ``rows[i]`` is entry
``(i, j)``).  Permanents are exact Python integers; the compiled kernels
handle every n up to 34, the pure-Python fallback the same contract slowly.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from lilperm import _purepy

MAX_EXACT_N = 34
MAX_BRUTEFORCE_N = 10

if os.environ.get("LILPERM_PURE_PYTHON") == "1":
    _kernels = _purepy
    BACKEND = "python"
else:
    try:
        from lilperm import _kernels
    except ImportError:  # extension not built
        _kernels = _purepy
        BACKEND = "python"
    else:
        BACKEND = "compiled"


class DimensionError(ValueError):
    """Matrix dimension outside the range an engine supports."""


class MatrixParseError(ValueError):
    """Malformed matrix text; carries the 1-based line and column."""

    def __init__(self, message: str, line: int, column: int | None = None):
        self.line = line
        self.column = column
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class SquareBitMatrix:
    """An n x n 0/1 matrix; equivalently a bipartite graph on rows and columns."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError(f"dimension must be >= 1, got {self.n}")
        if len(self.rows) != self.n:
            raise ValueError(f"expected {self.n} rows, got {len(self.rows)}")
        mask = (1 << self.n) - 1
        for i, r in enumerate(self.rows):
            if r < 0 or r & ~mask:
                raise ValueError(f"row {i} has bits outside the first {self.n} columns")

    @classmethod
    def from_rows(cls, rows) -> SquareBitMatrix:
        rows = tuple(int(r) for r in rows)
        return cls(len(rows), rows)

    @classmethod
    def from_array(cls, array) -> SquareBitMatrix:
        a = np.asarray(array)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square 2-d array, got shape {a.shape}")
        if not np.isin(a, (0, 1)).all():
            raise ValueError("entries must be 0 or 1")
        rows = tuple(sum(int(v) << j for j, v in enumerate(row)) for row in a)
        return cls(len(rows), rows)

    @classmethod
    def ones(cls, n: int) -> SquareBitMatrix:
        return cls(n, ((1 << n) - 1,) * n)

    @classmethod
    def zeros(cls, n: int) -> SquareBitMatrix:
        return cls(n, (0,) * n)

    @classmethod
    def identity(cls, n: int) -> SquareBitMatrix:
        return cls(n, tuple(1 << i for i in range(n)))

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    @property
    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows)

    def row_degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def to_array(self) -> np.ndarray:
        return np.array([[self.entry(i, j) for j in range(self.n)] for i in range(self.n)], dtype=np.uint8)

    def leading(self, k: int) -> SquareBitMatrix:
        """Top-left k x k block."""
        if not 1 <= k <= self.n:
            raise DimensionError(f"block size {k} outside [1, {self.n}]")
        mask = (1 << k) - 1
        return SquareBitMatrix(k, tuple(r & mask for r in self.rows[:k]))

    def transpose(self) -> SquareBitMatrix:
        return SquareBitMatrix(
            self.n,
            tuple(sum(self.entry(i, j) << i for i in range(self.n)) for j in range(self.n)),
        )

    def permute_rows(self, perm) -> SquareBitMatrix:
        return SquareBitMatrix(self.n, tuple(self.rows[p] for p in perm))

    def permute_columns(self, perm) -> SquareBitMatrix:
        """Column ``j`` of the result is column ``perm[j]`` of this matrix."""
        return SquareBitMatrix(
            self.n,
            tuple(sum(((r >> perm[j]) & 1) << j for j in range(self.n)) for r in self.rows),
        )

    def with_entry(self, i: int, j: int, value: int) -> SquareBitMatrix:
        rows = list(self.rows)
        if value:
            rows[i] |= 1 << j
        else:
            rows[i] &= ~(1 << j)
        return SquareBitMatrix(self.n, tuple(rows))

    def to_text(self) -> str:
        lines = [str(self.n)]
        lines += ["".join(str(self.entry(i, j)) for j in range(self.n)) for i in range(self.n)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> SquareBitMatrix:
        """Parse the fixture format: a line with n, then n lines of n '0'/'1' characters."""
        lines = text.splitlines()
        while lines and not lines[-1].strip():
            lines.pop()
        if not lines:
            raise MatrixParseError("empty input", 1)
        head = lines[0].strip()
        if not head.isdigit():
            raise MatrixParseError(f"expected the dimension, got {head!r}", 1)
        n = int(head)
        if n < 1:
            raise MatrixParseError("dimension must be >= 1", 1)
        if len(lines) - 1 != n:
            raise MatrixParseError(f"expected {n} matrix rows, got {len(lines) - 1}", len(lines) + 1)
        rows = []
        for i, line in enumerate(lines[1:]):
            line = line.rstrip("\r")
            if len(line) != n:
                col = min(len(line), n) + 1
                raise MatrixParseError(f"expected {n} characters, got {len(line)}", i + 2, col)
            r = 0
            for j, ch in enumerate(line):
                if ch == "1":
                    r |= 1 << j
                elif ch != "0":
                    raise MatrixParseError(f"unexpected character {ch!r}", i + 2, j + 1)
            rows.append(r)
        return cls(n, tuple(rows))


def _check_dim(m: SquareBitMatrix, limit: int) -> None:
    if m.n > limit:
        raise DimensionError(f"dimension {m.n} exceeds the engine limit {limit}")


def permanent_bruteforce(m: SquareBitMatrix) -> int:
    """Sum over permutations of the product of selected entries (n <= 10).

    Enumerates permutations depth first, abandoning a prefix as soon as it
    hits a zero entry; every skipped permutation contributes 0.
    """
    _check_dim(m, MAX_BRUTEFORCE_N)
    return _kernels.bruteforce(m.rows)


def permanent_ryser(m: SquareBitMatrix) -> int:
    """Exact permanent by Ryser inclusion-exclusion, Gray-code subset order."""
    _check_dim(m, MAX_EXACT_N)
    return _kernels.ryser(m.rows)


def permanent_glynn(m: SquareBitMatrix) -> int:
    """Exact permanent by Glynn's signed-row formula.

    Independent of :func:`permanent_ryser`: it sums over row sign vectors
    rather than column subsets, and the compiled version works in five prime
    fields recombined by CRT instead of wrapping 2-adic arithmetic.
    """
    _check_dim(m, MAX_EXACT_N)
    return _kernels.glynn(m.rows)


def log_permanent(m: SquareBitMatrix) -> float | None:
    """Natural log of the exact permanent, or None when it is 0."""
    value = permanent_ryser(m)
    if value == 0:
        return None
    return math.log(value)


def bregman_minc_log_bound(m: SquareBitMatrix) -> float:
    """log of prod_i (d_i!)^(1/d_i) over row degrees d_i.

    A zero-degree row makes the bound 0, returned as ``-inf``; the permanent
    is then 0 as well.
    """
    total = []
    for d in m.row_degrees():
        if d == 0:
            return -math.inf
        total.append(math.lgamma(d + 1) / d)
    return math.fsum(total)


def has_perfect_matching(m: SquareBitMatrix) -> bool:
    """Augmenting-path bipartite matching (Kuhn); independent of the permanent engines."""
    match_col = [-1] * m.n

    def augment(i, seen):
        r = m.rows[i]
        while r:
            b = r & -r
            j = b.bit_length() - 1
            r ^= b
            if seen & b:
                continue
            seen |= b
            if match_col[j] < 0:
                match_col[j] = i
                return True, seen
            ok, seen = augment(match_col[j], seen)
            if ok:
                match_col[j] = i
                return True, seen
        return False, seen

    for i in range(m.n):
        ok, _ = augment(i, 0)
        if not ok:
            return False
    return True

