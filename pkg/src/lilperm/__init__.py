"""Exact 0/1 permanents and iterated-logarithm experiments on random bipartite graphs."""

__version__ = "0.1.0"

from lilperm.permanent import (  # noqa: E402
    BACKEND,
    MAX_EXACT_N,
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
from lilperm.models import NestedMatrixStream, parse_seed, sample_gnnm  # noqa: E402

__all__ = [
    "BACKEND",
    "MAX_EXACT_N",
    "DimensionError",
    "MatrixParseError",
    "NestedMatrixStream",
    "SquareBitMatrix",
    "bregman_minc_log_bound",
    "has_perfect_matching",
    "log_permanent",
    "parse_seed",
    "permanent_bruteforce",
    "permanent_glynn",
    "permanent_ryser",
    "sample_gnnm",
]
