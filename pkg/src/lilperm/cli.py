"""Command-line front end.

Every subcommand writes its result (CSV or a short report) to stdout or
``--out`` and, with ``--manifest``, a JSON run manifest holding the full
parameter set and the SHA-256 of the output bytes.  Output depends only on
the flags: ``--threads`` changes scheduling, never results.

Exit codes: 0 success, 1 usage, 2 budget, 3 invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from pathlib import Path

from lilperm import __version__
from lilperm.asymptotics import (
    AsymptoticsDomainError,
    ModelParams,
    lil_centering,
    lil_scale,
    log_expected_matchings_approx,
    log_expected_matchings_exact,
    log_moment_bound,
)
from lilperm.lil import ExperimentConfig, clt_sample, geometric_dims, run_path, running_sup
from lilperm.models import NestedMatrixStream, parse_seed
from lilperm.moments import (
    BudgetError,
    census_tuples,
    estimate_kth_moment,
    exhaustive_kth_moment,
    log_ratio_to_mean_power,
    verify_bound1,
)
from lilperm.permanent import (
    BACKEND,
    MAX_EXACT_N,
    DimensionError,
    MatrixParseError,
    SquareBitMatrix,
    bregman_minc_log_bound,
    permanent_ryser,
)

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_INVARIANT = 0, 1, 2, 3
SEED_ENV = "LILPERM_SEED"

LIL_COLUMNS = [
    "seed", "p", "n", "edges", "e_star", "y_present", "y", "centering", "deviation",
    "loglog_n", "loglog_n2", "normalized", "residual", "running_sup",
]
CLT_COLUMNS = ["replicate", "n", "p", "edges", "e_star", "y_present", "y", "centering", "deviation", "normalized"]
MOMENT_COLUMNS = ["n", "m", "k", "log_mean", "stderr", "replicates", "seed", "ratio", "status"]
CENSUS_COLUMNS = ["n", "k", "a", "M_a", "log_bound_basic", "slack"]
EXPECT_COLUMNS = ["n", "m", "p_m", "log_expected_exact", "log_expected_approx", "gap"]
BOUNDS_COLUMNS = ["n", "k", "a", "log_bound_basic", "log_bound_refined"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(x) -> str:
    """12 significant digits; None as an empty field."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".12g")


def _csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _seed(value) -> int:
    try:
        return parse_seed(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _probability(value) -> float:
    p = float(value)
    if not 0 < p < 1:
        raise argparse.ArgumentTypeError(f"probability must lie in (0, 1), got {value}")
    return p


def _default_seed() -> int:
    return parse_seed(os.environ.get(SEED_ENV, "0"))


# ---------------------------------------------------------------- subcommands


def cmd_perm(args) -> tuple[str, int]:
    if args.random is not None:
        n_s, p_s, seed_s = args.random
        try:
            n = int(n_s)
            p = _probability(p_s)
            seed = parse_seed(seed_s)
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise UsageError(f"--random expects N P SEED: {exc}") from None
        if n > MAX_EXACT_N:
            raise DimensionError(f"dimension {n} exceeds {MAX_EXACT_N}")
        matrix = NestedMatrixStream(seed, p).minor(n)
    elif args.matrix is not None:
        try:
            text = Path(args.matrix).read_text()
        except OSError as exc:
            raise UsageError(str(exc)) from None
        matrix = SquareBitMatrix.from_text(text)
    else:
        raise UsageError("give a matrix file or --random N P SEED")
    if matrix.n > MAX_EXACT_N:
        raise DimensionError(f"dimension {matrix.n} exceeds {MAX_EXACT_N}")
    value = permanent_ryser(matrix)
    lines = [
        f"n: {matrix.n}",
        f"engine: ryser ({BACKEND})",
        f"permanent: {value}",
        f"log_permanent: {fmt(math.log(value) if value else None)}",
        f"bregman_minc_log_bound: {fmt(bregman_minc_log_bound(matrix))}",
    ]
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_moments(args) -> tuple[str, int]:
    rows = []
    code = EXIT_OK
    for n in args.n:
        for m in args.m:
            for k in args.k:
                try:
                    if not 0 <= m <= n * n:
                        raise BudgetError(f"m = {m} outside [0, n^2]")
                    if args.exhaustive:
                        exact = exhaustive_kth_moment(n, m, k)
                        log_mean = math.log(exact) if exact else None
                        row_seed, reps, stderr = None, math.comb(n * n, m), 0.0
                    else:
                        est = estimate_kth_moment(n, m, k, args.reps, args.seed, threads=args.threads)
                        log_mean, stderr, reps, row_seed = est.log_mean, est.stderr, est.replicates, est.seed
                    log_ex = log_expected_matchings_exact(ModelParams(n, m))
                    ratio = None
                    if log_mean is not None and log_ex is not None:
                        ratio = math.exp(log_mean - k * log_ex)
                    rows.append([n, m, k, log_mean, stderr, reps, row_seed, ratio, "ok"])
                except BudgetError as exc:
                    rows.append([n, m, k, None, None, None, None, None, f"budget: {exc}"])
                    code = EXIT_BUDGET
    return _csv(MOMENT_COLUMNS, rows), code


def cmd_census(args) -> tuple[str, int]:
    try:
        census = census_tuples(args.n, args.k)
    except BudgetError as exc:
        raise UsageError(str(exc)) from None
    report = verify_bound1(census)
    rows = [[args.n, args.k, r.a, r.count, r.log_bound, r.slack] for r in report.rows]
    out = _csv(CENSUS_COLUMNS, rows)
    if census.total != math.factorial(args.n) ** args.k or report.violations:
        return out, EXIT_INVARIANT
    return out, EXIT_OK


def _lil_dims(args) -> tuple[int, ...]:
    if args.n_min < 1 or args.n_max > MAX_EXACT_N or args.n_min > args.n_max:
        raise UsageError(f"need 1 <= n-min <= n-max <= {MAX_EXACT_N}")
    if args.subseq is not None:
        if args.subseq < 2:
            raise UsageError("--subseq needs an integer >= 2")
        dims = geometric_dims(args.subseq, args.n_min, args.n_max)
        if not dims:
            raise UsageError("no powers of the subsequence base in [n-min, n-max]")
        return dims
    return tuple(range(args.n_min, args.n_max + 1))


def cmd_lil(args) -> tuple[str, int]:
    config = ExperimentConfig(args.seed, args.p, _lil_dims(args))
    path = run_path(config, threads=args.threads)
    sup = dict(running_sup(path))
    rows = []
    for r in path:
        rows.append([
            config.seed, r.p, r.n, r.edges, r.e_star, r.y is not None, r.y, r.centering, r.deviation,
            r.loglog_n, r.loglog_n2, r.normalized, r.residual, sup.get(r.n),
        ])
    if args.svg:
        from lilperm.svg import trajectory_svg

        Path(args.svg).write_text(trajectory_svg(path, title=f"seed {config.seed}, p = {config.p}"))
    return _csv(LIL_COLUMNS, rows), EXIT_OK


def cmd_clt(args) -> tuple[str, int]:
    try:
        sample = clt_sample(args.n, args.p, args.reps, args.seed, threads=args.threads)
    except ValueError as exc:
        raise BudgetError(str(exc)) from None
    rows = [
        [i, r.n, r.p, r.edges, r.e_star, r.y is not None, r.y, r.centering, r.deviation, r.normalized]
        for i, r in enumerate(sample.records)
    ]
    out = _csv(CLT_COLUMNS, rows)
    if args.reps > 1:
        out += f"# summary: replicates={args.reps} correlation={fmt(sample.correlation)} ks={fmt(sample.ks_distance)}\n"
    return out, EXIT_OK


def cmd_expect(args) -> tuple[str, int]:
    rows = []
    for n in args.n:
        ms = args.m if args.m else [n * n // 2]
        for m in ms:
            params = ModelParams(n, m)
            exact = log_expected_matchings_exact(params)
            approx = log_expected_matchings_approx(params) if m > 0 else None
            gap = None if exact is None or approx is None else exact - approx
            rows.append([n, m, params.p_m, exact, approx, gap])
    out = _csv(EXPECT_COLUMNS, rows)
    if args.p is not None:
        for n in args.n:
            out += f"# centering n={n} p={fmt(args.p)}: {fmt(lil_centering(n, args.p))} scale: {fmt(lil_scale(n, args.p))}\n"
    return out, EXIT_OK


def cmd_bounds(args) -> tuple[str, int]:
    if args.k < 2:
        raise UsageError("--k must be >= 2")
    rows = []
    for a in range((args.k - 1) * args.n + 1):
        try:
            refined = log_moment_bound(args.n, args.k, a, "refined")
        except AsymptoticsDomainError:
            refined = None
        rows.append([args.n, args.k, a, log_moment_bound(args.n, args.k, a, "basic"), refined])
    return _csv(BOUNDS_COLUMNS, rows), EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1, help="worker threads (default: all cores)")
    common.add_argument("--config", type=Path, help="JSON file of flag defaults; explicit flags win")
    common.add_argument("--out", type=Path, help="write output here instead of stdout")
    common.add_argument("--manifest", type=Path, help="write a JSON run manifest here")

    parser = _Parser(prog="lilperm", description="Exact permanents and log-permanent LIL experiments.")
    parser.add_argument("--version", action="version", version=f"lilperm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("perm", parents=[common], help="exact permanent of one matrix")
    p.add_argument("matrix", nargs="?", help="matrix text file: n, then n rows of 0/1")
    p.add_argument("--random", nargs=3, metavar=("N", "P", "SEED"), help="use the N x N minor of a seeded stream")
    p.set_defaults(func=cmd_perm)

    p = sub.add_parser("moments", parents=[common], help="k-th moments of X_{n,m}")
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--m", type=int, nargs="+", required=True)
    p.add_argument("--k", type=int, nargs="+", default=[1])
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--seed", type=_seed, default=None)
    p.add_argument("--exhaustive", action="store_true", help="enumerate every graph instead of sampling")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("census", parents=[common], help="tuple census M(a) with the counting bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("lil", parents=[common], help="nested-minor path along one stream")
    p.add_argument("--seed", type=_seed, default=None)
    p.add_argument("--p", type=_probability, default=0.5)
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=20)
    p.add_argument("--subseq", type=int, metavar="C", help="only dimensions C, C^2, C^3, ...")
    p.add_argument("--svg", type=Path, help="also write a trajectory chart")
    p.set_defaults(func=cmd_lil)

    p = sub.add_parser("clt", parents=[common], help="independent replicates at fixed n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=_probability, default=0.5)
    p.add_argument("--reps", type=int, default=300)
    p.add_argument("--seed", type=_seed, default=None)
    p.set_defaults(func=cmd_clt)

    p = sub.add_parser("expect", parents=[common], help="exact and approximate log E X_{n,m}")
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--m", type=int, nargs="+", help="edge counts (default n^2 // 2)")
    p.add_argument("--p", type=_probability, help="also report the LIL centering and scale")
    p.set_defaults(func=cmd_expect)

    p = sub.add_parser("bounds", parents=[common], help="log bounds on M(a)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_bounds)
    return parser


def _parse(parser, argv):
    args = parser.parse_args(argv)
    if args.config is not None:
        try:
            config = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            parser.exit(EXIT_USAGE, f"lilperm: error: cannot read config {args.config}: {exc}\n")
        subparser = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in subparser._actions}
        unknown = set(config) - known
        if unknown:
            parser.exit(EXIT_USAGE, f"lilperm: error: unknown config keys: {', '.join(sorted(unknown))}\n")
        subparser.set_defaults(**{k.replace("-", "_"): v for k, v in config.items()})
        args = parser.parse_args(argv)
        for key in ("seed",):
            if isinstance(getattr(args, key, None), str):
                setattr(args, key, parse_seed(getattr(args, key)))
    if hasattr(args, "seed") and args.seed is None:
        args.seed = _default_seed()
    if args.threads < 1:
        parser.exit(EXIT_USAGE, "lilperm: error: --threads must be >= 1\n")
    return args


def _manifest(args, checksum: str) -> dict:
    skip = {"func", "threads", "config", "out", "manifest", "svg"}
    params = {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(vars(args).items()) if k not in skip}
    return {
        "subcommand": args.command,
        "parameters": params,
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "output_sha256": checksum,
    }


def main(argv=None) -> int:
    parser = build_parser()
    args = _parse(parser, argv)
    try:
        text, code = args.func(args)
    except (UsageError, MatrixParseError) as exc:
        print(f"lilperm {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BudgetError, DimensionError) as exc:
        print(f"lilperm {args.command}: budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    data = text.encode()
    if args.out is not None:
        args.out.write_bytes(data)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
    if args.manifest is not None:
        digest = hashlib.sha256(data).hexdigest()
        args.manifest.write_text(json.dumps(_manifest(args, digest), indent=2, sort_keys=True) + "\n")
    if code == EXIT_INVARIANT:
        print(f"lilperm {args.command}: invariant violation", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
