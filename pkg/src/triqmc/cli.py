"""Command line entry point: ``triqmc {points,quality,walsh-decay,converge,verify}``.

Every subcommand writes CSV to ``--out`` (stdout when omitted) and exits 0
exactly when its checks pass.  A ``--config`` file of ``key = value`` lines
may set any option; options given on the command line win.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import numpy as np

from .checks import CHECKS, DEFAULT_SEED, run_checks
from .digital import address_codes, generator_from_option, nu_codes, precision_for, triangle_points
from .harness import composite_counts, convergence_study, fit_rate, function_from_option, study_counts
from .partition import Triangle
from .quality import quality_table
from .walsh import MAX_LEVEL, verify_decay_bound

DEFAULT_MAX_LEVEL = 10
SUBCOMMANDS = ("points", "quality", "walsh-decay", "converge", "verify")


def _triangle(text):
    try:
        return Triangle.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _check_list(text):
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated check numbers, got {text!r}") from None


def _m_range(text):
    try:
        lo, hi = (int(s) for s in text.split(".."))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a range such as 1..12, got {text!r}") from None
    if not 1 <= lo <= hi:
        raise argparse.ArgumentTypeError(f"need 1 <= start <= end, got {text!r}")
    return range(lo, hi + 1)


def _flag(text):
    if isinstance(text, bool):
        return text
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--triangle", type=_triangle, default="0,0,1,0,0,1", help="vertices as Ax,Ay,Bx,By,Cx,Cy")
    g.add_argument("--gen", default="basu-owen", help="basu-owen, pascal or file:PATH")
    g.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomised checks")
    g.add_argument("--out", type=Path, default=None, help="CSV output path (default: stdout)")
    g.add_argument("--jobs", type=_positive_int, default=1, help="worker threads")
    g.add_argument("--config", type=Path, default=None, help="file of key = value defaults")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="triqmc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("points", parents=[common], help="first N points of the sequence in the triangle")
    p.add_argument("--n-points", "--count", dest="n_points", type=_positive_int, default=16, help="number of points N")

    p = sub.add_parser("quality", parents=[common], help="dual-net weights and t-values")
    p.add_argument("--m-range", type=_m_range, default="1..12", help="inclusive range such as 1..12")
    p.add_argument("--n", type=int, default=None, help="row precision (default: n = m)")

    p = sub.add_parser("walsh-decay", parents=[common], help="Walsh coefficient decay check")
    p.add_argument("--function", default="exp-sum", help="poly:SPEC or a built-in name")
    p.add_argument("--n", type=int, default=4, help="partition level")
    p.add_argument("--norm", type=float, default=None, help="C^2 norm bound of the function")
    p.add_argument("--allow-large", type=_flag, nargs="?", const=True, default=False,
                   help=f"permit levels above {DEFAULT_MAX_LEVEL} (up to {MAX_LEVEL})")

    p = sub.add_parser("converge", parents=[common], help="QMC error against N")
    p.add_argument("--function", default="exp-sum", help="poly:SPEC or a built-in name")
    p.add_argument("--m-min", type=int, default=6)
    p.add_argument("--m-max", type=int, default=16)
    p.add_argument("--non-powers", type=_flag, nargs="?", const=True, default=False,
                   help="add N = 2^m + 2^(m-2) + 1 and the 3, 5, 11, 23, ... sweep")
    p.add_argument("--check", type=_flag, nargs="?", const=True, default=False,
                   help="fail unless the fitted rate lies in [0.85, 1.15] and max/median of err*2^m/m^2 <= 10")

    p = sub.add_parser("verify", parents=[common], help="run the numbered checks")
    p.add_argument("--checks", type=_check_list, default=None, help=f"subset such as 1,5,10 (1..{max(CHECKS)})")
    return parser


def _reorder(argv: list[str]) -> list[str]:
    """Allow global options before the subcommand by moving them after it."""
    for k, tok in enumerate(argv):
        if tok in SUBCOMMANDS:
            return [tok] + argv[k + 1 :] + argv[:k]
    return argv


def read_config(path: Path) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", type=Path)
    known, _ = pre.parse_known_args(argv)
    if known.config is None:
        return
    values = read_config(known.config)
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    command = next((t for t in argv if t in SUBCOMMANDS), None)
    target = subparsers.choices.get(command)
    if target is None:
        return
    dests = {a.dest for a in target._actions}
    unknown = sorted(set(values) - dests)
    if unknown:
        raise ValueError(f"{known.config}: unknown keys for {command}: {', '.join(unknown)}")
    target.set_defaults(**values)


def _num(x) -> str:
    """Shortest round-tripping decimal for a float."""
    return repr(float(x))


class _Output:
    def __init__(self, path):
        self.path = path

    def __enter__(self):
        self.fh = open(self.path, "w", newline="") if self.path else sys.stdout
        return csv.writer(self.fh, lineterminator="\n")

    def __exit__(self, *exc):
        if self.path:
            self.fh.close()


def cmd_points(args) -> int:
    gen = generator_from_option(args.gen)
    N = args.n_points
    pts = triangle_points(gen, args.triangle, N)
    n = precision_for(gen, N)
    nu = nu_codes(address_codes(gen, N, n), n)
    with _Output(args.out) as w:
        w.writerow(["h", "x", "y", "nu"])
        for h, ((x, y), v) in enumerate(zip(pts, nu)):
            w.writerow([h, _num(x), _num(y), int(v)])
    return 0


def cmd_quality(args) -> int:
    rows = quality_table(generator_from_option(args.gen), args.m_range, args.n)
    with _Output(args.out) as w:
        w.writerow(["m", "n", "mu1_min", "v_min", "t", "bound_holds"])
        for r in rows:
            w.writerow([r["m"], r["n"], r["mu1_min"], r["v_min"], r["t"], r["bound_holds"]])
    return 0 if all(r["bound_holds"] for r in rows) else 1


def cmd_walsh_decay(args) -> int:
    cap = MAX_LEVEL if args.allow_large else DEFAULT_MAX_LEVEL
    if not 1 <= args.n <= cap:
        raise ValueError(f"--n must be in 1..{cap}" + ("" if args.allow_large else " (use --allow-large for more)"))
    f = function_from_option(args.function, args.norm)
    T = args.triangle
    norm = args.norm if args.norm is not None else f.norm_bound(T)
    rep = verify_decay_bound(f, T, args.n, f_norm=norm)
    with _Output(args.out) as w:
        w.writerow(["K_encoding", "v_of_K", "coeff", "bound", "ratio"])
        for r in rep.rows:
            w.writerow([_k_text(r.code, args.n), r.v, _num(r.coeff), _num(r.bound), _num(r.ratio)])
    print(
        f"n={args.n} norm={norm:.6g} D={rep.D:.6g} rows={len(rep.rows)} "
        f"violations={rep.violations} max_ratio={rep.max_ratio:.4g}",
        file=sys.stderr,
    )
    return 0 if rep.violations == 0 else 1


def _k_text(code: int, n: int) -> str:
    """Rows of K top to bottom, e.g. ``10/01``."""
    return "/".join(f"{(code >> 2 * i) & 1}{(code >> (2 * i + 1)) & 1}" for i in range(n))


def cmd_converge(args) -> int:
    if not 1 <= args.m_min <= args.m_max:
        raise ValueError("need 1 <= m-min <= m-max")
    f = function_from_option(args.function)
    gen = generator_from_option(args.gen)
    T = args.triangle
    ms = range(args.m_min, args.m_max + 1)
    rows = convergence_study(f, gen, T, ms, include_non_powers=args.non_powers, jobs=args.jobs)
    if args.non_powers:
        extra = study_counts(f, gen, T, composite_counts(2**args.m_max), rows[0].exact_value, args.jobs)
        rows = sorted({r.N: r for r in rows + extra}.values(), key=lambda r: r.N)
    with _Output(args.out) as w:
        w.writerow(["m", "N", "qmc", "exact", "abs_error", "bound_m2_over_2m"])
        for r in rows:
            lg = math.log2(r.N)
            w.writerow([r.m, r.N, _num(r.qmc_value), _num(r.exact_value), _num(r.abs_error), _num(lg * lg / r.N)])
    powers = [r for r in rows if r.N & (r.N - 1) == 0 and args.m_min <= r.m <= args.m_max]
    alpha = fit_rate(powers)
    scaled = np.array([r.scaled_m2 for r in powers])
    spread = float(scaled.max() / np.median(scaled)) if scaled.size and np.median(scaled) > 0 else math.nan
    print(f"fitted alpha={alpha:.4f} max/median(err*2^m/m^2)={spread:.3f}", file=sys.stderr)
    if not args.check:
        return 0
    return 0 if 0.85 <= alpha <= 1.15 and spread <= 10 else 1


def cmd_verify(args) -> int:
    results = run_checks(args.checks, seed=args.seed, jobs=args.jobs)
    for r in results:
        print(r.line())
    if args.out is not None:
        with _Output(args.out) as w:
            w.writerow(["number", "name", "passed", "seconds", "detail"])
            for r in results:
                w.writerow([r.number, r.name, r.passed, f"{r.seconds:.3f}", r.detail])
    return 0 if all(r.passed for r in results) else 1


COMMANDS = {
    "points": cmd_points,
    "quality": cmd_quality,
    "walsh-decay": cmd_walsh_decay,
    "converge": cmd_converge,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    argv = _reorder(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        _apply_config(parser, argv)
    except (OSError, ValueError) as exc:
        print(f"triqmc: error: {exc}", file=sys.stderr)
        return 2
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"triqmc: error: {exc}", file=sys.stderr)
        return 2
