"""Command-line front end.

Exit codes: 0 success, 1 invalid input (flags, files, odd lengths), 2 a
computation that could not be carried out.  Data goes to files or stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .continuous import HEISENBERG_BOUND
from .errors import ComputationError
from .experiments import (
    CircleRow,
    TheoremReport,
    circle_asymptotics,
    gaussian_widths,
    optimize_window,
    sweep,
    uncertainty_summary,
    verify_main_theorem,
    write_csv,
)
from .periodization import DEFAULT_TAIL_TOL, GaussianParams, gaussian, periodize_sample
from .signal import load_signal, make_grid, save_signal
from .spread import Domain, Measure, spread

__all__ = ["main", "run", "build_parser"]


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: D401 - argparse hook
        raise UsageError(f"{self.prog}: {message}")


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _finite(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text!r}")
    return value


def _positive(text: str) -> float:
    value = _finite(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return value


def _nonnegative(text: str) -> float:
    value = _finite(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative number, got {text!r}")
    return value


def _list_of(convert):
    def parse(text: str) -> list:
        items = [item.strip() for item in text.split(",") if item.strip()]
        if not items:
            raise argparse.ArgumentTypeError("expected a comma-separated list")
        return [convert(item) for item in items]

    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="discrete-uncertainty",
        description="Discrete time-frequency uncertainty: generation, measurement and verification.",
        allow_abbrev=False,
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="generate a signal", allow_abbrev=False)
    gen_sub = gen.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    g = gen_sub.add_parser("gaussian", help="discrete Gaussian window", allow_abbrev=False)
    g.add_argument("--n", type=_positive_int, required=True)
    g.add_argument("--c", type=_positive, required=True, help="Gaussian width")
    g.add_argument("--center", type=_finite, default=0.0)
    g.add_argument("--modulation", type=_finite, default=0.0)
    g.add_argument("--tail-tol", type=_positive, default=DEFAULT_TAIL_TOL)
    g.add_argument("--out", required=True)

    s = sub.add_parser("spread", help="spread measure of a signal", allow_abbrev=False)
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--measure", choices=["variance", "angular", "sparsity", "entropy"], required=True)
    s.add_argument("--domain", choices=["time", "freq"], required=True)
    s.add_argument(
        "--threshold", type=_nonnegative, default=None, help="sparsity threshold (default 1e-12 * ||x||)"
    )

    u = sub.add_parser("uncertainty", help="time and frequency variances and their product", allow_abbrev=False)
    u.add_argument("--in", dest="infile", required=True)

    v = sub.add_parser("verify", help="discrete vs continuous product for a Gaussian", allow_abbrev=False)
    v.add_argument("--n", type=_positive_int, required=True)
    v.add_argument("--c", type=_positive, required=True)

    sw = sub.add_parser("sweep", help="verification over Gaussian widths and sizes", allow_abbrev=False)
    sw.add_argument("--n-list", type=_list_of(int), required=True)
    sw.add_argument("--c-min", type=_positive, required=True)
    sw.add_argument("--c-max", type=_positive, required=True)
    sw.add_argument("--steps", type=_positive_int, required=True)
    sw.add_argument("--out", required=True)
    sw.add_argument("--workers", type=_positive_int, default=1)

    ci = sub.add_parser("circle", help="periodized dilates on the circle", allow_abbrev=False)
    ci.add_argument("--c", type=_positive, required=True)
    ci.add_argument("--a-list", type=_list_of(_positive), required=True)
    ci.add_argument("--out", required=True)

    op = sub.add_parser("optimize", help="projected gradient descent of the product", allow_abbrev=False)
    op.add_argument("--n", type=_positive_int, required=True)
    op.add_argument("--seed", type=int, required=True)
    op.add_argument("--iters", type=_positive_int, required=True)
    op.add_argument("--step", type=_positive, required=True)
    op.add_argument("--out", required=True)
    op.add_argument("--trace")
    return parser


def _check_n(n: int) -> None:
    make_grid(n)


def _check_out(path: str) -> None:
    parent = Path(path).resolve().parent
    if not parent.is_dir():
        raise UsageError(f"output directory does not exist: {parent}")


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _validate(args) -> None:
    cmd = args.command
    if cmd in ("gen", "verify", "optimize"):
        _check_n(args.n)
    if cmd == "sweep":
        for n in args.n_list:
            _check_n(n)
        gaussian_widths(args.c_min, args.c_max, args.steps)
    if cmd == "gen":
        GaussianParams(args.c, args.center, args.modulation)
    for name in ("out", "trace"):
        path = getattr(args, name, None)
        if path:
            _check_out(path)
    if cmd in ("spread", "uncertainty"):
        args.signal = load_signal(args.infile)


def _dispatch(args) -> None:
    cmd = args.command
    if cmd == "gen":
        params = GaussianParams(args.c, args.center, args.modulation)
        x = periodize_sample(gaussian(params), make_grid(args.n), args.tail_tol)
        save_signal(x, args.out)
    elif cmd == "spread":
        x = args.signal
        measure = {"variance": Measure.CIRCULAR_VARIANCE}.get(args.measure, args.measure)
        domain = Domain.FREQUENCY if args.domain == "freq" else Domain.TIME
        threshold = args.threshold
        if threshold is None:
            threshold = 1e-12 * x.norm
        _emit(spread(x, measure, domain, threshold).to_json())
    elif cmd == "uncertainty":
        _emit(uncertainty_summary(args.signal))
    elif cmd == "verify":
        report = verify_main_theorem(gaussian(GaussianParams(args.c)), make_grid(args.n), c=args.c)
        _emit(report.to_json())
    elif cmd == "sweep":
        rows = sweep(args.c_min, args.c_max, args.steps, args.n_list, max_workers=args.workers)
        columns = [f for f in TheoremReport.__dataclass_fields__]
        write_csv(rows, args.out, columns)
    elif cmd == "circle":
        rows = circle_asymptotics(gaussian(GaussianParams(args.c)), args.a_list)
        write_csv(rows, args.out, list(CircleRow.__dataclass_fields__))
    elif cmd == "optimize":
        x, trace = optimize_window(make_grid(args.n), args.seed, args.iters, args.step)
        save_signal(x, args.out)
        if args.trace:
            write_csv(
                [{"iteration": it, "product": p} for it, p in trace.history],
                args.trace,
                ["iteration", "product"],
            )
        _emit(
            {
                "seed": trace.seed,
                "iterations": trace.iterations,
                "initial_product": trace.initial_product,
                "final_product": trace.final_product,
                "ratio_to_bound": trace.final_product / HEISENBERG_BOUND,
            }
        )


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _validate(args)
    except ComputationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        _dispatch(args)
    except ComputationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run())
