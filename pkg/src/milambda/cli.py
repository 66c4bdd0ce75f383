"""``milambda`` command line.

Exit codes: 0 success, 1 usage or data error, 2 degenerate analysis (no
detectable dependence, so Lambda is undefined).
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

import numpy as np

from . import __version__
from .bds import BdsConfig, bds_residuals
from .core_stats import PairedSample, fit_polynomial
from .datagen import FAMILIES, GenSpec, generate
from .errors import MilambdaError
from .experiments import crossover_sweep, parse_grid
from .pipeline import LambdaConfig, compute_lambda, lambda_profile
from .report import ColumnData, Report, read_pair_csv, write_pair_csv, write_sequence_csv

EXIT_OK, EXIT_ERROR, EXIT_DEGENERATE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _bins(value: str):
    return "auto" if value == "auto" else int(value)


def _add_estimator_flags(p):
    g = p.add_argument_group("estimator")
    g.add_argument("--bins", type=_bins, default="auto",
                   help="equal-frequency bins per axis, or 'auto' (default)")
    g.add_argument("--order", type=int, default=1, help="polynomial order of the fit (default 1)")
    g.add_argument("--no-correction", action="store_true", help="disable Miller-Madow correction")
    g.add_argument("--mm-divisor", type=float, default=2.0,
                   help="correction is (m-1)/(divisor*N); default 2")
    g.add_argument("--min-information", type=float, default=0.025,
                   help="I(x,y) below this (nats) is reported as no dependence")
    g.add_argument("--symmetric", action="store_true",
                   help="also regress x on y and report the smaller Lambda")


def _add_bds_flags(p, allow_disable=True):
    g = p.add_argument_group("BDS test")
    g.add_argument("--bds-m", type=int, default=2, help="embedding dimension (default 2)")
    g.add_argument("--bds-eta", type=float, default=0.5,
                   help="threshold as a multiple of the residual std (default 0.5)")
    g.add_argument("--bds-eta-absolute", action="store_true",
                   help="treat --bds-eta as an absolute distance")
    g.add_argument("--bds-ordering", choices=("x", "index"), default="x",
                   help="arrange residuals by x (default) or keep row order")
    if allow_disable:
        g.add_argument("--no-bds", action="store_true", help="skip the BDS test")


def _add_input_flags(p):
    p.add_argument("input", nargs="?", help="CSV file, '-' for stdin")
    p.add_argument("--columns", help="two column names or 0-based indices, e.g. 'x,y'")
    p.add_argument("--family", choices=[f for f in FAMILIES if f != "binary_markov"],
                   help="analyze a generated sample instead of a file")
    p.add_argument("-n", "--n", type=int, default=10_000, help="generated sample size")
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                   help="generator parameter, e.g. rho=0.9 (repeatable)")
    p.add_argument("--seed", type=int, default=None, help="generator seed")


def _add_output_flags(p):
    p.add_argument("--format", choices=("text", "json"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="milambda", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"milambda {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="Lambda and BDS report for two columns")
    _add_input_flags(p)
    _add_estimator_flags(p)
    _add_bds_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("profile", help="Lambda for polynomial orders 1..K")
    _add_input_flags(p)
    _add_estimator_flags(p)
    p.add_argument("--max-order", type=int, default=3)
    _add_output_flags(p)

    p = sub.add_parser("crossover", help="sweep a in y = 3x + a x^k + noise against BDS")
    p.add_argument("--poly-order", type=int, choices=(2, 3), default=2,
                   help="power of the nonlinear term")
    p.add_argument("--grid", default="0:0.3:0.02", help="'start:stop:step' or comma list")
    p.add_argument("--seeds", type=int, default=20, help="replications per grid value")
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("-n", "--n", type=int, default=10_000)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--stop-at-crossover", action="store_true")
    _add_estimator_flags(p)
    _add_bds_flags(p, allow_disable=False)
    _add_output_flags(p)

    p = sub.add_parser("generate", help="write a synthetic dataset as CSV")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("-n", "--n", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                   help="rho, a, order, rate or flip_prob (repeatable)")
    p.add_argument("-o", "--output", default="-", help="output path, '-' for stdout")
    return parser


def _params(items) -> dict:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep:
            raise MilambdaError(f"--param expects KEY=VALUE, got {item!r}")
        out[key.strip()] = float(value)
    return out


def _lambda_config(args) -> LambdaConfig:
    return LambdaConfig(
        bins=args.bins,
        model_order=args.order,
        correction=not args.no_correction,
        mm_divisor=args.mm_divisor,
        min_information=args.min_information,
        direction="symmetric" if args.symmetric else "y_on_x",
    )


def _bds_config(args) -> BdsConfig:
    return BdsConfig(embedding=args.bds_m, eta_multiplier=args.bds_eta,
                     absolute=args.bds_eta_absolute)


def _load(args) -> ColumnData:
    if args.family:
        seed = args.seed = 0 if args.seed is None else args.seed
        sample = generate(GenSpec(args.family, args.n, seed, _params(args.param)))
        source = f"generated:{args.family}"
        if args.param:
            source += ":" + ",".join(args.param)
        return ColumnData(sample.x, sample.y, ("x", "y"), 0, f"{source}:n={args.n}:seed={seed}")
    if args.input is None:
        raise MilambdaError("give an input CSV path, '-' for stdin, or --family")
    columns = None
    if args.columns:
        parts = [c.strip() for c in args.columns.split(",")]
        if len(parts) != 2:
            raise MilambdaError(f"--columns needs exactly two selectors, got {args.columns!r}")
        columns = (parts[0], parts[1])
    if args.input == "-":
        return read_pair_csv(sys.stdin.read(), columns, source="<stdin>")
    with open(args.input, encoding="utf-8") as fh:
        return read_pair_csv(fh.read(), columns, source=args.input)


def analyze(data: ColumnData, lambda_config: LambdaConfig, bds_config: BdsConfig | None,
            bds_ordering: str = "x", seed: int | None = None) -> Report:
    """Lambda report plus the BDS test on the same order-k residuals."""
    notes = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        sample = PairedSample(data.x, data.y)
        report = compute_lambda(sample, lambda_config)
        bds = None
        if bds_config is not None:
            fit = fit_polynomial(sample, lambda_config.model_order)
            try:
                bds = bds_residuals(sample.x, fit.residuals, bds_config, ordering=bds_ordering)
            except MilambdaError as exc:
                notes.append(f"BDS test skipped: {exc}")
    notes.extend(str(w.message) for w in caught)
    return Report(data, report, bds, lambda_config, bds_config, bds_ordering, seed, notes)


def cmd_analyze(args) -> int:
    data = _load(args)
    bds_config = None if args.no_bds else _bds_config(args)
    report = analyze(data, _lambda_config(args), bds_config, args.bds_ordering, args.seed)
    print(report.to_json() if args.format == "json" else report.to_text())
    return EXIT_DEGENERATE if report.lambda_report.degenerate else EXIT_OK


def cmd_profile(args) -> int:
    data = _load(args)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        reports = lambda_profile(PairedSample(data.x, data.y), _lambda_config(args), args.max_order)
    if args.format == "json":
        rows = []
        for r in reports:
            d = r.to_dict()
            d.pop("config")
            rows.append(d)
        print(json.dumps({"source": data.source, "sha256": data.digest, "profile": rows}, indent=2))
    else:
        print("order      I(x,y)     I(x,y')    Lambda")
        for r in reports:
            lam = "   undef" if r.lam is None else f"{r.lam:8.4f}"
            print(f"{r.order:>5}  {r.i_xy:10.5f}  {r.i_xyprime:10.5f}  {lam}")
    return EXIT_DEGENERATE if all(r.degenerate for r in reports) else EXIT_OK


def cmd_crossover(args) -> int:
    result = crossover_sweep(
        args.poly_order,
        parse_grid(args.grid),
        range(args.seed, args.seed + args.seeds),
        n=args.n,
        lambda_config=_lambda_config(args),
        bds_config=_bds_config(args),
        alpha=args.alpha,
        ordering=args.bds_ordering,
        stop_at_crossover=args.stop_at_crossover,
        workers=args.workers,
    )
    if args.format == "json":
        print(json.dumps(result.to_dict(), indent=2))
        return EXIT_OK
    print(f"{'a':>8}  {'mean Lambda':>11}  {'mean BDS':>9}  {'reject':>6}")
    for row in result.rows:
        lam = "      undef" if row.mean_lambda is None else f"{row.mean_lambda:11.4f}"
        print(f"{row.a:8.4f}  {lam}  {row.mean_statistic:9.3f}  {row.reject_fraction:6.2f}")
    if result.crossover_a is None:
        print("no grid value reached majority rejection")
    else:
        lam = "undefined" if result.crossover_lambda is None else f"{result.crossover_lambda:.4f}"
        print(f"crossover a = {result.crossover_a:g}, Lambda = {lam}")
    return EXIT_OK


def cmd_generate(args) -> int:
    out = generate(GenSpec(args.family, args.n, args.seed, _params(args.param)))
    if args.output == "-":
        stream, close = sys.stdout, False
    else:
        stream, close = open(args.output, "w", encoding="utf-8", newline=""), True
    try:
        if isinstance(out, np.ndarray):
            write_sequence_csv(stream, out)
        else:
            write_pair_csv(stream, out.x, out.y)
    finally:
        if close:
            stream.close()
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "profile": cmd_profile,
    "crossover": cmd_crossover,
    "generate": cmd_generate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (MilambdaError, OSError) as exc:
        print(f"milambda: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
