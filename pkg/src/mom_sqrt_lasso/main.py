"""Command-line front end: fit, simulate, bench, rates, plot.

Exit codes: 0 on success, 2 for bad input (usage errors, unparsable files),
3 for configurations that cannot run on the given data.
"""

import argparse
import logging
import sys
from typing import List, Optional

from .bench.config import EstimatorName, load_config
from .bench.plots import PlotFormat, PlotKind, breakdown_series, error_vs_n_series, render, trace_series
from .bench.rates import compute_rates, write_rates
from .bench.records import read_records, read_trace, write_trace
from .bench.runner import run_bench, write_bench
from .core.criterion import DEFAULT_C
from .data.contaminate import ContaminationModel
from .data.csv_io import read_dataset_csv, write_dataset_csv, write_truth_json
from .data.dataset import Dataset
from .data.generate import BetaPattern, Design, GenSpec, NoiseLaw, generate
from .estimators.adaptive import AdaptiveConfig, fit_adaptive
from .estimators.baselines import lasso_baseline, sqrt_lasso_baseline
from .estimators.fixed import fit_with_blocks
from .estimators.result import FitResult
from .estimators.tuning import TuningSchedule, schedule
from .estimators.variance import fit_estimated_sigma_plus
from .exceptions import InfeasibleConfigurationError, InvalidInputError, MomLassoError
from .solver.saddle import SolverConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


def _fmt(value: float) -> str:
    return "%.10g" % value


def _blocks(text: str):
    if text == "auto":
        return text
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--blocks must be 'auto' or an integer, got {text!r}") from None
    if k < 1:
        raise argparse.ArgumentTypeError("--blocks must be >= 1")
    return k


# ----------------------------------------------------------------------
# fit
# ----------------------------------------------------------------------
def _require(parser: argparse.ArgumentParser, args: argparse.Namespace, *names: str) -> None:
    for name in names:
        if getattr(args, name) is None:
            parser.error(f"--{name.replace('_', '-')} is required for --estimator {args.estimator}")


def _check_flags(args: argparse.Namespace, parser: argparse.ArgumentParser) -> EstimatorName:
    name = EstimatorName(args.estimator)
    if name is EstimatorName.SQRT_LASSO:
        _require(parser, args, "mu")
    elif name is EstimatorName.LASSO:
        _require(parser, args, "lambda_")
    elif name is EstimatorName.MOM_ADAPTIVE:
        _require(parser, args, "s_plus")
    elif name is EstimatorName.MOM_EST_SIGMA:
        _require(parser, args, "sparsity")
    else:
        _require(parser, args, "sigma_plus")
        if args.blocks == "auto" or args.mu is None:
            _require(parser, args, "sparsity")
    if args.trace_out is not None and name not in (EstimatorName.MOM_FIXED, EstimatorName.MOM_EST_SIGMA):
        parser.error(f"--trace-out is not available for --estimator {args.estimator}")
    return name


def _run_fit(name: EstimatorName, data: Dataset, args: argparse.Namespace) -> FitResult:
    tuning = TuningSchedule(c1_tilde=args.c1_tilde, c2_tilde=args.c2_tilde)
    solver_cfg = SolverConfig(
        max_iters=args.max_iters,
        step_size=args.step_size,
        trace=args.trace_out is not None,
    )
    if name is EstimatorName.SQRT_LASSO:
        return sqrt_lasso_baseline(data, args.mu)
    if name is EstimatorName.LASSO:
        return lasso_baseline(data, args.lambda_)
    if name is EstimatorName.MOM_ADAPTIVE:
        adaptive = AdaptiveConfig(s_plus=args.s_plus)
        return fit_adaptive(data, adaptive, args.sigma_plus, tuning, solver_cfg, args.seed, args.c)
    if name is EstimatorName.MOM_EST_SIGMA:
        return fit_estimated_sigma_plus(data, args.sparsity, tuning, solver_cfg, args.seed, args.c)

    k, mu = args.blocks, args.mu
    if args.sparsity is not None:
        k_auto, mu_auto = schedule(data.n, data.d, args.sparsity, tuning, strict=args.blocks == "auto")
        k = k_auto if args.blocks == "auto" else k
        mu = mu_auto if mu is None else mu
    result = fit_with_blocks(data, k, mu, args.sigma_plus, solver_cfg, args.seed, args.c)
    if args.sparsity is not None:
        result.diagnostics["sparsity"] = args.sparsity
    return result


def _print_fit(name: str, result: FitResult, n: int, d: int) -> None:
    lines = [
        f"estimator: {name}",
        f"n: {n}",
        f"d: {d}",
        f"k_used: {result.k_used}",
        f"mu_used: {_fmt(result.mu_used)}",
        f"sigma_hat: {_fmt(result.sigma_hat)}",
    ]
    if result.s_selected is not None:
        lines.append(f"s_selected: {result.s_selected}")
    diagnostics = result.diagnostics
    for key in ("iterations", "converged", "median_block", "sigma_plus", "sigma_plus_fallback"):
        if key in diagnostics:
            value = diagnostics[key]
            if isinstance(value, bool):
                value = str(value).lower()
            elif isinstance(value, float):
                value = _fmt(value)
            lines.append(f"{key}: {value}")
    support = " ".join(f"{j}:{_fmt(result.beta_hat[j])}" for j in result.support)
    lines.append(f"beta_hat: {support}")
    sys.stdout.write("\n".join(lines) + "\n")


def cmd_fit(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    name = _check_flags(args, parser)
    data = read_dataset_csv(args.data, args.truth)
    result = _run_fit(name, data, args)
    if args.trace_out is not None:
        write_trace(result.diagnostics["trace"], args.trace_out)
    _print_fit(args.estimator, result, data.n, data.d)
    return EXIT_OK


# ----------------------------------------------------------------------
# simulate / bench / rates / plot
# ----------------------------------------------------------------------
def cmd_simulate(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    spec = GenSpec(
        n=args.n,
        d=args.d,
        s=args.s,
        sigma_star=args.sigma_star,
        design=args.design,
        design_nu=args.design_nu,
        noise=args.noise,
        noise_nu=args.noise_nu,
        beta_pattern=args.beta_pattern,
        contamination=args.contamination,
        n_outliers=args.n_outliers,
        contamination_magnitude=args.magnitude,
        seed=args.seed,
    )
    data = generate(spec)
    write_dataset_csv(data, args.out)
    print(args.out)
    if args.truth_out is not None:
        write_truth_json(data, args.truth_out)
        print(args.truth_out)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    config = load_config(args.config)
    records = run_bench(config, jobs=args.jobs, timing=args.timing)
    sidecar = write_bench(config, records, args.out)
    print(args.out)
    print(sidecar)
    return EXIT_OK


def cmd_rates(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    records = read_records(args.bench_csv)
    group_by = [g.strip() for g in args.group_by.split(",") if g.strip()]
    fits = compute_rates(records, group_by, args.x_var, args.metric)
    if args.out is None:
        write_rates(fits, sys.stdout)
    else:
        with open(args.out, "w", newline="", encoding="utf-8") as handle:
            write_rates(fits, handle)
        print(args.out)
    return EXIT_OK


def cmd_plot(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    kind = PlotKind(args.kind)
    if kind is PlotKind.TRACE:
        series = trace_series(read_trace(args.input))
    elif kind is PlotKind.BREAKDOWN:
        series = breakdown_series(read_records(args.input), args.metric)
    else:
        series = error_vs_n_series(read_records(args.input), args.metric)
    path = render(kind, series, args.out, PlotFormat(args.format), args.metric)
    print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mom-sqrt-lasso",
        description="Median-of-means square-root LASSO: fitting, simulation and benchmarks",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="Fit an estimator on a dataset CSV")
    fit.add_argument("data", help="CSV with header y,x1,...,xd")
    fit.add_argument("--estimator", required=True, choices=[e.value for e in EstimatorName])
    fit.add_argument("--sparsity", type=int)
    fit.add_argument("--sigma-plus", type=float, help="noise upper bound; mom-adaptive estimates it when omitted")
    fit.add_argument("--blocks", type=_blocks, default="auto", help="'auto' or an explicit K")
    fit.add_argument("--mu", type=float)
    fit.add_argument("--lambda", dest="lambda_", type=float)
    fit.add_argument("--s-plus", type=int)
    fit.add_argument("--seed", type=int, default=0)
    fit.add_argument("--max-iters", type=int, default=SolverConfig.max_iters)
    fit.add_argument("--step-size", type=float, default=SolverConfig.step_size)
    fit.add_argument("--c1-tilde", type=float, default=1.0)
    fit.add_argument("--c2-tilde", type=float, default=1.0)
    fit.add_argument("--c", type=float, default=DEFAULT_C)
    fit.add_argument("--truth", help="JSON truth sidecar written by simulate")
    fit.add_argument("--trace-out", help="write iteration,value,median_block CSV here")
    fit.set_defaults(func=cmd_fit)

    sim = sub.add_parser("simulate", help="Generate a synthetic dataset CSV")
    sim.add_argument("--n", type=int, required=True)
    sim.add_argument("--d", type=int, required=True)
    sim.add_argument("--s", type=int, required=True)
    sim.add_argument("--sigma-star", type=float, default=1.0)
    sim.add_argument("--design", choices=[e.value for e in Design], default=Design.GAUSSIAN.value)
    sim.add_argument("--design-nu", type=float)
    sim.add_argument("--noise", choices=[e.value for e in NoiseLaw], default=NoiseLaw.GAUSSIAN.value)
    sim.add_argument("--noise-nu", type=float, default=5.0)
    sim.add_argument(
        "--beta-pattern", choices=[e.value for e in BetaPattern], default=BetaPattern.FIRST_S_ONES.value
    )
    sim.add_argument(
        "--contamination",
        choices=[e.value for e in ContaminationModel],
        default=ContaminationModel.NONE.value,
    )
    sim.add_argument("--n-outliers", type=int, default=0)
    sim.add_argument("--magnitude", type=float)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", required=True)
    sim.add_argument("--truth-out")
    sim.set_defaults(func=cmd_simulate)

    bench = sub.add_parser("bench", help="Run a Monte-Carlo experiment grid")
    bench.add_argument("config", help="TOML experiment config")
    bench.add_argument("--out", required=True)
    bench.add_argument("--jobs", type=int, default=1)
    bench.add_argument("--timing", action="store_true", help="record runtime_ms (output no longer reproducible)")
    bench.set_defaults(func=cmd_bench)

    rates = sub.add_parser("rates", help="Fit log-log rate slopes on a bench CSV")
    rates.add_argument("bench_csv")
    rates.add_argument("--group-by", default="estimator")
    rates.add_argument("--x-var", default="n")
    rates.add_argument("--metric", default="err_l2")
    rates.add_argument("--out")
    rates.set_defaults(func=cmd_rates)

    plot = sub.add_parser("plot", help="Plot a bench CSV or an objective trace")
    plot.add_argument("input")
    plot.add_argument("--kind", required=True, choices=[k.value for k in PlotKind])
    plot.add_argument("--out", required=True)
    plot.add_argument("--format", choices=[f.value for f in PlotFormat], default=PlotFormat.SVG.value)
    plot.add_argument("--metric", default="err_l2")
    plot.set_defaults(func=cmd_plot)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)

    try:
        return args.func(args, parser)
    except InfeasibleConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (InvalidInputError, MomLassoError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
