"""Command-line surface for batch runs of the pipeline.

Subcommands: generate (synthetic datasets), detect (run the detector on a
CSV), fit-alpha (grid-search the blend weight), solve (raw QUBO files),
benchmark (scenario suites). Exit codes: 0 success, 1 runtime/I/O/data
error, 2 usage error. All randomness derives from the single --seed flag.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from .bench import METHODS, run_csv_suite, run_gaussian_suite
from .dataset import GaussianSpec, generate_gaussian, load_csv, save_csv
from .detector import DetectorConfig, detect, fit_alpha
from .metrics import roc_auc_binary
from .qubo import qubo_from_dict
from .solver import SaConfig, solve_exact, solve_sa

__all__ = ["main"]


# ---------------------------------------------------------------------------
# flag value parsers (argparse exits 2 on ArgumentTypeError)

def _alpha_value(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"alpha must be in [0, 1], got {text}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return value


def _nonneg_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _grid_value(text: str) -> list[float]:
    """Parse "start:end:step" into an inclusive list of alpha values."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"grid must be start:end:step, got {text!r}"
        )
    try:
        start, end, step = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"grid values must be numbers, got {text!r}"
        ) from None
    if step <= 0:
        raise argparse.ArgumentTypeError(f"grid step must be > 0, got {step:g}")
    if end < start:
        raise argparse.ArgumentTypeError(
            f"grid end must be >= start, got {text!r}"
        )
    if start < 0 or end > 1:
        raise argparse.ArgumentTypeError(
            f"grid must stay within [0, 1], got {text!r}"
        )
    count = int((end - start) / step + 1e-9)
    values = start + step * np.arange(count + 1)
    values = np.minimum(values, 1.0)  # guard against float drift past 1
    return [float(v) for v in values]


def _sigma_list(text: str) -> list[float]:
    try:
        values = [float(p) for p in text.split(",") if p != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated numbers, got {text!r}"
        ) from None
    if not values or any(v <= 0 for v in values):
        raise argparse.ArgumentTypeError(
            f"sigmas must be positive numbers, got {text!r}"
        )
    return values


def _method_list(text: str) -> list[str]:
    methods = [p for p in text.split(",") if p != ""]
    for method in methods:
        if method not in METHODS:
            raise argparse.ArgumentTypeError(
                f"unknown method {method!r}; choose from {', '.join(METHODS)}"
            )
    if not methods:
        raise argparse.ArgumentTypeError("at least one method is required")
    return methods


# ---------------------------------------------------------------------------
# output helpers

def _write_text(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _write_json(obj: dict, out: str | None) -> None:
    _write_text(json.dumps(obj, indent=2) + "\n", out)


def _csv_text(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(str(cell) for cell in row) for row in rows)
    return "\n".join(lines) + "\n"


def _sa_config(args: argparse.Namespace) -> SaConfig:
    return SaConfig(
        restarts=args.restarts,
        sweeps=args.sweeps,
        seed=args.seed,
    )


def _detector_config(args: argparse.Namespace, alpha: float, k: int) -> DetectorConfig:
    return DetectorConfig(
        alpha=alpha,
        k=k,
        ridge=args.ridge,
        neighbor_limit=args.neighbor_limit,
        solver=args.solver,
        sa=_sa_config(args),
    )


def _config_echo(config: DetectorConfig) -> dict:
    return {
        "alpha": config.alpha,
        "k": config.k,
        "ridge": config.ridge,
        "neighbor_limit": config.neighbor_limit,
        "solver": config.solver,
        "sa": {
            "restarts": config.sa.restarts,
            "sweeps": config.sa.sweeps,
            "beta_initial": config.sa.beta_initial,
            "beta_final": config.sa.beta_final,
            "seed": config.sa.seed,
        },
        "squared_distances": config.squared_distances,
    }


# ---------------------------------------------------------------------------
# subcommands

def _cmd_generate(args: argparse.Namespace) -> int:
    if args.out is None:
        raise ValueError("generate writes a file; pass -o/--out with the CSV path")
    spec = GaussianSpec(
        n_inliers=args.n_inliers,
        n_outliers=args.n_outliers,
        dims=args.dims,
        sigma=args.sigma,
        outlier_shift=args.outlier_shift,
        seed=args.seed,
    )
    data = generate_gaussian(spec)
    save_csv(data, args.out, label_column=args.label_column)
    return 0


def _cmd_detect(args: argparse.Namespace) -> int:
    data = load_csv(args.input, args.label_column)
    config = _detector_config(args, alpha=args.alpha, k=args.k)
    result = detect(data, config)
    if args.format == "csv":
        rows = [
            [int(data.ids[i]), int(result.flags[i]), repr(float(result.scores[i]))]
            for i in range(data.n)
        ]
        _write_text(_csv_text(["id", "flag", "score"], rows), args.out)
        return 0
    payload = result.to_dict()
    payload["config"] = _config_echo(config)
    if data.labels is not None:
        payload["eval"] = roc_auc_binary(data.labels, result.flags).to_dict()
    _write_json(payload, args.out)
    return 0


def _cmd_fit_alpha(args: argparse.Namespace) -> int:
    data = load_csv(args.input, args.label_column)
    if data.labels is None:
        raise ValueError(f"{args.input}: fit-alpha needs a labeled dataset")
    true_k = data.outlier_count()
    if args.k is not None and args.k != true_k:
        raise ValueError(
            f"--k {args.k} does not match the {true_k} labeled outliers in "
            f"{args.input}; alpha is fitted against the true count"
        )
    config = _detector_config(args, alpha=0.0, k=max(true_k, 1))
    best_alpha, table = fit_alpha(data, config, grid=args.grid)
    if args.format == "csv":
        rows = [[repr(alpha), repr(auc)] for alpha, auc in table]
        _write_text(_csv_text(["alpha", "auc"], rows), args.out)
        return 0
    payload = {
        "alpha": best_alpha,
        "k": true_k,
        "table": [{"alpha": alpha, "auc": auc} for alpha, auc in table],
        "config": _config_echo(replace(config, alpha=best_alpha, k=true_k)),
    }
    _write_json(payload, args.out)
    return 0


def _cmd_solve(args: argparse.Namespace) -> int:
    with open(args.qubo, encoding="utf-8") as fh:
        obj = json.load(fh)
    instance = qubo_from_dict(obj)
    if args.solver == "exact":
        solution = solve_exact(instance)
    else:
        solution = solve_sa(instance, _sa_config(args))
    if args.format == "csv":
        rows = [[i, int(bit)] for i, bit in enumerate(solution.assignment)]
        _write_text(_csv_text(["index", "value"], rows), args.out)
        return 0
    payload = solution.to_dict()
    payload["config"] = {
        "qubo": args.qubo,
        "solver": args.solver,
        "sa": {
            "restarts": args.restarts,
            "sweeps": args.sweeps,
            "seed": args.seed,
        },
    }
    _write_json(payload, args.out)
    return 0


def _cmd_benchmark_gaussian(args: argparse.Namespace) -> int:
    template = GaussianSpec(
        n_inliers=args.n_inliers,
        n_outliers=args.n_outliers,
        dims=args.dims,
        sigma=args.sigmas[0],
        outlier_shift=args.outlier_shift,
        seed=args.seed,
    )
    config = _detector_config(args, alpha=args.alpha, k=max(args.n_outliers, 1))
    seeds = [args.seed + i for i in range(args.seeds)]
    report = run_gaussian_suite(
        args.sigmas, template, args.methods, seeds, config=config, knn_m=args.knn_m
    )
    return _emit_report(report, args, config)


def _cmd_benchmark_csv(args: argparse.Namespace) -> int:
    config = _detector_config(args, alpha=args.alpha, k=1)
    report = run_csv_suite(
        [(args.input, args.label_column)], args.methods, config=config,
        knn_m=args.knn_m,
    )
    return _emit_report(report, args, config)


def _emit_report(report, args: argparse.Namespace, config: DetectorConfig) -> int:
    if args.svg is not None:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(report.to_svg())
    if args.format == "csv":
        _write_text(report.to_csv(), args.out)
        return 0
    payload = report.to_dict()
    payload["config"] = _config_echo(config)
    _write_json(payload, args.out)
    return 0


# ---------------------------------------------------------------------------
# parser

def _build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument(
        "--seed", type=int, default=42,
        help="base RNG seed; all randomness derives from it (default 42)",
    )
    shared.add_argument(
        "-o", "--out", default=None,
        help="output path (default: standard output)",
    )
    shared.add_argument(
        "--format", choices=("json", "csv"), default="json",
        help="output format; csv is a lossy projection (default json)",
    )

    solver_flags = argparse.ArgumentParser(add_help=False)
    solver_flags.add_argument(
        "--solver", choices=("sa", "exact"), default="sa",
        help="sa (any size) or exact (N <= 24; test oracle)",
    )
    solver_flags.add_argument(
        "--sweeps", type=_positive_int, default=1000,
        help="annealing sweeps per restart (default 1000)",
    )
    solver_flags.add_argument(
        "--restarts", type=_positive_int, default=16,
        help="annealing restarts (default 16)",
    )

    detector_flags = argparse.ArgumentParser(add_help=False)
    detector_flags.add_argument(
        "--ridge", type=_nonneg_float, default=1e-6,
        help="covariance regularization strength (default 1e-6)",
    )
    detector_flags.add_argument(
        "--neighbor-limit", type=_positive_int, default=None,
        help="quadratic terms kept per point (default: k)",
    )

    parser = argparse.ArgumentParser(
        prog="qubodet",
        description="Outlier detection by quadratic binary optimization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser(
        "generate", parents=[shared],
        help="write a synthetic Gaussian dataset as CSV",
    )
    p_gen.add_argument("--n-inliers", type=_positive_int, default=95)
    p_gen.add_argument("--n-outliers", type=_nonneg_int, default=5)
    p_gen.add_argument("--dims", type=_positive_int, default=2)
    p_gen.add_argument("--sigma", type=_positive_float, default=1.0)
    p_gen.add_argument(
        "--outlier-shift", type=_nonneg_float, default=6.0,
        help="outlier radius in units of sigma (default 6)",
    )
    p_gen.add_argument("--label-column", default="label")
    p_gen.set_defaults(func=_cmd_generate)

    p_det = sub.add_parser(
        "detect", parents=[shared, detector_flags, solver_flags],
        help="run the detector on a CSV dataset",
    )
    p_det.add_argument("-i", "--input", required=True, help="input CSV path")
    p_det.add_argument(
        "--label-column", default=None,
        help="0/1 column to use as ground truth (adds an eval block)",
    )
    p_det.add_argument("--alpha", type=_alpha_value, required=True)
    p_det.add_argument("--k", type=_positive_int, required=True)
    p_det.set_defaults(func=_cmd_detect)

    p_fit = sub.add_parser(
        "fit-alpha", parents=[shared, detector_flags, solver_flags],
        help="grid-search alpha against labels",
    )
    p_fit.add_argument("-i", "--input", required=True, help="labeled CSV path")
    p_fit.add_argument("--label-column", default="label")
    p_fit.add_argument(
        "--k", type=_positive_int, default=None,
        help="expected outlier count; must match the labels if given",
    )
    p_fit.add_argument(
        "--grid", type=_grid_value, default=_grid_value("0:1:0.05"),
        help="alpha grid as start:end:step (default 0:1:0.05)",
    )
    p_fit.set_defaults(func=_cmd_fit_alpha)

    p_solve = sub.add_parser(
        "solve", parents=[shared, solver_flags],
        help="solve a QUBO interchange JSON file",
    )
    p_solve.add_argument("--qubo", required=True, help="QUBO JSON path")
    p_solve.set_defaults(func=_cmd_solve)

    p_bench = sub.add_parser("benchmark", help="run a benchmark suite")
    bench_sub = p_bench.add_subparsers(dest="suite", required=True)

    bench_shared = argparse.ArgumentParser(add_help=False)
    bench_shared.add_argument(
        "--methods", type=_method_list, default=list(METHODS),
        help=f"comma-separated subset of: {', '.join(METHODS)}",
    )
    bench_shared.add_argument("--alpha", type=_alpha_value, default=0.5)
    bench_shared.add_argument(
        "--knn-m", type=_positive_int, default=5,
        help="neighbor count for the knn-dist baseline (default 5)",
    )
    bench_shared.add_argument(
        "--svg", default=None, help="also write a bar chart to this path",
    )

    p_bg = bench_sub.add_parser(
        "gaussian",
        parents=[shared, detector_flags, solver_flags, bench_shared],
        help="sigma x seed sweep over synthetic Gaussian datasets",
    )
    p_bg.add_argument(
        "--sigmas", type=_sigma_list, default=[1.0],
        help="comma-separated standard deviations (default 1)",
    )
    p_bg.add_argument(
        "--seeds", type=_positive_int, default=1,
        help="number of dataset seeds, derived from --seed (default 1)",
    )
    p_bg.add_argument("--n-inliers", type=_positive_int, default=95)
    p_bg.add_argument("--n-outliers", type=_positive_int, default=5)
    p_bg.add_argument("--dims", type=_positive_int, default=2)
    p_bg.add_argument("--outlier-shift", type=_nonneg_float, default=6.0)
    p_bg.set_defaults(func=_cmd_benchmark_gaussian)

    p_bc = bench_sub.add_parser(
        "csv",
        parents=[shared, detector_flags, solver_flags, bench_shared],
        help="run methods over a labeled CSV file",
    )
    p_bc.add_argument("-i", "--input", required=True, help="labeled CSV path")
    p_bc.add_argument("--label-column", default="label")
    p_bc.set_defaults(func=_cmd_benchmark_csv)

    return parser


def main(argv: list[str] | None = None) -> int:
    """Entry point; returns the process exit code."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
