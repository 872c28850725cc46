"""Benchmark harness: run detectors over scenario grids and report AUCs.

Two suites mirror the shapes anomaly-detection methods are usually judged
on: synthetic Gaussian clouds swept over their standard deviation, and
labeled CSV files (wide digit-image subsets, subsampled transaction data).
Every entry records the full parameterization of its run, so any number in
a report can be reproduced bit for bit.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import asdict, dataclass, replace

from .dataset import Dataset, GaussianSpec, generate_gaussian, load_csv
from .detector import (
    DetectorConfig,
    baseline_knn_dist,
    baseline_mahalanobis_topk,
    detect,
    fit_alpha,
)
from .metrics import roc_auc_binary
from .solver import ProblemTooLargeError

__all__ = [
    "BenchEntry",
    "BenchmarkReport",
    "METHODS",
    "run_gaussian_suite",
    "run_csv_suite",
]

# Method names accepted by both suites. "qubo" runs the detector at the
# configured alpha; "qubo-fitted" grid-fits alpha on the labels first.
METHODS = ("qubo", "qubo-fitted", "mahalanobis-topk", "knn-dist")


@dataclass(frozen=True)
class BenchEntry:
    """One scenario x method x seed cell of a benchmark run."""

    scenario: str
    method: str
    seed: int
    auc: float
    wall_time: float
    params: dict


@dataclass(frozen=True)
class BenchmarkReport:
    """Flat list of benchmark cells plus per-scenario mean AUC summaries."""

    scenario: str
    entries: tuple[BenchEntry, ...]
    seeds: tuple[int, ...]

    def mean_auc(self) -> list[tuple[str, str, float]]:
        """(scenario, method, mean AUC over seeds), in first-seen order."""
        sums: dict[tuple[str, str], list[float]] = {}
        for entry in self.entries:
            sums.setdefault((entry.scenario, entry.method), []).append(entry.auc)
        return [
            (scenario, method, sum(aucs) / len(aucs))
            for (scenario, method), aucs in sums.items()
        ]

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "seeds": list(self.seeds),
            "entries": [asdict(entry) for entry in self.entries],
            "summary": [
                {"scenario": scenario, "method": method, "mean_auc": auc}
                for scenario, method, auc in self.mean_auc()
            ],
        }

    def to_csv(self) -> str:
        """One row per entry; params serialized as a JSON cell."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["scenario", "method", "seed", "auc", "wall_time", "params"])
        for entry in self.entries:
            writer.writerow(
                [
                    entry.scenario,
                    entry.method,
                    entry.seed,
                    repr(entry.auc),
                    f"{entry.wall_time:.6f}",
                    json.dumps(entry.params, sort_keys=True),
                ]
            )
        return buffer.getvalue()

    def to_svg(self) -> str:
        """Self-contained bar chart: mean AUC per method, grouped by scenario.

        Each bar carries a text node "<method> <auc>" so the numbers are
        machine-readable from the SVG itself.
        """
        summary = self.mean_auc()
        scenarios: dict[str, list[tuple[str, float]]] = {}
        for scenario, method, auc in summary:
            scenarios.setdefault(scenario, []).append((method, auc))

        row_h, group_pad, left, bar_max = 24, 40, 180, 380
        height = 20
        body: list[str] = []
        for scenario, rows in scenarios.items():
            body.append(
                f'<text x="10" y="{height + 14}" font-weight="bold" '
                f'font-size="14">{_esc(scenario)}</text>'
            )
            height += 22
            for method, auc in rows:
                y = height
                width = max(1, round(bar_max * max(0.0, min(1.0, auc))))
                body.append(
                    f'<rect x="{left}" y="{y}" width="{width}" height="16" '
                    f'fill="#4878a8"/>'
                )
                body.append(
                    f'<text x="{left + width + 6}" y="{y + 13}" '
                    f'font-size="12">{_esc(method)} {auc:.4f}</text>'
                )
                height += row_h
            height += group_pad - row_h
        height += 20
        header = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="640" '
            f'height="{height}" font-family="sans-serif">'
        )
        return "\n".join([header, *body, "</svg>"]) + "\n"


def _esc(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )


def _sa_params(config: DetectorConfig) -> dict:
    return {
        "restarts": config.sa.restarts,
        "sweeps": config.sa.sweeps,
        "beta_initial": config.sa.beta_initial,
        "beta_final": config.sa.beta_final,
        "seed": config.sa.seed,
    }


def _qubo_params(config: DetectorConfig) -> dict:
    return {
        "alpha": config.alpha,
        "k": config.k,
        "ridge": config.ridge,
        "neighbor_limit": config.neighbor_limit,
        "solver": config.solver,
        "sa": _sa_params(config),
        "squared_distances": config.squared_distances,
    }


def _run_method(
    method: str, data: Dataset, config: DetectorConfig, knn_m: int
) -> tuple[float, dict]:
    """Run one method on labeled data; returns (binary AUC, parameters)."""
    k = data.outlier_count()
    run_config = replace(config, k=k)
    if method == "qubo":
        result = detect(data, run_config)
        return roc_auc_binary(data.labels, result.flags).auc, _qubo_params(run_config)
    if method == "qubo-fitted":
        best_alpha, table = fit_alpha(data, run_config)
        auc = max(auc for _, auc in table)
        params = _qubo_params(replace(run_config, alpha=best_alpha))
        params["grid_points"] = len(table)
        return auc, params
    if method == "mahalanobis-topk":
        result = baseline_mahalanobis_topk(data, k, config.ridge)
        return (
            roc_auc_binary(data.labels, result.flags).auc,
            {"k": k, "ridge": config.ridge},
        )
    if method == "knn-dist":
        m = min(knn_m, data.n - 1)
        result = baseline_knn_dist(data, k, m, config.ridge)
        return (
            roc_auc_binary(data.labels, result.flags).auc,
            {"k": k, "m": m, "ridge": config.ridge},
        )
    raise ValueError(f"unknown method {method!r}; choose from {METHODS}")


def _default_config() -> DetectorConfig:
    return DetectorConfig(alpha=0.5, k=1)


def run_gaussian_suite(
    sigmas: list[float],
    spec_template: GaussianSpec,
    methods: list[str],
    seeds: list[int],
    config: DetectorConfig | None = None,
    knn_m: int = 5,
) -> BenchmarkReport:
    """Sweep sigma x seed over synthetic Gaussian datasets.

    For each cell, a dataset is generated from ``spec_template`` with that
    sigma and seed, and every method runs with k set to the generated
    outlier count.

    Args:
        sigmas: standard deviations to sweep, non-empty.
        spec_template: generation parameters; sigma and seed are overridden,
            so n_outliers must be >= 1 for labels to contain both classes.
        methods: method names from METHODS, non-empty.
        seeds: dataset seeds, non-empty.
        config: detector parameters for the qubo methods (k is overridden);
            defaults to alpha=0.5 with SA defaults.
        knn_m: neighbor count for the knn-dist baseline.

    Returns:
        BenchmarkReport with one entry per sigma x seed x method.
    """
    if not sigmas or not methods or not seeds:
        raise ValueError("sigmas, methods, and seeds must be non-empty")
    for method in methods:
        if method not in METHODS:
            raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    if config is None:
        config = _default_config()

    entries: list[BenchEntry] = []
    for sigma in sigmas:
        scenario = f"gaussian sigma={sigma:g}"
        for seed in seeds:
            data = generate_gaussian(
                replace(spec_template, sigma=float(sigma), seed=int(seed))
            )
            for method in methods:
                start = time.perf_counter()
                auc, params = _run_method(method, data, config, knn_m)
                entries.append(
                    BenchEntry(
                        scenario=scenario,
                        method=method,
                        seed=int(seed),
                        auc=auc,
                        wall_time=time.perf_counter() - start,
                        params=params,
                    )
                )
    return BenchmarkReport(
        scenario="gaussian",
        entries=tuple(entries),
        seeds=tuple(int(s) for s in seeds),
    )


def run_csv_suite(
    files: list[tuple[str, str]],
    methods: list[str],
    config: DetectorConfig | None = None,
    knn_m: int = 5,
) -> BenchmarkReport:
    """Run every method over labeled CSV files.

    Args:
        files: (path, label_column) pairs; every file must be labeled with
            both classes present.
        methods: method names from METHODS, non-empty.
        config: detector parameters (k is overridden with each file's true
            outlier count).
        knn_m: neighbor count for the knn-dist baseline.

    Returns:
        BenchmarkReport with one entry per file x method.

    Raises:
        ValueError: empty inputs or unlabeled file.
        ProblemTooLargeError: exact solver requested for a file with more
            than 24 rows.
    """
    if not files or not methods:
        raise ValueError("files and methods must be non-empty")
    for method in methods:
        if method not in METHODS:
            raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    if config is None:
        config = _default_config()

    entries: list[BenchEntry] = []
    for path, label_column in files:
        if not label_column:
            raise ValueError(f"{path}: a label column is required for benchmarks")
        data = load_csv(path, label_column)
        k = data.outlier_count()
        if k == 0 or k == data.n:
            raise ValueError(f"{path}: labels must contain both classes")
        if config.solver == "exact" and data.n > 24:
            raise ProblemTooLargeError(
                f"{path}: N={data.n} exceeds the exact solver's 24-variable "
                f"limit; use the sa solver"
            )
        for method in methods:
            start = time.perf_counter()
            auc, params = _run_method(method, data, config, knn_m)
            entries.append(
                BenchEntry(
                    scenario=path,
                    method=method,
                    seed=config.sa.seed,
                    auc=auc,
                    wall_time=time.perf_counter() - start,
                    params=params,
                )
            )
    return BenchmarkReport(
        scenario="csv",
        entries=tuple(entries),
        seeds=(config.sa.seed,),
    )
