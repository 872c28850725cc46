"""Shared fixtures for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from qubodet import Dataset, GaussianSpec, Qubo, SaConfig, generate_gaussian, solve_sa


def pytest_configure(config):
    config._criterion_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo one verdict line per acceptance criterion after the run."""
    lines = getattr(config, "_criterion_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def criterion_report(request):
    """Record a criterion verdict for the end-of-run summary block."""

    def _record(line: str) -> None:
        request.config._criterion_lines.append(line)
        print(line)

    return _record


@pytest.fixture(scope="session")
def warm_annealer():
    """Compile the annealing kernel once so timed tests never pay for JIT."""
    q = Qubo(n=4, terms={(0, 0): 1.0, (0, 1): -0.5, (2, 3): 0.25})
    solve_sa(q, SaConfig(restarts=1, sweeps=2, seed=0))
    return True


@pytest.fixture
def small_labeled() -> Dataset:
    """20 inliers plus 3 well-separated outliers in 2-D."""
    spec = GaussianSpec(
        n_inliers=20, n_outliers=3, dims=2, sigma=1.0, outlier_shift=6.0, seed=5
    )
    return generate_gaussian(spec)


@pytest.fixture
def five_points() -> Dataset:
    """Symmetric 5-point cross with sample covariance diag(2, 2)."""
    rows = np.array(
        [[0.0, 0.0], [2.0, 0.0], [0.0, 2.0], [-2.0, 0.0], [0.0, -2.0]]
    )
    return Dataset(rows=rows)
