"""QUBO instances and the anomaly-detection objective.

A :class:`Qubo` maximizes sum_i Q_ii x_i + sum_{i<j} Q_ij x_i x_j over
binary x. Terms are stored once per unordered pair in an upper-triangular
map; the diagonal holds the linear coefficients.

:func:`build_anomaly_qubo` turns distances into the blend
alpha * d_i (linear) + (1 - alpha) * d_ij (quadratic, sparsified to each
variable's furthest neighbors), and :func:`apply_cardinality_penalty` adds
the expansion of -A (sum x_i - k)^2 so maximizers select exactly k points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import numpy as np

__all__ = [
    "Qubo",
    "AnomalyQuboSpec",
    "QuboFormatError",
    "furthest_pairs",
    "build_anomaly_qubo",
    "apply_cardinality_penalty",
    "default_penalty_weight",
    "energy",
    "qubo_to_dict",
    "qubo_from_dict",
]


class QuboFormatError(ValueError):
    """A QUBO interchange object is malformed."""


@dataclass(frozen=True)
class Qubo:
    """Immutable QUBO instance under the maximization convention.

    Attributes:
        n: variable count.
        terms: read-only map (i, j) -> coefficient with 0 <= i <= j < n.
            Diagonal entries (i == i) are the linear terms. Zero
            coefficients are dropped at construction.
    """

    n: int
    terms: Mapping[tuple[int, int], float]

    sense = "max"  # fixed; stored in the interchange format for clarity

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        clean: dict[tuple[int, int], float] = {}
        for (i, j), coeff in self.terms.items():
            if not (0 <= i <= j < self.n):
                raise ValueError(
                    f"term index pair ({i}, {j}) outside upper triangle of "
                    f"n={self.n} variables"
                )
            value = float(coeff)
            if not math.isfinite(value):
                raise ValueError(f"term ({i}, {j}) has non-finite value {coeff!r}")
            if value != 0.0:
                clean[(int(i), int(j))] = value
        object.__setattr__(self, "terms", MappingProxyType(clean))

    def max_abs_coeff(self) -> float:
        """Largest absolute coefficient, 0.0 for an all-zero instance."""
        return max((abs(v) for v in self.terms.values()), default=0.0)


@dataclass(frozen=True)
class AnomalyQuboSpec:
    """Parameters of the anomaly objective.

    Attributes:
        alpha: blend weight in [0, 1]; 1 = purely linear (distance to
            centroid), 0 = purely quadratic (pairwise separation).
        k: expected outlier count, also the cardinality-constraint target.
        neighbor_limit: per-variable count of furthest neighbors whose
            pairwise terms are kept; defaults to k.
        penalty_weight: explicit constraint weight A, or None to derive a
            provably sufficient one at penalty time.
    """

    alpha: float
    k: int
    neighbor_limit: int | None = None
    penalty_weight: float | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.neighbor_limit is not None and self.neighbor_limit < 1:
            raise ValueError(
                f"neighbor_limit must be >= 1, got {self.neighbor_limit}"
            )
        if self.penalty_weight is not None and not self.penalty_weight > 0:
            raise ValueError(
                f"penalty_weight must be > 0, got {self.penalty_weight}"
            )


def _validate_distances(d_lin: np.ndarray, d_quad: np.ndarray) -> int:
    d_lin = np.asarray(d_lin, dtype=np.float64)
    d_quad = np.asarray(d_quad, dtype=np.float64)
    if d_lin.ndim != 1:
        raise ValueError(f"d_lin must be a vector, got shape {d_lin.shape}")
    n = d_lin.shape[0]
    if d_quad.shape != (n, n):
        raise ValueError(
            f"d_quad must have shape ({n}, {n}) to match d_lin, got {d_quad.shape}"
        )
    if not np.all(np.isfinite(d_lin)) or not np.all(np.isfinite(d_quad)):
        raise ValueError("distances must be finite")
    if np.any(d_lin < 0):
        raise ValueError("d_lin must be non-negative")
    scale = max(np.abs(d_quad).max(), 1.0)
    if not np.allclose(d_quad, d_quad.T, rtol=0, atol=1e-12 * scale):
        raise ValueError("d_quad must be symmetric")
    if not np.allclose(np.diag(d_quad), 0.0, rtol=0, atol=1e-12 * scale):
        raise ValueError("d_quad must have a zero diagonal")
    return n


def furthest_pairs(d_quad: np.ndarray, limit: int) -> set[tuple[int, int]]:
    """Unordered pairs kept by per-variable furthest-neighbor sparsification.

    Each variable nominates its ``limit`` furthest neighbors (ties broken by
    lower index first); the result is the union over all variables, so a pair
    survives if either endpoint nominates it.
    """
    n = d_quad.shape[0]
    take = min(limit, n - 1)
    kept: set[tuple[int, int]] = set()
    indices = np.arange(n)
    for i in range(n):
        # Sort by distance descending, index ascending; drop self before
        # slicing so a zero self-distance cannot crowd out a real neighbor.
        order = np.lexsort((indices, -d_quad[i]))
        order = order[order != i]
        for j in order[:take]:
            a, b = (i, int(j)) if i < j else (int(j), i)
            kept.add((a, b))
    return kept


def build_anomaly_qubo(
    d_lin: np.ndarray, d_quad: np.ndarray, spec: AnomalyQuboSpec
) -> Qubo:
    """Build the unpenalized anomaly objective from distances.

    Variable i gets linear coefficient alpha * d_lin[i]; each pair kept by
    furthest-neighbor sparsification gets quadratic coefficient
    (1 - alpha) * d_quad[i, j], stored once per unordered pair.

    Args:
        d_lin: length-N non-negative distances to the centroid.
        d_quad: N x N symmetric pairwise distances with zero diagonal.
        spec: blend weight, outlier count, and sparsification fan-out.

    Returns:
        Qubo over N variables, without the cardinality penalty.

    Raises:
        ValueError: shape mismatch, invalid distances, or k > N.
    """
    n = _validate_distances(d_lin, d_quad)
    if spec.k > n:
        raise ValueError(f"k={spec.k} exceeds the variable count N={n}")
    limit = spec.neighbor_limit if spec.neighbor_limit is not None else spec.k

    terms: dict[tuple[int, int], float] = {}
    if spec.alpha > 0:
        for i in range(n):
            terms[(i, i)] = spec.alpha * float(d_lin[i])
    if spec.alpha < 1:
        for i, j in furthest_pairs(np.asarray(d_quad, dtype=np.float64), limit):
            terms[(i, j)] = (1.0 - spec.alpha) * float(d_quad[i, j])
    return Qubo(n=n, terms=terms)


def default_penalty_weight(q: Qubo) -> float:
    """One plus the largest possible single-variable energy gain of ``q``.

    The gain of setting variable i, maximized over the states of all other
    variables, is Q_ii plus the positive quadratic coefficients touching i.
    Any penalty weight above the largest such gain makes dropping a variable
    from an over-full assignment always profitable, so maximizers of the
    penalized instance are cardinality-feasible.
    """
    gain = np.zeros(q.n)
    for (i, j), coeff in q.terms.items():
        if i == j:
            gain[i] += coeff
        elif coeff > 0:
            gain[i] += coeff
            gain[j] += coeff
    return 1.0 + max(0.0, float(gain.max()))


def apply_cardinality_penalty(q: Qubo, k: int, weight: float | None = None) -> Qubo:
    """Add the expansion of -A (sum x_i - k)^2, constant term dropped.

    Every diagonal coefficient gains A*(2k - 1) and every unordered pair
    gains -2A, creating previously absent pairs. Energies of the result are
    relative to the dropped constant -A*k^2: an assignment with exactly k
    ones pays no net penalty.

    Args:
        q: instance to constrain.
        k: target number of ones, 0 < k <= n.
        weight: explicit A > 0; None derives
            :func:`default_penalty_weight`, which guarantees feasible
            maximizers for objectives with non-negative coefficients.

    Returns:
        New penalized Qubo; ``q`` is unchanged.
    """
    if not 0 < k <= q.n:
        raise ValueError(f"k must satisfy 0 < k <= n={q.n}, got {k}")
    a = default_penalty_weight(q) if weight is None else float(weight)
    if not a > 0:
        raise ValueError(f"penalty weight must be > 0, got {a}")
    terms = dict(q.terms)
    shift = a * (2 * k - 1)
    for i in range(q.n):
        terms[(i, i)] = terms.get((i, i), 0.0) + shift
    for i in range(q.n):
        for j in range(i + 1, q.n):
            terms[(i, j)] = terms.get((i, j), 0.0) - 2.0 * a
    return Qubo(n=q.n, terms=terms)


def energy(q: Qubo, x: np.ndarray) -> float:
    """Evaluate sum_i Q_ii x_i + sum_{i<j} Q_ij x_i x_j at assignment ``x``.

    Args:
        q: instance to evaluate.
        x: length-n vector of 0/1 values.

    Returns:
        The maximization-convention energy (any dropped penalty constant is
        not included).
    """
    x = np.asarray(x)
    if x.shape != (q.n,):
        raise ValueError(f"assignment must have shape ({q.n},), got {x.shape}")
    if not np.all((x == 0) | (x == 1)):
        raise ValueError("assignment entries must be 0 or 1")
    total = 0.0
    for (i, j), coeff in q.terms.items():
        if x[i] and x[j]:
            total += coeff
    return total


def qubo_to_dict(q: Qubo) -> dict:
    """Interchange form {"n": ..., "sense": "max", "terms": [[i, j, coeff], ...]}.

    Terms are sorted by index pair so serialization is deterministic.
    """
    terms = [[i, j, coeff] for (i, j), coeff in sorted(q.terms.items())]
    return {"n": q.n, "sense": Qubo.sense, "terms": terms}


def qubo_from_dict(obj: dict) -> Qubo:
    """Parse the interchange form back into a :class:`Qubo`.

    Raises:
        QuboFormatError: missing keys, wrong sense, or a malformed term
            (reported with its position in the terms list).
    """
    if not isinstance(obj, dict):
        raise QuboFormatError(f"expected a JSON object, got {type(obj).__name__}")
    try:
        n = obj["n"]
        sense = obj["sense"]
        raw_terms = obj["terms"]
    except KeyError as exc:
        raise QuboFormatError(f"missing key {exc.args[0]!r}") from None
    if not isinstance(n, int) or n < 1:
        raise QuboFormatError(f"'n' must be a positive integer, got {n!r}")
    if sense != "max":
        raise QuboFormatError(f"'sense' must be 'max', got {sense!r}")
    if not isinstance(raw_terms, list):
        raise QuboFormatError("'terms' must be a list of [i, j, coeff] triples")
    terms: dict[tuple[int, int], float] = {}
    for pos, item in enumerate(raw_terms):
        if not isinstance(item, list) or len(item) != 3:
            raise QuboFormatError(f"term {pos}: expected [i, j, coeff]")
        i, j, coeff = item
        if not isinstance(i, int) or not isinstance(j, int):
            raise QuboFormatError(f"term {pos}: indices must be integers")
        if not isinstance(coeff, (int, float)) or isinstance(coeff, bool):
            raise QuboFormatError(f"term {pos}: coefficient must be a number")
        if not 0 <= i <= j < n:
            raise QuboFormatError(
                f"term {pos}: index pair ({i}, {j}) outside the upper "
                f"triangle for n={n}"
            )
        if (i, j) in terms:
            raise QuboFormatError(f"term {pos}: duplicate pair ({i}, {j})")
        if not math.isfinite(float(coeff)):
            raise QuboFormatError(f"term {pos}: non-finite coefficient")
        terms[(i, j)] = float(coeff)
    return Qubo(n=n, terms=terms)
