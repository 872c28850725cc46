"""Exact and simulated-annealing solvers for QUBO maximization.

:func:`solve_exact` enumerates all 2^n assignments (n <= 24) and is the
oracle for tests. :func:`solve_sa` is the workhorse: restarted single-bit-
flip Metropolis with a geometric inverse-temperature schedule, incremental
energy updates over a sparse adjacency, and best-seen tracking. Both report
the objective recomputed from scratch, so Solution.objective always equals
``energy(q, assignment)`` exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np
from scipy.sparse import coo_matrix

from .qubo import Qubo, energy

__all__ = [
    "Solution",
    "SaConfig",
    "ProblemTooLargeError",
    "solve_exact",
    "solve_sa",
]

_EXACT_LIMIT = 24
_BLOCK_BITS = 12


class ProblemTooLargeError(ValueError):
    """The instance exceeds the exact solver's enumeration budget."""


@dataclass(frozen=True)
class Solution:
    """A solver's best assignment and how it was produced.

    Attributes:
        assignment: length-n 0/1 vector.
        objective: energy of the assignment (maximization convention),
            recomputed from the instance terms.
        solver: "exact" or "sa".
        seed: RNG seed used; None for the deterministic exact solver.
        sweeps: SA sweeps per restart; 0 for exact.
        restarts: SA restart count; 0 for exact.
    """

    assignment: np.ndarray
    objective: float
    solver: str
    seed: int | None
    sweeps: int
    restarts: int

    def __post_init__(self) -> None:
        assignment = np.array(self.assignment, dtype=np.int8)
        if assignment.ndim != 1:
            raise ValueError("assignment must be a vector")
        if not np.all((assignment == 0) | (assignment == 1)):
            raise ValueError("assignment entries must be 0 or 1")
        assignment.setflags(write=False)
        object.__setattr__(self, "assignment", assignment)
        if self.solver not in ("exact", "sa"):
            raise ValueError(f"solver must be 'exact' or 'sa', got {self.solver!r}")

    def to_dict(self) -> dict:
        return {
            "assignment": [int(b) for b in self.assignment],
            "objective": float(self.objective),
            "solver": self.solver,
            "seed": self.seed,
            "sweeps": self.sweeps,
            "restarts": self.restarts,
        }


@dataclass(frozen=True)
class SaConfig:
    """Simulated-annealing schedule and budget.

    The inverse temperature rises geometrically from beta_initial to
    beta_final over the sweeps of each restart. Coefficients are normalized
    by their largest magnitude before annealing, so the default schedule is
    instance-independent; objectives are reported in original units.
    """

    restarts: int = 16
    sweeps: int = 1000
    beta_initial: float = 0.1
    beta_final: float = 10.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")
        if self.sweeps < 1:
            raise ValueError(f"sweeps must be >= 1, got {self.sweeps}")
        if not 0 < self.beta_initial <= self.beta_final:
            raise ValueError(
                f"need 0 < beta_initial <= beta_final, got "
                f"{self.beta_initial} and {self.beta_final}"
            )


# ---------------------------------------------------------------------------
# exact enumeration

def _dense_blocks(q: Qubo, head: int) -> tuple[np.ndarray, ...]:
    """Split coefficients into head/tail blocks for blocked enumeration."""
    n = q.n
    diag = np.zeros(n)
    upper = np.zeros((n, n))
    for (i, j), coeff in q.terms.items():
        if i == j:
            diag[i] = coeff
        else:
            upper[i, j] = coeff
    return (
        diag[:head],
        diag[head:],
        upper[:head, :head],
        upper[:head, head:],
        upper[head:, head:],
    )


def solve_exact(q: Qubo) -> Solution:
    """Global maximizer by exhaustive enumeration, n <= 24.

    Among equal-energy maximizers, returns the lexicographically smallest
    assignment (index 0 most significant).

    Raises:
        ProblemTooLargeError: n exceeds the 2^n budget of 24 variables.
    """
    n = q.n
    if n > _EXACT_LIMIT:
        raise ProblemTooLargeError(
            f"exact solver enumerates 2^n assignments and handles n <= "
            f"{_EXACT_LIMIT}; got n={n}. Use the sa solver instead."
        )
    tail = min(n, _BLOCK_BITS)
    head = n - tail
    diag_h, diag_t, upper_hh, cross, upper_tt = _dense_blocks(q, head)

    # Tail assignments enumerated as the low bits of a counter, index
    # (head) most significant within the tail block.
    patterns = (np.arange(1 << tail)[:, None] >> np.arange(tail - 1, -1, -1)) & 1
    patterns = patterns.astype(np.float64)
    tail_energy = patterns @ diag_t + np.einsum(
        "li,ij,lj->l", patterns, upper_tt, patterns
    )

    best_val = -np.inf
    best_head = 0
    best_tail = 0
    for h in range(1 << head):
        x_head = (h >> np.arange(head - 1, -1, -1)) & 1 if head else np.zeros(0)
        x_head = x_head.astype(np.float64)
        head_energy = x_head @ diag_h + x_head @ upper_hh @ x_head
        totals = tail_energy + head_energy + patterns @ (x_head @ cross)
        l = int(np.argmax(totals))  # first occurrence, lowest tail counter
        if totals[l] > best_val:
            best_val = float(totals[l])
            best_head = h
            best_tail = l

    bits_head = (best_head >> np.arange(head - 1, -1, -1)) & 1 if head else []
    bits_tail = (best_tail >> np.arange(tail - 1, -1, -1)) & 1
    assignment = np.concatenate([np.asarray(bits_head), bits_tail]).astype(np.int8)
    return Solution(
        assignment=assignment,
        objective=energy(q, assignment),
        solver="exact",
        seed=None,
        sweeps=0,
        restarts=0,
    )


# ---------------------------------------------------------------------------
# simulated annealing

@numba.njit(cache=True)
def _anneal(diag, indptr, indices, weights, state, field, e_init, betas,
            flip_order, log_u):
    """One annealing restart; mutates state/field, returns best seen.

    field[i] tracks sum_j w_ij * state[j], so the gain of flipping i is
    +-(diag[i] + field[i]) and never needs a full re-evaluation.
    """
    n = diag.shape[0]
    sweeps = betas.shape[0]
    e_cur = e_init
    best_e = e_init
    best_state = state.copy()
    t = 0
    for s in range(sweeps):
        beta = betas[s]
        for _ in range(n):
            i = flip_order[t]
            delta = diag[i] + field[i]
            if state[i] == 1:
                delta = -delta
            if delta >= 0.0 or beta * delta > log_u[t]:
                if state[i] == 1:
                    state[i] = 0
                    sign = -1.0
                else:
                    state[i] = 1
                    sign = 1.0
                for p in range(indptr[i], indptr[i + 1]):
                    field[indices[p]] += sign * weights[p]
                e_cur += delta
                if e_cur > best_e:
                    best_e = e_cur
                    best_state[:] = state
            t += 1
    return best_e, best_state


def _adjacency(q: Qubo) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Diagonal vector plus symmetric CSR adjacency of the quadratic terms."""
    n = q.n
    diag = np.zeros(n)
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    for (i, j), coeff in q.terms.items():
        if i == j:
            diag[i] = coeff
        else:
            rows.extend((i, j))
            cols.extend((j, i))
            vals.extend((coeff, coeff))
    adj = coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    return (
        diag,
        adj.indptr.astype(np.int64),
        adj.indices.astype(np.int64),
        adj.data.astype(np.float64),
    )


def _greedy_start(diag: np.ndarray, indptr: np.ndarray, indices: np.ndarray,
                  weights: np.ndarray) -> np.ndarray:
    """Feasible warm start: fill variables in diagonal order while they pay.

    Visiting variables by descending diagonal coefficient and adding each
    one whose flip gain is positive lands on the top-k-by-diagonal
    assignment for cardinality-penalized instances (the penalty makes the
    k+1-th addition unprofitable).
    """
    n = diag.shape[0]
    state = np.zeros(n, dtype=np.int8)
    field = np.zeros(n)
    order = np.lexsort((np.arange(n), -diag))
    for i in order:
        if diag[i] + field[i] > 0.0:
            state[i] = 1
            field[indices[indptr[i]:indptr[i + 1]]] += \
                weights[indptr[i]:indptr[i + 1]]
    return state


def solve_sa(q: Qubo, config: SaConfig = SaConfig()) -> Solution:
    """Best assignment found by restarted simulated annealing.

    Restart 0 starts from a greedy feasible warm start; the others start
    from uniformly random assignments drawn from per-restart RNG streams,
    so the result is deterministic for a fixed (instance, config) and
    independent of restart execution order.

    Args:
        q: instance to maximize.
        config: schedule, budget, and seed.

    Returns:
        Solution tagged "sa" with the best assignment seen across restarts.
    """
    n = q.n
    diag, indptr, indices, weights = _adjacency(q)
    scale = q.max_abs_coeff()
    if scale == 0.0:
        scale = 1.0
    diag_s = diag / scale
    weights_s = weights / scale
    betas = np.geomspace(config.beta_initial, config.beta_final, config.sweeps)

    streams = np.random.SeedSequence(config.seed).spawn(config.restarts)
    best_e = -np.inf
    best_state: np.ndarray | None = None
    for r in range(config.restarts):
        rng = np.random.default_rng(streams[r])
        if r == 0:
            state = _greedy_start(diag_s, indptr, indices, weights_s)
        else:
            state = rng.integers(0, 2, size=n).astype(np.int8)
        field = np.zeros(n)
        for i in range(n):
            if state[i]:
                field[indices[indptr[i]:indptr[i + 1]]] += \
                    weights_s[indptr[i]:indptr[i + 1]]
        e_init = float(diag_s @ state + 0.5 * (field @ state))
        flip_order = rng.integers(0, n, size=config.sweeps * n, dtype=np.int64)
        log_u = np.log1p(-rng.random(config.sweeps * n))
        e_r, state_r = _anneal(diag_s, indptr, indices, weights_s, state,
                               field, e_init, betas, flip_order, log_u)
        if e_r > best_e:
            best_e = e_r
            best_state = state_r

    assert best_state is not None
    return Solution(
        assignment=best_state,
        objective=energy(q, best_state),
        solver="sa",
        seed=config.seed,
        sweeps=config.sweeps,
        restarts=config.restarts,
    )
