"""
Building and solving a tiny QUBO by hand
========================================
"""

import json

import numpy as np

from qubodet import (
    Qubo,
    apply_cardinality_penalty,
    default_penalty_weight,
    energy,
    qubo_from_dict,
    qubo_to_dict,
    solve_exact,
    solve_sa,
    SaConfig,
)

# A QUBO over 4 binary variables. Diagonal entries are the linear terms,
# off-diagonal (i < j) entries reward picking both endpoints.
q = Qubo(
    n=4,
    terms={
        (0, 0): 3.0,
        (1, 1): 1.0,
        (2, 2): 2.0,
        (3, 3): 0.5,
        (0, 2): 1.5,  # picking 0 and 2 together is worth extra
        (1, 3): -2.0,  # picking 1 and 3 together costs
    },
)

# evaluate a few assignments by hand
for bits in ([1, 0, 1, 0], [1, 1, 1, 1], [0, 0, 0, 0]):
    print(bits, "->", energy(q, np.array(bits)))

# the exhaustive solver checks all 2^4 assignments
best = solve_exact(q)
print("unconstrained optimum:", best.assignment.tolist(), best.objective)

# Now ask for exactly 2 ones. The penalty weight is derived from the
# coefficients so that no constraint violation can ever pay off.
print("derived penalty weight:", default_penalty_weight(q))
pen = apply_cardinality_penalty(q, k=2)
constrained = solve_exact(pen)
print("best 2-subset:", constrained.assignment.tolist())
print("its unpenalized value:", energy(q, constrained.assignment))

# the annealer reaches the same answer on an instance this small
annealed = solve_sa(pen, SaConfig(seed=0))
print("annealer agrees:", annealed.assignment.tolist() == constrained.assignment.tolist())

# instances serialize to a plain JSON dict and back
text = json.dumps(qubo_to_dict(pen), indent=2)
print(text[:120], "...")
assert qubo_from_dict(json.loads(text)) == pen
