"""End-to-end solving: generate, minimize, round, verify.

The solver minimizes the continuous objective from random restarts,
periodically sign-rounds the trajectory, and reports SAT only for
assignments that verify discretely.  It never proves UNSAT; a run that
finds nothing reports UNKNOWN plus the best (lowest) violation count seen.
"""

import numpy as np

from polysat import (
    Formulation,
    OptimizerConfig,
    OptimizerKind,
    SolveConfig,
    count_violations,
    gen_random_kcnf,
    gen_random_kxor,
    solve,
)
from polysat.cli import emit_result
from polysat.hnf import serialize_hnf

f = gen_random_kcnf(30, 75, 3, seed=5)
print("A random 3-CNF instance in HNF, first lines:")
print("\n".join(serialize_hnf(f).splitlines()[:4]), "...")

cfg = SolveConfig(
    formulation=Formulation.SQUARE,
    alpha=0.0,
    optimizer=OptimizerConfig(kind=OptimizerKind.ADAM, step_size=0.02, max_iters=2000),
    restarts=8,
    seed=1,
    timeout=30.0,
)
result = solve(f, cfg)
print(f"\nstatus={result.status.value} restarts_used={result.restarts_used} "
      f"iters_total={result.iters_total}")
if result.assignment is not None:
    print("violations after re-check:", count_violations(f, result.assignment))

print("\nSolver output protocol (DIMACS-style v-line, positive = True):")
text, exit_code = emit_result(result)
print("\n".join(text.splitlines()[:3]), "...")
print("exit code:", exit_code)

print("\nAn overconstrained XOR system usually comes back UNKNOWN:")
g = gen_random_kxor(20, 40, 2, seed=3)
res = solve(g, SolveConfig(restarts=4, seed=0, timeout=10.0,
                           optimizer=OptimizerConfig(max_iters=2000)))
print(f"status={res.status.value} best violated={res.violated} of {g.num_constraints}")
