"""When does sign-rounding a near-zero of the expansion satisfy the
constraint?

OR, XOR, and NAE enjoy a margin: any real point where |FE| stays below
1/2^k (OR), 1/2 (XOR), or 1/2^(k-1) (NAE) rounds to a satisfying
assignment.  Cardinality constraints have no such margin: the expansion
can vanish at points that round to violating assignments.  A necessary
condition for having a margin is that no two violating assignments are
adjacent on the cube ("isolated violations"), but that alone is not
sufficient, as a three-variable counterexample shows.
"""

import numpy as np

from polysat import (
    CARD,
    OR,
    XOR,
    Comparator,
    Formula,
    count_violations,
    fourier_eval,
    is_satisfied,
    rounding_epsilon,
    sign_round,
    violation_bound,
)
from polysat.oracle import (
    TableConstraint,
    falsify_rounding_friendly,
    has_isolated_violations,
)

print("Rounding margins:")
for c in (OR(1, 2, 3), XOR(1, 2, 3), OR(1, 2, 3, 4, 5)):
    print(f"  {c.kind.value} k={c.k}: epsilon = {rounding_epsilon(c)}")

print("\nAND(x1, x2) as a cardinality constraint defeats rounding:")
c_and = CARD(Comparator.GE, 2, 1, 2)
x = np.array([3.0, 3.0])
print(f"  FE(3, 3) = {fourier_eval(c_and, x):.1f}, but sign(3, 3) -> (F, F), "
      f"satisfied = {is_satisfied(c_and, sign_round(x))}")

print("\nIsolated violations are necessary but not sufficient:")
pattern = TableConstraint(3, frozenset({(1, 1, 1), (1, -1, -1), (-1, 1, -1)}))
witness = falsify_rounding_friendly(pattern, seed=0)
print(f"  pattern has isolated violations: {has_isolated_violations(pattern)}")
print(f"  falsifier witness: {np.round(witness, 4)} "
      f"(rounds into the violating set)")
print(f"  plain cardinality, for contrast: "
      f"isolated = {has_isolated_violations(c_and)}")

print("\nThe squared objective bounds how badly rounding can do:")
f = Formula(6, (OR(1, 2, 3), OR(-2, 4, 5), OR(3, -5, 6), OR(1, 6)))
rng = np.random.default_rng(2)
for _ in range(4):
    x = rng.uniform(-1, 1, 6)
    w = sum(fourier_eval(c, x) ** 2 for c in f.constraints)
    rounded = count_violations(f, sign_round(x))
    print(f"  W = {w:.4f}: rounded violations {rounded} <= bound {violation_bound(f, w)}")
