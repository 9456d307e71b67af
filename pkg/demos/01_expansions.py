"""Multilinear expansions of hybrid constraints.

Every constraint kind (OR, XOR, NAE, cardinality) has a unique multilinear
polynomial that equals 0 on satisfying +-1 assignments and 1 on violating
ones (-1 encodes True).  This script evaluates the closed forms on and off
the Boolean cube and cross-checks one of them against coefficients obtained
by exhaustively transforming the violation table.
"""

import numpy as np

from polysat import CARD, NAE, OR, XOR, Comparator, fourier_eval, is_satisfied
from polysat.oracle import brute_force_coefficients

constraints = {
    "or(x1, -x2, x3)": OR(1, -2, 3),
    "xor(x1, x2, x3)": XOR(1, 2, 3),
    "nae(x1, x2, x3)": NAE(1, 2, 3),
    "card(>= 2 of x1..x4)": CARD(Comparator.GE, 2, 1, 2, 3, 4),
}

print("Indicator property on Boolean points (-1 = True):")
rng = np.random.default_rng(0)
for name, c in constraints.items():
    b = rng.choice([-1.0, 1.0], size=4)
    value = fourier_eval(c, b)
    print(f"  {name:22s} at {b.astype(int)} -> FE = {value:.0f}, "
          f"satisfied = {is_satisfied(c, b)}")

print("\nOff the cube the expansion interpolates smoothly:")
c = XOR(1, 2, 3)
for t in (0.0, 0.25, 0.5, 0.75, 1.0):
    x = np.array([1.0 - 2 * t, 1.0, -1.0])
    print(f"  xor at x1 = {x[0]:+.2f}: FE = {fourier_eval(c, x):.4f}")

print("\nClosed form vs enumerated coefficients (random points):")
c = CARD(Comparator.LE, 1, 1, -2, 3)
coeffs = brute_force_coefficients(c)
pts = rng.uniform(-2, 2, size=(5, 3))
for x in pts:
    lhs = fourier_eval(c, x)
    rhs = coeffs.eval(x)
    print(f"  closed {lhs:+.6f}  enumerated {rhs:+.6f}  diff {abs(lhs - rhs):.1e}")
