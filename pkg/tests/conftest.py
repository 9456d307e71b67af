"""Shared helpers for the test suite."""

import numpy as np
import pytest

from polysat import CARD, NAE, OR, XOR, Comparator, Formula, Kind

# One-line verdicts collected by the acceptance tests, echoed after the
# run so they are visible even when capture swallows in-test output.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance summary")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_constraint(rng, kind=None, k=None, n=None, negations=True):
    """One random constraint; CARD draws a comparator and bound too."""
    if kind is None:
        kind = rng.choice([Kind.OR, Kind.XOR, Kind.NAE, Kind.CARD])
    if k is None:
        lo = 2 if kind is Kind.NAE else 1
        k = int(rng.integers(lo, 9))
    if n is None:
        n = k + int(rng.integers(0, 4))
    vars_ = rng.choice(n, size=k, replace=False) + 1
    if negations:
        signs = rng.random(k) < 0.5
    else:
        signs = np.zeros(k, dtype=bool)
    lits = [-int(v) if s else int(v) for v, s in zip(vars_, signs)]
    if kind is Kind.OR:
        return OR(*lits), n
    if kind is Kind.XOR:
        return XOR(*lits), n
    if kind is Kind.NAE:
        return NAE(*lits), n
    comparator = rng.choice(list(Comparator))
    bound = int(rng.integers(0, k + 1))
    return CARD(comparator, bound, *lits), n


def random_formula(rng, n, m, kinds=(Kind.OR, Kind.XOR, Kind.NAE, Kind.CARD)):
    constraints = []
    for _ in range(m):
        kind = rng.choice(list(kinds))
        k = int(rng.integers(2, min(n, 6) + 1))
        c, _ = random_constraint(rng, kind=kind, k=k, n=n)
        constraints.append(c)
    return Formula(n, tuple(constraints))


@pytest.fixture
def sampler():
    return random_constraint


@pytest.fixture
def formula_sampler():
    return random_formula
