"""Discrete side of the solver: variables, constraints, formulas, assignments.

Encoding conventions used throughout the package:

* variables are 1-based integer indices;
* a Boolean assignment is a length-n integer vector over {-1, +1} with
  -1 = True and +1 = False;
* a continuous search point is a length-n float vector (unbounded).

Everything here is plain discrete semantics. The continuous machinery in
:mod:`polysat.fourier` and :mod:`polysat.objectives` is always checked back
against these functions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class PolysatError(Exception):
    """Base class for errors raised by this package."""


class InputError(PolysatError, ValueError):
    """Malformed constraint, formula, assignment or configuration."""


class EvaluationError(PolysatError, ArithmeticError):
    """Non-finite value encountered during a continuous evaluation."""

    def __init__(self, message: str, constraint_index: int | None = None):
        super().__init__(message)
        self.constraint_index = constraint_index


class Kind(enum.Enum):
    OR = "or"
    XOR = "xor"
    NAE = "nae"
    CARD = "card"


class Comparator(enum.Enum):
    GE = ">="
    LE = "<="
    EQ = "="


@dataclass(frozen=True)
class Literal:
    """A possibly negated occurrence of variable ``var`` (1-based)."""

    var: int
    negated: bool = False

    def __post_init__(self):
        if not isinstance(self.var, int) or self.var < 1:
            raise InputError(f"literal variable must be a positive integer, got {self.var!r}")

    @staticmethod
    def from_dimacs(lit: int) -> "Literal":
        if lit == 0:
            raise InputError("0 is not a valid DIMACS literal")
        return Literal(abs(lit), lit < 0)

    def to_dimacs(self) -> int:
        return -self.var if self.negated else self.var


@dataclass(frozen=True)
class Constraint:
    """One hybrid constraint over distinct variables.

    ``comparator``/``bound`` are only meaningful for CARD constraints and
    must be None otherwise.
    """

    kind: Kind
    literals: tuple[Literal, ...]
    comparator: Comparator | None = None
    bound: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "literals", tuple(self.literals))
        k = len(self.literals)
        if k < 1:
            raise InputError("constraint needs at least one literal")
        if self.kind is Kind.NAE and k < 2:
            raise InputError("NAE needs at least two literals")
        vars_ = [l.var for l in self.literals]
        if len(set(vars_)) != k:
            raise InputError(f"duplicate variable in constraint: {sorted(vars_)}")
        if self.kind is Kind.CARD:
            if self.comparator is None or self.bound is None:
                raise InputError("CARD constraint needs a comparator and a bound")
            if not (0 <= self.bound <= k):
                raise InputError(f"CARD bound {self.bound} outside [0, {k}]")
        elif self.comparator is not None or self.bound is not None:
            raise InputError(f"{self.kind.name} constraint must not carry comparator/bound")

    @property
    def k(self) -> int:
        return len(self.literals)

    def variables(self) -> tuple[int, ...]:
        return tuple(l.var for l in self.literals)


def OR(*lits: int) -> Constraint:
    """Disjunction from DIMACS-style signed ints, e.g. ``OR(1, -2)``."""
    return Constraint(Kind.OR, tuple(Literal.from_dimacs(l) for l in lits))


def XOR(*lits: int) -> Constraint:
    return Constraint(Kind.XOR, tuple(Literal.from_dimacs(l) for l in lits))


def NAE(*lits: int) -> Constraint:
    return Constraint(Kind.NAE, tuple(Literal.from_dimacs(l) for l in lits))


def CARD(comparator: Comparator | str, bound: int, *lits: int) -> Constraint:
    if isinstance(comparator, str):
        comparator = Comparator(comparator)
    return Constraint(
        Kind.CARD,
        tuple(Literal.from_dimacs(l) for l in lits),
        comparator=comparator,
        bound=bound,
    )


@dataclass(frozen=True)
class Formula:
    """Conjunction of hybrid constraints over variables 1..num_vars."""

    num_vars: int
    constraints: tuple[Constraint, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if self.num_vars < 0:
            raise InputError(f"num_vars must be non-negative, got {self.num_vars}")
        for idx, c in enumerate(self.constraints):
            for l in c.literals:
                if l.var > self.num_vars:
                    raise InputError(
                        f"constraint {idx} uses variable {l.var} > num_vars={self.num_vars}"
                    )

    @property
    def num_constraints(self) -> int:
        return len(self.constraints)


def check_assignment(f: Formula, b: np.ndarray) -> np.ndarray:
    """Validate a Boolean assignment for ``f`` and return it as an int array."""
    b = np.asarray(b)
    if b.shape != (f.num_vars,):
        raise InputError(f"assignment has shape {b.shape}, expected ({f.num_vars},)")
    if not np.all(np.abs(b) == 1):
        raise InputError("assignment entries must be exactly -1 or +1")
    return b.astype(np.int64, copy=False)


def true_literal_count(c: Constraint, b: np.ndarray) -> int:
    """Number of literals of ``c`` that are True under assignment ``b``."""
    count = 0
    for l in c.literals:
        value_true = b[l.var - 1] == -1
        if value_true != l.negated:
            count += 1
    return count


def is_satisfied(c: Constraint, b: np.ndarray) -> bool:
    """Discrete satisfaction of one constraint; the ground truth semantics.

    ``b`` is a +-1 vector indexed by variable (position var-1), -1 = True.
    """
    b = np.asarray(b)
    if b.ndim != 1 or b.shape[0] < max(l.var for l in c.literals):
        raise InputError("assignment too short for constraint")
    t = true_literal_count(c, b)
    k = c.k
    if c.kind is Kind.OR:
        return t >= 1
    if c.kind is Kind.XOR:
        return t % 2 == 1
    if c.kind is Kind.NAE:
        return 0 < t < k
    # CARD
    if c.comparator is Comparator.GE:
        return t >= c.bound
    if c.comparator is Comparator.LE:
        return t <= c.bound
    return t == c.bound


def count_violations(f: Formula, b: np.ndarray) -> int:
    """Number of constraints of ``f`` violated by Boolean assignment ``b``."""
    b = check_assignment(f, b)
    return sum(1 for c in f.constraints if not is_satisfied(c, b))


def sign_round(x: np.ndarray) -> np.ndarray:
    """Round a real vector to {-1,+1}: negative -> -1 (True), else +1 (False).

    Zero rounds to +1 (False); no randomized tie-breaking.
    """
    x = np.asarray(x, dtype=np.float64)
    return np.where(x < 0, -1, 1).astype(np.int64)
