"""Whole-formula objectives over the constraint expansions.

Three ways to fold per-constraint expansion values FE_c(x) into one
function to minimize:

* LINEAR: sum_c FE_c(x)        (meaningful on the box [-1, 1]^n)
* SQUARE: sum_c FE_c(x)^2      (unconstrained)
* ABS:    sum_c |FE_c(x)|      (unconstrained)

each optionally plus the box-attracting penalty alpha * sum_i (x_i^2 - 1)^2.
At Boolean points every FE_c is 0 or 1, so all three formulations (with
alpha = 0) equal the number of violated constraints there, and a zero of
SQUARE/ABS with alpha > 0, or of any formulation on the box when every
constraint is rounding-friendly, certifies satisfiability after rounding.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .fourier import CompiledFormula, compile_formula
from .model import (
    EvaluationError,
    Formula,
    InputError,
    count_violations,
    sign_round,
)

__all__ = [
    "Formulation",
    "Objective",
    "ObjectiveEvaluation",
    "build_objective",
    "objective_value",
    "objective_gradient",
    "satisfiability_certificate",
]

DEFAULT_ZERO_TOL = 1e-8


class Formulation(enum.Enum):
    LINEAR = "linear"
    SQUARE = "square"
    ABS = "abs"


@dataclass(frozen=True)
class Objective:
    """A formulation applied to a formula, with penalty coefficient alpha."""

    formula: Formula
    formulation: Formulation
    alpha: float = 0.0
    compiled: CompiledFormula = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        if not (self.alpha >= 0.0):
            raise InputError(f"alpha must be non-negative, got {self.alpha}")
        if self.compiled is None:
            object.__setattr__(self, "compiled", compile_formula(self.formula))

    @property
    def num_vars(self) -> int:
        return self.formula.num_vars


@dataclass
class ObjectiveEvaluation:
    value: float
    gradient: np.ndarray | None
    per_constraint_values: np.ndarray


def build_objective(
    formula: Formula, formulation: Formulation, alpha: float = 0.0
) -> Objective:
    return Objective(formula, formulation, alpha)


def _check_x(obj: Objective, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (obj.num_vars,):
        raise InputError(
            f"point has shape {x.shape}, expected ({obj.num_vars},)"
        )
    if not np.all(np.isfinite(x)):
        raise EvaluationError("non-finite entry in evaluation point")
    return x


def _check_constraint_values(values: np.ndarray) -> None:
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        raise EvaluationError(
            "constraint expansion produced a non-finite value",
            constraint_index=int(bad[0]),
        )


def _fold(formulation: Formulation, values: np.ndarray) -> float:
    if formulation is Formulation.LINEAR:
        return float(np.sum(values))
    if formulation is Formulation.SQUARE:
        return float(np.sum(values * values))
    return float(np.sum(np.abs(values)))


def _penalty(alpha: float, x: np.ndarray) -> float:
    if alpha == 0.0:
        return 0.0
    r = x * x - 1.0
    return alpha * float(np.sum(r * r))


def objective_value(obj: Objective, x) -> ObjectiveEvaluation:
    """Objective value plus the per-constraint expansion values."""
    x = _check_x(obj, x)
    # overflow at extreme points is caught by finiteness checks, not warnings
    with np.errstate(over="ignore", invalid="ignore"):
        values = obj.compiled.values(x)
        _check_constraint_values(values)
        total = _fold(obj.formulation, values) + _penalty(obj.alpha, x)
    return ObjectiveEvaluation(total, None, values)


def objective_gradient(obj: Objective, x) -> ObjectiveEvaluation:
    """Objective value and exact gradient.

    Chain rule per formulation: d/dFE is 1 (LINEAR), 2 FE (SQUARE), or
    sgn(FE) (ABS, with subgradient 0 exactly at FE = 0).
    """
    x = _check_x(obj, x)
    if obj.formulation is Formulation.LINEAR:
        weight_of = np.ones_like
    elif obj.formulation is Formulation.SQUARE:
        weight_of = lambda v: 2.0 * v
    else:
        weight_of = np.sign
    # overflow at extreme points is caught by finiteness checks, not warnings
    with np.errstate(over="ignore", invalid="ignore"):
        values, grad = obj.compiled.values_and_weighted_gradient(x, weight_of)
        _check_constraint_values(values)
        total = _fold(obj.formulation, values) + _penalty(obj.alpha, x)
        if obj.alpha != 0.0:
            grad = grad + 4.0 * obj.alpha * x * (x * x - 1.0)
    return ObjectiveEvaluation(total, grad, values)


def satisfiability_certificate(
    obj: Objective, x, tol: float = DEFAULT_ZERO_TOL
) -> np.ndarray | None:
    """Rounded assignment if x is a near-zero that discretely verifies.

    A near-zero objective value alone is never trusted: the rounded
    assignment is returned only after count_violations confirms it, since
    zeros of the unpenalized objectives can round to falsifying points
    (cardinality constraints admit such zeros off the Boolean cube).
    """
    if tol < 0:
        raise InputError(f"tol must be non-negative, got {tol}")
    evaluation = objective_value(obj, x)
    if evaluation.value > tol:
        return None
    assignment = sign_round(np.asarray(x, dtype=np.float64))
    if count_violations(obj.formula, assignment) == 0:
        return assignment
    return None
