"""Closed-form multilinear expansion values and gradients.

Every constraint kind maps to a polynomial over +-1-encoded variables that
is 0 at satisfying Boolean points and 1 at violating ones:

* OR:   prod_i (1 + y_i) / 2
* XOR:  (1 + prod_i y_i) / 2
* NAE:  (prod_i (1 + y_i) + prod_i (1 - y_i)) / 2^k
* CARD: multilinear extension of the violation indicator, computed as a
  signed Poisson-binomial dynamic program over p_i = (1 - y_i) / 2

where y_i is x at the literal's variable, negated for negated literals.
The CARD recurrence is a polynomial identity, so it stays exact when the
p_i leave [0, 1] (points outside the unit box make them "signed
probabilities").

Gradients are division-free: products-without-one-factor come from prefix
and suffix arrays, and the CARD partials use the multilinear split
FE = y_i * G + H, evaluating the leave-one-out distribution only at the
true-counts where the violation indicator actually steps.  Cost is O(k)
per OR/XOR/NAE constraint and O(k^2) per CARD constraint.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Comparator, Constraint, EvaluationError, Formula, InputError, Kind

__all__ = [
    "ConstraintEvaluation",
    "CompiledFormula",
    "compile_formula",
    "fourier_eval",
    "fourier_eval_points",
    "fourier_grad",
    "multilinear_split_check",
]


@dataclass
class ConstraintEvaluation:
    """Value and full-length gradient of one constraint's expansion."""

    value: float
    gradient: np.ndarray


# ---------------------------------------------------------------------------
# Row-level math shared by the scalar API and the batched formula evaluator.
# All functions take Y of shape (rows, k); a row is one constraint at one
# point (batched formulas) or one point of one constraint (batched points).


def _excl_prod(factors: np.ndarray) -> np.ndarray:
    """Per-row products over all columns except each one in turn."""
    rows, k = factors.shape
    left = np.ones_like(factors)
    if k > 1:
        np.cumprod(factors[:, :-1], axis=1, out=left[:, 1:])
    right = np.ones_like(factors)
    if k > 1:
        right[:, :-1] = np.cumprod(factors[:, :0:-1], axis=1)[:, ::-1]
    return left * right


def _violation_steps(viol: np.ndarray) -> np.ndarray:
    """viol(s) - viol(s+1) for s = 0..k-1; nonzero only where the indicator steps."""
    return viol[:, :-1] - viol[:, 1:]


def _card_distribution(p: np.ndarray) -> np.ndarray:
    """Signed Poisson-binomial: D[:, t] = coefficient of 'exactly t true'."""
    rows, k = p.shape
    dist = np.zeros((rows, k + 1))
    dist[:, 0] = 1.0
    for j in range(k):
        pj = p[:, j : j + 1]
        dist[:, 1 : j + 2] = dist[:, 1 : j + 2] * (1.0 - pj) + dist[:, 0 : j + 1] * pj
        dist[:, 0] *= 1.0 - pj[:, 0]
    return dist


def _card_prefix_suffix(p: np.ndarray):
    """Distributions over the first i and last k-j literals, for all i, j."""
    rows, k = p.shape
    pref = np.zeros((rows, k + 1, k + 1))
    pref[:, 0, 0] = 1.0
    for i in range(k):
        pi = p[:, i : i + 1]
        pref[:, i + 1, 1:] = pref[:, i, 1:] * (1.0 - pi) + pref[:, i, :-1] * pi
        pref[:, i + 1, 0] = pref[:, i, 0] * (1.0 - pi[:, 0])
    suf = np.zeros((rows, k + 1, k + 1))
    suf[:, k, 0] = 1.0
    for j in range(k - 1, -1, -1):
        pj = p[:, j : j + 1]
        suf[:, j, 1:] = suf[:, j + 1, 1:] * (1.0 - pj) + suf[:, j + 1, :-1] * pj
        suf[:, j, 0] = suf[:, j + 1, 0] * (1.0 - pj[:, 0])
    return pref, suf


def _values_from_y(kind: Kind, y: np.ndarray, viol: np.ndarray | None) -> np.ndarray:
    k = y.shape[1]
    if kind is Kind.OR:
        return np.prod((1.0 + y) / 2.0, axis=1)
    if kind is Kind.XOR:
        return 0.5 * (1.0 + np.prod(y, axis=1))
    if kind is Kind.NAE:
        scale = 0.5**k
        return (np.prod(1.0 + y, axis=1) + np.prod(1.0 - y, axis=1)) * scale
    p = (1.0 - y) / 2.0
    dist = _card_distribution(p)
    return np.einsum("rt,rt->r", dist, viol)


def _values_and_grads_from_y(kind: Kind, y: np.ndarray, viol: np.ndarray | None):
    """Returns (values (rows,), d value / d y (rows, k))."""
    k = y.shape[1]
    if kind is Kind.OR:
        factors = (1.0 + y) / 2.0
        return np.prod(factors, axis=1), 0.5 * _excl_prod(factors)
    if kind is Kind.XOR:
        return 0.5 * (1.0 + np.prod(y, axis=1)), 0.5 * _excl_prod(y)
    if kind is Kind.NAE:
        scale = 0.5**k
        plus = 1.0 + y
        minus = 1.0 - y
        values = (np.prod(plus, axis=1) + np.prod(minus, axis=1)) * scale
        grads = (_excl_prod(plus) - _excl_prod(minus)) * scale
        return values, grads
    p = (1.0 - y) / 2.0
    pref, suf = _card_prefix_suffix(p)
    values = np.einsum("rt,rt->r", pref[:, k, :], viol)
    steps = _violation_steps(viol)
    grads = np.zeros_like(y)
    for s in np.nonzero(np.any(steps != 0.0, axis=0))[0]:
        s = int(s)
        # leave-one-out distribution at exactly s trues, for every position
        loo = np.einsum("ria,ria->ri", pref[:, :k, : s + 1], suf[:, 1:, s::-1])
        grads += 0.5 * steps[:, s : s + 1] * loo
    return values, grads


def _card_violation_row(k: int, comparator: Comparator, bound: int) -> np.ndarray:
    t = np.arange(k + 1)
    if comparator is Comparator.GE:
        return (t < bound).astype(np.float64)
    if comparator is Comparator.LE:
        return (t > bound).astype(np.float64)
    return (t != bound).astype(np.float64)


# ---------------------------------------------------------------------------
# Compiled formulas: constraints of one (kind, k) packed into arrays.


@dataclass
class _Block:
    kind: Kind
    rows: np.ndarray  # constraint indices in the source formula
    var_idx: np.ndarray  # (m, k), 0-based
    sign: np.ndarray  # (m, k), +1.0 or -1.0
    viol: np.ndarray | None  # (m, k+1), CARD only

    def gather_y(self, x: np.ndarray) -> np.ndarray:
        return self.sign * x[self.var_idx]


class CompiledFormula:
    """Array layout of a formula for vectorized evaluation.

    Constraints are grouped by (kind, arity) but values are always reported
    in the formula's original constraint order, so reductions over them are
    deterministic for a fixed formula.
    """

    def __init__(self, formula: Formula):
        self.formula = formula
        self.num_vars = formula.num_vars
        self.num_constraints = formula.num_constraints
        groups: dict = {}
        for idx, c in enumerate(formula.constraints):
            groups.setdefault((c.kind, c.k), []).append(idx)
        self.blocks: list[_Block] = []
        for (kind, k), indices in groups.items():
            cs = [formula.constraints[i] for i in indices]
            var_idx = np.array([[l.var - 1 for l in c.literals] for c in cs], dtype=np.intp)
            sign = np.array(
                [[-1.0 if l.negated else 1.0 for l in c.literals] for c in cs]
            )
            viol = None
            if kind is Kind.CARD:
                viol = np.array([_card_violation_row(k, c.comparator, c.bound) for c in cs])
            self.blocks.append(
                _Block(kind, np.array(indices, dtype=np.intp), var_idx, sign, viol)
            )

    def values(self, x: np.ndarray) -> np.ndarray:
        """Per-constraint expansion values at x, in original constraint order."""
        out = np.empty(self.num_constraints)
        for b in self.blocks:
            out[b.rows] = _values_from_y(b.kind, b.gather_y(x), b.viol)
        return out

    def values_and_weighted_gradient(self, x: np.ndarray, weight_of):
        """Values plus the gradient of sum_c w_c * FE_c(x).

        ``weight_of`` maps the per-constraint value array to per-constraint
        weights (the outer chain-rule factor of the enclosing objective).
        """
        per_block = []
        out = np.empty(self.num_constraints)
        for b in self.blocks:
            values, grads = _values_and_grads_from_y(b.kind, b.gather_y(x), b.viol)
            out[b.rows] = values
            per_block.append(grads)
        weights = weight_of(out)
        grad = np.zeros(self.num_vars)
        for b, grads in zip(self.blocks, per_block):
            contrib = weights[b.rows][:, None] * b.sign * grads
            grad += np.bincount(
                b.var_idx.ravel(), weights=contrib.ravel(), minlength=self.num_vars
            )
        return out, grad


def compile_formula(formula: Formula) -> CompiledFormula:
    return CompiledFormula(formula)


# ---------------------------------------------------------------------------
# Per-constraint API.


def _check_point(x, c: Constraint) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] < max(l.var for l in c.literals):
        raise InputError(f"point of length {x.shape} too short for constraint")
    if not np.all(np.isfinite(x)):
        raise EvaluationError("non-finite entry in evaluation point")
    return x


def _constraint_y(c: Constraint, x: np.ndarray) -> np.ndarray:
    y = np.array([[(-x[l.var - 1] if l.negated else x[l.var - 1]) for l in c.literals]])
    return y


def _constraint_viol(c: Constraint) -> np.ndarray | None:
    if c.kind is Kind.CARD:
        return _card_violation_row(c.k, c.comparator, c.bound)[None, :]
    return None


def fourier_eval(c: Constraint, x) -> float:
    """Expansion value of one constraint at a real point (full-length x)."""
    x = _check_point(x, c)
    return float(_values_from_y(c.kind, _constraint_y(c, x), _constraint_viol(c))[0])


def fourier_eval_points(c: Constraint, points: np.ndarray) -> np.ndarray:
    """Expansion values at many points, shape (N, >= max var of c)."""
    points = np.asarray(points, dtype=np.float64)
    if not np.all(np.isfinite(points)):
        raise EvaluationError("non-finite entry in evaluation points")
    cols = np.array([l.var - 1 for l in c.literals])
    signs = np.array([-1.0 if l.negated else 1.0 for l in c.literals])
    y = signs[None, :] * points[:, cols]
    viol = _constraint_viol(c)
    if viol is not None:
        viol = np.broadcast_to(viol, (y.shape[0], viol.shape[1]))
    return _values_from_y(c.kind, y, viol)


def fourier_grad(c: Constraint, x) -> ConstraintEvaluation:
    """Value and exact gradient; entries of absent variables are zero."""
    x = _check_point(x, c)
    values, grads = _values_and_grads_from_y(
        c.kind, _constraint_y(c, x), _constraint_viol(c)
    )
    gradient = np.zeros(x.shape[0])
    for pos, l in enumerate(c.literals):
        gradient[l.var - 1] = (-1.0 if l.negated else 1.0) * grads[0, pos]
    return ConstraintEvaluation(float(values[0]), gradient)


def multilinear_split_check(c: Constraint, x, var: int) -> tuple[float, float]:
    """Evaluations with variable ``var`` pinned to +1 and to -1.

    Their mean is the value at var = 0 and their half-difference the partial
    derivative, by multilinearity.
    """
    if var not in (l.var for l in c.literals):
        raise InputError(f"variable {var} does not occur in the constraint")
    x = _check_point(x, c)
    hi = x.copy()
    hi[var - 1] = 1.0
    lo = x.copy()
    lo[var - 1] = -1.0
    return fourier_eval(c, hi), fourier_eval(c, lo)
