"""Brute-force ground truth for small constraints and formulas.

Everything in this module works from exhaustive enumeration of the Boolean
hypercube, completely independent of the closed-form evaluation in
:mod:`polysat.fourier`.  It is deliberately limited to small sizes
(``k <= 16`` per constraint, ``n <= 20`` per formula) so the full check
suite stays fast.

Besides the four built-in constraint kinds, the functions here also accept
:class:`TableConstraint`, a constraint given extensionally by its violating
assignments.  That is needed to study constraints outside the OR/XOR/NAE/CARD
family, e.g. hand-crafted counterexamples to rounding-friendliness.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (
    Comparator,
    Constraint,
    Formula,
    InputError,
    Kind,
    PolysatError,
    sign_round,
)

MAX_CONSTRAINT_VARS = 16
MAX_FORMULA_VARS = 20

# Witness coordinates from the falsifier are kept inside a moderate box so
# the |FE| <= tolerance test stays trustworthy in double precision.
_POLISH_COORD_LIMIT = 100.0
_ZERO_TOL = 1e-9


class CapacityError(PolysatError):
    """Instance too large for exhaustive enumeration."""


@dataclass(frozen=True)
class TableConstraint:
    """Constraint over variables 1..num_vars given by its violation set.

    ``violating`` holds +-1 tuples (one entry per variable, -1 = True).
    """

    num_vars: int
    violating: frozenset

    def __post_init__(self):
        object.__setattr__(self, "violating", frozenset(tuple(v) for v in self.violating))
        for v in self.violating:
            if len(v) != self.num_vars or any(e not in (-1, 1) for e in v):
                raise InputError(f"bad violating assignment {v!r}")

    @property
    def k(self) -> int:
        return self.num_vars

    def variables(self) -> tuple:
        return tuple(range(1, self.num_vars + 1))


def violation_table(c) -> np.ndarray:
    """0/1 vector over all 2^k local assignments; entry 1 means violated.

    Index bit ``i`` set means the variable of literal position ``i`` is True.
    """
    k = c.k
    if k > MAX_CONSTRAINT_VARS:
        raise CapacityError(f"constraint has {k} variables, limit {MAX_CONSTRAINT_VARS}")
    m = np.arange(1 << k, dtype=np.int64)
    if isinstance(c, TableConstraint):
        table = np.zeros(1 << k, dtype=np.float64)
        for v in c.violating:
            idx = 0
            for i, e in enumerate(v):
                if e == -1:
                    idx |= 1 << i
            table[idx] = 1.0
        return table
    trues = np.zeros(1 << k, dtype=np.int64)
    for i, lit in enumerate(c.literals):
        bit = (m >> i) & 1
        trues += bit ^ int(lit.negated)
    if c.kind is Kind.OR:
        violated = trues == 0
    elif c.kind is Kind.XOR:
        violated = trues % 2 == 0
    elif c.kind is Kind.NAE:
        violated = (trues == 0) | (trues == k)
    elif c.comparator is Comparator.GE:
        violated = trues < c.bound
    elif c.comparator is Comparator.LE:
        violated = trues > c.bound
    else:
        violated = trues != c.bound
    return violated.astype(np.float64)


def _walsh_hadamard(v: np.ndarray) -> np.ndarray:
    """In-place-style WHT with the (-1)^{popcount(s & m)} kernel."""
    v = v.astype(np.float64).copy()
    n = v.size
    h = 1
    while h < n:
        v = v.reshape(-1, 2 * h)
        a = v[:, :h].copy()
        v[:, :h] = a + v[:, h:]
        v[:, h:] = a - v[:, h:]
        v = v.reshape(-1)
        h *= 2
    return v


@dataclass(frozen=True)
class FourierCoefficients:
    """Multilinear expansion as a map {frozenset of 1-based vars: coefficient}."""

    terms: dict

    def __post_init__(self):
        object.__setattr__(
            self, "terms", {frozenset(s): float(v) for s, v in self.terms.items()}
        )

    def variables(self) -> tuple:
        out = set()
        for s in self.terms:
            out |= s
        return tuple(sorted(out))

    def eval(self, x: np.ndarray) -> float:
        """Evaluate the polynomial at one real point (indexed by variable)."""
        return float(self.eval_many(np.asarray(x, dtype=np.float64)[None, :])[0])

    def eval_many(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at many points, shape (N, >=max var)."""
        points = np.asarray(points, dtype=np.float64)
        vars_ = self.variables()
        v = len(vars_)
        # Monomial values over all subsets of vars_, built by doubling.
        mono = np.ones((points.shape[0], 1 << v))
        for i, var in enumerate(vars_):
            half = 1 << i
            mono[:, half : 2 * half] = mono[:, :half] * points[:, var - 1 : var]
        dense = np.zeros(1 << v)
        pos = {var: i for i, var in enumerate(vars_)}
        for s, coef in self.terms.items():
            idx = 0
            for var in s:
                idx |= 1 << pos[var]
            dense[idx] = coef
        return mono @ dense


def brute_force_coefficients(c) -> FourierCoefficients:
    """Exact expansion of the violation indicator by full enumeration.

    Output numerization: the polynomial is 0 at satisfying Boolean points
    and 1 at violating ones.  Zero coefficients are dropped from the map.
    """
    table = violation_table(c)
    k = c.k
    w = _walsh_hadamard(table) / (1 << k)
    vars_ = c.variables()
    terms = {}
    for s in range(1 << k):
        if w[s] != 0.0:
            subset = frozenset(vars_[i] for i in range(k) if (s >> i) & 1)
            terms[subset] = w[s]
    return FourierCoefficients(terms)


def eval_via_coefficients(coeffs: FourierCoefficients, x: np.ndarray) -> float:
    """Plain polynomial evaluation; the oracle counterpart of fourier_eval."""
    return coeffs.eval(x)


def has_isolated_violations(c) -> bool:
    """True iff no two violating assignments differ in exactly one variable."""
    table = violation_table(c)
    idx = np.nonzero(table)[0]
    for i in range(c.k):
        if np.any(table[idx ^ (1 << i)] == 1.0):
            return False
    return True


def _table_violated_by_rounding(table: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Whether sign-rounding each row lands on a violating assignment."""
    idx = np.zeros(points.shape[0], dtype=np.int64)
    for i in range(points.shape[1]):
        idx |= (points[:, i] < 0).astype(np.int64) << i
    return table[idx] == 1.0


def _local_points_to_witness(c, local: np.ndarray) -> np.ndarray:
    """Embed a local (per-literal-position) point into a full x vector."""
    vars_ = c.variables()
    x = np.zeros(max(vars_))
    for i, var in enumerate(vars_):
        x[var - 1] = local[i]
    return x


def falsify_rounding_friendly(c, trials: int = 10_000, seed: int = 0):
    """Search for a near-zero of the expansion whose rounding violates ``c``.

    Returns a witness vector (proof that ``c`` is not rounding-friendly) or
    None.  None is NOT a proof of friendliness; this is a one-sided
    falsifier.  Two strategies run in a fixed order:

    1. structured probes: fix a violating assignment scaled into its orthant
       and solve the remaining linear condition on each single coordinate;
    2. ``trials`` random points in [-3,3]^k, each polished to an exact zero
       along one cycling coordinate via the multilinear split.
    """
    k = c.k
    table = violation_table(c)
    coeffs = brute_force_coefficients(c)
    vars_ = np.array(c.variables())

    def check(local_batch: np.ndarray):
        vals = coeffs.eval_many(_embed(local_batch))
        ok = np.abs(vals) <= _ZERO_TOL
        bad = _table_violated_by_rounding(table, local_batch)
        hits = np.nonzero(ok & bad)[0]
        if hits.size:
            return _local_points_to_witness(c, local_batch[hits[0]])
        return None

    def _embed(local_batch: np.ndarray) -> np.ndarray:
        pts = np.zeros((local_batch.shape[0], int(vars_.max())))
        pts[:, vars_ - 1] = local_batch
        return pts

    def polish(local_batch: np.ndarray, i: int):
        """Move coordinate i of each row onto the zero set, where possible."""
        hi = local_batch.copy()
        lo = local_batch.copy()
        hi[:, i] = 1.0
        lo[:, i] = -1.0
        f_hi = coeffs.eval_many(_embed(hi))
        f_lo = coeffs.eval_many(_embed(lo))
        g = (f_hi - f_lo) / 2.0
        h = (f_hi + f_lo) / 2.0
        with np.errstate(divide="ignore", invalid="ignore"):
            root = -h / g
        good = (np.abs(g) > 1e-12) & (np.abs(root) <= _POLISH_COORD_LIMIT)
        out = local_batch[good].copy()
        out[:, i] = root[good]
        return out

    # Strategy 1: structured probes around each violating assignment.
    viol_idx = np.nonzero(table)[0]
    probes = []
    for m in viol_idx:
        b = np.array([1.0 - 2.0 * ((int(m) >> i) & 1) for i in range(k)])
        for scale in (1.0, 1.5, 2.0, 2.5, 3.0, 4.0):
            probes.append(b * scale)
    if probes:
        probes = np.array(probes)
        for i in range(k):
            witness = check(polish(probes, i))
            if witness is not None:
                return witness

    # Strategy 2: random sampling with per-coordinate root polishing.
    rng = np.random.default_rng(seed)
    done = 0
    coord = 0
    while done < trials:
        batch = min(4096, trials - done)
        pts = rng.uniform(-3.0, 3.0, size=(batch, k))
        witness = check(polish(pts, coord))
        if witness is not None:
            return witness
        done += batch
        coord = (coord + 1) % k
    return None


def brute_force_optimum(f: Formula):
    """Exhaustive MaxSAT optimum: (min violations, one witness assignment)."""
    n = f.num_vars
    if n > MAX_FORMULA_VARS:
        raise CapacityError(f"formula has {n} variables, limit {MAX_FORMULA_VARS}")
    m = np.arange(1 << n, dtype=np.int64)
    violations = np.zeros(1 << n, dtype=np.int64)
    for c in f.constraints:
        trues = np.zeros(1 << n, dtype=np.int64)
        for lit in c.literals:
            bit = (m >> (lit.var - 1)) & 1
            trues += bit ^ int(lit.negated)
        k = c.k
        if c.kind is Kind.OR:
            violated = trues == 0
        elif c.kind is Kind.XOR:
            violated = trues % 2 == 0
        elif c.kind is Kind.NAE:
            violated = (trues == 0) | (trues == k)
        elif c.comparator is Comparator.GE:
            violated = trues < c.bound
        elif c.comparator is Comparator.LE:
            violated = trues > c.bound
        else:
            violated = trues != c.bound
        violations += violated
    best = int(np.argmin(violations))
    bits = (best >> np.arange(n)) & 1
    witness = (1 - 2 * bits).astype(np.int64)
    return int(violations[best]), witness
