"""Top-level solve loop and the rounding theory it leans on.

A solve is a sequence of seeded restarts.  Each restart starts uniformly
in [-1, 1]^n, runs the configured optimizer, and rounds candidate points
by sign (current iterate and best-seen every 100 iterations, best-seen
again at the end).  Every rounded assignment is re-verified discretely;
the continuous objective is never trusted on its own.  The method is
incomplete: it answers SAT with a verified assignment or UNKNOWN with the
best (fewest-violations) assignment found, never UNSAT.

Also here: the sufficient rounding test per constraint (an OR of length k
rounds correctly whenever |FE| < 1/2^k, an XOR whenever |FE| < 1/2, an
NAE of length k whenever |FE| < 1/2^(k-1)) and the violation bound it
implies for pure formulas: rounding any real point l with unpenalized
square objective W violates at most ceil(4^k W) constraints of a k-CNF,
ceil(4 W) of an XOR system, and ceil(4^(k-1) W) of a k-NAE system.
"""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .model import Constraint, Formula, InputError, Kind, count_violations, sign_round
from .objectives import Formulation, Objective, build_objective
from .optimizers import DivergenceError, OptimizerConfig, OptimizerKind, run

__all__ = [
    "SolveStatus",
    "SolveConfig",
    "SolveResult",
    "solve",
    "violation_bound",
    "epsilon_rounding_check",
    "rounding_epsilon",
]

ROUNDING_CHECK_PERIOD = 100


class SolveStatus(enum.Enum):
    SAT = "SAT"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class SolveConfig:
    formulation: Formulation = Formulation.SQUARE
    alpha: float = 0.0
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    restarts: int = 32
    seed: int = 0
    timeout: float = 300.0

    def __post_init__(self):
        if self.restarts < 1:
            raise InputError(f"restarts must be positive, got {self.restarts}")
        if not (self.timeout > 0):
            raise InputError(f"timeout must be positive, got {self.timeout}")
        if (
            self.formulation is Formulation.LINEAR
            and self.optimizer.kind is not OptimizerKind.PGD
        ):
            raise InputError(
                "the linear formulation is only sound on the box; use PGD"
            )


@dataclass
class SolveResult:
    status: SolveStatus
    assignment: np.ndarray | None
    violated: int
    restarts_used: int
    iters_total: int
    final_objective: float

    @property
    def satisfiable(self) -> bool:
        return self.status is SolveStatus.SAT


class _BestTracker:
    """Fewest discrete violations wins; earlier candidates win ties."""

    def __init__(self, formula: Formula):
        self.formula = formula
        self.assignment: np.ndarray | None = None
        self.violated = formula.num_constraints + 1

    def offer(self, x: np.ndarray) -> int:
        assignment = sign_round(x)
        v = count_violations(self.formula, assignment)
        if v < self.violated:
            self.violated = v
            self.assignment = assignment
        return v


def solve(formula: Formula, cfg: SolveConfig = SolveConfig()) -> SolveResult:
    """Minimize the chosen objective under restarts and round to Booleans."""
    obj = build_objective(formula, cfg.formulation, cfg.alpha)
    n = formula.num_vars
    deadline = time.monotonic() + cfg.timeout
    tracker = _BestTracker(formula)
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    restarts_used = 0
    iters_total = 0
    final_objective = math.inf

    for seq in seeds:
        if tracker.assignment is not None and time.monotonic() >= deadline:
            break
        restarts_used += 1
        rng = np.random.default_rng(seq)
        x0 = rng.uniform(-1.0, 1.0, n)

        def periodic_check(state) -> bool:
            # cheap early exit: round and verify every 100 iterations
            if state.iter % ROUNDING_CHECK_PERIOD != 0:
                return False
            found = tracker.offer(state.x) == 0
            if tracker.offer(state.best_x_seen) == 0:
                found = True
            return found

        try:
            state = run(
                x0,
                cfg.optimizer,
                obj,
                deadline=max(deadline - time.monotonic(), 0.0),
                callback=periodic_check,
            )
        except DivergenceError as err:
            state = err.state
        iters_total += state.iter
        final_objective = min(final_objective, state.best_value_seen)
        tracker.offer(state.best_x_seen)
        if tracker.violated == 0:
            break

    if tracker.violated == 0:
        return SolveResult(
            SolveStatus.SAT,
            tracker.assignment,
            0,
            restarts_used,
            iters_total,
            final_objective,
        )
    return SolveResult(
        SolveStatus.UNKNOWN,
        tracker.assignment,
        tracker.violated if tracker.assignment is not None else formula.num_constraints,
        restarts_used,
        iters_total,
        final_objective,
    )


def rounding_epsilon(c: Constraint) -> float:
    """Margin below which sign rounding provably satisfies the constraint."""
    if c.kind is Kind.OR:
        return 0.5**c.k
    if c.kind is Kind.XOR:
        return 0.5
    if c.kind is Kind.NAE:
        return 0.5 ** (c.k - 1)
    raise InputError(
        "cardinality constraints admit falsifying zeros arbitrarily far from "
        "the cube; no rounding margin exists"
    )


def epsilon_rounding_check(c: Constraint, x) -> bool:
    """True iff |FE_c(x)| clears the kind's margin, guaranteeing the rounding."""
    from .fourier import fourier_eval

    return abs(fourier_eval(c, x)) < rounding_epsilon(c)


def violation_bound(formula: Formula, W: float) -> int | None:
    """Max constraints violated by rounding any point with square objective W.

    Only claimed for pure formulas: all-OR gives ceil(4^k W) with k the
    largest clause width (every shorter clause clears the wider margin too),
    all-XOR gives ceil(4 W), all-NAE gives ceil(4^(k-1) W).  Mixed formulas
    and cardinality constraints get no bound (None).
    """
    if formula.num_constraints == 0:
        return 0
    kinds = {c.kind for c in formula.constraints}
    if len(kinds) != 1:
        return None
    kind = next(iter(kinds))
    k = max(c.k for c in formula.constraints)
    if kind is Kind.OR:
        factor = 4.0**k
    elif kind is Kind.XOR:
        factor = 4.0
    elif kind is Kind.NAE:
        factor = 4.0 ** (k - 1)
    else:
        return None
    return math.ceil(factor * W)
