"""Hybrid SAT/MaxSAT solving by multilinear polynomial minimization.

Boolean constraints (OR, XOR, not-all-equal, cardinality) are encoded as
multilinear polynomials over the +-1 cube that count violations, folded
into a differentiable objective, minimized with first-order methods, and
rounded back to Boolean assignments with discrete re-verification.
"""

from .model import (
    CARD,
    NAE,
    OR,
    XOR,
    Comparator,
    Constraint,
    EvaluationError,
    Formula,
    InputError,
    Kind,
    Literal,
    PolysatError,
    check_assignment,
    count_violations,
    is_satisfied,
    sign_round,
    true_literal_count,
)
from .fourier import (
    ConstraintEvaluation,
    compile_formula,
    fourier_eval,
    fourier_eval_points,
    fourier_grad,
    multilinear_split_check,
)
from .objectives import (
    Formulation,
    Objective,
    ObjectiveEvaluation,
    build_objective,
    objective_gradient,
    objective_value,
    satisfiability_certificate,
)
from .optimizers import (
    DivergenceError,
    OptimizerConfig,
    OptimizerKind,
    OptimizerState,
    box_project,
    run,
    step,
)
from .solver import (
    SolveConfig,
    SolveResult,
    SolveStatus,
    epsilon_rounding_check,
    rounding_epsilon,
    solve,
    violation_bound,
)
from .benchgen import (
    BenchSpec,
    Family,
    gen_corpus,
    gen_random_card,
    gen_random_kcnf,
    gen_random_knae,
    gen_random_kxor,
)
from .hnf import ParseError, parse_hnf, serialize_hnf
from .sweep import SweepSpec, aggregate_sweep, run_sweep

__version__ = "0.1.0"

__all__ = [
    "CARD",
    "NAE",
    "OR",
    "XOR",
    "BenchSpec",
    "Comparator",
    "Constraint",
    "ConstraintEvaluation",
    "DivergenceError",
    "EvaluationError",
    "Family",
    "Formula",
    "Formulation",
    "InputError",
    "Kind",
    "Literal",
    "Objective",
    "ObjectiveEvaluation",
    "OptimizerConfig",
    "OptimizerKind",
    "OptimizerState",
    "ParseError",
    "PolysatError",
    "SolveConfig",
    "SolveResult",
    "SolveStatus",
    "SweepSpec",
    "aggregate_sweep",
    "box_project",
    "build_objective",
    "check_assignment",
    "compile_formula",
    "count_violations",
    "epsilon_rounding_check",
    "fourier_eval",
    "fourier_eval_points",
    "fourier_grad",
    "gen_corpus",
    "gen_random_card",
    "gen_random_kcnf",
    "gen_random_knae",
    "gen_random_kxor",
    "is_satisfied",
    "multilinear_split_check",
    "objective_gradient",
    "objective_value",
    "parse_hnf",
    "rounding_epsilon",
    "run",
    "run_sweep",
    "satisfiability_certificate",
    "serialize_hnf",
    "sign_round",
    "solve",
    "step",
    "true_literal_count",
    "violation_bound",
]
