"""Seeded random instance generators for the three benchmark families.

Families: random k-CNF (width-3 in the standard family), random k-XOR
(width-2), and random cardinality formulas built from two density knobs:
floor(r_P * n) constraints, each over floor(r_V * n) distinct positive
literals, comparator drawn uniformly from {>=, <=}, right-hand side
floor(r_V * n / 2).

All randomness flows through numpy's PCG64 via SeedSequence, so corpora
are bit-identical across runs and platforms.  Corpus generation derives
one child stream per formula index, which also makes it parallelizable.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .model import CARD, NAE, OR, XOR, Comparator, Formula, InputError, Kind

__all__ = [
    "Family",
    "BenchSpec",
    "gen_random_kcnf",
    "gen_random_kxor",
    "gen_random_knae",
    "gen_random_card",
    "gen_corpus",
    "ratio_floor",
]

# floor() guard: ratios like 0.3 * 10 land just under the true product
_FLOOR_EPS = 1e-9


def ratio_floor(value: float) -> int:
    return math.floor(value + _FLOOR_EPS)


class Family(enum.Enum):
    CNF3 = "cnf3"
    XOR2 = "xor2"
    CARD = "card"


@dataclass(frozen=True)
class BenchSpec:
    """One grid point of a benchmark family: n plus its density knobs."""

    family: Family
    n: int
    m_over_n: float | None = None  # CNF3 / XOR2
    r_p: float | None = None  # CARD: constraints per variable
    r_v: float | None = None  # CARD: constraint width per variable
    count: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise InputError(f"n must be positive, got {self.n}")
        if self.count < 1:
            raise InputError(f"count must be positive, got {self.count}")
        if self.family is Family.CARD:
            if self.r_p is None or self.r_v is None:
                raise InputError("CARD needs r_p and r_v")
        elif self.m_over_n is None:
            raise InputError(f"{self.family.value} needs m_over_n")


def _uniform_constraints(kind: Kind, n: int, m: int, k: int, seed) -> Formula:
    if k > n:
        raise InputError(f"constraint width {k} exceeds variable count {n}")
    if k < 1 or m < 0:
        raise InputError("need k >= 1 and m >= 0")
    rng = np.random.default_rng(seed)
    builder = {Kind.OR: OR, Kind.XOR: XOR, Kind.NAE: NAE}[kind]
    constraints = []
    for _ in range(m):
        vars_ = rng.choice(n, size=k, replace=False) + 1
        signs = rng.random(k) < 0.5
        constraints.append(builder(*(int(v) if not s else -int(v) for v, s in zip(vars_, signs))))
    return Formula(n, tuple(constraints))


def gen_random_kcnf(n: int, m: int, k: int, seed) -> Formula:
    """m clauses of k distinct variables each, signs fair coins."""
    return _uniform_constraints(Kind.OR, n, m, k, seed)


def gen_random_kxor(n: int, m: int, k: int, seed) -> Formula:
    """Like gen_random_kcnf with XOR constraints."""
    return _uniform_constraints(Kind.XOR, n, m, k, seed)


def gen_random_knae(n: int, m: int, k: int, seed) -> Formula:
    """Like gen_random_kcnf with not-all-equal constraints (k >= 2)."""
    return _uniform_constraints(Kind.NAE, n, m, k, seed)


def gen_random_card(n: int, r_p: float, r_v: float, seed) -> Formula:
    """floor(r_P n) cardinality constraints over floor(r_V n) variables each."""
    if not (0.0 < r_p <= 1.0 and 0.0 < r_v <= 1.0):
        raise InputError("r_p and r_v must lie in (0, 1]")
    m = ratio_floor(r_p * n)
    width = ratio_floor(r_v * n)
    bound = ratio_floor(r_v * n / 2.0)
    if m < 1 or width < 1:
        raise InputError(
            f"degenerate sizes: {m} constraints of width {width} from "
            f"n={n}, r_p={r_p}, r_v={r_v}"
        )
    rng = np.random.default_rng(seed)
    constraints = []
    for _ in range(m):
        vars_ = rng.choice(n, size=width, replace=False) + 1
        comparator = Comparator.GE if rng.integers(0, 2) == 0 else Comparator.LE
        constraints.append(CARD(comparator, bound, *(int(v) for v in vars_)))
    return Formula(n, tuple(constraints))


def gen_instance(spec: BenchSpec, seed) -> Formula:
    if spec.family is Family.CNF3:
        return gen_random_kcnf(spec.n, ratio_floor(spec.m_over_n * spec.n), 3, seed)
    if spec.family is Family.XOR2:
        return gen_random_kxor(spec.n, ratio_floor(spec.m_over_n * spec.n), 2, seed)
    return gen_random_card(spec.n, spec.r_p, spec.r_v, seed)


def gen_corpus(spec: BenchSpec) -> list[Formula]:
    """spec.count formulas, one child PRNG stream per formula index."""
    streams = np.random.SeedSequence(spec.seed).spawn(spec.count)
    return [gen_instance(spec, s) for s in streams]
