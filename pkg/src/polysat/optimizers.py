"""First-order minimizers over objectives: GD, PGD, Adam.

All three share one stopping contract: stop at the first of
value <= value_tol, gradient infinity-norm <= grad_tol, iter == max_iters,
or an expired wall-clock budget.  PGD projects every iterate back onto
[-1, 1]^n (componentwise clamp, which is the Euclidean projection).  A
non-finite value or gradient aborts the run with the best finite iterate
attached to the error.

Each state caches the objective evaluation at its own iterate, so a full
run costs one value-and-gradient evaluation per accepted step.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass

import numpy as np

from .model import InputError, PolysatError
from .objectives import Objective, objective_gradient

__all__ = [
    "OptimizerKind",
    "OptimizerConfig",
    "OptimizerState",
    "DivergenceError",
    "box_project",
    "init_state",
    "step",
    "run",
]


class OptimizerKind(enum.Enum):
    GD = "gd"
    PGD = "pgd"
    ADAM = "adam"


@dataclass(frozen=True)
class OptimizerConfig:
    kind: OptimizerKind = OptimizerKind.ADAM
    step_size: float = 1e-3
    max_iters: int = 10_000
    grad_tol: float = 0.0
    value_tol: float = 1e-8
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8

    def __post_init__(self):
        if not (self.step_size > 0):
            raise InputError(f"step_size must be positive, got {self.step_size}")
        if self.max_iters < 0:
            raise InputError(f"max_iters must be non-negative, got {self.max_iters}")
        if self.grad_tol < 0 or self.value_tol < 0:
            raise InputError("tolerances must be non-negative")
        if not (0.0 <= self.adam_beta1 < 1.0 and 0.0 <= self.adam_beta2 < 1.0):
            raise InputError("adam betas must lie in [0, 1)")


@dataclass
class OptimizerState:
    x: np.ndarray
    iter: int
    value: float  # objective value at x
    gradient: np.ndarray  # objective gradient at x
    best_value_seen: float
    best_x_seen: np.ndarray
    first_moment: np.ndarray | None = None  # Adam only
    second_moment: np.ndarray | None = None  # Adam only


class DivergenceError(PolysatError):
    """Optimization produced a non-finite value or gradient."""

    def __init__(self, message: str, state: OptimizerState):
        super().__init__(message)
        self.state = state


def box_project(x) -> np.ndarray:
    """Nearest point of [-1, 1]^n: componentwise clamp."""
    return np.clip(np.asarray(x, dtype=np.float64), -1.0, 1.0)


def _finite(ev) -> bool:
    return np.isfinite(ev.value) and np.all(np.isfinite(ev.gradient))


def init_state(x0, cfg: OptimizerConfig, obj: Objective) -> OptimizerState:
    x0 = np.asarray(x0, dtype=np.float64).copy()
    if x0.shape != (obj.num_vars,):
        raise InputError(f"x0 has shape {x0.shape}, expected ({obj.num_vars},)")
    if not np.all(np.isfinite(x0)):
        raise InputError("x0 must be finite")
    if cfg.kind is OptimizerKind.PGD and (np.any(x0 > 1.0) or np.any(x0 < -1.0)):
        raise InputError("PGD requires x0 inside [-1, 1]^n")
    ev = objective_gradient(obj, x0)
    state = OptimizerState(
        x=x0,
        iter=0,
        value=ev.value,
        gradient=ev.gradient,
        best_value_seen=ev.value,
        best_x_seen=x0.copy(),
    )
    if cfg.kind is OptimizerKind.ADAM:
        state.first_moment = np.zeros_like(x0)
        state.second_moment = np.zeros_like(x0)
    if not _finite(ev):
        raise DivergenceError("non-finite objective at the starting point", state)
    return state


def step(state: OptimizerState, cfg: OptimizerConfig, obj: Objective) -> OptimizerState:
    """One update; returns a new state with best-seen carried forward."""
    g = state.gradient
    # overflow along a diverging trajectory is detected by the finiteness
    # checks below, so arithmetic warnings are suppressed here
    with np.errstate(over="ignore", invalid="ignore"):
        if cfg.kind is OptimizerKind.GD:
            x_new = state.x - cfg.step_size * g
            m_new = v_new = None
        elif cfg.kind is OptimizerKind.PGD:
            x_new = np.clip(state.x - cfg.step_size * g, -1.0, 1.0)
            m_new = v_new = None
        else:
            t = state.iter + 1
            m_new = cfg.adam_beta1 * state.first_moment + (1.0 - cfg.adam_beta1) * g
            v_new = cfg.adam_beta2 * state.second_moment + (1.0 - cfg.adam_beta2) * g * g
            m_hat = m_new / (1.0 - cfg.adam_beta1**t)
            v_hat = v_new / (1.0 - cfg.adam_beta2**t)
            x_new = state.x - cfg.step_size * m_hat / (np.sqrt(v_hat) + cfg.adam_eps)

    if not np.all(np.isfinite(x_new)):
        raise DivergenceError("iterate diverged to a non-finite point", state)
    ev = objective_gradient(obj, x_new)
    new_state = OptimizerState(
        x=x_new,
        iter=state.iter + 1,
        value=ev.value,
        gradient=ev.gradient,
        best_value_seen=state.best_value_seen,
        best_x_seen=state.best_x_seen,
        first_moment=m_new,
        second_moment=v_new,
    )
    if not _finite(ev):
        raise DivergenceError("objective diverged to a non-finite value", new_state)
    if ev.value < state.best_value_seen:
        new_state.best_value_seen = ev.value
        new_state.best_x_seen = x_new.copy()
    return new_state


def run(
    x0,
    cfg: OptimizerConfig,
    obj: Objective,
    deadline: float | None = None,
    callback=None,
) -> OptimizerState:
    """Iterate until the stopping contract fires.

    ``deadline`` is a wall-clock budget in seconds.  ``callback``, if
    given, is invoked with the state after every step; a truthy return
    stops the run (used for periodic rounding checks by the solver).
    """
    limit = None if deadline is None else time.monotonic() + deadline
    state = init_state(x0, cfg, obj)
    while True:
        if state.value <= cfg.value_tol:
            break
        if np.max(np.abs(state.gradient), initial=0.0) <= cfg.grad_tol:
            break
        if state.iter >= cfg.max_iters:
            break
        if limit is not None and time.monotonic() >= limit:
            break
        state = step(state, cfg, obj)
        if callback is not None and callback(state):
            break
    return state
