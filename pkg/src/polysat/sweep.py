"""Experiment sweeps: benchmark grid x solver configs -> CSV.

One row per (instance, config) cell.  Instances are generated once per
grid point from seeds derived deterministically from (sweep seed, point
index, instance index), and solver seeds additionally mix in the config
index, so reruns with the same spec and thread count reproduce the CSV
byte for byte (disable wall-clock measurement for that; timings are the
one inherently nondeterministic column and are written as 0 when
``measure_time`` is off).

Rows are emitted in canonical grid order (point, instance, config) no
matter which worker finishes first.  A failing cell becomes a row with
solved=0 and the error in the note column; the sweep itself never aborts.

The aggregation pass is a separate pure function collapsing rows into
solved fractions per (grid point, config), the shape the trend plots use.
"""

from __future__ import annotations

import csv
import io
import multiprocessing
import time
from dataclasses import dataclass

import numpy as np

from .benchgen import Family, gen_random_card, gen_random_kcnf, gen_random_kxor, ratio_floor
from .model import Formula, InputError
from .objectives import Formulation
from .optimizers import OptimizerConfig, OptimizerKind
from .solver import SolveConfig, SolveStatus, solve

__all__ = ["SweepSpec", "run_sweep", "aggregate_sweep", "write_text"]

CSV_FIELDS = [
    "family",
    "n",
    "ratio",
    "r_p",
    "r_v",
    "instance",
    "formulation",
    "alpha",
    "optimizer",
    "seed",
    "solved",
    "violated",
    "iters",
    "wall_ms",
    "note",
]

AGG_FIELDS = [
    "family",
    "n",
    "ratio",
    "r_p",
    "r_v",
    "formulation",
    "alpha",
    "optimizer",
    "instances",
    "solved_fraction",
]


def _fmt(value: float) -> str:
    """Locale-independent float with 6 significant digits."""
    return format(float(value), ".6g")


@dataclass(frozen=True)
class SweepSpec:
    family: Family
    n: int
    ratios: tuple[float, ...] = ()  # m/n grid (CNF3, XOR2)
    r_p_values: tuple[float, ...] = ()  # CARD grid, crossed
    r_v_values: tuple[float, ...] = ()
    count: int = 1  # instances per grid point
    formulations: tuple[Formulation, ...] = (Formulation.SQUARE,)
    alphas: tuple[float, ...] = (0.0,)
    optimizers: tuple[OptimizerKind, ...] = (OptimizerKind.ADAM,)
    seed: int = 0
    timeout: float = 300.0
    restarts: int = 32
    step_size: float = 1e-3
    max_iters: int = 10_000
    threads: int = 1
    measure_time: bool = True

    def __post_init__(self):
        if self.count < 1 or self.threads < 1:
            raise InputError("count and threads must be positive")
        if not self.grid_points():
            raise InputError("empty benchmark grid")
        if not (self.formulations and self.alphas and self.optimizers):
            raise InputError("empty solver config grid")
        for f, a, o in self.configs():
            self.solve_config(f, a, o, seed=0)  # validation only

    def grid_points(self) -> list[tuple]:
        """Sorted grid coordinates: (ratio,) or (r_p, r_v)."""
        if self.family is Family.CARD:
            return [(p, v) for p in sorted(self.r_p_values) for v in sorted(self.r_v_values)]
        return [(r,) for r in sorted(self.ratios)]

    def configs(self) -> list[tuple[Formulation, float, OptimizerKind]]:
        return [
            (f, a, o)
            for f in self.formulations
            for a in self.alphas
            for o in self.optimizers
        ]

    def instance(self, point: tuple, point_idx: int, inst_idx: int) -> Formula:
        seq = np.random.SeedSequence((self.seed, point_idx, inst_idx))
        if self.family is Family.CNF3:
            return gen_random_kcnf(self.n, ratio_floor(point[0] * self.n), 3, seq)
        if self.family is Family.XOR2:
            return gen_random_kxor(self.n, ratio_floor(point[0] * self.n), 2, seq)
        return gen_random_card(self.n, point[0], point[1], seq)

    def solve_config(
        self, formulation: Formulation, alpha: float, optimizer: OptimizerKind, seed: int
    ) -> SolveConfig:
        # the linear objective is only meaningful on the box, so linear
        # cells always run the projected step rule whatever the column says
        kind = OptimizerKind.PGD if formulation is Formulation.LINEAR else optimizer
        return SolveConfig(
            formulation=formulation,
            alpha=alpha,
            optimizer=OptimizerConfig(
                kind=kind, step_size=self.step_size, max_iters=self.max_iters
            ),
            restarts=self.restarts,
            seed=seed,
            timeout=self.timeout,
        )


@dataclass(frozen=True)
class _Cell:
    row_head: dict
    formula: Formula
    config: SolveConfig
    measure_time: bool


def _cell_seed(spec_seed: int, point_idx: int, inst_idx: int, cfg_idx: int) -> int:
    seq = np.random.SeedSequence((spec_seed, point_idx, inst_idx, cfg_idx))
    return int(seq.generate_state(1, np.uint64)[0])


def _run_cell(cell: _Cell) -> dict:
    row = dict(cell.row_head)
    try:
        start = time.perf_counter()
        result = solve(cell.formula, cell.config)
        elapsed = time.perf_counter() - start
        row["solved"] = 1 if result.status is SolveStatus.SAT else 0
        row["violated"] = result.violated
        row["iters"] = result.iters_total
        row["wall_ms"] = int(round(elapsed * 1000)) if cell.measure_time else 0
        row["note"] = ""
    except Exception as err:  # record, never abort the sweep
        row["solved"] = 0
        row["violated"] = ""
        row["iters"] = ""
        row["wall_ms"] = 0
        row["note"] = f"{type(err).__name__}: {err}"
    return row


def _cells(spec: SweepSpec) -> list[_Cell]:
    cells = []
    configs = spec.configs()
    for point_idx, point in enumerate(spec.grid_points()):
        ratio = _fmt(point[0]) if spec.family is not Family.CARD else ""
        r_p = _fmt(point[0]) if spec.family is Family.CARD else ""
        r_v = _fmt(point[1]) if spec.family is Family.CARD else ""
        for inst_idx in range(spec.count):
            formula = spec.instance(point, point_idx, inst_idx)
            for cfg_idx, (formulation, alpha, optimizer) in enumerate(configs):
                seed = _cell_seed(spec.seed, point_idx, inst_idx, cfg_idx)
                head = {
                    "family": spec.family.value,
                    "n": spec.n,
                    "ratio": ratio,
                    "r_p": r_p,
                    "r_v": r_v,
                    "instance": inst_idx,
                    "formulation": formulation.value,
                    "alpha": _fmt(alpha),
                    "optimizer": optimizer.value,
                    "seed": seed,
                }
                cells.append(
                    _Cell(
                        head,
                        formula,
                        spec.solve_config(formulation, alpha, optimizer, seed),
                        spec.measure_time,
                    )
                )
    return cells


def run_sweep(spec: SweepSpec) -> str:
    """Execute every (instance, config) cell; returns the data CSV text."""
    cells = _cells(spec)
    if spec.threads > 1:
        with multiprocessing.Pool(spec.threads) as pool:
            rows = list(pool.imap(_run_cell, cells, chunksize=1))
    else:
        rows = [_run_cell(cell) for cell in cells]
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return out.getvalue()


def aggregate_sweep(data_csv: str) -> str:
    """Collapse a data CSV into solved fractions per (grid point, config)."""
    groups: dict[tuple, list[int]] = {}
    for row in csv.DictReader(io.StringIO(data_csv)):
        key = tuple(
            row[field]
            for field in ("family", "n", "ratio", "r_p", "r_v", "formulation", "alpha", "optimizer")
        )
        groups.setdefault(key, []).append(1 if row["solved"] == "1" else 0)
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=AGG_FIELDS, lineterminator="\n")
    writer.writeheader()
    for key, solved in groups.items():
        record = dict(zip(AGG_FIELDS[:8], key))
        record["instances"] = len(solved)
        record["solved_fraction"] = _fmt(sum(solved) / len(solved))
        writer.writerow(record)
    return out.getvalue()


def write_text(path: str, text: str) -> None:
    with open(path, "w", newline="") as handle:
        handle.write(text)
