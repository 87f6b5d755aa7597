#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Convergence tables and exact comparison reports."""

import logging
import math
import time
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence

import numpy as np
from rich.console import Console, ConsoleOptions, RenderResult
from rich.progress import BarColumn, Progress, SpinnerColumn
from rich.table import Table

from .console import err_console
from .errors import UsageError
from .exact import exact_caputo_ramp_history, exact_phitau_ramp_history, gen_integral
from .forcing import CorrectiveForcing
from .problem import LinearProblem
from .trajectory import Trajectory, grid_size

# observed orders inside this window are shown as first order
FIRST_ORDER = (0.8, 1.2)


class ConvergenceRow(NamedTuple):
    """Maximum grid error at one step size, and the order it implies."""

    h: float
    max_error: float
    order: float = math.nan

    def as_dict(self) -> Dict[str, float]:
        return {"h": self.h, "max_error": self.max_error, "observed_order": self.order}


class ConvergenceTable:
    """Rows of a convergence study, renderable in the console."""

    label: str
    rows: List[ConvergenceRow]

    def __init__(self, label: str, rows: List[ConvergenceRow]) -> None:
        self.label = label
        self.rows = rows

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def __rich_console__(
        self, console: Console, options: ConsoleOptions
    ) -> RenderResult:
        """Format the table for display in console."""
        table = Table(title=self.label)
        table.add_column("h", justify="right")
        table.add_column("max error", justify="right")
        table.add_column("observed order", justify="right")
        low, high = FIRST_ORDER
        for row in self.rows:
            if math.isnan(row.order):
                order = "-"
            else:
                style = "good" if low <= row.order <= high else "poor"
                order = f"[{style}]{row.order:.3f}[/{style}]"
            table.add_row(f"{row.h:.6g}", f"{row.max_error:.3e}", order)
        return [table]


def observed_orders(steps: Sequence[float], errors: Sequence[float]) -> List[float]:
    """log(e_{i-1}/e_i)/log(h_{i-1}/h_i) for consecutive rows; NaN first."""
    orders = [math.nan]
    for i in range(1, len(steps)):
        if errors[i] > 0 and errors[i - 1] > 0:
            orders.append(
                math.log(errors[i - 1] / errors[i]) / math.log(steps[i - 1] / steps[i])
            )
        else:
            orders.append(math.nan)
    return orders


def max_error(traj: Trajectory, reference: Callable[[float], float]) -> float:
    """Largest |y_n - reference(t_n)| over the grid nodes up to T."""
    errors = [
        abs(y - reference(float(t)))
        for t, y in zip(traj.times, traj.values)
        if t <= traj.T * (1 + 1e-12)
    ]
    return float(max(errors))


def convergence_study(
    solve: Callable[[float], Trajectory],
    steps: Iterable[float],
    reference: Optional[Callable[[float], float]] = None,
    label: str = "convergence",
) -> ConvergenceTable:
    """Measure max errors for each step size, coarsest first.

    Without a reference each step is measured against the solution at a
    quarter of that step (self-convergence).
    """
    steps = sorted(set(float(h) for h in steps), reverse=True)
    if len(steps) < 2:
        raise UsageError("a convergence study needs at least two step sizes")
    if reference is None:
        logging.info("self-convergence against a quarter of each step")

    runs: Dict[float, Trajectory] = {}

    def run(h: float) -> Trajectory:
        if h not in runs:
            runs[h] = solve(h)
        return runs[h]

    progress = Progress(
        "[progress.description]{task.description}",
        SpinnerColumn(),
        BarColumn(bar_width=None),
        "{task.completed}/{task.total}",
        console=err_console,
        transient=True,
    )
    task = progress.add_task(label, total=len(steps))
    errors = []
    start = time.perf_counter()
    with progress:
        for h in steps:
            target = reference if reference is not None else run(h / 4)
            errors.append(max_error(run(h), target))
            logging.debug(f"h={h}: max error {errors[-1]:.3e}")
            progress.advance(task)
    logging.info(f"ran {len(runs)} solves in {time.perf_counter() - start:.1f}s")

    orders = observed_orders(steps, errors)
    rows = [ConvergenceRow(h, e, o) for h, e, o in zip(steps, errors, orders)]
    return ConvergenceTable(label, rows)


class ComparisonRow(NamedTuple):
    """Caputo and φτ solutions at one time, with their difference."""

    t: float
    y: float
    y_hat: float
    diff: float
    j_corrective: float

    def as_dict(self) -> Dict[str, float]:
        return self._asdict()

    @property
    def discrepancy(self) -> float:
        """How far the difference is from the integral of the corrective term."""
        return abs(self.diff - self.j_corrective)


def compare_ramp_solutions(p: LinearProblem, times: Iterable[float]) -> List[ComparisonRow]:
    """Exact Caputo and φτ solutions of a ramp-history problem side by side.

    The difference is checked against J₀,τ,λ applied to the corrective term.
    """
    corrective = CorrectiveForcing(p.history, p.alpha)
    rows = []
    for t in times:
        y = exact_caputo_ramp_history(p, t)
        y_hat = exact_phitau_ramp_history(p, t)
        j = gen_integral(corrective, p.alpha, p.lam, p.tau, t)
        rows.append(ComparisonRow(float(t), y, y_hat, y_hat - y, j))
    return rows


class PairRow(NamedTuple):
    """Numerical Caputo and φτ solutions at one grid node."""

    t: float
    y_caputo: float
    y_phitau: float
    diff: float

    def as_dict(self) -> Dict[str, float]:
        return self._asdict()


def pair_rows(caputo: Trajectory, phitau: Trajectory) -> List[PairRow]:
    """Join two trajectories on their common grid."""
    n = min(len(caputo), len(phitau))
    times = caputo.times[:n]
    return [
        PairRow(float(t), float(a), float(b), float(b - a))
        for t, a, b in zip(times, caputo.values[:n], phitau.values[:n])
    ]


def grid(h: float, T: float) -> np.ndarray:
    """Times 0, h, ..., ⌈T/h⌉·h."""
    return np.arange(grid_size(T, h) + 1) * h
