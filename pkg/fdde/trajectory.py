#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Solutions sampled on an equispaced grid, queryable at delayed times."""

import math
from dataclasses import dataclass
from typing import Dict, Iterator, Sequence

import numpy as np

from .errors import DomainError
from .history import EDGE_TOL, History

# relative distance below which a query time is treated as a grid node
NODE_TOL = 1e-9


def grid_size(T: float, h: float) -> int:
    """Number of steps N = ⌈T/h⌉, ignoring roundoff just above an integer."""
    if not h > 0:
        raise DomainError(f"step size must be positive, got h={h}")
    if T < 0:
        raise DomainError(f"final time must be non-negative, got T={T}")
    ratio = T / h
    nearest = round(ratio)
    if math.isclose(ratio, nearest, rel_tol=EDGE_TOL, abs_tol=EDGE_TOL):
        return int(nearest)
    return math.ceil(ratio)


def floor_index(x: float, h: float) -> int:
    """Largest j with j·h <= x, exact in floating point."""
    j = math.floor(x / h)
    while j * h > x:
        j -= 1
    while (j + 1) * h <= x:
        j += 1
    return j


@dataclass
class Trajectory:
    """Values on the grid t_n = n·h, n = 0..N, plus the history before 0.

    Solvers grow a trajectory node by node; `frontier` is the index of the
    last computed node. Once returned by a solver it is frozen.
    """

    h: float
    T: float
    history: History
    values: np.ndarray
    frontier: int = 0

    @classmethod
    def start(cls, history: History, h: float, T: float) -> "Trajectory":
        """An empty trajectory holding only y(0) = φ(0)."""
        values = np.full(grid_size(T, h) + 1, np.nan)
        values[0] = history.y0
        return cls(float(h), float(T), history, values)

    @classmethod
    def from_values(
        cls, history: History, h: float, T: float, values: Sequence[float]
    ) -> "Trajectory":
        """A complete, frozen trajectory from precomputed node values."""
        values = np.array(values, dtype=float)
        if len(values) != grid_size(T, h) + 1:
            raise DomainError(
                f"expected {grid_size(T, h) + 1} values for h={h}, T={T}, got {len(values)}"
            )
        return cls(float(h), float(T), history, values).freeze()

    def __len__(self) -> int:
        return len(self.values)

    def __call__(self, t: float) -> float:
        return delayed_value(self, t)

    @property
    def n_steps(self) -> int:
        return len(self.values) - 1

    @property
    def tau(self) -> float:
        return self.history.tau

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.values)) * self.h

    @property
    def frozen(self) -> bool:
        return not self.values.flags.writeable

    def advance(self, value: float) -> None:
        """Append the value of the next node."""
        if self.frozen or self.frontier == self.n_steps:
            raise DomainError("trajectory is already complete")
        self.frontier += 1
        self.values[self.frontier] = value

    def freeze(self) -> "Trajectory":
        self.frontier = self.n_steps
        self.values.setflags(write=False)
        return self

    def rows(self) -> Iterator[Dict[str, float]]:
        """Rows of (t, y) for serialization."""
        for t, y in zip(self.times, self.values):
            yield {"t": float(t), "y": float(y)}


def delayed_value(traj: Trajectory, t: float) -> float:
    """Value of the solution at t >= -τ, never beyond the computed frontier.

    Times in [-τ, 0] come from the history, grid nodes from the stored
    values, and anything in between by linear interpolation.
    """
    if t <= 0:
        if t < -traj.tau * (1 + EDGE_TOL):
            raise DomainError(f"t={t} lies before the history interval [{-traj.tau}, 0]")
        return traj.history(t)

    position = t / traj.h
    node = round(position)
    if abs(position - node) <= NODE_TOL * max(1.0, position):
        index, fraction = int(node), 0.0
    else:
        index = math.floor(position)
        fraction = position - index

    if index > traj.frontier or (index == traj.frontier and fraction > 0):
        raise DomainError(
            f"t={t} is beyond the computed frontier t={traj.frontier * traj.h}"
        )
    if fraction == 0:
        return float(traj.values[index])
    return float(
        (1 - fraction) * traj.values[index] + fraction * traj.values[index + 1]
    )
