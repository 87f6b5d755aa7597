#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""First-order solvers for nonlinear fractional delay differential equations.

The Caputo problem is solved with the rectangular product-integration rule,
the φτ problem with the Grünwald-Letnikov discretization of its operator.
Delayed values come from linear interpolation on the trajectory computed so
far, so the step size never has to divide the delay.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np

from .errors import ConfigError, DomainError, SolverError, UsageError
from .problem import NonlinearProblem
from .specfun import gl_weights, rgamma
from .trajectory import Trajectory, delayed_value, floor_index

# Additive term evaluated alongside g, e.g. a corrective term
Extra_T = Callable[[float], float]


class Scheme(Enum):
    PI_RECT = "pi-rect"
    GL_PHITAU = "gl-phitau"
    EULER = "euler"


class Mode(Enum):
    """How the Grünwald-Letnikov scheme evaluates g at the new node."""

    EXPLICIT = "explicit"
    FIXED_POINT = "fixed-point"


@dataclass(frozen=True)
class SolverConfig:
    """Scheme, step size, final time and implicit-step controls."""

    scheme: Scheme
    h: float
    T: float
    mode: Mode = Mode.EXPLICIT
    max_iter: int = 50
    tol: float = 1e-12
    damping: float = 1.0

    def __post_init__(self) -> None:
        if not (self.h > 0 and math.isfinite(self.h)):
            raise ConfigError(f"step size must be positive, got h={self.h}")
        if not (self.T > 0 and math.isfinite(self.T)):
            raise ConfigError(f"final time must be positive, got T={self.T}")
        if not self.tol > 0:
            raise ConfigError(f"fixed-point tolerance must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ConfigError(f"max_iter must be at least 1, got {self.max_iter}")
        if not 0 < self.damping <= 1:
            raise ConfigError(f"damping must lie in (0, 1], got {self.damping}")


def _rhs(problem: NonlinearProblem, t: float, y: float, y_delayed: float, step: int) -> float:
    """Evaluate g, turning arithmetic failures into a SolverError."""
    try:
        value = float(problem.rhs(t, y, y_delayed))
    except ArithmeticError as err:
        raise SolverError(f"right-hand side failed: {err}", step, t) from err
    if not math.isfinite(value):
        raise SolverError(f"right-hand side returned {value}", step, t)
    return value


def _check_value(value: float, step: int, t: float) -> float:
    if not math.isfinite(value):
        raise SolverError(f"solution became {value}", step, t)
    return value


class Solver(ABC):
    """Solvers march a problem over the grid of their config."""

    config: SolverConfig

    def __init__(self, config: SolverConfig) -> None:
        self.config = config
        logging.info(
            f"using {self.__class__} with h={config.h}, T={config.T}, "
            f"mode={config.mode.value}"
        )

    @abstractmethod
    def __call__(self, problem: NonlinearProblem) -> Trajectory:
        """Solve the problem and return its frozen trajectory."""
        raise NotImplementedError

    def _slope(self, problem: NonlinearProblem, traj: Trajectory, j: int) -> float:
        """g at the computed node t_j, with its delayed value."""
        t = j * traj.h
        y_delayed = delayed_value(traj, t - problem.tau)
        return _rhs(problem, t, float(traj.values[j]), y_delayed, j)


class ProductIntegrationSolver(Solver):
    """Rectangular product integration for the Caputo problem.

    y_n = y0 + h^α·Σ_{j<n} b_{n-j}·g_j with b_k = (k^α - (k-1)^α)/Γ(α+1).
    An optional extra term is added to every g_j, which turns the Caputo
    solver into a solver for the φτ problem when the extra term is the
    corrective term of the history.
    """

    extra: Optional[Extra_T]

    def __init__(self, config: SolverConfig, extra: Optional[Extra_T] = None) -> None:
        if config.mode is not Mode.EXPLICIT:
            raise UsageError("product integration only has an explicit mode")
        super().__init__(config)
        self.extra = extra

    def __call__(self, problem: NonlinearProblem) -> Trajectory:
        alpha = problem.alpha
        traj = Trajectory.start(problem.history, self.config.h, self.config.T)
        n_steps = traj.n_steps
        k = np.arange(n_steps + 1, dtype=float)
        weights = np.zeros(n_steps + 1)
        weights[1:] = (k[1:] ** alpha - k[:-1] ** alpha) * rgamma(alpha + 1.0)
        scale = traj.h**alpha
        y0 = float(traj.values[0])

        slopes = np.empty(n_steps)
        for n in range(1, n_steps + 1):
            j = n - 1
            slopes[j] = self._slope(problem, traj, j)
            if self.extra is not None:
                slopes[j] += self.extra(j * traj.h)
            y = y0 + scale * float(np.dot(weights[n:0:-1], slopes[:n]))
            traj.advance(_check_value(y, n, n * traj.h))
            logging.debug(f"step {n}: y={y}")
        return traj.freeze()


class GrunwaldLetnikovSolver(Solver):
    """Grünwald-Letnikov scheme for the φτ problem.

    y_n = φ(-τ) - Σ_{j=1}^{n} ω_j(y_{n-j} - φ(-τ))
                - Σ_{j=n+1}^{J2} ω_j(φ(t_n - jh) - φ(-τ)) + h^α·g,
    J2 = ⌊(t_n + τ)/h⌋. The explicit mode takes g at t_{n-1}; the fixed-point
    mode iterates the implicit relation with g at t_n.
    """

    def __call__(self, problem: NonlinearProblem) -> Trajectory:
        phi = problem.history
        tau = problem.tau
        traj = Trajectory.start(phi, self.config.h, self.config.T)
        h = traj.h
        n_steps = traj.n_steps
        weights = gl_weights(problem.alpha, floor_index(n_steps * h + tau, h)).coeffs
        scale = h**problem.alpha
        base = phi(-tau)

        deviations = np.empty(n_steps + 1)
        deviations[0] = traj.values[0] - base
        for n in range(1, n_steps + 1):
            t = n * h
            j2 = floor_index(t + tau, h)
            known = base - float(np.dot(weights[1 : n + 1], deviations[n - 1 :: -1]))
            if j2 > n:
                offsets = np.arange(n + 1, j2 + 1)
                known -= float(
                    np.dot(weights[n + 1 : j2 + 1], phi((n - offsets) * h) - base)
                )

            y = known + scale * self._slope(problem, traj, n - 1)
            traj.advance(_check_value(y, n, t))
            if self.config.mode is Mode.FIXED_POINT:
                self._iterate(problem, traj, n, known, scale)
            deviations[n] = traj.values[n] - base
            logging.debug(f"step {n}: y={traj.values[n]}")
        return traj.freeze()

    def _iterate(
        self,
        problem: NonlinearProblem,
        traj: Trajectory,
        n: int,
        known: float,
        scale: float,
    ) -> None:
        """Damped Picard iteration for y_n = known + h^α·g(t_n, y_n, y(t_n - τ))."""
        theta = self.config.damping
        t = n * traj.h
        y = float(traj.values[n])
        change = math.inf
        for _ in range(self.config.max_iter):
            update = known + scale * self._slope(problem, traj, n)
            y_next = _check_value((1 - theta) * y + theta * update, n, t)
            traj.values[n] = y_next
            change = abs(y_next - y)
            if change <= self.config.tol * max(1.0, abs(y_next)):
                return
            y = y_next
        raise SolverError(
            f"fixed-point iteration did not converge in {self.config.max_iter} "
            f"iterations, last change {change:.3e}",
            n,
            t,
        )


class EulerSolver(Solver):
    """Explicit Euler for the classical delay equation y' = g (order one)."""

    def __call__(self, problem: NonlinearProblem) -> Trajectory:
        traj = Trajectory.start(problem.history, self.config.h, self.config.T)
        for n in range(1, traj.n_steps + 1):
            y = float(traj.values[n - 1]) + traj.h * self._slope(problem, traj, n - 1)
            traj.advance(_check_value(y, n, n * traj.h))
        return traj.freeze()


def create_solver(config: SolverConfig, extra: Optional[Extra_T] = None) -> Solver:
    """Build the solver matching the scheme of a config."""
    if config.scheme is Scheme.PI_RECT:
        return ProductIntegrationSolver(config, extra)
    if extra is not None:
        raise UsageError("only product integration accepts an extra term")
    if config.scheme is Scheme.GL_PHITAU:
        return GrunwaldLetnikovSolver(config)
    return EulerSolver(config)


def solve_pi_rect(
    p: NonlinearProblem, cfg: SolverConfig, corrective: Optional[Extra_T] = None
) -> Trajectory:
    """Solve the Caputo problem, optionally with an additive corrective term."""
    if cfg.scheme is not Scheme.PI_RECT:
        raise UsageError(f"solve_pi_rect needs scheme pi-rect, got {cfg.scheme.value}")
    return ProductIntegrationSolver(cfg, corrective)(p)


def solve_gl_phitau(p: NonlinearProblem, cfg: SolverConfig) -> Trajectory:
    """Solve the φτ problem with the Grünwald-Letnikov scheme."""
    if cfg.scheme is not Scheme.GL_PHITAU:
        raise UsageError(f"solve_gl_phitau needs scheme gl-phitau, got {cfg.scheme.value}")
    return GrunwaldLetnikovSolver(cfg)(p)


def solve_dde_euler_ref(p: NonlinearProblem, h: float, T: float) -> Trajectory:
    """Classical (α = 1) reference solution of y' = g by explicit Euler."""
    return EulerSolver(SolverConfig(Scheme.EULER, h, T))(p)


def solver_gap(a: Trajectory, b: Trajectory) -> float:
    """Largest difference between two trajectories on their common grid."""
    if not math.isclose(a.h, b.h, rel_tol=1e-12):
        raise DomainError(f"trajectories use different steps {a.h} and {b.h}")
    n = min(len(a), len(b))
    return float(np.max(np.abs(a.values[:n] - b.values[:n])))
