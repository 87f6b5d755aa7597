#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Problem definitions for fractional delay differential equations."""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from .errors import DomainError
from .forcing import Forcing, ZeroForcing
from .history import EDGE_TOL, History
from .specfun import check_order

# Right-hand side g(t, y(t), y(t - τ))
Rhs_T = Callable[[float, float, float], float]


class OperatorKind(Enum):
    """Which fractional operator defines the problem."""

    CAPUTO = "caputo"
    PHITAU = "phitau"


def _check_delay(tau: float, history: History) -> None:
    if not tau > 0:
        raise DomainError(f"delay must be positive, got tau={tau}")
    if not math.isclose(tau, history.tau, rel_tol=EDGE_TOL):
        raise DomainError(f"delay tau={tau} does not match history tau={history.tau}")


class LinearRhs:
    """g(t, y, y_d) = λ·y_d + f(t)."""

    lam: float
    forcing: Forcing

    def __init__(self, lam: float, forcing: Forcing) -> None:
        self.lam = lam
        self.forcing = forcing

    def __repr__(self) -> str:
        return f"LinearRhs(lam={self.lam}, forcing={self.forcing!r})"

    def __call__(self, t: float, y: float, y_delayed: float) -> float:
        return self.lam * y_delayed + self.forcing(t)


class LogisticRhs:
    """g(t, y, y_d) = -a·y·(b - y_d), a delayed logistic-type nonlinearity."""

    rate: float
    capacity: float

    def __init__(self, rate: float, capacity: float) -> None:
        self.rate = rate
        self.capacity = capacity

    def __repr__(self) -> str:
        return f"LogisticRhs(rate={self.rate}, capacity={self.capacity})"

    def __call__(self, t: float, y: float, y_delayed: float) -> float:
        return -self.rate * y * (self.capacity - y_delayed)


@dataclass(frozen=True)
class NonlinearProblem:
    """D^α y(t) = g(t, y(t), y(t - τ)) for t > 0, y = φ on [-τ, 0]."""

    alpha: float
    tau: float
    history: History
    rhs: Rhs_T

    def __post_init__(self) -> None:
        check_order(self.alpha)
        _check_delay(self.tau, self.history)

    @property
    def y0(self) -> float:
        return self.history.y0


@dataclass(frozen=True)
class LinearProblem:
    """D^α y(t) = λ·y(t - τ) + f(t) for t > 0, y = φ on [-τ, 0]."""

    alpha: float
    lam: float
    tau: float
    history: History
    forcing: Forcing = field(default_factory=ZeroForcing)

    def __post_init__(self) -> None:
        check_order(self.alpha)
        _check_delay(self.tau, self.history)
        if not math.isfinite(self.lam):
            raise DomainError(f"lambda must be finite, got {self.lam}")

    @property
    def y0(self) -> float:
        return self.history.y0

    def as_nonlinear(self) -> NonlinearProblem:
        """The same equation with g(t, y, y_d) = λ·y_d + f(t)."""
        return NonlinearProblem(
            self.alpha, self.tau, self.history, LinearRhs(self.lam, self.forcing)
        )
