#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Forcing functions f(t) and their Riemann-Liouville integrals."""

import csv
import logging
import math
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Union

import numpy as np

from .errors import DomainError
from .history import History
from .specfun import check_order, rgamma, rl_integral_cis

# Scalars or arrays of times
Times_T = Union[float, np.ndarray]

# default number of product-integration panels per RL integral
DEFAULT_PANELS = 2**10


class Forcing(ABC):
    """Abstract base class for a forcing term f(t) on t >= 0."""

    @abstractmethod
    def __call__(self, t: Times_T) -> Times_T:
        """Evaluate f at one or more times."""
        raise NotImplementedError

    @abstractmethod
    def rl_integral(self, beta: float, s: float) -> float:
        """Riemann-Liouville integral (1/Γ(β))∫₀ˢ (s-r)^(β-1) f(r) dr, β > 0."""
        raise NotImplementedError

    @staticmethod
    def _check(beta: float, s: float) -> None:
        if not beta > 0:
            raise DomainError(f"RL integral needs order beta > 0, got {beta}")
        if s < 0:
            raise DomainError(f"RL integral needs s >= 0, got {s}")


class ZeroForcing(Forcing):
    """f(t) = 0."""

    def __repr__(self) -> str:
        return "ZeroForcing()"

    def __call__(self, t: Times_T) -> Times_T:
        return np.zeros_like(t, dtype=float) if np.ndim(t) else 0.0

    def rl_integral(self, beta: float, s: float) -> float:
        self._check(beta, s)
        return 0.0


class ConstantForcing(Forcing):
    """f(t) = c."""

    value: float

    def __init__(self, value: float) -> None:
        self.value = float(value)

    def __repr__(self) -> str:
        return f"ConstantForcing({self.value})"

    def __call__(self, t: Times_T) -> Times_T:
        return np.full_like(t, self.value, dtype=float) if np.ndim(t) else self.value

    def rl_integral(self, beta: float, s: float) -> float:
        self._check(beta, s)
        return self.value * s**beta * rgamma(beta + 1.0)


class SinusoidForcing(Forcing):
    """Shared parts of the cosine and sine forcings A·cos(ωt), A·sin(ωt)."""

    amplitude: float
    omega: float

    def __init__(self, amplitude: float, omega: float) -> None:
        self.amplitude = float(amplitude)
        self.omega = float(omega)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.amplitude}, {self.omega})"

    def _cis_integral(self, beta: float, s: float) -> complex:
        self._check(beta, s)
        return self.amplitude * rl_integral_cis(beta, self.omega, s)


class CosineForcing(SinusoidForcing):
    """f(t) = A·cos(ωt)."""

    def __call__(self, t: Times_T) -> Times_T:
        return self.amplitude * np.cos(self.omega * np.asarray(t, dtype=float))[()]

    def rl_integral(self, beta: float, s: float) -> float:
        return self._cis_integral(beta, s).real


class SineForcing(SinusoidForcing):
    """f(t) = A·sin(ωt)."""

    def __call__(self, t: Times_T) -> Times_T:
        return self.amplitude * np.sin(self.omega * np.asarray(t, dtype=float))[()]

    def rl_integral(self, beta: float, s: float) -> float:
        return self._cis_integral(beta, s).imag


class CustomForcing(Forcing):
    """Arbitrary f given as a callable, optionally only known up to t_max.

    RL integrals use product integration against the piecewise-linear
    interpolant of f, which is exact for linear f.
    """

    fn: Callable
    t_max: Optional[float]
    panels: int

    def __init__(
        self, fn: Callable, t_max: Optional[float] = None, panels: int = DEFAULT_PANELS
    ) -> None:
        if panels < 1:
            raise DomainError(f"product integration needs panels >= 1, got {panels}")
        self.fn = fn
        self.t_max = t_max
        self.panels = panels
        logging.debug(f"using {self.__class__} with t_max={t_max}, panels={panels}")

    def __call__(self, t: Times_T) -> Times_T:
        times = np.asarray(t, dtype=float)
        if np.any(times < 0) or (self.t_max is not None and np.any(times > self.t_max)):
            raise DomainError(f"forcing is only known on [0, {self.t_max}]")
        return _sample(self.fn, times)[()]

    def rl_integral(self, beta: float, s: float) -> float:
        self._check(beta, s)
        if s == 0:
            return 0.0
        return product_integral(self, beta, s, self.panels)


class SampledForcing(CustomForcing):
    """Piecewise-linear forcing through (t, f) nodes starting at t <= 0."""

    times: np.ndarray
    values: np.ndarray

    def __init__(
        self, times: Sequence[float], values: Sequence[float], panels: int = DEFAULT_PANELS
    ) -> None:
        times = np.array(times, dtype=float)
        values = np.array(values, dtype=float)
        if times.ndim != 1 or times.shape != values.shape or len(times) < 2:
            raise DomainError("sampled forcing needs at least two (t, f) nodes")
        if np.any(np.diff(times) <= 0):
            raise DomainError("sampled forcing times must be strictly increasing")
        if times[0] > 0:
            raise DomainError(f"sampled forcing must start at t <= 0, got {times[0]}")
        self.times = times
        self.values = values
        super().__init__(self._interpolate, t_max=float(times[-1]), panels=panels)

    def __repr__(self) -> str:
        return f"SampledForcing(nodes={len(self.times)}, t_max={self.t_max})"

    def _interpolate(self, t: np.ndarray) -> np.ndarray:
        return np.interp(t, self.times, self.values)


class CorrectiveForcing(Forcing):
    """The corrective term ᶜD₀^α φ - ᶜD₋τ^α φ of a history, used as a forcing.

    Feeding it through the generalized integral gives the difference between
    the φτ-operator and Caputo solutions.
    """

    history: History
    alpha: float

    def __init__(self, history: History, alpha: float) -> None:
        self.history = history
        self.alpha = check_order(alpha)

    def __repr__(self) -> str:
        return f"CorrectiveForcing({self.history!r}, alpha={self.alpha})"

    def __call__(self, t: Times_T) -> Times_T:
        times = np.asarray(t, dtype=float)
        if np.any(times < 0):
            raise DomainError("the corrective term is only defined for t >= 0")
        value = self.history.corrective(self.alpha, times) + np.zeros_like(times)
        return float(value) if value.ndim == 0 else value

    def rl_integral(self, beta: float, s: float) -> float:
        self._check(beta, s)
        return self.history.corrective_rl_integral(self.alpha, beta, s)


def _sample(fn: Callable, times: np.ndarray) -> np.ndarray:
    """Evaluate fn on an array, falling back to one call per element."""
    try:
        values = np.asarray(fn(times), dtype=float)
    except TypeError:
        values = None
    if values is None or values.shape != times.shape:
        values = np.array([float(fn(t)) for t in times.flat]).reshape(times.shape)
    return values


def product_weights(beta: float, panels: int) -> np.ndarray:
    """Weights of the piecewise-linear product rule for J^β on a uniform grid.

    With N panels of width h over [0, s], J^β f(s) is approximated by
    h^β/Γ(β+2)·Σ_j w_j f(jh).
    """
    n = panels
    k = np.arange(n - 1, 0, -1, dtype=float)
    weights = np.empty(n + 1)
    weights[0] = (n - 1.0) ** (beta + 1) - (n - 1.0 - beta) * float(n) ** beta
    weights[1:n] = (k + 1) ** (beta + 1) - 2 * k ** (beta + 1) + (k - 1) ** (beta + 1)
    weights[n] = 1.0
    return weights


def product_integral(
    f: Callable, beta: float, s: float, panels: int = DEFAULT_PANELS
) -> float:
    """Riemann-Liouville integral of order β of f at s by product integration."""
    if s == 0:
        return 0.0
    h = s / panels
    nodes = np.arange(panels + 1) * h
    nodes[-1] = s
    weights = product_weights(beta, panels)
    return float(h**beta * rgamma(beta + 2.0) * np.dot(weights, _sample(f, nodes)))


def load_forcing_csv(path: Union[str, Path], panels: int = DEFAULT_PANELS) -> SampledForcing:
    """Load a sampled forcing from a two-column (t, f) CSV file.

    A header row is skipped if its first field isn't a number.
    """
    times: List[float] = []
    values: List[float] = []
    with Path(path).open(encoding="utf8", newline="") as file:
        for i, row in enumerate(csv.reader(file)):
            if not row:
                continue
            try:
                t, f = float(row[0]), float(row[1])
            except (ValueError, IndexError) as err:
                if i == 0:
                    continue
                raise DomainError(f"{path}:{i + 1}: expected two numbers") from err
            if not (math.isfinite(t) and math.isfinite(f)):
                raise DomainError(f"{path}:{i + 1}: non-finite value")
            times.append(t)
            values.append(f)
    logging.debug(f"loaded {len(times)} forcing nodes from {path}")
    return SampledForcing(times, values, panels=panels)
