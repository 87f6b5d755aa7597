#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Initial functions on [-τ, 0] and the corrective term they induce.

Moving the history of a delayed problem from the φτ operator to the Caputo
operator leaves behind the term ᶜD₀^α φ(t) - ᶜD₋τ^α φ(t). Only the slope of φ
on [-τ, 0] enters it, so every piecewise-linear history has it in closed form.
"""

import csv
import logging
import math
from abc import ABC, abstractmethod
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DomainError
from .specfun import check_order, gamma, reg_inc_beta, rgamma

# A slope segment (start, end, slope) of a piecewise-linear history
Segment_T = Tuple[float, float, float]

# Scalars or arrays of times
Times_T = Union[float, np.ndarray]

# relative slack on the ends of [-τ, 0] for roundoff in grid arithmetic
EDGE_TOL = 1e-12


class History(ABC):
    """Abstract base class for an initial function φ on [-τ, 0]."""

    tau: float

    def __init__(self, tau: float) -> None:
        if not tau > 0:
            raise DomainError(f"delay must be positive, got tau={tau}")
        self.tau = float(tau)

    @property
    def y0(self) -> float:
        """The value φ(0), which is the initial value of the solution."""
        return float(self._evaluate(np.asarray(0.0)))

    def __call__(self, t: Times_T) -> Times_T:
        """Evaluate φ at one or more times, allowing roundoff at the ends."""
        times = np.asarray(t, dtype=float)
        slack = EDGE_TOL * max(1.0, self.tau)
        if np.any(times < -self.tau - slack) or np.any(times > slack):
            raise DomainError(f"history is only defined on [{-self.tau}, 0]")
        values = self._evaluate(np.clip(times, -self.tau, 0.0))
        return float(values) if values.ndim == 0 else values

    @abstractmethod
    def _evaluate(self, t: np.ndarray) -> np.ndarray:
        """Evaluate φ at times already known to lie in [-τ, 0]."""
        raise NotImplementedError

    @abstractmethod
    def segments(self) -> List[Segment_T]:
        """Intervals of [-τ, 0] on which φ is linear, with their slopes.

        Intervals with zero slope may be left out.
        """
        raise NotImplementedError

    def corrective(self, alpha: float, t: float) -> float:
        """Evaluate ᶜD₀^α φ(t) - ᶜD₋τ^α φ(t) for t >= 0.

        The t=0 value is the right limit, which is finite.
        """
        total = 0.0
        for start, end, slope in self.segments():
            total += slope * ((t - start) ** (1 - alpha) - (t - end) ** (1 - alpha))
        return -total * rgamma(2 - alpha)

    def corrective_rl_integral(self, alpha: float, beta: float, s: float) -> float:
        """Riemann-Liouville integral of order β of the corrective term at s."""
        if s == 0:
            return 0.0
        total = 0.0
        for start, end, slope in self.segments():
            total += slope * (
                shifted_power_integral(alpha, beta, s, -start)
                - shifted_power_integral(alpha, beta, s, -end)
            )
        return -total


class ConstantHistory(History):
    """φ(t) = y0 on [-τ, 0]."""

    value: float

    def __init__(self, y0: float, tau: float) -> None:
        super().__init__(tau)
        self.value = float(y0)

    def __repr__(self) -> str:
        return f"ConstantHistory(y0={self.value}, tau={self.tau})"

    def _evaluate(self, t: np.ndarray) -> np.ndarray:
        return np.full_like(t, self.value)

    def segments(self) -> List[Segment_T]:
        return []


class RampHistory(History):
    """φ(t) = (t/τ + 1)·y0, rising from 0 at -τ to y0 at 0."""

    value: float

    def __init__(self, y0: float, tau: float) -> None:
        super().__init__(tau)
        self.value = float(y0)

    def __repr__(self) -> str:
        return f"RampHistory(y0={self.value}, tau={self.tau})"

    def _evaluate(self, t: np.ndarray) -> np.ndarray:
        return (t / self.tau + 1.0) * self.value

    def segments(self) -> List[Segment_T]:
        return [(-self.tau, 0.0, self.value / self.tau)]


class SampledHistory(History):
    """Piecewise-linear interpolation of nodes spanning exactly [-τ, 0]."""

    times: np.ndarray
    values: np.ndarray

    def __init__(self, times: Sequence[float], values: Sequence[float]) -> None:
        times = np.array(times, dtype=float)
        values = np.array(values, dtype=float)
        if times.ndim != 1 or times.shape != values.shape or len(times) < 2:
            raise DomainError("sampled history needs at least two (t, phi) nodes")
        if not np.all(np.isfinite(times)) or not np.all(np.isfinite(values)):
            raise DomainError("sampled history nodes must be finite")
        if np.any(np.diff(times) <= 0):
            raise DomainError("sampled history times must be strictly increasing")
        if times[-1] != 0.0:
            raise DomainError(f"sampled history must end at t=0, got {times[-1]}")
        super().__init__(-times[0])
        self.times = times
        self.values = values
        self.times.setflags(write=False)
        self.values.setflags(write=False)

    def __repr__(self) -> str:
        return f"SampledHistory(nodes={len(self.times)}, tau={self.tau})"

    def _evaluate(self, t: np.ndarray) -> np.ndarray:
        return np.interp(t, self.times, self.values)

    def segments(self) -> List[Segment_T]:
        slopes = np.diff(self.values) / np.diff(self.times)
        return [
            (float(start), float(end), float(slope))
            for start, end, slope in zip(self.times[:-1], self.times[1:], slopes)
            if slope != 0
        ]


def shifted_power_integral(alpha: float, beta: float, s: float, c: float) -> float:
    """Riemann-Liouville integral of order β of (r + c)^(1-α)/Γ(2-α), at s.

    For c = 0 this is s^(1-α+β)/Γ(2-α+β); for c > 0 the lower part of the
    integral is removed through the regularized incomplete beta function.
    """
    exponent = 1.0 - alpha + beta
    base = s + c
    value = base**exponent * rgamma(exponent + 1.0)
    if c == 0:
        return value
    return value * (1.0 - reg_inc_beta(c / base, 2.0 - alpha, beta))


def eval_history(phi: History, t: float) -> float:
    """Evaluate φ(t); t must lie in [-τ, 0]."""
    if not -phi.tau <= t <= 0:
        raise DomainError(f"t={t} is outside the history interval [{-phi.tau}, 0]")
    return phi(t)


def corrective_term(phi: History, alpha: float, tau: float, t: float) -> float:
    """The corrective term ᶜD₀^α φ(t) - ᶜD₋τ^α φ(t) at t > 0.

    Zero for constant histories; for the ramp it equals
    y0/(τΓ(2-α))·(t^(1-α) - (t+τ)^(1-α)).
    """
    check_order(alpha)
    if not math.isclose(tau, phi.tau, rel_tol=EDGE_TOL):
        raise DomainError(f"delay tau={tau} does not match history tau={phi.tau}")
    if not t > 0:
        raise DomainError(f"corrective term needs t > 0, got {t}")
    return phi.corrective(alpha, t)


def corrective_abs_integral(phi: RampHistory, alpha: float, t: float) -> float:
    """Closed form of ∫₀ᵗ (t-r)^(α-1)·|corrective(r)| dr for a ramp history."""
    if not isinstance(phi, RampHistory):
        raise DomainError("the closed-form bound only exists for ramp histories")
    check_order(alpha)
    if t < 0:
        raise DomainError(f"corrective_abs_integral needs t >= 0, got {t}")
    tau = phi.tau
    ratio = reg_inc_beta(tau / (t + tau), 2.0 - alpha, alpha)
    return abs(phi.value) * gamma(alpha) * (1.0 - (t + tau) / tau * ratio)


def corrective_abs_bound(phi: RampHistory, alpha: float) -> float:
    """Uniform bound |y0|·Γ(α) of corrective_abs_integral over all t."""
    return abs(phi.value) * gamma(check_order(alpha))


def load_history_csv(path: Union[str, Path], tau: Optional[float] = None) -> SampledHistory:
    """Load a sampled history from a two-column (t, phi) CSV file.

    A header row is skipped if its first field isn't a number.
    """
    times: List[float] = []
    values: List[float] = []
    with Path(path).open(encoding="utf8", newline="") as file:
        for i, row in enumerate(csv.reader(file)):
            if not row:
                continue
            try:
                t, phi = float(row[0]), float(row[1])
            except (ValueError, IndexError) as err:
                if i == 0:
                    continue
                raise DomainError(f"{path}:{i + 1}: expected two numbers") from err
            times.append(t)
            values.append(phi)
    history = SampledHistory(times, values)
    if tau is not None and not math.isclose(tau, history.tau, rel_tol=EDGE_TOL):
        raise DomainError(f"{path} spans tau={history.tau}, expected tau={tau}")
    logging.debug(f"loaded {len(times)} history nodes from {path}")
    return history
