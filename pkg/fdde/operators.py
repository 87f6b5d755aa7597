#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Discrete Grünwald-Letnikov realizations of the fractional operators."""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError
from .history import EDGE_TOL, History
from .specfun import check_order, gamma, gl_weights, rgamma
from .trajectory import floor_index


@dataclass(frozen=True)
class SampledFunction:
    """Values of a function at origin, origin + h, origin + 2h, ..."""

    h: float
    values: np.ndarray
    origin: float = 0.0

    def __post_init__(self) -> None:
        if not self.h > 0:
            raise DomainError(f"step size must be positive, got h={self.h}")
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or len(values) == 0:
            raise DomainError("a sampled function needs at least one value")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(
        cls, fn: Callable, h: float, n: int, origin: float = 0.0
    ) -> "SampledFunction":
        """Sample fn at origin + j·h for j = 0..n."""
        return cls(h, np.array([fn(origin + j * h) for j in range(n + 1)]), origin)

    def __len__(self) -> int:
        return len(self.values)


def _check_sample(y: SampledFunction, h: Optional[float], n: int) -> float:
    if y.origin != 0:
        raise DomainError(f"sampled function must start at t=0, got {y.origin}")
    if h is not None and not math.isclose(h, y.h, rel_tol=EDGE_TOL):
        raise DomainError(f"step size h={h} does not match the sample step {y.h}")
    if not 0 <= n < len(y):
        raise DomainError(f"node {n} is outside the {len(y)} sampled values")
    return y.h


def gl_caputo_apply(
    y: SampledFunction, alpha: float, h: Optional[float] = None, n: int = 0
) -> float:
    """Truncated GL approximation of ᶜD₀^α y at t_n = n·h.

    h^(-α)·Σ_{j=0}^{n} ω_j·(y(t_n - jh) - y(0))
    """
    check_order(alpha)
    h = _check_sample(y, h, n)
    weights = gl_weights(alpha, n).coeffs
    increments = y.values[n::-1] - y.values[0]
    return h ** (-alpha) * float(np.dot(weights, increments))


def phitau_apply(
    y: SampledFunction,
    phi: History,
    alpha: float,
    tau: float,
    h: Optional[float] = None,
    n: int = 0,
) -> float:
    """GL approximation of the φτ operator at t_n = n·h.

    The sum runs over the solution back to t = 0 and then over the history
    down to -τ, both measured from φ(-τ).
    """
    check_order(alpha)
    h = _check_sample(y, h, n)
    if not math.isclose(tau, phi.tau, rel_tol=EDGE_TOL):
        raise DomainError(f"delay tau={tau} does not match history tau={phi.tau}")

    j1 = n
    j2 = floor_index(n * h + tau, h)
    weights = gl_weights(alpha, max(j1, j2)).coeffs
    base = phi(-tau)
    total = float(np.dot(weights[: j1 + 1], y.values[n::-1] - base))
    if j2 > j1:
        offsets = np.arange(j1 + 1, j2 + 1)
        total += float(np.dot(weights[j1 + 1 : j2 + 1], phi((n - offsets) * h) - base))
    return h ** (-alpha) * total


def caputo_power(p: float, alpha: float, t: float) -> float:
    """Caputo derivative Γ(p+1)/Γ(p+1-α)·t^(p-α) of t^p, p > 0."""
    check_order(alpha)
    if not p > 0:
        raise DomainError(f"caputo_power needs p > 0, got {p}")
    if t < 0 or (t == 0 and p < alpha):
        raise DomainError(f"caputo_power is undefined at t={t} for p={p}")
    return gamma(p + 1) * rgamma(p + 1 - alpha) * t ** (p - alpha)
