#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Closed-form solutions of the linear problem D^α y = λ·y(t - τ) + f(t).

Constant and linear-ramp histories have exact solutions as finite sums over
the delay intervals already reached, under both the Caputo operator and the
history-aware φτ operator. The forcing enters through the generalized
integral J₀,τ,λ f.
"""

import logging
import math
from typing import Type

import numpy as np

from .errors import DomainError, UsageError
from .forcing import Forcing
from .history import ConstantHistory, History, RampHistory
from .problem import LinearProblem, OperatorKind
from .specfun import check_order, mittag_leffler, reg_inc_beta, rgamma
from .trajectory import Trajectory, floor_index, grid_size


def _require(p: LinearProblem, kind: Type[History], name: str) -> None:
    if not isinstance(p.history, kind):
        raise UsageError(f"{name} needs a {kind.__name__}, got {p.history!r}")


def _check_time(t: float, strict: bool = False) -> None:
    if t < 0 or (strict and t == 0) or not math.isfinite(t):
        bound = "t > 0" if strict else "t >= 0"
        raise DomainError(f"exact solutions need {bound}, got t={t}")


def delay_index(t: float, tau: float) -> int:
    """⌊t/τ⌋, where t = mτ exactly gives m."""
    return floor_index(t, tau)


def step_power(a: float, beta: float, t: float) -> float:
    """Generalized step function (t-a)^β/Γ(β+1) for t >= a, 0 before.

    At t = a the zeroth power is 1 and any positive power is 0.
    """
    if t < a:
        return 0.0
    d = t - a
    if d == 0:
        return 1.0 if beta == 0 else 0.0
    return d**beta * rgamma(beta + 1.0)


def gen_integral(f: Forcing, alpha: float, lam: float, tau: float, t: float) -> float:
    """Generalized integral J₀,τ,λ f(t) = Σ_k λᵏ·J^(αk+α) f(t - kτ)."""
    check_order(alpha)
    if not tau > 0:
        raise DomainError(f"delay must be positive, got tau={tau}")
    _check_time(t)
    total = 0.0
    for k in range(delay_index(t, tau) + 1):
        s = t - k * tau
        if s > 0:
            total += lam**k * f.rl_integral(alpha * (k + 1), s)
    return total


def _forced_part(p: LinearProblem, t: float) -> float:
    return gen_integral(p.forcing, p.alpha, p.lam, p.tau, t)


def exact_caputo_constant_history(p: LinearProblem, t: float) -> float:
    """Exact Caputo solution for φ(t) = y0.

    y(t) = y0·Σ_{k=0}^{m+1} λᵏ(t+τ-kτ)^(αk)/Γ(αk+1) + J₀,τ,λ f(t), m = ⌊t/τ⌋.
    """
    _require(p, ConstantHistory, "exact_caputo_constant_history")
    _check_time(t)
    alpha, lam, tau = p.alpha, p.lam, p.tau
    series = 0.0
    for k in range(delay_index(t, tau) + 2):
        series += lam**k * step_power((k - 1) * tau, alpha * k, t)
    return p.y0 * series + _forced_part(p, t)


def exact_caputo_ramp_history(p: LinearProblem, t: float) -> float:
    """Exact Caputo solution for φ(t) = (t/τ + 1)·y0."""
    _require(p, RampHistory, "exact_caputo_ramp_history")
    _check_time(t)
    alpha, lam, tau = p.alpha, p.lam, p.tau
    m = delay_index(t, tau)
    series = 0.0
    for k in range(m + 2):
        series += lam**k * step_power((k - 1) * tau, alpha * k + 1, t)
    for k in range(m + 1):
        series -= lam**k * step_power(k * tau, alpha * k + 1, t)
    return p.y0 / tau * series + _forced_part(p, t)


def _beta_ratio(alpha: float, tau: float, k: int, t: float) -> float:
    """I_{τ/(t+τ-kτ)}(2-α, (k+1)α), the history share of the k-th term."""
    x = min(1.0, tau / (t - (k - 1) * tau))
    return reg_inc_beta(x, 2.0 - alpha, (k + 1) * alpha)


def exact_phitau_ramp_history(p: LinearProblem, t: float) -> float:
    """Exact solution under the φτ operator for φ(t) = (t/τ + 1)·y0."""
    _require(p, RampHistory, "exact_phitau_ramp_history")
    _check_time(t)
    alpha, lam, tau = p.alpha, p.lam, p.tau
    m = delay_index(t, tau)
    series = lam ** (m + 1) * step_power(m * tau, alpha * (m + 1) + 1, t)
    for k in range(m + 1):
        series += (
            lam**k
            * step_power((k - 1) * tau, alpha * k + 1, t)
            * _beta_ratio(alpha, tau, k, t)
        )
    return p.y0 / tau * series + _forced_part(p, t)


def solution_difference(p: LinearProblem, t: float) -> float:
    """ŷ(t) - y(t) between the φτ and Caputo solutions for a ramp history.

    The forcing cancels, so the result does not depend on f.
    """
    _require(p, RampHistory, "solution_difference")
    _check_time(t, strict=True)
    alpha, lam, tau = p.alpha, p.lam, p.tau
    series = 0.0
    for k in range(delay_index(t, tau) + 1):
        shifted = step_power((k - 1) * tau, alpha * k + 1, t)
        series += lam**k * (
            step_power(k * tau, alpha * k + 1, t)
            - shifted * (1.0 - _beta_ratio(alpha, tau, k, t))
        )
    return p.y0 / tau * series


def _step_convolution(f: Forcing, a: float, order: float, t: float) -> float:
    """(u_a^[order-1] * f)(t), the convolution of a step function with f."""
    if t <= a:
        return 0.0
    return f.rl_integral(order, t - a)


def exact_stepfunction_form(p: LinearProblem, t: float) -> float:
    """Constant-history solution written with generalized step functions.

    y(t) = y0·Σ λᵏ u_{(k-1)τ}^[kα](t) + Σ λᵏ (u_{kτ}^[(k+1)α-1] * f)(t)
    """
    _require(p, ConstantHistory, "exact_stepfunction_form")
    _check_time(t)
    alpha, lam, tau = p.alpha, p.lam, p.tau

    homogeneous = 0.0
    k = 0
    while (k - 1) * tau <= t:
        homogeneous += lam**k * step_power((k - 1) * tau, k * alpha, t)
        k += 1

    forced = 0.0
    k = 0
    while k * tau <= t:
        forced += lam**k * _step_convolution(p.forcing, k * tau, alpha * (k + 1), t)
        k += 1
    return p.y0 * homogeneous + forced


def exact_ramp_stepfunction_form(p: LinearProblem, t: float) -> float:
    """Ramp-history solution written with generalized step functions."""
    _require(p, RampHistory, "exact_ramp_stepfunction_form")
    _check_time(t)
    alpha, lam, tau = p.alpha, p.lam, p.tau

    shape = 1.0
    forced = 0.0
    k = 0
    while k * tau <= t:
        order = (k + 1) * alpha + 1
        shape += lam ** (k + 1) / tau * (
            step_power(k * tau, order, t) - step_power((k + 1) * tau, order, t)
        )
        forced += lam**k * _step_convolution(p.forcing, k * tau, alpha * (k + 1), t)
        k += 1
    return p.y0 * shape + forced


def exact_nondelayed(alpha: float, lam: float, y0: float, t: float) -> float:
    """Solution E_α(λt^α)·y0 of D^α y = λ·y without delay."""
    check_order(alpha)
    _check_time(t)
    return y0 * mittag_leffler(alpha, 1.0, lam * t**alpha)


def exact_solution(p: LinearProblem, operator: OperatorKind, t: float) -> float:
    """Closed-form solution for the problem's history under either operator.

    With a constant history the corrective term vanishes and both operators
    share the Caputo solution.
    """
    if isinstance(p.history, ConstantHistory):
        return exact_caputo_constant_history(p, t)
    if isinstance(p.history, RampHistory):
        if operator is OperatorKind.PHITAU:
            return exact_phitau_ramp_history(p, t)
        return exact_caputo_ramp_history(p, t)
    raise UsageError(f"no closed-form solution for {p.history!r}")


def evaluate_grid(p: LinearProblem, operator: OperatorKind, h: float, T: float) -> Trajectory:
    """Exact solution on the grid t_n = n·h, n = 0..⌈T/h⌉."""
    n_steps = grid_size(T, h)
    logging.info(f"evaluating exact {operator.value} solution on {n_steps + 1} nodes")
    values = np.array([exact_solution(p, operator, n * h) for n in range(n_steps + 1)])
    return Trajectory.from_values(p.history, h, T, values)
