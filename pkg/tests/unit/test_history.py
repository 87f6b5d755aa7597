#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Tests for the history module."""

import logging
import math
from unittest import TestCase

import numpy as np
from scipy import integrate, special

from fdde.errors import DomainError
from fdde.history import (
    ConstantHistory,
    RampHistory,
    SampledHistory,
    corrective_abs_bound,
    corrective_abs_integral,
    corrective_term,
    eval_history,
    load_history_csv,
    shifted_power_integral,
)

# disconnect logging for testing
logging.captureWarnings(True)
logging.disable(logging.CRITICAL)


def rl_quadrature(fn, beta: float, s: float) -> float:
    """Riemann-Liouville integral of order β by quadrature with weight (s-r)^(β-1)."""
    value, _ = integrate.quad(
        fn, 0.0, s, weight="alg", wvar=(0.0, beta - 1.0), epsabs=1e-13, epsrel=1e-12, limit=500
    )
    return value / special.gamma(beta)


class TestHistories(TestCase):
    """Test evaluation of the history variants."""

    def test_constant(self) -> None:
        """should be y0 everywhere on [-τ, 0]"""
        phi = ConstantHistory(2.5, 1.5)
        self.assertEqual(phi(-1.5), 2.5)
        self.assertEqual(phi(-0.3), 2.5)
        self.assertEqual(phi.y0, 2.5)
        self.assertEqual(phi.segments(), [])

    def test_ramp(self) -> None:
        """should rise linearly from 0 at -τ to y0 at 0"""
        phi = RampHistory(2.0, 4.0)
        self.assertEqual(phi(-4.0), 0.0)
        self.assertEqual(phi(-1.0), 1.5)
        self.assertEqual(phi(0.0), 2.0)
        self.assertEqual(phi.segments(), [(-4.0, 0.0, 0.5)])

    def test_vectorized(self) -> None:
        """should evaluate arrays of times elementwise"""
        phi = RampHistory(1.0, 1.0)
        np.testing.assert_allclose(phi(np.array([-1.0, -0.5, 0.0])), [0.0, 0.5, 1.0])

    def test_roundoff_at_ends(self) -> None:
        """should accept times a roundoff error beyond the interval"""
        phi = RampHistory(1.0, 0.3)
        self.assertEqual(phi(-0.1 - 0.2), 0.0)
        self.assertEqual(phi(1e-15), 1.0)

    def test_outside(self) -> None:
        """should raise DomainError outside [-τ, 0]"""
        phi = ConstantHistory(1.0, 1.0)
        with self.assertRaises(DomainError):
            phi(0.1)
        with self.assertRaises(DomainError):
            phi(-1.1)
        with self.assertRaises(DomainError):
            eval_history(phi, 1e-15)

    def test_invalid_delay(self) -> None:
        """should reject non-positive delays"""
        with self.assertRaises(DomainError):
            RampHistory(1.0, 0.0)


class TestSampledHistory(TestCase):
    """Test piecewise-linear sampled histories."""

    def test_interpolation(self) -> None:
        """should interpolate linearly between nodes"""
        phi = SampledHistory([-2.0, -1.0, 0.0], [1.0, 3.0, 2.0])
        self.assertEqual(phi.tau, 2.0)
        self.assertEqual(phi(-1.5), 2.0)
        self.assertEqual(phi(-0.5), 2.5)
        self.assertEqual(phi.y0, 2.0)

    def test_segments(self) -> None:
        """should list the slope of every non-flat piece"""
        phi = SampledHistory([-3.0, -2.0, -1.0, 0.0], [0.0, 1.0, 1.0, 0.5])
        self.assertEqual(phi.segments(), [(-3.0, -2.0, 1.0), (-1.0, 0.0, -0.5)])

    def test_validation(self) -> None:
        """should reject malformed nodes"""
        with self.assertRaises(DomainError):
            SampledHistory([-1.0], [1.0])
        with self.assertRaises(DomainError):
            SampledHistory([-1.0, -1.0, 0.0], [1.0, 2.0, 3.0])
        with self.assertRaises(DomainError):
            SampledHistory([-1.0, -0.5], [1.0, 2.0])
        with self.assertRaises(DomainError):
            SampledHistory([-1.0, 0.0], [1.0, math.nan])

    def test_read_only(self) -> None:
        """should not allow its nodes to change"""
        phi = SampledHistory([-1.0, 0.0], [0.0, 1.0])
        with self.assertRaises(ValueError):
            phi.values[0] = 5.0

    def test_load_csv(self) -> None:
        """should load a two-column csv file with a header"""
        phi = load_history_csv("tests/fixtures/histories/kinked.csv")
        self.assertEqual(phi.tau, 1.0)
        self.assertEqual(phi(-0.75), 1.0)
        self.assertEqual(phi.y0, 1.0)

    def test_load_csv_delay(self) -> None:
        """should check the delay spanned by the file"""
        load_history_csv("tests/fixtures/histories/ramp.csv", tau=1.0)
        with self.assertRaises(DomainError):
            load_history_csv("tests/fixtures/histories/ramp.csv", tau=2.0)

    def test_load_malformed(self) -> None:
        """should raise DomainError for rows that aren't numbers"""
        with self.assertRaises(DomainError):
            load_history_csv("tests/fixtures/histories/malformed.csv")


class TestCorrectiveTerm(TestCase):
    """Test the corrective term between the φτ and Caputo operators."""

    def test_constant_vanishes(self) -> None:
        """should vanish for a constant history"""
        phi = ConstantHistory(3.0, 1.0)
        for t in (0.1, 1.0, 7.3):
            self.assertEqual(corrective_term(phi, 0.8, 1.0, t), 0.0)

    def test_ramp_closed_form(self) -> None:
        """should equal y0/(τΓ(2-α))·(t^(1-α) - (t+τ)^(1-α)) for a ramp"""
        alpha, tau, y0 = 0.8, 1.5, 2.0
        phi = RampHistory(y0, tau)
        for t in (0.01, 0.5, 3.0):
            expected = y0 / (tau * math.gamma(2 - alpha)) * (t ** (1 - alpha) - (t + tau) ** (1 - alpha))
            self.assertAlmostEqual(corrective_term(phi, alpha, tau, t), expected, places=14)
            self.assertLess(corrective_term(phi, alpha, tau, t), 0.0)

    def test_ramp_decreasing(self) -> None:
        """should stay negative and shrink strictly in size along t for a ramp"""
        phi = RampHistory(1.0, 1.0)
        times = np.linspace(0.01, 10.0, 500)
        for alpha in (0.2, 0.5, 0.8, 0.95):
            values = np.array([corrective_term(phi, alpha, 1.0, t) for t in times])
            self.assertTrue(np.all(values < 0.0))
            self.assertTrue(np.all(np.diff(np.abs(values)) < 0.0))

    def test_sampled_ramp(self) -> None:
        """should agree between a sampled ramp and the ramp history"""
        sampled = load_history_csv("tests/fixtures/histories/ramp.csv")
        ramp = RampHistory(1.0, 1.0)
        for t in (0.2, 1.0, 4.0):
            self.assertAlmostEqual(
                corrective_term(sampled, 0.6, 1.0, t), corrective_term(ramp, 0.6, 1.0, t), places=14
            )

    def test_domain(self) -> None:
        """should require t > 0 and a matching delay"""
        phi = RampHistory(1.0, 1.0)
        with self.assertRaises(DomainError):
            corrective_term(phi, 0.8, 1.0, 0.0)
        with self.assertRaises(DomainError):
            corrective_term(phi, 0.8, 2.0, 1.0)
        with self.assertRaises(DomainError):
            corrective_term(phi, 1.0, 1.0, 1.0)

    def test_shifted_power_integral(self) -> None:
        """should integrate (r+c)^(1-α)/Γ(2-α) exactly"""
        for alpha, beta, s, c in ((0.8, 0.8, 2.0, 1.0), (0.5, 1.6, 3.0, 0.5), (0.3, 0.3, 1.0, 0.0)):
            expected = rl_quadrature(
                lambda r: (r + c) ** (1 - alpha) / math.gamma(2 - alpha), beta, s
            )
            self.assertAlmostEqual(shifted_power_integral(alpha, beta, s, c), expected, places=9)

    def test_rl_integral(self) -> None:
        """should integrate the corrective term of ramp and kinked histories exactly"""
        kinked = load_history_csv("tests/fixtures/histories/kinked.csv")
        for phi in (RampHistory(1.0, 1.0), kinked):
            for alpha, beta, s in ((0.8, 0.8, 2.5), (0.6, 1.2, 0.7), (0.9, 2.7, 4.0)):
                expected = rl_quadrature(lambda r: phi.corrective(alpha, r), beta, s)
                self.assertAlmostEqual(phi.corrective_rl_integral(alpha, beta, s), expected, places=8)
        self.assertEqual(RampHistory(1.0, 1.0).corrective_rl_integral(0.8, 0.8, 0.0), 0.0)


class TestCorrectiveBound(TestCase):
    """Test the weighted integral of |corrective| for a ramp history."""

    def test_quadrature(self) -> None:
        """should match quadrature of (t-r)^(α-1)·|corrective(r)|"""
        phi = RampHistory(1.5, 1.0)
        for alpha in (0.3, 0.8):
            for t in (0.5, 2.0, 10.0):
                expected, _ = integrate.quad(
                    lambda r: abs(phi.corrective(alpha, r)),
                    0.0,
                    t,
                    weight="alg",
                    wvar=(0.0, alpha - 1.0),
                    epsabs=1e-12,
                    limit=500,
                )
                self.assertAlmostEqual(corrective_abs_integral(phi, alpha, t), expected, places=8)

    def test_bounded(self) -> None:
        """should stay below |y0|·Γ(α) and approach it for large t"""
        phi = RampHistory(-2.0, 1.0)
        bound = corrective_abs_bound(phi, 0.8)
        self.assertAlmostEqual(bound, 2.0 * math.gamma(0.8))
        values = [corrective_abs_integral(phi, 0.8, t) for t in (0.0, 1.0, 10.0, 1000.0)]
        self.assertEqual(values[0], 0.0)
        self.assertTrue(all(v <= bound for v in values))
        self.assertTrue(values[1] < values[2] < values[3])

    def test_ramp_only(self) -> None:
        """should reject other histories"""
        with self.assertRaises(DomainError):
            corrective_abs_integral(ConstantHistory(1.0, 1.0), 0.8, 1.0)
