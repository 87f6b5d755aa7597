#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Special functions: Gamma, incomplete beta, Mittag-Leffler, GL weights."""

import cmath
import math
from typing import NamedTuple

import numpy as np

from .errors import CapabilityError, DomainError

# Lanczos approximation with g=7 and nine coefficients
LANCZOS_G = 7
LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
SQRT_TWO_PI = math.sqrt(2 * math.pi)
HALF_LOG_TWO_PI = 0.5 * math.log(2 * math.pi)

# largest argument for which gamma() stays finite
GAMMA_MAX = 171.62

# Mittag-Leffler Taylor series envelope
ML_MAX_ABS_Z = 50.0
ML_MAX_TERMS = 2000
ML_TERM_TOL = 1e-16
ML_ACCURACY = 1e-10
# log of the largest finite double, less some slack
ML_MAX_LOG_TERM = 709.0

# continued fractions, evaluated with the modified Lentz algorithm
CF_EPS = 1e-15
CF_TINY = 1e-300
CF_MAX_ITER = 10000


class GlWeights(NamedTuple):
    """Grünwald-Letnikov weights ω_0..ω_N for a fixed order."""

    alpha: float
    coeffs: np.ndarray

    def __len__(self) -> int:
        return len(self.coeffs)

    def partial_sums(self) -> np.ndarray:
        """Running sums ω_0 + ... + ω_j for every j."""
        return np.cumsum(self.coeffs)


def _is_pole(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def _lanczos_sum(z: float) -> float:
    """Series part of the Lanczos formula, for Γ(z + 1) with z >= -0.5."""
    acc = LANCZOS_COEFFS[0]
    for i in range(1, LANCZOS_G + 2):
        acc += LANCZOS_COEFFS[i] / (z + i)
    return acc


def gamma(x: float) -> float:
    """Euler Gamma function.

    Positive integers up to 171 are exact factorials; other arguments use the
    Lanczos approximation, with the reflection formula below 1/2.

    Raises:
        DomainError: at the poles 0, -1, -2, ...
    """
    if _is_pole(x):
        raise DomainError(f"gamma has a pole at {x}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    if x == math.floor(x) and x <= 171:
        return float(math.factorial(int(x) - 1))
    if x > GAMMA_MAX:
        raise CapabilityError(f"gamma({x}) overflows; use log_gamma")

    # split the power so large arguments don't overflow before exp(-t)
    z = x - 1.0
    t = z + LANCZOS_G + 0.5
    half = t ** (0.5 * (z + 0.5))
    return SQRT_TWO_PI * half * (half * math.exp(-t)) * _lanczos_sum(z)


def log_gamma(x: float) -> float:
    """Natural logarithm of Γ(x) for x > 0."""
    if x <= 0:
        raise DomainError(f"log_gamma is only defined here for x > 0, got {x}")
    if x < 0.5:
        return math.log(math.pi / math.sin(math.pi * x)) - log_gamma(1.0 - x)
    z = x - 1.0
    t = z + LANCZOS_G + 0.5
    return HALF_LOG_TWO_PI + (z + 0.5) * math.log(t) - t + math.log(_lanczos_sum(z))


def rgamma(x: float) -> float:
    """Reciprocal Gamma function 1/Γ(x); exactly zero at the poles."""
    if _is_pole(x):
        return 0.0
    if x > GAMMA_MAX:
        return math.exp(-log_gamma(x))
    if x < 0.5:
        return math.sin(math.pi * x) * gamma(1.0 - x) / math.pi
    return 1.0 / gamma(x)


def log_beta(a: float, b: float) -> float:
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b)


def _beta_cf(x: float, a: float, b: float) -> float:
    """Continued fraction for the incomplete beta function (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < CF_TINY:
        d = CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, CF_MAX_ITER + 1):
        m2 = 2 * m

        # even step
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < CF_TINY:
            d = CF_TINY
        c = 1.0 + aa / c
        if abs(c) < CF_TINY:
            c = CF_TINY
        d = 1.0 / d
        h *= d * c

        # odd step
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < CF_TINY:
            d = CF_TINY
        c = 1.0 + aa / c
        if abs(c) < CF_TINY:
            c = CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < CF_EPS:
            return h
    raise CapabilityError(
        f"incomplete beta continued fraction did not converge for x={x}, a={a}, b={b}"
    )


def reg_inc_beta(x: float, a: float, b: float) -> float:
    """Regularized incomplete beta function I_x(a, b).

    Uses the continued fraction directly below (a+1)/(a+b+2) and the symmetry
    I_x(a, b) = 1 - I_{1-x}(b, a) above it.
    """
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"reg_inc_beta needs x in [0, 1], got {x}")
    if a <= 0 or b <= 0:
        raise DomainError(f"reg_inc_beta needs a, b > 0, got a={a}, b={b}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0

    ln_front = a * math.log(x) + b * math.log1p(-x) - log_beta(a, b)
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(ln_front) * _beta_cf(x, a, b) / a
    return 1.0 - math.exp(ln_front) * _beta_cf(1.0 - x, b, a) / b


def _ml_closed_form(alpha: float, beta: float, z: float):
    """Elementary closed forms of E_{α,β}, or None."""
    if alpha == 1 and beta == 1:
        return math.exp(z)
    if alpha == 2 and z < 0:
        root = math.sqrt(-z)
        if beta == 1:
            return math.cos(root)
        if beta == 2:
            return math.sin(root) / root
    return None


def _ml_series(alpha: float, beta: float, z: float) -> float:
    """Taylor series of E_{α,β}(z) with compensated summation."""
    log_abs = math.log(abs(z))
    total = 0.0
    carry = 0.0
    peak = 0.0
    for k in range(ML_MAX_TERMS):
        x = alpha * k + beta
        if x > 0 and (x > GAMMA_MAX or k * log_abs > 700):
            log_term = k * log_abs - log_gamma(x)
            if log_term > ML_MAX_LOG_TERM:
                raise CapabilityError(
                    f"Mittag-Leffler series overflows for alpha={alpha}, beta={beta}, z={z}"
                )
            term = math.exp(log_term)
            if z < 0 and k % 2:
                term = -term
        else:
            term = z**k * rgamma(x)
        if not math.isfinite(term):
            raise CapabilityError(
                f"Mittag-Leffler series overflows for alpha={alpha}, beta={beta}, z={z}"
            )
        peak = max(peak, abs(term))

        # Kahan summation
        y = term - carry
        t = total + y
        carry = (t - total) - y
        total = t

        # only stop once the terms are past their peak
        decreasing = x > 0 and log_abs + log_gamma(x) - log_gamma(x + alpha) < 0
        if decreasing and abs(term) <= ML_TERM_TOL * abs(total):
            break
    else:
        raise CapabilityError(
            f"Mittag-Leffler series did not converge in {ML_MAX_TERMS} terms "
            f"for alpha={alpha}, beta={beta}, z={z}"
        )

    # cancellation between large alternating terms leaves garbage
    if peak * np.finfo(float).eps > ML_ACCURACY * max(abs(total), 1.0):
        raise CapabilityError(
            f"Mittag-Leffler series loses accuracy to cancellation "
            f"for alpha={alpha}, beta={beta}, z={z}"
        )
    return total


def mittag_leffler(alpha: float, beta: float, z: float) -> float:
    """Two-parameter Mittag-Leffler function E_{α,β}(z) for real z.

    Outside the elementary closed forms this sums the Taylor series, whose
    largest term is roughly exp(|z|^(1/α)). For z > 0 that works up to
    |z|^(1/α) of about 700. For z < 0 the alternating terms cancel, and the
    result holds 1e-10 only while |z|^(1/α) stays below about 13. With α=0.8
    that is z >= -7.8, and with α=0.5, z >= -3.6.

    Raises:
        DomainError: if alpha <= 0.
        CapabilityError: if |z| > 50 (outside the elementary closed forms),
            if a series term overflows, or if cancellation leaves less than
            the requested accuracy.
    """
    if alpha <= 0:
        raise DomainError(f"mittag_leffler needs alpha > 0, got {alpha}")
    if z == 0:
        return rgamma(beta)
    closed = _ml_closed_form(alpha, beta, z)
    if closed is not None:
        return closed
    if abs(z) > ML_MAX_ABS_Z:
        raise CapabilityError(
            f"Mittag-Leffler argument {z} is outside |z| <= {ML_MAX_ABS_Z}"
        )
    return _ml_series(alpha, beta, z)


def ml_kernel(t: float, alpha: float, beta: float, lam: float) -> float:
    """Generalized Mittag-Leffler kernel t^(β-1)·E_{α,β}(λ t^α)."""
    if t < 0:
        raise DomainError(f"ml_kernel needs t >= 0, got {t}")
    if t == 0:
        if beta < 1:
            raise DomainError(f"ml_kernel is singular at t=0 for beta={beta}")
        return rgamma(beta) if beta == 1 else 0.0
    return t ** (beta - 1) * mittag_leffler(alpha, beta, lam * t**alpha)


def gl_weights(alpha: float, n_max: int) -> GlWeights:
    """Grünwald-Letnikov weights ω_j = ω_{j-1}(1 - (α+1)/j), ω_0 = 1."""
    if not 0 < alpha <= 1:
        raise DomainError(f"gl_weights needs alpha in (0, 1], got {alpha}")
    if n_max < 0:
        raise DomainError(f"gl_weights needs n_max >= 0, got {n_max}")
    factors = np.empty(n_max + 1)
    factors[0] = 1.0
    factors[1:] = 1.0 - (alpha + 1.0) / np.arange(1, n_max + 1)
    return GlWeights(alpha, np.cumprod(factors))


def gl_weight_sums(alpha: float, n_max: int) -> np.ndarray:
    return gl_weights(alpha, n_max).partial_sums()


def gl_partial_sum(alpha: float, n: int) -> float:
    """Closed form Γ(n+1-α)/(Γ(1-α)Γ(n+1)) of ω_0 + ... + ω_n."""
    if n < 0:
        raise DomainError(f"gl_partial_sum needs n >= 0, got {n}")
    if alpha == 1:
        return float(n == 0)
    if n == 0:
        return 1.0
    return rgamma(1.0 - alpha) * math.exp(log_gamma_ratio(n + 1.0 - alpha, n + 1.0))


def log_gamma_ratio(x: float, y: float) -> float:
    """log(Γ(x)/Γ(y)) for x, y >= 1/2, without cancelling two large logs."""
    if x < 0.5 or y < 0.5:
        raise DomainError(f"log_gamma_ratio needs x, y >= 1/2, got x={x}, y={y}")
    zx = x - 1.0
    ty = y - 0.5 + LANCZOS_G
    power = (zx + 0.5) * math.log1p((x - y) / ty) + (x - y) * math.log(ty)
    return power - (x - y) + math.log(_lanczos_sum(zx) / _lanczos_sum(y - 1.0))


def _upper_gamma_cf(a: float, z: complex) -> complex:
    """Continued fraction h(z) with Γ(a, z) = exp(-z)·z^a·h(z)."""
    b = z + 1.0 - a
    c = 1.0 / CF_TINY
    d = 1.0 / b
    h = d
    for i in range(1, CF_MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < CF_TINY:
            d = CF_TINY
        c = b + an / c
        if abs(c) < CF_TINY:
            c = CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < CF_EPS:
            return h
    raise CapabilityError(
        f"incomplete gamma continued fraction did not converge for a={a}, z={z}"
    )


def rl_integral_cis(beta: float, omega: float, s: float) -> complex:
    """Riemann-Liouville integral of order β of exp(iωr), evaluated at s.

    The real part is the integral of cos(ωr), the imaginary part that of
    sin(ωr). Small ωs use the Mittag-Leffler forms s^β·E_{2,β+1}(-ω²s²) and
    ωs^(β+1)·E_{2,β+2}(-ω²s²); beyond the series envelope the integral is
    split into its steady oscillation and an incomplete-gamma tail.
    """
    if beta <= 0:
        raise DomainError(f"rl_integral_cis needs beta > 0, got {beta}")
    if s < 0:
        raise DomainError(f"rl_integral_cis needs s >= 0, got {s}")
    if s == 0:
        return 0j
    if omega == 0:
        return complex(s**beta * rgamma(beta + 1.0), 0.0)
    if omega < 0:
        return rl_integral_cis(beta, -omega, s).conjugate()

    x = omega * s
    if x * x <= ML_MAX_ABS_Z:
        z = -x * x
        return complex(
            s**beta * mittag_leffler(2.0, beta + 1.0, z),
            omega * s ** (beta + 1.0) * mittag_leffler(2.0, beta + 2.0, z),
        )

    tail = _upper_gamma_cf(beta, 1j * x)
    steady = omega ** (-beta) * cmath.exp(1j * (x - 0.5 * math.pi * beta))
    return steady - s**beta * tail * rgamma(beta)


def check_order(alpha: float) -> float:
    """Validate a fractional order α in (0, 1) and return it as a float."""
    if not 0 < alpha < 1:
        raise DomainError(f"fractional order must lie in (0, 1), got {alpha}")
    return float(alpha)
