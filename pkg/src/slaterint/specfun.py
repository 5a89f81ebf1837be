"""Exact combinatorics and the special functions used by the integral code.

Conventions
-----------
* On the cut (``-1 <= x <= 1``) associated Legendre functions carry the
  Condon-Shortley phase ``(-1)**m``.
* Off the cut (``z > 1``) no phase is applied and the positive root of
  ``(z**2 - 1)`` is taken. The library works with the *weighted* products
  ``P_mu^sigma(z) (z**2 - 1)**(sigma/2)`` and
  ``Q_mu^sigma(z) (z**2 - 1)**(sigma/2)``; the first is a polynomial.
* Orders ``sigma > mu`` give the zero function.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _poly

EULER_GAMMA = 0.5772156649015329

# E1: series below this point, continued fraction above.
_E1_SWITCH = 1.5


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError(f"factorial of negative number {n}")
    return math.factorial(n)


def binomial(n: int, k: int) -> int:
    """Binomial coefficient with ``C(n, k) = 0`` outside ``0 <= k <= n``."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def euler_gamma() -> float:
    return EULER_GAMMA


@lru_cache(maxsize=None)
def _rodrigues_coeffs(l: int, m: int) -> tuple:
    # d^{l+m}/dx^{l+m} (x^2-1)^l / (2^l l!) as exact coefficients, index = power
    out = [Fraction(0)] * (l - m + 1)
    for s in range((l - m) // 2 + 1):
        c = Fraction(binomial(l, s) * (-1) ** s * factorial(2 * l - 2 * s),
                     factorial(l - m - 2 * s))
        out[l - m - 2 * s] += c / (2**l * factorial(l))
    return tuple(out)


def legendre_p_cut(l: int, m: int, x):
    """Associated Legendre function ``P_l^m(x)`` on ``[-1, 1]``.

    Rodrigues form with the Condon-Shortley phase. Accepts scalars or arrays.
    """
    if m < 0 or l < 0:
        raise ValueError("legendre_p_cut needs l >= 0 and m >= 0")
    xa = np.asarray(x, dtype=float)
    if np.any(np.abs(xa) > 1.0):
        raise ValueError("legendre_p_cut argument outside [-1, 1]")
    if m > l:
        return np.zeros_like(xa)[()]
    coeffs = [float(c) for c in _rodrigues_coeffs(l, m)]
    poly = np.polynomial.polynomial.polyval(xa, coeffs)
    val = (-1) ** m * (1.0 - xa * xa) ** (m / 2.0) * poly
    return val[()] if isinstance(val, np.ndarray) else val


@dataclass(frozen=True)
class WeightedLegendrePoly:
    """``P_mu^sigma(z) (z^2 - 1)^(sigma/2)`` as an exact polynomial in ``z``."""

    mu: int
    sigma: int
    coeffs: tuple  # ((exponent, Fraction), ...), descending exponents

    def dense(self) -> list:
        """Dense coefficient list, index = power."""
        if not self.coeffs:
            return [Fraction(0)]
        out = [Fraction(0)] * (self.coeffs[0][0] + 1)
        for e, c in self.coeffs:
            out[e] += c
        return out

    def __call__(self, z):
        return sum(float(c) * z**e for e, c in self.coeffs) if self.coeffs else 0.0 * z


@lru_cache(maxsize=None)
def weighted_p_offcut(mu: int, sigma: int) -> WeightedLegendrePoly:
    sigma = abs(sigma)
    if sigma > mu:
        return WeightedLegendrePoly(mu, sigma, ())
    pref = Fraction(factorial(mu + sigma), 2**mu * factorial(mu))
    terms = []
    for p in range((mu + sigma) // 2 + 1):
        c = (-1) ** p * binomial(2 * mu - 2 * p, mu - sigma) * binomial(mu, p)
        if c:
            terms.append((mu + sigma - 2 * p, pref * c))
    return WeightedLegendrePoly(mu, sigma, tuple(terms))


@dataclass(frozen=True)
class WeightedQ:
    """Structure of ``Q_mu^sigma(z) (z^2 - 1)^(sigma/2)`` for ``z > 1``.

    ``value = 0.5 * log_part(z) * ln((z+1)/(z-1)) + algebraic(z) + lower(z)``
    where ``algebraic`` collects the kappa-sum and ``lower`` the sum over
    lower-degree weighted P's. Both are exact dense polynomials.
    """

    mu: int
    sigma: int
    log_part: WeightedLegendrePoly
    algebraic: tuple  # dense Fractions
    lower_terms: tuple  # ((j, coefficient, WeightedLegendrePoly), ...)

    @property
    def lower(self) -> list:
        acc = [Fraction(0)]
        for _, c, wp in self.lower_terms:
            acc = _poly.add(acc, _poly.scale(wp.dense(), c))
        return acc

    def polynomial_part(self) -> list:
        """``algebraic + lower`` as one dense exact polynomial."""
        return _poly.trim(_poly.add(list(self.algebraic), self.lower))

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        log = np.log((z + 1.0) / (z - 1.0))
        poly = [float(c) for c in self.polynomial_part()]
        val = 0.5 * self.log_part(z) * log + np.polynomial.polynomial.polyval(z, poly)
        return val[()] if isinstance(val, np.ndarray) else val


@lru_cache(maxsize=None)
def weighted_q_offcut(mu: int, sigma: int) -> WeightedQ:
    sigma = abs(sigma)
    if sigma > mu:
        return WeightedQ(mu, sigma, weighted_p_offcut(mu, sigma), (Fraction(0),), ())
    algebraic = [Fraction(0)]
    for kappa in range(1, sigma + 1):
        bracket = _poly.add(_poly.power([-1, 1], kappa),
                            _poly.scale(_poly.power([1, 1], kappa), -1))
        c = Fraction(binomial(sigma, kappa) * (-1) ** (kappa - 1) * factorial(kappa - 1), 2)
        term = _poly.mul(weighted_p_offcut(mu, sigma - kappa).dense(), bracket)
        algebraic = _poly.add(algebraic, _poly.scale(term, c))
    lower = []
    for j in range((mu - 1 - sigma) // 2 + 1) if mu - 1 - sigma >= 0 else ():
        c = -Fraction(2 * mu - 4 * j - 1, (2 * j + 1) * (mu - j))
        lower.append((j, c, weighted_p_offcut(mu - 2 * j - 1, sigma)))
    return WeightedQ(mu, sigma, weighted_p_offcut(mu, sigma),
                     tuple(_poly.trim(algebraic)), tuple(lower))


def _e1_series(x: float) -> float:
    total = 0.0
    term = 1.0
    for k in range(1, 200):
        term *= -x / k
        add = term / k
        total += add
        if abs(add) < 1e-17 * abs(total):
            break
    return -EULER_GAMMA - math.log(x) - total


def _e1_scaled_cf(x: float) -> float:
    # e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- ...))), modified Lentz
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10000):
        a = -float(i * i)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h
    raise ArithmeticError(f"E1 continued fraction did not converge at x={x}")


def exp_integral_e1(x: float) -> float:
    """Exponential integral ``E1(x) = int_x^inf e^-t / t dt`` for ``x > 0``."""
    if not x > 0:
        raise ValueError(f"E1 needs x > 0, got {x}")
    if x < _E1_SWITCH:
        return _e1_series(x)
    return _e1_scaled_cf(x) * math.exp(-x)


def exp_e1_scaled(x: float) -> float:
    """``e^x E1(x)``, safe against overflow for large ``x``."""
    if not x > 0:
        raise ValueError(f"E1 needs x > 0, got {x}")
    if x < _E1_SWITCH:
        return math.exp(x) * _e1_series(x)
    return _e1_scaled_cf(x)


def bessel_i_halfint(mu: int, beta: float) -> float:
    """Modified Bessel function ``I_{mu+1/2}(beta)`` from the ascending series."""
    if mu < 0:
        raise ValueError("order must be non-negative")
    if not beta > 0:
        raise ValueError(f"bessel_i_halfint needs beta > 0, got {beta}")
    # i_mu(b) = b^mu sum_k (b^2/2)^k / (k! (2mu+2k+1)!!);  I = sqrt(2b/pi) i_mu
    dfact = 1.0
    for j in range(1, 2 * mu + 2, 2):
        dfact *= j
    term = 1.0 / dfact
    total = term
    h = 0.5 * beta * beta
    for k in range(1, 2000):
        term *= h / (k * (2 * mu + 2 * k + 1))
        total += term
        if term < 1e-17 * total:
            break
    return math.sqrt(2.0 * beta / math.pi) * beta**mu * total
