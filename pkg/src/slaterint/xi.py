"""The xi-channel double integral.

    X = (-d/da1)^r1 (-d/da2)^r2  int_1^inf int_1^inf  p(xi_<) q(xi_>) e^{-a1 xi1 - a2 xi2} dxi1 dxi2

where ``p`` and ``q`` are the weighted off-cut Legendre functions
``P_mu^sigma (z^2-1)^(sigma/2)`` and ``Q_mu^sigma (z^2-1)^(sigma/2)``.

The evaluation splits the double integral into the two orderings of
(xi1, xi2), writes the inner integral of the polynomial ``p`` in
incomplete-exponential form and expands ``q`` as

    q(z) = 1/2 p(z) ln((z+1)/(z-1)) + b(z) + c(z)

with ``b`` the kappa-sum (family B) and ``c`` the sum over lower-degree P's
(family C). The logarithmic family A is integrated by parts over the
symmetrised pair, which leaves ``int F1 F2 / (z^2 - 1)``; it reduces to
the exponential integral, Euler's constant and elementary moments.

Everything is accumulated in ``mpmath`` at a precision chosen from the
observed cancellation: the split of ``q`` into a logarithmic and a
polynomial part cancels by roughly ``P_mu(z)^2 / (P_mu(z) Q_mu(z))``,
far beyond double precision once ``mu`` grows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath

from . import _poly
from .specfun import EULER_GAMMA, binomial, exp_e1_scaled, weighted_p_offcut, weighted_q_offcut

FAMILIES = ("A", "B", "C")

# extra digits carried beyond the observed cancellation
_GUARD_DIGITS = 22
_MAX_DPS = 2000


@dataclass(frozen=True)
class XiIntegralRequest:
    mu: int
    sigma: int
    r1: int
    r2: int
    alpha1: float
    alpha2: float

    def __post_init__(self):
        if self.mu < 0 or not 0 <= self.sigma <= self.mu:
            raise ValueError(f"need 0 <= sigma <= mu, got mu={self.mu} sigma={self.sigma}")
        if self.r1 < 0 or self.r2 < 0:
            raise ValueError("derivative orders must be non-negative")
        if not (self.alpha1 > 0 and self.alpha2 > 0):
            raise ValueError(f"xi integrals need alpha1, alpha2 > 0, got {self.alpha1}, {self.alpha2}")


def basic_log_integral(alpha1: float, alpha2: float) -> float:
    """``int_1^inf [1/(z-1) - 1/(z+1)] (e^-a1 - e^-a1 z)(e^-a2 - e^-a2 z) dz``."""
    if not (alpha1 > 0 and alpha2 > 0):
        raise ValueError("basic_log_integral needs positive arguments")
    s = alpha1 + alpha2
    bracket = (math.log(2.0 * alpha1 * alpha2 / s) + EULER_GAMMA
               + exp_e1_scaled(2.0 * alpha1) + exp_e1_scaled(2.0 * alpha2)
               - exp_e1_scaled(2.0 * s))
    return math.exp(-s) * bracket


@dataclass(frozen=True)
class QTermFamilies:
    """The three term families whose sum is ``Q_mu^sigma(z)(z^2-1)^(sigma/2)``.

    ``a`` is the weighted P multiplying ``1/2 ln((z+1)/(z-1))``; ``b`` lists
    ``(kappa, j, coefficient, weighted P of order sigma-kappa, z-power)``;
    ``c`` lists ``(j, coefficient, weighted P of degree mu-2j-1)``.
    """

    mu: int
    sigma: int
    a: object
    b: tuple
    c: tuple

    def b_polynomial(self) -> list:
        acc = [Fraction(0)]
        for _kappa, _j, coeff, wp, zpow in self.b:
            acc = _poly.add(acc, _poly.scale(_poly.mul(wp.dense(), [0] * zpow + [1]), coeff))
        return _poly.trim(acc)

    def c_polynomial(self) -> list:
        acc = [Fraction(0)]
        for _j, coeff, wp in self.c:
            acc = _poly.add(acc, _poly.scale(wp.dense(), coeff))
        return _poly.trim(acc)


@lru_cache(maxsize=None)
def q_weighted_expansion_terms(mu: int, sigma: int) -> QTermFamilies:
    sigma = abs(sigma)
    b = []
    for kappa in range(1, sigma + 1):
        wp = weighted_p_offcut(mu, sigma - kappa)
        # (z-1)^k - (z+1)^k = -2 sum_j C(k, k-2j-1) z^(k-2j-1)
        for j in range((kappa - 1) // 2 + 1):
            coeff = Fraction(binomial(sigma, kappa) * (-1) ** kappa * math.factorial(kappa - 1)
                             * binomial(kappa, kappa - 2 * j - 1))
            b.append((kappa, j, coeff, wp, kappa - 2 * j - 1))
    c = tuple(weighted_q_offcut(mu, sigma).lower_terms)
    return QTermFamilies(mu, sigma, weighted_p_offcut(mu, sigma), tuple(b), c)


@dataclass(frozen=True)
class IncompleteExp:
    """``F(z) = int_1^z u(x) e^{-alpha x} dx = constant - e^{-alpha z} poly(z)``."""

    alpha: float
    constant: float
    poly: tuple  # ((exponent, coefficient), ...)

    def __call__(self, z: float) -> float:
        return self.constant - math.exp(-self.alpha * z) * sum(c * z**e for e, c in self.poly)


def inner_p_integral_poly(mu: int, sigma: int, alpha: float, r: int = 0) -> IncompleteExp:
    """Closed form of ``int_1^z x^r P_mu^sigma(x)(x^2-1)^(sigma/2) e^{-alpha x} dx``."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    u = _poly.mul([Fraction(0)] * r + [Fraction(1)], weighted_p_offcut(mu, sigma).dense())
    with mpmath.workdps(40):
        a = mpmath.mpf(alpha)
        v = _antiderivative_kernel([_to_mpf(c) for c in u], a)
        const = mpmath.exp(-a) * _poly.horner(v, mpmath.mpf(1))
        terms = tuple((e, float(c)) for e, c in enumerate(v) if c != 0)
        return IncompleteExp(alpha, float(const), terms)


def _to_mpf(c):
    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    return mpmath.mpf(c)


def _antiderivative_kernel(u: Sequence, alpha) -> list:
    # int_z^inf u(x) e^{-alpha x} dx = e^{-alpha z} * sum_j u^{(j)}(z) / alpha^{j+1}
    out = [mpmath.mpf(0)] * max(len(u), 1)
    d = list(u)
    apow = alpha
    while d and any(c != 0 for c in d):
        for k, c in enumerate(d):
            out[k] += c / apow
        d = [k * d[k] for k in range(1, len(d))]
        apow *= alpha
    return out


class _Accumulator:
    """Sum that remembers the largest magnitude it has seen."""

    def __init__(self):
        self.total = mpmath.mpf(0)
        self.peak = mpmath.mpf(0)

    def add(self, x):
        self.total += x
        ax = abs(x)
        if ax > self.peak:
            self.peak = ax
        return x


def _moment_sum(f: Sequence, c, acc: _Accumulator):
    # int_0^inf f(t) e^{-c t} dt
    total = mpmath.mpf(0)
    fact_over = 1 / c  # k!/c^{k+1}
    for k, fk in enumerate(f):
        if k:
            fact_over = fact_over * k / c
        if fk != 0:
            total += acc.add(fk * fact_over)
    return total


def _shifted_moment(f: Sequence, c, e1s, acc: _Accumulator):
    # int_0^inf f(t) e^{-c t} / (t + 2) dt, with e1s = e^{2c} E1(2c)
    if not f:
        return mpmath.mpf(0)
    q, rem = _poly.divide_linear(list(f), -2)
    return _moment_sum(q, c, acc) + acc.add(rem * e1s)


def _e1s(x):
    return mpmath.exp(x) * mpmath.e1(x)


def _closed_form(mu: int, sigma: int, s1: Sequence, s2: Sequence, a1, a2,
                 families: Sequence[str]):
    """``e^{a1+a2} X`` and the cancellation ratio, evaluated at the current mp precision."""
    acc = _Accumulator()
    fam = q_weighted_expansion_terms(mu, sigma)
    p_shift = _poly.shift(fam.a.dense(), Fraction(1))
    s = [_poly.shift(list(si), mpmath.mpf(1)) for si in (s1, s2)]
    alphas = (a1, a2)
    p_mp = [_to_mpf(c) for c in p_shift]
    U = [_poly.mul(p_mp, si) for si in s]
    V = [_antiderivative_kernel(Ui, ai) for Ui, ai in zip(U, alphas)]
    v0 = [Vi[0] for Vi in V]
    vt = [Vi[1:] or [mpmath.mpf(0)] for Vi in V]
    asum = a1 + a2
    total = mpmath.mpf(0)

    if "A" in families:
        e1_1, e1_2, e1_12 = _e1s(2 * a1), _e1s(2 * a2), _e1s(2 * asum)
        j = (mpmath.log(2 * a1 * a2 / asum) + mpmath.euler + e1_1 + e1_2 - e1_12) / 2
        total += acc.add(v0[0] * v0[1] * j)
        e1_single = (e1_1, e1_2)
        for i in (0, 1):
            other = 1 - i
            # int (1 - e^{-a_o t}) Vt_i(t) e^{-a_i t} / (t+2)
            term = (_shifted_moment(vt[i], alphas[i], e1_single[i], acc)
                    - _shifted_moment(vt[i], asum, e1_12, acc))
            total -= acc.add(v0[other] * term)
        cross = [mpmath.mpf(0)] + _poly.mul(vt[0], vt[1])
        total += _shifted_moment(cross, asum, e1_12, acc)

    for name in ("B", "C"):
        if name not in families:
            continue
        poly = fam.b_polynomial() if name == "B" else fam.c_polynomial()
        if all(c == 0 for c in poly):
            continue
        w = [_to_mpf(c) for c in _poly.shift(poly, Fraction(1))]
        for inner, outer in ((0, 1), (1, 0)):
            wo = _poly.mul(w, s[outer])
            total += acc.add(v0[inner] * _moment_sum(wo, alphas[outer], acc))
            total -= acc.add(_moment_sum(_poly.mul(wo, V[inner]), asum, acc))

    ratio = acc.peak / abs(total) if total != 0 else (mpmath.inf if acc.peak else mpmath.mpf(1))
    return total, ratio


def xi_general(mu: int, sigma: int, s1: Sequence, s2: Sequence, alpha1: float, alpha2: float,
               *, families: Sequence[str] = FAMILIES, dps: int | None = None):
    """Xi double integral with polynomial weights ``s1(xi1)``, ``s2(xi2)``.

    ``s1`` and ``s2`` are dense coefficient lists. Returns an ``mpmath.mpf``.
    The working precision starts at ``dps`` (or a default) and is raised
    until the observed cancellation leaves at least ``_GUARD_DIGITS`` digits.
    """
    if not 0 <= sigma <= mu:
        raise ValueError(f"need 0 <= sigma <= mu, got mu={mu} sigma={sigma}")
    if not (alpha1 > 0 and alpha2 > 0):
        raise ValueError("xi integrals need positive alphas")
    work = dps or 30
    while True:
        with mpmath.workdps(work):
            a1, a2 = mpmath.mpf(alpha1), mpmath.mpf(alpha2)
            s1m = [mpmath.mpf(c) if not isinstance(c, Fraction) else _to_mpf(c) for c in s1]
            s2m = [mpmath.mpf(c) if not isinstance(c, Fraction) else _to_mpf(c) for c in s2]
            total, ratio = _closed_form(mu, sigma, s1m, s2m, a1, a2, families)
            if total == 0:
                return mpmath.mpf(0)
            lost = float(mpmath.log10(ratio)) if ratio > 1 else 0.0
            if work - lost >= _GUARD_DIGITS or dps is not None:
                return +(total * mpmath.exp(-(a1 + a2)))
        work = int(lost) + _GUARD_DIGITS + 5
        if work > _MAX_DPS:
            raise ArithmeticError(f"xi closed form needs more than {_MAX_DPS} digits (mu={mu})")


def _monomial(r: int) -> list:
    return [0] * r + [1]


def xi_double_integral(mu: int, sigma: int, r1: int, r2: int, alpha1: float, alpha2: float,
                       *, families: Sequence[str] = FAMILIES) -> float:
    req = XiIntegralRequest(mu, abs(sigma), r1, r2, float(alpha1), float(alpha2))
    return float(xi_general(req.mu, req.sigma, _monomial(req.r1), _monomial(req.r2),
                            req.alpha1, req.alpha2, families=families))
