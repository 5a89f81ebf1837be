"""Slater orbitals on two centers and their prolate spheroidal expansions.

Geometry: center A at ``z = -R/2``, center B at ``z = +R/2``, so that

    r_a = R/2 (xi + eta),   cos(theta_a) = (xi eta + 1) / (xi + eta)
    r_b = R/2 (xi - eta),   cos(theta_b) = (xi eta - 1) / (xi - eta)

An orbital on A expands with the upper sign, one on B with the lower sign.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .specfun import binomial, factorial, legendre_p_cut

N_MAX = 5
L_MAX = 4


class Center(enum.Enum):
    A = "A"
    B = "B"

    @property
    def sign(self) -> int:
        return 1 if self is Center.A else -1


@dataclass(frozen=True)
class SlaterOrbital:
    n: int
    l: int
    m: int
    delta: float
    center: Center = Center.A

    def __post_init__(self):
        if isinstance(self.center, str):
            object.__setattr__(self, "center", Center(self.center.upper()))
        if self.n < 1 or not 0 <= self.l <= self.n - 1 or abs(self.m) > self.l:
            raise ValueError(f"invalid quantum numbers n={self.n} l={self.l} m={self.m}")
        if not self.delta > 0:
            raise ValueError(f"screening constant must be positive, got {self.delta}")

    @property
    def label(self) -> str:
        letter = "spdfg"[self.l] if self.l < 5 else f"l{self.l}"
        return f"{self.n}{letter}{self.m:+d}{self.center.value}" if self.m else f"{self.n}{letter}{self.center.value}"

    def check_supported(self) -> None:
        if self.n > N_MAX or self.l > L_MAX:
            raise ValueError(f"orbital {self.label} outside supported range n <= {N_MAX}, l <= {L_MAX}")


@dataclass(frozen=True)
class ProlatePoint:
    xi: float
    eta: float
    phi: float = 0.0

    def __post_init__(self):
        if self.xi < 1.0 or abs(self.eta) > 1.0:
            raise ValueError(f"not a prolate point: xi={self.xi}, eta={self.eta}")


def prolate_coordinates(r_a: float, r_b: float, R: float) -> ProlatePoint:
    """``xi = (r_a + r_b)/R``, ``eta = (r_a - r_b)/R``; triangle inequality enforced."""
    if R <= 0 or r_a < 0 or r_b < 0:
        raise ValueError("distances must be non-negative and R positive")
    slack = 1e-12 * max(R, r_a, r_b)
    if abs(r_a - r_b) > R + slack or R > r_a + r_b + slack:
        raise ValueError(f"distances ({r_a}, {r_b}, {R}) violate the triangle inequality")
    xi = max((r_a + r_b) / R, 1.0)
    eta = min(max((r_a - r_b) / R, -1.0), 1.0)
    return ProlatePoint(xi, eta)


def center_distances(xi, eta, R: float):
    """``(r_a, r_b)`` for prolate coordinates."""
    return 0.5 * R * (xi + eta), 0.5 * R * (xi - eta)


def center_cosines(xi, eta):
    """``(cos theta_a, cos theta_b)``; on a nucleus the cosine is set to 1."""
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        ca = np.where(xi + eta > 0, (xi * eta + 1.0) / (xi + eta), 1.0)
        cb = np.where(xi - eta > 0, (xi * eta - 1.0) / (xi - eta), 1.0)
    return np.clip(ca, -1.0, 1.0), np.clip(cb, -1.0, 1.0)


def normalization(orb: SlaterOrbital) -> float:
    n, l, am = orb.n, orb.l, abs(orb.m)
    ang = (2 * l + 1) * factorial(l - am) / (4 * math.pi * factorial(2 * n) * factorial(l + am))
    return (2 * orb.delta) ** (n + 0.5) * math.sqrt(ang)


def _phase(orb: SlaterOrbital) -> int:
    return (-1) ** ((orb.m - abs(orb.m)) // 2)


def evaluate_real(orb: SlaterOrbital, xi, eta, R: float):
    """The orbital without its ``e^{i m phi}`` factor, vectorised over points."""
    ra, rb = center_distances(np.asarray(xi, float), np.asarray(eta, float), R)
    ca, cb = center_cosines(xi, eta)
    r, c = (ra, ca) if orb.center is Center.A else (rb, cb)
    radial = r ** (orb.n - 1) * np.exp(-orb.delta * r)
    return _phase(orb) * normalization(orb) * radial * legendre_p_cut(orb.l, abs(orb.m), c)


def evaluate(orb: SlaterOrbital, p: ProlatePoint, R: float) -> complex:
    return complex(evaluate_real(orb, p.xi, p.eta, R)) * complex(math.cos(orb.m * p.phi),
                                                                 math.sin(orb.m * p.phi))


@dataclass(frozen=True)
class MonomialTerm:
    xi_pow: int
    eta_pow: int
    coeff: Fraction
    indices: tuple = ()  # (s, p, q, a) that produced the term


@dataclass(frozen=True)
class OrbitalExpansion:
    """``pref * e^{i m phi} [(xi^2-1)(1-eta^2)]^{|m|/2} e^{-scale (xi +/- eta)} sum_k c_k xi^a eta^b``."""

    orbital: SlaterOrbital
    R: float
    prefactor: float
    terms: tuple
    weight: int  # |m|
    scale: float  # delta R / 2
    sign: int  # +1 for A, -1 for B
    extra_power: int = 0

    def __call__(self, xi, eta, phi=0.0):
        xi = np.asarray(xi, float)
        eta = np.asarray(eta, float)
        poly = sum(float(t.coeff) * xi**t.xi_pow * eta**t.eta_pow for t in self.terms)
        w = ((xi * xi - 1.0) * (1.0 - eta * eta)) ** (self.weight / 2.0)
        env = np.exp(-self.scale * (xi + self.sign * eta))
        return self.prefactor * np.exp(1j * self.orbital.m * phi) * w * env * poly


def expansion_normalization(orb: SlaterOrbital) -> float:
    """Normalisation in the form with ``(l+|m|)!`` moved into the numerator."""
    n, l, am = orb.n, orb.l, abs(orb.m)
    ang = (2 * l + 1) * factorial(l - am) * factorial(l + am) / (4 * math.pi * factorial(2 * n))
    return (2 * orb.delta) ** (n + 0.5) * math.sqrt(ang)


def two_center_expansion(orb: SlaterOrbital, R: float, extra_power: int = 0) -> OrbitalExpansion:
    """Expand the orbital into monomials ``xi^a eta^b`` in two-center coordinates.

    ``extra_power`` raises the ``(xi +/- eta)^(n-l-1)`` factor, which lets a
    caller fold one factor of the volume element into the binomial sum.
    """
    if R <= 0:
        raise ValueError("R must be positive")
    n, l, am = orb.n, orb.l, abs(orb.m)
    sg = orb.center.sign
    nb = n - l - 1 + extra_power
    head = (-1) ** ((orb.m + am) // 2)
    terms = []
    for s in range((l - am) // 2 + 1):
        cs = Fraction(head * (-1) ** s * binomial(2 * l - 2 * s, l - am - 2 * s) * binomial(l, s),
                      2**l * factorial(l))
        for p in range(2 * s + 1):
            for q in range(l - am - 2 * s + 1):
                cpq = binomial(l - am - 2 * s, q) * binomial(2 * s, p) * sg ** (l - am - q + p)
                for a in range(nb + 1):
                    ca = binomial(nb, a) * sg**a
                    terms.append(MonomialTerm(2 * s - p + q + nb - a, p + q + a,
                                              cs * cpq * ca, (s, p, q, a)))
    pref = expansion_normalization(orb) * (R / 2) ** (n - 1)
    return OrbitalExpansion(orb, R, pref, tuple(terms), am, orb.delta * R / 2, sg, extra_power)


@dataclass(frozen=True)
class ChargeDistribution:
    """Product of two orbitals sharing one electron's coordinates.

    ``value = prefactor * e^{i (mI+mJ) phi} [(xi^2-1)(1-eta^2)]^{weight/2}
    e^{-alpha xi - beta eta} sum c xi^r eta^g``.
    """

    orbitals: tuple
    R: float
    alpha: float
    beta: float
    m_total: int
    weight: int
    prefactor: float
    terms: dict = field(compare=False)  # (xi_pow, eta_pow) -> Fraction

    def __call__(self, xi, eta, phi=0.0):
        xi = np.asarray(xi, float)
        eta = np.asarray(eta, float)
        poly = sum(float(c) * xi**r * eta**g for (r, g), c in self.terms.items())
        w = ((xi * xi - 1.0) * (1.0 - eta * eta)) ** (self.weight / 2.0)
        return (self.prefactor * np.exp(1j * self.m_total * phi) * w
                * np.exp(-self.alpha * xi - self.beta * eta) * poly)


def distribution(orb_i: SlaterOrbital, orb_j: SlaterOrbital, R: float) -> ChargeDistribution:
    ei = two_center_expansion(orb_i, R)
    ej = two_center_expansion(orb_j, R)
    terms: dict = {}
    for ti in ei.terms:
        for tj in ej.terms:
            key = (ti.xi_pow + tj.xi_pow, ti.eta_pow + tj.eta_pow)
            terms[key] = terms.get(key, Fraction(0)) + ti.coeff * tj.coeff
    terms = {k: v for k, v in terms.items() if v != 0}
    alpha = 0.5 * R * (orb_i.delta + orb_j.delta)
    beta = 0.5 * R * (orb_i.center.sign * orb_i.delta + orb_j.center.sign * orb_j.delta)
    return ChargeDistribution((orb_i, orb_j), R, alpha, beta, orb_i.m + orb_j.m,
                              abs(orb_i.m) + abs(orb_j.m), ei.prefactor * ej.prefactor, terms)
