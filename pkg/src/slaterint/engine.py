"""Two-electron repulsion integrals over Slater orbitals on two centers.

The integral is

    I = int int dtau1 dtau2  Phi_1(1) Phi_3(1) (1/r12) Phi_2(2) Phi_4(2)

(orbitals used as given, no complex conjugation). Particle 1 carries
orbitals 1 and 3, particle 2 orbitals 2 and 4. ``1/r12`` is replaced by
its Neumann expansion in prolate spheroidal coordinates and every term is
integrated analytically: the azimuthal integrals select one ``sigma``, the
eta integrals go through :mod:`slaterint.eta`, the xi double integral
through :mod:`slaterint.xi`.

The integrand is assembled from the orbital expansions rather than
transcribed from a single printed master formula; the index structure
(bounds, derivative orders, prefactor) is exposed through
:func:`enumerate_terms` and :func:`prefactor` so it can be checked.
"""
from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence


from .eta import eta_integral
from .orbital import Center, SlaterOrbital, two_center_expansion
from .specfun import binomial, factorial
from .xi import xi_double_integral, xi_general

DEFAULT_TOL = 1e-10
DEFAULT_MU_MAX = 40


class IntegralKind(enum.Enum):
    """Center pattern of orbitals (1, 2, 3, 4); particle 1 = (1, 3), particle 2 = (2, 4)."""

    EXCHANGE = "exchange"  # (1a 3b | 2a 4b)
    HYBRID = "hybrid"  # (1a 3a | 2a 4b)
    COULOMB = "coulomb"  # (1a 3a | 2b 4b)

    @property
    def centers(self) -> tuple:
        A, B = Center.A, Center.B
        return {
            IntegralKind.EXCHANGE: (A, A, B, B),
            IntegralKind.HYBRID: (A, A, A, B),
            IntegralKind.COULOMB: (A, B, A, B),
        }[self]


class ConvergenceError(ArithmeticError):
    def __init__(self, message: str, partial: "IntegralResult"):
        super().__init__(message)
        self.partial = partial


class ConsistencyError(ArithmeticError):
    pass


@dataclass
class IntegralResult:
    value: float
    mu_used: int
    tail_estimate: float
    term_count: int
    elapsed: float
    mu_terms: list = field(default_factory=list)


@dataclass(frozen=True)
class NeumannTermIndex:
    """One multi-index of the expansion, independent of ``mu``.

    ``s``, ``p``, ``q`` are per orbital (slots 1..4). ``a`` and ``b`` are the
    binomial indices of ``(xi +/- eta)^(n-l-1+e)`` on the particle's first
    (orbital 1 or 2) and second (orbital 3 or 4) orbital; ``e`` is 1 when
    that orbital absorbs a factor of the volume element ``xi^2 - eta^2``.
    ``v`` indexes the leftover factor for same-center pairs (always 0 for an
    exchange pair). ``c`` and ``d`` split the surplus angular weights.
    """

    sigma: int
    s: tuple
    p: tuple
    q: tuple
    a: tuple  # (a1, a2)
    b: tuple  # (b1, b2)
    c: tuple
    d: tuple
    v: tuple
    g: tuple  # (g1, g2)
    r: tuple  # (r1, r2)
    coefficient: Fraction


def azimuthal_selection(m1: int, m2: int, m3: int, m4: int) -> int | None:
    """``|sigma|`` selected by the phi integrals, or ``None`` if the integral vanishes."""
    if m1 + m2 + m3 + m4 != 0:
        return None
    return abs(m2 + m4)


def _check_job(orbs: Sequence[SlaterOrbital], kind: IntegralKind, R: float) -> None:
    kind = IntegralKind(kind)
    if len(orbs) != 4:
        raise ValueError("exactly four orbitals are required")
    if not R > 0:
        raise ValueError("R must be positive")
    for k, (o, c) in enumerate(zip(orbs, kind.centers), start=1):
        o.check_supported()
        if o.center is not c:
            raise ValueError(f"{kind.value} integral needs orbital {k} on center {c.value}, "
                             f"got {o.center.value}")


@dataclass(frozen=True)
class _ParticleTerm:
    # one product term of a charge distribution, before the Neumann expansion
    xi_pow: int
    eta_pow: int
    coeff: Fraction
    first: tuple  # (s, p, q, a)
    second: tuple
    c: int
    d: int
    v: int


def _particle_terms(oi: SlaterOrbital, oj: SlaterOrbital, sigma: int, R: float):
    """Expansion of ``(xi^2 - eta^2) Phi_i Phi_j`` for one electron.

    Returns the list of terms and the product of orbital prefactors. The
    weight ``[(xi^2-1)(1-eta^2)]^{sigma/2}`` and the exponential are left out.
    """
    if oi.center is not oj.center:
        ext_i = ext_j = 1
        leftover = 0
    else:
        ext_i, ext_j = 1, 0
        leftover = -oi.center.sign  # remaining (xi - eta) on A, (xi + eta) on B
    ei = two_center_expansion(oi, R, ext_i)
    ej = two_center_expansion(oj, R, ext_j)
    e = (abs(oi.m) + abs(oj.m) - sigma) // 2
    # (xi pow, eta pow, v, coeff) of the unabsorbed volume factor
    vol = [(0, 0, 0, 1)] if leftover == 0 else [(1, 0, 0, 1), (0, 1, 1, leftover)]
    out = []
    for ti in ei.terms:
        for tj in ej.terms:
            base = ti.coeff * tj.coeff
            for xv, ev, v, cv in vol:
                for c in range(e + 1):
                    for d in range(e + 1):
                        coeff = base * cv * binomial(e, c) * (-1) ** c * binomial(e, d) * (-1) ** (e - d)
                        out.append(_ParticleTerm(ti.xi_pow + tj.xi_pow + xv + 2 * d,
                                                 ti.eta_pow + tj.eta_pow + ev + 2 * c,
                                                 coeff, ti.indices, tj.indices, c, d, v))
    return out, ei.prefactor * ej.prefactor


def _particle_polynomial(terms) -> dict:
    poly: dict = {}
    for t in terms:
        key = (t.xi_pow, t.eta_pow)
        poly[key] = poly.get(key, Fraction(0)) + t.coeff
    return {k: c for k, c in poly.items() if c != 0}


def enumerate_terms(orbs: Sequence[SlaterOrbital], kind: IntegralKind, R: float) -> list:
    """All multi-indices of the expansion (the part independent of ``mu``)."""
    _check_job(orbs, kind, R)
    o1, o2, o3, o4 = orbs
    sigma = azimuthal_selection(o1.m, o2.m, o3.m, o4.m)
    if sigma is None:
        return []
    t1, _ = _particle_terms(o1, o3, sigma, R)
    t2, _ = _particle_terms(o2, o4, sigma, R)
    out = []
    for x in t1:
        for y in t2:
            out.append(NeumannTermIndex(
                sigma=sigma,
                s=(x.first[0], y.first[0], x.second[0], y.second[0]),
                p=(x.first[1], y.first[1], x.second[1], y.second[1]),
                q=(x.first[2], y.first[2], x.second[2], y.second[2]),
                a=(x.first[3], y.first[3]),
                b=(x.second[3], y.second[3]),
                c=(x.c, y.c), d=(x.d, y.d), v=(x.v, y.v),
                g=(x.eta_pow, y.eta_pow), r=(x.xi_pow, y.xi_pow),
                coefficient=x.coeff * y.coeff))
    return out


def _exponents(orbs: Sequence[SlaterOrbital], R: float):
    o1, o2, o3, o4 = orbs
    a1 = 0.5 * R * (o1.delta + o3.delta)
    a2 = 0.5 * R * (o2.delta + o4.delta)
    b1 = 0.5 * R * (o1.center.sign * o1.delta + o3.center.sign * o3.delta)
    b2 = 0.5 * R * (o2.center.sign * o2.delta + o4.center.sign * o4.delta)
    return (a1, a2), (b1, b2)


def prefactor_forms(orbs: Sequence[SlaterOrbital], R: float) -> tuple:
    """``(R^{sum n + 1} prod delta^{n + 1/2}, (1/R) prod (alpha +/- beta)^{n + 1/2})``.

    For an exchange-type pair the second form uses ``alpha + beta = R delta_A``
    and ``alpha - beta = R delta_B``; for a same-center pair the individual
    ``R delta`` values are taken from the orbitals.
    """
    direct = R ** (sum(o.n for o in orbs) + 1) * math.prod(o.delta ** (o.n + 0.5) for o in orbs)
    (a1, a2), (b1, b2) = _exponents(orbs, R)
    o1, o2, o3, o4 = orbs
    factors = []
    for (oi, oj), a, b in (((o1, o3), a1, b1), ((o2, o4), a2, b2)):
        if oi.center is not oj.center:
            ra, rb = a + b, a - b
            ri, rj = (ra, rb) if oi.center is Center.A else (rb, ra)
        else:
            ri, rj = R * oi.delta, R * oj.delta
        factors += [(ri, oi.n), (rj, oj.n)]
    return direct, math.prod(x ** (n + 0.5) for x, n in factors) / R


def prefactor(orbs: Sequence[SlaterOrbital], R: float) -> float:
    """``W``, after checking both of its forms agree to 1e-12."""
    direct, identity = prefactor_forms(orbs, R)
    if not math.isclose(direct, identity, rel_tol=1e-12):
        raise ConsistencyError(f"prefactor forms disagree: {direct!r} vs {identity!r}")
    return direct


def global_constant(orbs: Sequence[SlaterOrbital], R: float) -> float:
    """Orbital prefactors times ``(R/2)^6`` (volume), ``4/R`` (Neumann) and ``(2 pi)^2`` (azimuth).

    Equals ``prefactor(orbs, R)`` times the angular square roots; the
    Neumann ``(2 mu + 1)/2`` sits in :func:`neumann_coefficient`.
    """
    pref = math.prod(two_center_expansion(o, R).prefactor for o in orbs)
    return pref * (R / 2) ** 6 * (4.0 / R) * (2 * math.pi) ** 2


def angular_product(orbs: Sequence[SlaterOrbital]) -> float:
    out = 1.0
    for o in orbs:
        am = abs(o.m)
        out *= math.sqrt((2 * o.l + 1) * factorial(o.l - am) * factorial(o.l + am) / factorial(2 * o.n))
    return out


def neumann_coefficient(mu: int, sigma: int) -> float:
    """``(-1)^sigma (2 mu + 1)/2 [(mu-sigma)!/(mu+sigma)!]^2``."""
    ratio = Fraction(factorial(mu - sigma), factorial(mu + sigma)) ** 2
    return float((-1) ** sigma * Fraction(2 * mu + 1, 2) * ratio)


def mu_term(terms: Sequence[NeumannTermIndex], mu: int, sigma: int,
            alphas: tuple, betas: tuple, constant: float = 1.0) -> float:
    """One Neumann term as a literal sum over index tuples.

    ``constant * c_mu * sum coeff E(g1, beta1) E(g2, beta2) X(r1, r2)``; with
    ``constant = global_constant(...)`` this is the ``mu`` term of the series.
    """
    if mu < sigma:
        raise ValueError("mu must be >= |sigma|")
    xi_cache: dict = {}
    acc = []
    for t in terms:
        if t.r not in xi_cache:
            xi_cache[t.r] = xi_double_integral(mu, sigma, t.r[0], t.r[1], *alphas)
        acc.append(float(t.coefficient) * eta_integral(mu, sigma, t.g[0], betas[0])
                   * eta_integral(mu, sigma, t.g[1], betas[1]) * xi_cache[t.r])
    return constant * neumann_coefficient(mu, sigma) * math.fsum(acc)


def _contract(poly: dict, mu: int, sigma: int, beta: float) -> list:
    # sum_g c_{rg} E(mu, sigma, g, beta) -> dense xi polynomial
    deg = max(r for r, _ in poly)
    parts = [[] for _ in range(deg + 1)]
    for (r, g), c in poly.items():
        parts[r].append(float(c) * eta_integral(mu, sigma, g, beta))
    return [math.fsum(x) for x in parts]


class _Job:
    """Precomputed, mu-independent data for one integral."""

    def __init__(self, orbs: Sequence[SlaterOrbital], kind: IntegralKind, R: float):
        _check_job(orbs, kind, R)
        self.orbs = tuple(orbs)
        self.R = R
        o1, o2, o3, o4 = orbs
        self.sigma = azimuthal_selection(o1.m, o2.m, o3.m, o4.m)
        self.alphas, self.betas = _exponents(orbs, R)
        if self.sigma is None:
            return
        t1, pref1 = _particle_terms(o1, o3, self.sigma, R)
        t2, pref2 = _particle_terms(o2, o4, self.sigma, R)
        self.term_count = len(t1) * len(t2)
        self.poly1 = _particle_polynomial(t1)
        self.poly2 = _particle_polynomial(t2)
        self.constant = pref1 * pref2 * (R / 2) ** 6 * (4.0 / R) * (2 * math.pi) ** 2

    def term(self, mu: int) -> float:
        s1 = _contract(self.poly1, mu, self.sigma, self.betas[0])
        s2 = _contract(self.poly2, mu, self.sigma, self.betas[1])
        x = xi_general(mu, self.sigma, s1, s2, *self.alphas)
        return self.constant * neumann_coefficient(mu, self.sigma) * float(x)


def integral(orbs: Sequence[SlaterOrbital], kind: IntegralKind | str, R: float,
             tol: float = DEFAULT_TOL, mu_max: int = DEFAULT_MU_MAX) -> IntegralResult:
    """Sum the Neumann series until three consecutive terms fall below ``tol * |sum|``."""
    kind = IntegralKind(kind)
    start = time.perf_counter()
    job = _Job(orbs, kind, R)
    if job.sigma is None:
        return IntegralResult(0.0, 0, 0.0, 0, time.perf_counter() - start)
    terms: list = []
    partial = 0.0
    small = 0
    for mu in range(job.sigma, mu_max + 1):
        t = job.term(mu)
        terms.append(t)
        partial = math.fsum(terms)
        small = small + 1 if abs(t) <= tol * abs(partial) else 0
        if small == 3:
            tail = max(abs(x) for x in terms[-3:])
            return IntegralResult(partial, mu, tail, job.term_count,
                                  time.perf_counter() - start, terms)
    res = IntegralResult(partial, mu_max, max(abs(x) for x in terms[-3:]), job.term_count,
                         time.perf_counter() - start, terms)
    raise ConvergenceError(f"Neumann series not converged at mu_max={mu_max}", res)
