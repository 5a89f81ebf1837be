"""Quadrature reference values for every analytic object in the package.

Nothing here uses the closed forms: Legendre functions come from three-term
recurrences, ``Q`` from Heine's integral representation, derivatives in
``alpha`` and ``beta`` are inserted as explicit ``xi^r`` / ``eta^g`` weights,
and the full integral is assembled from the orbitals evaluated directly in
spherical form. The code is slow by design and favours transparency.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import mpmath
import numpy as np
from mpmath.calculus.quadrature import GaussLegendre

from .engine import IntegralKind, _check_job, azimuthal_selection
from .orbital import SlaterOrbital, evaluate_real
from .specfun import factorial


class OracleError(ArithmeticError):
    """Raised when a quadrature does not reach the requested tolerance."""


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-12
    abs_tol: float = 1e-15
    max_depth: int = 4  # refinement doublings before giving up
    xi_cutoff: float | None = None  # None: chosen from the smallest alpha
    panel_order: int = 20

    def __post_init__(self):
        if self.rel_tol < 1e-13:
            raise ValueError("rel_tol below 1e-13 is not attainable in double precision")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")

    def cutoff(self, alpha_min: float, extra: float = 0.0) -> float:
        auto = 1.0 + (45.0 + extra) / alpha_min
        if self.xi_cutoff is None:
            return auto
        if self.xi_cutoff < 1.0 + 40.0 / alpha_min:
            raise ValueError(f"xi_cutoff {self.xi_cutoff} too small for alpha={alpha_min}")
        return self.xi_cutoff


# ---------------------------------------------------------------- Legendre


def _reduced_p_mp(mu: int, sigma: int, x):
    # P_mu^sigma / [(-1)^sigma (1-x^2)^(sigma/2)]  by upward recurrence
    prev = mpmath.mpf(0)
    cur = mpmath.mpf(mpmath.fac2(2 * sigma - 1)) if sigma else mpmath.mpf(1)
    for l in range(sigma, mu):
        prev, cur = cur, ((2 * l + 1) * x * cur - (l + sigma) * prev) / (l - sigma + 1)
    return cur


def legendre_cut_recurrence(mu: int, sigma: int, x: np.ndarray) -> np.ndarray:
    """``P_mu^sigma(x)`` on the cut with the Condon-Shortley phase, float recurrence."""
    x = np.asarray(x, float)
    prev = np.zeros_like(x)
    cur = np.full_like(x, float(np.prod(np.arange(1, 2 * sigma, 2))) if sigma else 1.0)
    for l in range(sigma, mu):
        prev, cur = cur, ((2 * l + 1) * x * cur - (l + sigma) * prev) / (l - sigma + 1)
    return (-1) ** sigma * (1.0 - x * x) ** (sigma / 2.0) * cur


def legendre_p_offcut(mu_max: int, sigma: int, z: np.ndarray) -> np.ndarray:
    """Rows ``P_mu^sigma(z)`` for ``mu = 0..mu_max`` (zero below sigma), no phase, ``z > 1``."""
    z = np.asarray(z, float)
    out = np.zeros((mu_max + 1,) + z.shape)
    if sigma > mu_max:
        return out
    out[sigma] = float(np.prod(np.arange(1, 2 * sigma, 2))) * ((z - 1.0) * (z + 1.0)) ** (sigma / 2.0)
    if sigma + 1 <= mu_max:
        out[sigma + 1] = (2 * sigma + 1) * z * out[sigma]
    for l in range(sigma + 1, mu_max):
        out[l + 1] = ((2 * l + 1) * z * out[l] - (l + sigma) * out[l - 1]) / (l - sigma + 1)
    return out


_HEINE_X, _HEINE_W = np.polynomial.legendre.leggauss(40)


def heine_q(mu: int, sigma: int, z: np.ndarray) -> np.ndarray:
    """``Q_mu^sigma(z)`` for ``z > 1`` from

        Q = (-1)^sigma mu!/(mu-sigma)! int_0^inf cosh(sigma t) / (z + sqrt(z^2-1) cosh t)^(mu+1) dt
    """
    if sigma > mu:
        raise ValueError("heine_q needs sigma <= mu")
    z = np.asarray(z, float)
    s = np.sqrt((z - 1.0) * (z + 1.0))
    n = mu + 1
    # integrand is flat up to cosh t ~ z/s, then decays like e^{-(n - sigma) t}
    knee = np.log(2.0 * (z + s) / s)
    T = knee + (40.0 + sigma * knee) / (n - sigma)
    tot = np.zeros_like(z)
    for k in range(24):
        a = T * k / 24
        b = T * (k + 1) / 24
        t = 0.5 * (b - a)[..., None] * _HEINE_X + 0.5 * (a + b)[..., None]
        # scaled by (z+s)^n and summed in logs; cosh(sigma t) alone overflows for large sigma
        log_cosh = sigma * t + np.log1p(np.exp(-2.0 * sigma * t)) - math.log(2.0)
        ratio = (z + s)[..., None] / (z[..., None] + s[..., None] * np.cosh(t))
        f = np.exp(log_cosh + n * np.log(ratio))
        tot += 0.5 * (b - a) * (f @ _HEINE_W)
    return (-1) ** sigma * factorial(mu) / factorial(mu - sigma) * tot / (z + s) ** n


def legendre_q_offcut(mu_max: int, sigma: int, z: np.ndarray) -> np.ndarray:
    """Rows ``Q_mu^sigma(z)``, ``mu = 0..mu_max`` (zero below sigma), by backward recurrence.

    Q is the minimal solution of the three-term recurrence for ``z > 1``, so
    two Heine values at the top are carried down stably.
    """
    z = np.asarray(z, float)
    out = np.zeros((mu_max + 2,) + z.shape)
    top = max(mu_max, sigma)
    out[top + 1] = heine_q(top + 1, sigma, z)
    out[top] = heine_q(top, sigma, z)
    for l in range(top, sigma, -1):
        out[l - 1] = ((2 * l + 1) * z * out[l] - (l - sigma + 1) * out[l + 1]) / (l + sigma)
    return out[: mu_max + 1]


# -------------------------------------------------------------------- eta


@lru_cache(maxsize=None)
def _gl_nodes(degree: int, prec: int) -> tuple:
    # 3 * 2^(degree-1) nodes on [-1, 1]
    return tuple(GaussLegendre(mpmath.mp).calc_nodes(degree, prec))


@lru_cache(maxsize=None)
def _eta_node_data(mu: int, sigma: int, degree: int, dps: int) -> tuple:
    # eta = cos t on [0, pi]; (1-eta^2)^(sigma/2) P d(eta) = (-1)^s sin^(2s+1) t Pred dt
    with mpmath.workdps(dps):
        out = []
        half = mpmath.pi / 2
        for x, w in _gl_nodes(degree, mpmath.mp.prec):
            t = half * (x + 1)
            c, s = mpmath.cos(t), mpmath.sin(t)
            base = (-1) ** sigma * s ** (2 * sigma + 1) * _reduced_p_mp(mu, sigma, c)
            out.append((c, w * half * base))
        return tuple(out)


def _eta_rule(mu: int, sigma: int, g: int, beta, degree: int, dps: int):
    with mpmath.workdps(dps):
        return mpmath.fsum(wb * c**g * mpmath.exp(-beta * c)
                           for c, wb in _eta_node_data(mu, sigma, degree, dps))


def eta_oracle(mu: int, sigma: int, g: int, beta: float, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Gauss-Legendre value of ``int P_mu^sigma (1-eta^2)^(sigma/2) eta^g e^(-beta eta)``.

    Runs in 40-digit arithmetic; the rule is doubled until two successive
    values agree.
    """
    sigma = abs(sigma)
    if not 0 <= sigma <= mu or g < 0:
        raise ValueError("need 0 <= sigma <= mu and g >= 0")
    dps = 40
    with mpmath.workdps(dps):
        b = mpmath.mpf(beta)
        prev = _eta_rule(mu, sigma, g, b, 4, dps)
        for degree in range(5, 5 + spec.max_depth + 2):
            cur = _eta_rule(mu, sigma, g, b, degree, dps)
            if abs(cur - prev) <= max(1e-25 * abs(cur), mpmath.mpf(10) ** (-30)):
                return float(cur)
            prev = cur
    raise OracleError(f"eta quadrature did not settle (mu={mu}, sigma={sigma}, g={g}, beta={beta})")


# --------------------------------------------------------------------- xi


@lru_cache(maxsize=None)
def _panel_rule(order: int):
    # nodes/weights on [-1,1] and S with (S f)_j = int_{-1}^{x_j} f
    x, w = np.polynomial.legendre.leggauss(order)
    V = np.polynomial.legendre.legvander(x, order - 1)
    Vinv = np.linalg.inv(V)
    S = np.zeros((order, order))
    for k in range(order):
        e = np.zeros(order)
        e[k] = 1.0
        S[:, k] = np.polynomial.legendre.legval(x, np.polynomial.legendre.legint(e, lbnd=-1))
    return x, w, S @ Vinv


def _xi_panels(cutoff: float, alpha_max: float, refine: int) -> np.ndarray:
    # geometric grading toward xi = 1 (log singularity of Q), then uniform
    head = 0.5
    edges = [1.0] + [1.0 + head * 0.15**k for k in range(14, 0, -1)] + [1.0 + head]
    width = min(1.0, 2.5 / alpha_max)
    n = max(1, math.ceil((cutoff - edges[-1]) / width))
    edges += list(np.linspace(edges[-1], cutoff, n + 1)[1:])
    edges = np.asarray(edges)
    for _ in range(refine):
        mids = 0.5 * (edges[:-1] + edges[1:])
        edges = np.sort(np.concatenate([edges, mids]))
    return edges


class _XiGrid:
    """Composite GL grid on ``[1, cutoff]`` with per-panel cumulative integration."""

    def __init__(self, cutoff: float, alpha_max: float, refine: int, order: int):
        x, w, S = _panel_rule(order)
        self.edges = _xi_panels(cutoff, alpha_max, refine)
        a, b = self.edges[:-1, None], self.edges[1:, None]
        self.half = 0.5 * (b - a)  # (panels, 1)
        self.nodes = self.half * x + 0.5 * (a + b)  # (panels, order)
        self.weights = self.half * w
        self.S = S

    def cumulative(self, f: np.ndarray) -> np.ndarray:
        """``int_1^{z_j} f`` at every node; ``f`` has shape ``(..., panels, order)``."""
        local = np.einsum("jk,...pk->...pj", self.S, f) * self.half
        totals = np.sum(f * self.weights, axis=-1)
        start = np.cumsum(totals, axis=-1) - totals
        return local + start[..., None]

    def ordered_pair(self, P: np.ndarray, Q: np.ndarray, h1: np.ndarray, h2: np.ndarray):
        """``int int P(xi_<) Q(xi_>) h1(xi1) h2(xi2)`` via ``int Q (h2 G1 + h1 G2)``.

        Leading axes of ``h1`` and ``h2`` broadcast against each other.
        """
        G1 = self.cumulative(P * h1)
        G2 = self.cumulative(P * h2)
        integrand = Q * (h2 * G1 + h1 * G2)
        return np.sum(integrand * self.weights, axis=(-2, -1))


def _xi_once(mu, sigma, r1s, r2s, a1, a2, cutoff, refine, order) -> np.ndarray:
    # table over (r1, r2); every entry shares one grid
    grid = _XiGrid(cutoff, max(a1, a2), refine, order)
    z = grid.nodes
    P = legendre_p_offcut(mu, sigma, z)[mu]
    Q = legendre_q_offcut(mu, sigma, z)[mu]
    w = ((z - 1.0) * (z + 1.0)) ** (sigma / 2.0)
    h1 = w * z ** np.asarray(r1s)[:, None, None, None] * np.exp(-a1 * (z - 1.0))
    h2 = w * z ** np.asarray(r2s)[None, :, None, None] * np.exp(-a2 * (z - 1.0))
    return grid.ordered_pair(P, Q, h1, h2) * math.exp(-(a1 + a2))


def _xi_refined(mu, sigma, r1s, r2s, alpha1, alpha2, spec) -> np.ndarray:
    sigma = abs(sigma)
    if not 0 <= sigma <= mu:
        raise ValueError("need 0 <= sigma <= mu")
    if not (alpha1 > 0 and alpha2 > 0):
        raise ValueError("alphas must be positive")
    cutoff = spec.cutoff(min(alpha1, alpha2), 3.0 * (max(r1s) + max(r2s) + 2 * mu + 2))
    prev = _xi_once(mu, sigma, r1s, r2s, alpha1, alpha2, cutoff, 0, spec.panel_order)
    for refine in range(1, spec.max_depth + 1):
        cur = _xi_once(mu, sigma, r1s, r2s, alpha1, alpha2, cutoff, refine, spec.panel_order)
        if np.all(np.abs(cur - prev) <= spec.rel_tol * np.abs(cur) + spec.abs_tol):
            return cur
        prev = cur
    raise OracleError(f"xi quadrature did not settle (mu={mu}, sigma={sigma}, alphas={alpha1}, {alpha2})")


def xi_oracle(mu: int, sigma: int, r1: int, r2: int, alpha1: float, alpha2: float,
              spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Panel quadrature of the weighted ``P(xi_<) Q(xi_>)`` double integral.

    The ``alpha`` derivatives enter as ``xi^r`` weights. The grid is refined
    until two successive values agree to ``spec.rel_tol``.
    """
    return float(_xi_refined(mu, sigma, [r1], [r2], alpha1, alpha2, spec)[0, 0])


def xi_oracle_table(mu: int, sigma: int, r_max: int, alpha1: float, alpha2: float,
                    spec: QuadratureSpec = QuadratureSpec()) -> np.ndarray:
    """``xi_oracle`` for every ``0 <= r1, r2 <= r_max`` at once, indexed ``[r1, r2]``."""
    r = list(range(r_max + 1))
    return _xi_refined(mu, sigma, r, r, alpha1, alpha2, spec)


# --------------------------------------------------------------- integral


def _neumann_constant(mu: int, sigma: int, R: float) -> float:
    ratio = factorial(mu - sigma) / factorial(mu + sigma)
    return ((4.0 / R) * (2 * mu + 1) / 2 * (-1) ** sigma * ratio**2
            * (2 * math.pi) ** 2 * (R / 2) ** 6)


def _integral_once(orbs, R, sigma, mu_max, cutoff, refine, order, eta_order):
    o1, o2, o3, o4 = orbs
    grid = _XiGrid(cutoff, 0.5 * R * max(o.delta for o in orbs), refine, order)
    z = grid.nodes
    te, we = np.polynomial.legendre.leggauss(eta_order)
    xi = z[..., None]
    eta = te
    vol = xi * xi - eta * eta
    rho1 = vol * evaluate_real(o1, xi, eta, R) * evaluate_real(o3, xi, eta, R)
    rho2 = vol * evaluate_real(o2, xi, eta, R) * evaluate_real(o4, xi, eta, R)
    P = legendre_p_offcut(mu_max, sigma, z)
    Q = legendre_q_offcut(mu_max, sigma, z)
    terms = []
    for mu in range(sigma, mu_max + 1):
        pe = we * legendre_cut_recurrence(mu, sigma, eta)
        h1 = rho1 @ pe
        h2 = rho2 @ pe
        terms.append(_neumann_constant(mu, sigma, R) * float(grid.ordered_pair(P[mu], Q[mu], h1, h2)))
    return terms


@dataclass
class OracleResult:
    value: float
    mu_terms: list
    error_estimate: float


def integral_oracle(orbs: Sequence[SlaterOrbital], kind: IntegralKind | str, R: float,
                    mu_max: int, spec: QuadratureSpec = QuadratureSpec(rel_tol=1e-10)) -> OracleResult:
    """Sum of Neumann terms ``mu <= mu_max`` by quadrature over the exact orbital products.

    The eta integrand is a polynomial times an exponential once the
    azimuthal weights are combined, so a fixed high-order rule is used;
    the xi grid is refined until two passes agree.
    """
    kind = IntegralKind(kind)
    _check_job(orbs, kind, R)
    o1, o2, o3, o4 = orbs
    sigma = azimuthal_selection(o1.m, o2.m, o3.m, o4.m)
    if sigma is None:
        return OracleResult(0.0, [], 0.0)
    alpha_min = 0.5 * R * min(o1.delta + o3.delta, o2.delta + o4.delta)
    degree = sum(o.n for o in orbs) + 2 * mu_max
    cutoff = spec.cutoff(alpha_min, 3.0 * degree)
    eta_order = 48 + mu_max + sum(o.n for o in orbs)
    prev = _integral_once(orbs, R, sigma, mu_max, cutoff, 0, spec.panel_order, eta_order)
    for refine in range(1, spec.max_depth + 1):
        cur = _integral_once(orbs, R, sigma, mu_max, cutoff, refine, spec.panel_order, eta_order + 16)
        a, b = math.fsum(prev), math.fsum(cur)
        if abs(a - b) <= spec.rel_tol * abs(b) + spec.abs_tol:
            return OracleResult(b, cur, abs(a - b))
        prev = cur
    raise OracleError(f"integral quadrature did not settle: {a!r} vs {b!r}")
