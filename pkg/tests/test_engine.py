import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from slaterint import engine
from slaterint.engine import (
    ConsistencyError,
    ConvergenceError,
    IntegralKind,
    angular_product,
    azimuthal_selection,
    enumerate_terms,
    global_constant,
    integral,
    mu_term,
    neumann_coefficient,
    prefactor,
    prefactor_forms,
)
from slaterint.orbital import SlaterOrbital
from slaterint.specfun import binomial


def S(n, l, m, c, d=1.0):
    return SlaterOrbital(n, l, m, d, c)


def four_1s_exchange(delta=1.0):
    return [S(1, 0, 0, "A", delta), S(1, 0, 0, "A", delta), S(1, 0, 0, "B", delta), S(1, 0, 0, "B", delta)]


def classic_coulomb(R, delta=1.0):
    rho = delta * R
    return (1 - (1 + 11 * rho / 8 + 3 * rho**2 / 4 + rho**3 / 6) * math.exp(-2 * rho)) / R


@pytest.mark.parametrize("ms,want", [((0, 0, 0, 0), 0), ((1, 0, -1, 0), 0), ((1, 0, 0, 0), None),
                                     ((1, -1, 0, 0), 1), ((2, -1, 0, -1), 2)])
def test_azimuthal_selection(ms, want):
    assert azimuthal_selection(*ms) == want


def test_kind_centers():
    assert [c.value for c in IntegralKind.EXCHANGE.centers] == ["A", "A", "B", "B"]
    assert [c.value for c in IntegralKind("hybrid").centers] == ["A", "A", "A", "B"]
    assert [c.value for c in IntegralKind.COULOMB.centers] == ["A", "B", "A", "B"]


def test_center_mismatch_rejected():
    with pytest.raises(ValueError):
        integral([S(1, 0, 0, "A")] * 4, "exchange", 2.0)
    with pytest.raises(ValueError):
        integral(four_1s_exchange()[:3], "exchange", 2.0)
    with pytest.raises(ValueError):
        integral(four_1s_exchange(), "exchange", 0.0)
    with pytest.raises(ValueError):
        integral([S(6, 0, 0, "A"), S(1, 0, 0, "A"), S(1, 0, 0, "B"), S(1, 0, 0, "B")], "exchange", 2.0)


def _bound_product(orbs):
    """Product of the printed index ranges for an exchange integral."""
    total = 1
    for o in orbs:
        am = abs(o.m)
        spq = sum((2 * s + 1) * (o.l - am - 2 * s + 1) for s in range((o.l - am) // 2 + 1))
        total *= spq * (o.n - o.l + 1)  # a or b runs over 0..n-l
    sigma = abs(orbs[1].m + orbs[3].m)
    for i, j in ((0, 2), (1, 3)):
        e = (abs(orbs[i].m) + abs(orbs[j].m) - sigma) // 2
        total *= (e + 1) ** 2  # c and d
    return total


def test_term_counts_exchange():
    assert len(enumerate_terms(four_1s_exchange(), "exchange", 2.0)) == 16
    p0 = [S(2, 1, 0, "A"), S(2, 1, 0, "A"), S(2, 1, 0, "B"), S(2, 1, 0, "B")]
    assert len(enumerate_terms(p0, "exchange", 2.0)) == 256 == _bound_product(p0)
    mixed = [S(3, 2, 1, "A"), S(2, 1, 0, "A"), S(3, 1, -1, "B"), S(4, 3, 0, "B")]
    assert len(enumerate_terms(mixed, "exchange", 1.4)) == _bound_product(mixed)


def test_term_indices_exchange():
    orbs = [S(3, 2, 1, "A"), S(2, 1, 1, "A"), S(3, 1, -1, "B"), S(2, 1, -1, "B")]
    terms = enumerate_terms(orbs, "exchange", 1.4)
    n = [o.n for o in orbs]
    l = [o.l for o in orbs]
    assert {t.sigma for t in terms} == {0}
    for t in terms:
        s, p, q = t.s, t.p, t.q
        assert t.g[0] == p[0] + p[2] + q[0] + q[2] + t.a[0] + t.b[0] + 2 * t.c[0]
        assert t.g[1] == p[1] + p[3] + q[1] + q[3] + t.a[1] + t.b[1] + 2 * t.c[1]
        assert t.r[0] == (2 * (s[0] + s[2] + t.d[0]) + q[0] + q[2] - p[0] - p[2]
                          + n[0] - l[0] - t.a[0] + n[2] - l[2] - t.b[0])
        assert t.r[1] == (2 * (s[1] + s[3] + t.d[1]) + q[1] + q[3] - p[1] - p[3]
                          + n[1] - l[1] - t.a[1] + n[3] - l[3] - t.b[1])
        assert t.v == (0, 0)
        for k, o in enumerate(orbs):
            assert 0 <= s[k] <= (o.l - abs(o.m)) // 2 and 0 <= p[k] <= 2 * s[k]
            assert 0 <= q[k] <= o.l - abs(o.m) - 2 * s[k]


def test_same_center_pair_uses_v_index():
    orbs = [S(2, 0, 0, "A"), S(1, 0, 0, "A"), S(1, 0, 0, "A"), S(1, 0, 0, "B")]
    terms = enumerate_terms(orbs, "hybrid", 2.0)
    assert {t.v[0] for t in terms} == {0, 1}
    assert {t.v[1] for t in terms} == {0}


def test_term_coefficients_two_s():
    # 2s on slot 1: its binomial (xi + eta)^2 contributes C(2, a)
    orbs = [S(2, 0, 0, "A"), S(1, 0, 0, "A"), S(1, 0, 0, "B"), S(1, 0, 0, "B")]
    terms = enumerate_terms(orbs, "exchange", 2.0)
    for t in terms:
        want = binomial(2, t.a[0]) * (-1) ** t.b[0] * (-1) ** t.b[1]
        assert t.coefficient == want


def test_selection_zero_is_structural(monkeypatch):
    def boom(*a, **k):
        raise AssertionError("no integrals should be evaluated")

    monkeypatch.setattr(engine, "xi_general", boom)
    monkeypatch.setattr(engine, "eta_integral", boom)
    orbs = [S(2, 1, 1, "A"), S(1, 0, 0, "A"), S(1, 0, 0, "B"), S(1, 0, 0, "B")]
    r = integral(orbs, "exchange", 2.0)
    assert r.value == 0.0 and r.mu_used == 0 and r.term_count == 0 and r.mu_terms == []
    assert enumerate_terms(orbs, "exchange", 2.0) == []


def test_prefactor_examples():
    assert prefactor(four_1s_exchange(), 2.0) == pytest.approx(32.0, rel=1e-15)
    hyb = [S(2, 1, 0, "A", 1.3), S(1, 0, 0, "A", 0.7), S(3, 0, 0, "A", 0.9), S(2, 1, 0, "B", 1.1)]
    w = prefactor(hyb, 1.4)
    assert w == pytest.approx(1.4 ** 9 * 1.3**2.5 * 0.7**1.5 * 0.9**3.5 * 1.1**2.5, rel=1e-14)


@given(st.lists(st.tuples(st.integers(1, 5), st.floats(0.3, 3.0)), min_size=4, max_size=4),
       st.floats(0.5, 5.0), st.sampled_from(list(IntegralKind)))
def test_prefactor_forms_agree(draw, R, kind):
    orbs = [SlaterOrbital(n, 0, 0, d, c) for (n, d), c in zip(draw, kind.centers)]
    direct, identity = prefactor_forms(orbs, R)
    assert identity == pytest.approx(direct, rel=1e-12)
    assert prefactor(orbs, R) == direct


def test_prefactor_mismatch_raises(monkeypatch):
    monkeypatch.setattr(engine.math, "isclose", lambda *a, **k: False)
    with pytest.raises(ConsistencyError):
        prefactor(four_1s_exchange(), 2.0)


def test_global_constant_factorisation():
    orbs = [S(3, 2, 1, "A", 1.2), S(2, 1, 1, "A"), S(3, 1, -1, "B", 0.8), S(2, 1, -1, "B")]
    assert global_constant(orbs, 1.7) == pytest.approx(prefactor(orbs, 1.7) * angular_product(orbs), rel=1e-13)


def test_neumann_coefficient():
    assert neumann_coefficient(0, 0) == 0.5
    assert neumann_coefficient(2, 1) == pytest.approx(-2.5 / 36)


def _job_data(orbs, kind, R):
    job = engine._Job(orbs, IntegralKind(kind), R)
    return job, enumerate_terms(orbs, kind, R), global_constant(orbs, R)


@pytest.mark.parametrize("kind,orbs,R", [
    ("exchange", [S(2, 1, 1, "A", 1.2), S(2, 0, 0, "A"), S(2, 1, -1, "B", 0.9), S(2, 1, 0, "B")], 1.4),
    ("hybrid", [S(2, 1, 1, "A", 1.2), S(2, 0, 0, "A"), S(2, 1, 0, "A"), S(2, 1, -1, "B", 0.9)], 1.4),
    ("coulomb", [S(2, 0, 0, "A"), S(1, 0, 0, "B", 0.9), S(2, 1, 0, "A", 1.2), S(2, 1, 0, "B")], 2.0),
])
def test_literal_tuple_sum_matches_contracted(kind, orbs, R):
    job, terms, C = _job_data(orbs, kind, R)
    for mu in range(job.sigma, job.sigma + 6):
        assert mu_term(terms, mu, job.sigma, job.alphas, job.betas, C) == pytest.approx(job.term(mu), rel=1e-10, abs=1e-15)


def test_mu_term_four_1s_mu0():
    from slaterint.eta import eta_integral
    from slaterint.xi import xi_double_integral

    orbs = [S(1, 0, 0, "A"), S(1, 0, 0, "B"), S(1, 0, 0, "A"), S(1, 0, 0, "B")]
    job, terms, C = _job_data(orbs, "coulomb", 2.0)
    assert len(terms) == 16  # per particle: folded binomial (a) times leftover factor (v)
    r = integral(orbs, "coulomb", 2.0)
    assert r.mu_terms[0] == pytest.approx(mu_term(terms, 0, 0, job.alphas, job.betas, C), rel=1e-13)
    single = sum(float(t.coefficient) * eta_integral(0, 0, t.g[0], 2.0) * eta_integral(0, 0, t.g[1], -2.0)
                 * xi_double_integral(0, 0, t.r[0], t.r[1], 2.0, 2.0) for t in terms)
    assert r.mu_terms[0] == pytest.approx(C * 0.5 * single, rel=1e-13)
    with pytest.raises(ValueError):
        mu_term(terms, 0, 1, job.alphas, job.betas)


@pytest.mark.parametrize("R", [1.0, 1.4, 2.0, 3.5])
def test_classic_coulomb(R):
    orbs = [S(1, 0, 0, "A"), S(1, 0, 0, "B"), S(1, 0, 0, "A"), S(1, 0, 0, "B")]
    assert integral(orbs, "coulomb", R).value == pytest.approx(classic_coulomb(R), rel=1e-10)


def test_exchange_1s_pinned():
    # pinned from the quadrature oracle (independent of every closed form)
    r = integral(four_1s_exchange(), "exchange", 2.0)
    assert r.value == pytest.approx(0.18415645713222573, rel=1e-12)
    assert r.mu_used <= 25
    assert r.term_count == 16
    assert r.tail_estimate <= 1e-10 * abs(r.value)


SUITE = [
    ("exchange", [S(2, 1, 1, "A"), S(2, 1, -1, "A"), S(2, 1, 0, "B"), S(2, 1, 0, "B")], 1.4),
    ("hybrid", [S(2, 0, 0, "A", 1.2), S(1, 0, 0, "A", 0.9), S(2, 1, 0, "A"), S(2, 1, 0, "B")], 2.0),
    ("coulomb", [S(2, 1, 1, "A", 1.2), S(2, 1, -1, "B", 0.9), S(2, 1, -1, "A"), S(2, 1, 1, "B")], 2.0),
    ("exchange", [S(1, 0, 0, "A", 1.2), S(2, 0, 0, "A"), S(2, 1, 0, "B", 0.9), S(1, 0, 0, "B")], 2.0),
    ("coulomb", [S(2, 0, 0, "A"), S(2, 1, 0, "B", 0.9), S(1, 0, 0, "A", 1.2), S(2, 1, 0, "B")], 1.4),
]


@pytest.mark.parametrize("kind,orbs,R", SUITE)
def test_scaling_law(kind, orbs, R):
    s = 2.0
    scaled = [SlaterOrbital(o.n, o.l, o.m, o.delta / s, o.center) for o in orbs]
    a = integral(orbs, kind, R).value
    b = integral(scaled, kind, s * R).value
    assert a == pytest.approx(s * b, rel=1e-10)


@pytest.mark.parametrize("kind,orbs,R", SUITE)
def test_cauchy_tail(kind, orbs, R):
    tol = 1e-10
    r = integral(orbs, kind, R, tol=tol)
    partials = [math.fsum(r.mu_terms[: k + 1]) for k in range(len(r.mu_terms))]
    tail = partials[-3:]
    assert max(tail) - min(tail) <= tol * abs(r.value) * 3


def test_particle_swap_symmetry():
    rng = random.Random(7)
    for kind in ("exchange", "coulomb"):
        for _ in range(4):
            centers = IntegralKind(kind).centers
            orbs = []
            for c in centers:
                n = rng.randint(1, 3)
                l = rng.randint(0, n - 1)
                orbs.append(SlaterOrbital(n, l, 0, rng.uniform(0.8, 1.3), c))
            o1, o2, o3, o4 = orbs
            if kind == "coulomb":
                # particle 1 on A, particle 2 on B: swapping also mirrors the molecule
                swapped = [SlaterOrbital(o.n, o.l, 0, o.delta, "B" if o.center.value == "A" else "A")
                           for o in (o2, o1, o4, o3)]
                mirror = (-1) ** sum(o.l for o in orbs)
            else:
                swapped, mirror = [o2, o1, o4, o3], 1
            a = integral(orbs, kind, 1.6).value
            b = integral(swapped, kind, 1.6).value
            assert a == pytest.approx(mirror * b, rel=1e-10, abs=1e-14)


def test_convergence_error_carries_partial():
    orbs = [S(1, 0, 0, "A"), S(1, 0, 0, "B"), S(1, 0, 0, "A"), S(1, 0, 0, "B")]
    with pytest.raises(ConvergenceError) as info:
        integral(orbs, "coulomb", 1.4, mu_max=3)
    part = info.value.partial
    assert part.mu_used == 3 and len(part.mu_terms) == 4


def test_deterministic_repeat():
    orbs = SUITE[2][1]
    a = integral(orbs, "coulomb", 2.0)
    b = integral(orbs, "coulomb", 2.0)
    assert a.value == b.value and a.mu_terms == b.mu_terms
