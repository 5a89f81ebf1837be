import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from slaterint.orbital import (
    Center,
    ProlatePoint,
    SlaterOrbital,
    center_cosines,
    center_distances,
    distribution,
    evaluate,
    evaluate_real,
    expansion_normalization,
    normalization,
    prolate_coordinates,
    two_center_expansion,
)

SUPPORTED = [(n, l, m) for n in range(1, 6) for l in range(min(n, 5)) for m in range(-l, l + 1)]


def test_orbital_validation():
    for bad in [(0, 0, 0, 1.0), (2, 2, 0, 1.0), (2, 1, 2, 1.0), (1, 0, 0, 0.0), (1, 0, 0, -1.0)]:
        with pytest.raises(ValueError):
            SlaterOrbital(*bad)
    assert SlaterOrbital(1, 0, 0, 1.0, "b").center is Center.B
    with pytest.raises(ValueError):
        SlaterOrbital(6, 0, 0, 1.0).check_supported()


@pytest.mark.parametrize("ra,rb,R,xi,eta", [
    (1.0, 1.0, 2.0, 1.0, 0.0),
    (0.0, 2.0, 2.0, 1.0, -1.0),
    (2.0, 1.0, 2.0, 1.5, 0.5),
])
def test_prolate_coordinates(ra, rb, R, xi, eta):
    p = prolate_coordinates(ra, rb, R)
    assert (p.xi, p.eta) == pytest.approx((xi, eta), abs=1e-15)


def test_prolate_triangle_violation():
    with pytest.raises(ValueError):
        prolate_coordinates(0.2, 0.3, 2.0)
    with pytest.raises(ValueError):
        prolate_coordinates(3.0, 0.5, 2.0)
    with pytest.raises(ValueError):
        ProlatePoint(0.9, 0.0)


@given(st.floats(1.0, 30.0), st.floats(-1.0, 1.0), st.floats(0.1, 8.0))
def test_prolate_round_trip(xi, eta, R):
    ra, rb = center_distances(xi, eta, R)
    p = prolate_coordinates(ra, rb, R)
    assert p.xi == pytest.approx(xi, abs=1e-14 * xi)
    assert p.eta == pytest.approx(eta, abs=1e-13 * xi)


def test_cosines_bounded_on_grid():
    xi, eta = np.meshgrid(np.linspace(1, 6, 101), np.linspace(-1, 1, 101))
    ca, cb = center_cosines(xi, eta)
    raw_a = np.where(xi + eta > 0, (xi * eta + 1) / np.where(xi + eta > 0, xi + eta, 1), 1)
    assert np.all(np.abs(raw_a) <= 1 + 1e-12)
    assert np.all(np.abs(ca) <= 1) and np.all(np.abs(cb) <= 1)


def test_normalization_examples():
    s1 = SlaterOrbital(1, 0, 0, 1.0)
    assert normalization(s1) == pytest.approx(1 / math.sqrt(math.pi), rel=1e-15)
    assert normalization(SlaterOrbital(1, 0, 0, 2.0)) / normalization(s1) == pytest.approx(2**1.5, rel=1e-15)
    assert normalization(SlaterOrbital(2, 1, 0, 1.0)) == pytest.approx(0.5641895835477563, rel=1e-14)


def test_normalization_forms_agree():
    # the expanded form moves (l+|m|)! upstairs; the Rodrigues expansion carries 1/(l+|m|)!
    for n, l, m in SUPPORTED:
        o = SlaterOrbital(n, l, m, 1.3)
        assert expansion_normalization(o) / normalization(o) == pytest.approx(math.factorial(l + abs(m)), rel=1e-14)


def _grid(R, delta, n):
    t_nodes, t_w = np.polynomial.legendre.leggauss(60)
    e_nodes, e_w = np.polynomial.legendre.leggauss(60)
    top = (60.0 + 6 * n) / (delta * R)
    edges = np.concatenate([[0.0], np.geomspace(1e-3, top, 24)])
    xi, wx = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        xi.append(1 + 0.5 * (b - a) * t_nodes + 0.5 * (a + b))
        wx.append(0.5 * (b - a) * t_w)
    return np.concatenate(xi), np.concatenate(wx), e_nodes, e_w


@pytest.mark.parametrize("n,l,m", SUPPORTED)
@pytest.mark.parametrize("center", ["A", "B"])
def test_unit_norm_in_prolate_coordinates(n, l, m, center):
    R, delta = 1.6, 1.1
    o = SlaterOrbital(n, l, m, delta, center)
    xi, wx, eta, we = _grid(R, delta, n)
    X, E = np.meshgrid(xi, eta, indexing="ij")
    f = evaluate_real(o, X, E, R) ** 2 * (X * X - E * E)
    total = (R / 2) ** 3 * 2 * math.pi * wx @ f @ we
    assert total == pytest.approx(1.0, abs=1e-6)


def test_evaluate_examples():
    s1 = SlaterOrbital(1, 0, 0, 1.0, "A")
    assert evaluate(s1, ProlatePoint(1.0, -1.0), 2.0) == pytest.approx(1 / math.sqrt(math.pi))
    p1 = SlaterOrbital(2, 1, 1, 1.0, "A")
    assert abs(evaluate(p1, ProlatePoint(2.0, 1.0, 0.3), 2.0)) == 0.0
    # 2p0 on A via the spherical route
    p0 = SlaterOrbital(2, 1, 0, 1.0, "A")
    ra = 0.5 * 2 * (1.5 + 0.5)
    cos_a = (1.5 * 0.5 + 1) / (1.5 + 0.5)
    want = normalization(p0) * ra * math.exp(-ra) * cos_a
    assert evaluate(p0, ProlatePoint(1.5, 0.5), 2.0).real == pytest.approx(want, rel=1e-12)


def test_evaluate_phase_factor():
    o = SlaterOrbital(3, 2, -2, 0.8, "B")
    v0 = evaluate(o, ProlatePoint(1.7, 0.2, 0.0), 1.4)
    v1 = evaluate(o, ProlatePoint(1.7, 0.2, 0.5), 1.4)
    assert v1 == pytest.approx(v0 * complex(math.cos(-1.0), math.sin(-1.0)), rel=1e-14)


def test_expansion_simple_cases():
    e = two_center_expansion(SlaterOrbital(1, 0, 0, 1.0, "A"), 2.0)
    assert len(e.terms) == 1 and (e.terms[0].xi_pow, e.terms[0].eta_pow) == (0, 0)
    e = two_center_expansion(SlaterOrbital(2, 0, 0, 1.0, "A"), 2.0)
    assert sorted((t.xi_pow, t.eta_pow) for t in e.terms) == [(0, 1), (1, 0)]
    assert e.scale == pytest.approx(1.0)
    e = two_center_expansion(SlaterOrbital(2, 0, 0, 1.0, "B"), 2.0, extra_power=1)
    assert len(e.terms) == 3 and e.sign == -1


@pytest.mark.parametrize("n,l,m", SUPPORTED)
@pytest.mark.parametrize("center", ["A", "B"])
def test_expansion_matches_direct_evaluation(n, l, m, center):
    rng = random.Random(n * 100 + l * 10 + m)
    o = SlaterOrbital(n, l, m, 0.9, center)
    R = 1.7
    e = two_center_expansion(o, R)
    for _ in range(20):
        xi, eta, phi = 1 + 4 * rng.random(), 2 * rng.random() - 1, 6 * rng.random()
        direct = evaluate(o, ProlatePoint(xi, eta, phi), R)
        expanded = complex(e(xi, eta, phi))
        assert abs(expanded - direct) <= 1e-10 * max(abs(direct), 1e-3 * normalization(o) * math.exp(-0.9 * R * xi / 2))


def test_expansion_extra_power_multiplies_factor():
    o = SlaterOrbital(3, 1, -1, 1.2, "B")
    base, ext = two_center_expansion(o, 1.4), two_center_expansion(o, 1.4, extra_power=1)
    for xi, eta in [(1.2, 0.3), (2.5, -0.8)]:
        assert complex(ext(xi, eta)) == pytest.approx(complex(base(xi, eta)) * (xi - eta), rel=1e-13)


@pytest.mark.parametrize("ci,cj,alpha,beta", [("A", "B", 2.0, 0.0), ("A", "A", 2.0, 2.0), ("B", "B", 2.0, -2.0)])
def test_distribution_parameters(ci, cj, alpha, beta):
    d = distribution(SlaterOrbital(1, 0, 0, 1.0, ci), SlaterOrbital(1, 0, 0, 1.0, cj), 2.0)
    assert (d.alpha, d.beta) == (alpha, beta)


def test_distribution_matches_product():
    oi, oj = SlaterOrbital(3, 2, 1, 1.1, "A"), SlaterOrbital(2, 1, -1, 0.7, "B")
    d = distribution(oi, oj, 1.9)
    assert d.m_total == 0 and d.weight == 2
    for xi, eta in [(1.1, 0.2), (2.3, -0.6), (4.0, 0.9)]:
        want = evaluate(oi, ProlatePoint(xi, eta, 0.4), 1.9) * evaluate(oj, ProlatePoint(xi, eta, 0.4), 1.9)
        assert complex(d(xi, eta, 0.4)) == pytest.approx(want, rel=1e-11)
