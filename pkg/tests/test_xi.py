import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from slaterint.specfun import weighted_p_offcut, weighted_q_offcut
from slaterint.xi import (
    XiIntegralRequest,
    basic_log_integral,
    inner_p_integral_poly,
    q_weighted_expansion_terms,
    xi_double_integral,
    xi_general,
)
from slaterint.oracle import xi_oracle
from slaterint import _poly


def test_request_validation():
    with pytest.raises(ValueError):
        XiIntegralRequest(1, 2, 0, 0, 1.0, 1.0)
    with pytest.raises(ValueError):
        XiIntegralRequest(1, 0, 0, 0, 0.0, 1.0)
    with pytest.raises(ValueError):
        xi_double_integral(1, 0, 0, 0, -1.0, 1.0)


def test_basic_log_integral():
    # pinned by 30-digit quadrature of the defining integral
    assert basic_log_integral(1.0, 1.0) == pytest.approx(0.14799281994017860, rel=1e-13)
    assert basic_log_integral(0.7, 2.9) == basic_log_integral(2.9, 0.7)
    assert basic_log_integral(60.0, 1.0) < 1e-25


def test_basic_log_integral_against_quadrature():
    for a1, a2 in [(0.3, 0.3), (0.8, 2.2), (4.0, 1.5)]:
        with mpmath.workdps(30):
            f = lambda z: (1 / (z - 1) - 1 / (z + 1)) * (mpmath.exp(-a1) - mpmath.exp(-a1 * z)) * (mpmath.exp(-a2) - mpmath.exp(-a2 * z))
            want = mpmath.quad(f, [1, 2, 10, mpmath.inf])
        assert basic_log_integral(a1, a2) == pytest.approx(float(want), rel=1e-13)


def test_a_family_spot_identity():
    # mu = sigma = 0: each ordering of the log family is 1/4 of basic / (a1 a2);
    # the symmetrised sum carries both
    for a1, a2 in [(1.0, 1.0), (0.6, 2.5)]:
        a_only = float(xi_general(0, 0, [1], [1], a1, a2, families=("A",)))
        assert a_only == pytest.approx(2 * 0.25 * basic_log_integral(a1, a2) / (a1 * a2), rel=1e-13)
        # with no B or C families at mu = 0 the A part is the whole integral
        assert a_only == pytest.approx(xi_double_integral(0, 0, 0, 0, a1, a2), rel=1e-14)


def test_q_families_structure():
    t = q_weighted_expansion_terms(0, 0)
    assert t.b == () and t.c == ()
    t = q_weighted_expansion_terms(1, 1)
    assert t.b_polynomial() == [0, -1]
    assert t.c == ()
    t = q_weighted_expansion_terms(3, 0)
    j, coeff, wp = t.c[0]
    # enters with a minus sign: Q_3 = P_3 L/2 - (5/3) P_2 - (1/6) P_0
    assert j == 0 and coeff == Fraction(-5, 3) and wp.mu == 2


def test_q_families_reconstruct_weighted_q():
    for mu in range(8):
        for s in range(mu + 1):
            t = q_weighted_expansion_terms(mu, s)
            q = weighted_q_offcut(mu, s)
            assert _poly.trim(_poly.add(t.b_polynomial(), t.c_polynomial())) == q.polynomial_part()
            assert t.a == weighted_p_offcut(mu, s)


def test_inner_p_examples():
    a = 1.3
    f = inner_p_integral_poly(0, 0, a)
    assert f(2.5) == pytest.approx((math.exp(-a) - math.exp(-2.5 * a)) / a, rel=1e-14)
    f = inner_p_integral_poly(1, 0, a)
    assert f(200.0) == pytest.approx(math.exp(-a) * (1 + a) / a**2, rel=1e-14)
    # 3 x (x^2 - 1) e^{-1.2 x} on [1, 3], 30-digit quadrature
    assert inner_p_integral_poly(2, 1, 1.2)(3.0) == pytest.approx(2.7964389500031607, rel=1e-11)


@pytest.mark.parametrize("case,want", [
    ((0, 0, 0, 0, 1.0, 1.0), 0.07399640997008930),
    ((1, 1, 0, 0, 2.0, 2.0), -0.0010972715698372721),
])
def test_examples_against_pinned_quadrature(case, want):
    assert xi_double_integral(*case) == pytest.approx(want, rel=1e-9)
    assert xi_oracle(*case) == pytest.approx(want, rel=1e-9)


def test_swap_symmetry():
    a = xi_double_integral(3, 1, 2, 1, 0.8, 1.7)
    b = xi_double_integral(3, 1, 1, 2, 1.7, 0.8)
    assert a == pytest.approx(b, rel=1e-14)


def test_mu0_positive():
    assert xi_oracle(0, 0, 0, 0, 0.5, 2.0) > 0


@pytest.mark.parametrize("mu,s", [(0, 0), (2, 1), (4, 2), (3, 3)])
def test_derivative_consistency(mu, s):
    a1, a2 = 1.1, 1.9
    h = 1e-4 * a1
    for r1, r2 in [(0, 0), (1, 2), (3, 1)]:
        fd = -(xi_double_integral(mu, s, r1, r2, a1 + h, a2) - xi_double_integral(mu, s, r1, r2, a1 - h, a2)) / (2 * h)
        assert fd == pytest.approx(xi_double_integral(mu, s, r1 + 1, r2, a1, a2), rel=1e-5)


@given(st.integers(0, 8), st.integers(0, 3), st.integers(0, 5), st.integers(0, 5),
       st.floats(0.4, 6.0), st.floats(0.4, 6.0))
def test_general_is_bilinear_in_weights(mu, s, r1, r2, a1, a2):
    s = min(s, mu)
    s1 = [0] * r1 + [1]
    s2 = [Fraction(1, 2)] + [0] * r2 + [Fraction(-3)]
    want = 0.5 * xi_double_integral(mu, s, r1, 0, a1, a2) - 3 * xi_double_integral(mu, s, r1, r2 + 1, a1, a2)
    got = float(xi_general(mu, s, s1, s2, a1, a2))
    assert got == pytest.approx(want, rel=1e-9, abs=1e-12 * (abs(want) + abs(0.5 * xi_double_integral(mu, s, r1, 0, a1, a2))))


def test_high_order_against_oracle():
    # deep cancellation between the log and polynomial parts of Q
    for case in [(12, 2, 3, 5, 1.4, 2.2), (20, 0, 6, 6, 2.4, 2.4), (16, 3, 2, 7, 1.2, 3.0)]:
        assert xi_double_integral(*case) == pytest.approx(xi_oracle(*case), rel=1e-8)
