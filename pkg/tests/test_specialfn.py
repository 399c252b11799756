"""Special-function kernels against frozen mpmath/quadrature oracles and identities."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nrt_waves.errors import DomainError, PoleError, PoleParameter
from nrt_waves.numerics import derivative, integrate
from nrt_waves.specialfn import (WeierstrassInvariants, bessel_third, bessel_third_derivative,
                                 erf, erf_inv, erf_inv_complex, erfc, gamma, gamma_upper,
                                 hyp2f1, weierstrass_p)

# ---------------------------------------------------------------------------
# 2F1


@pytest.mark.parametrize("z", [0.1, 0.5, 0.8, -0.5, -3.0, 0.95])
def test_hyp2f1_log_closed_form(z):
    expected = -math.log(1 - z) / z
    np.testing.assert_allclose(hyp2f1(1, 1, 2, z).real, expected, rtol=1e-12)


@pytest.mark.parametrize("a,b,c", [(0.3, 1.7, 2.2), (1 + 1j, -0.5, 3.0), (-2, 4.5, 1.5)])
def test_hyp2f1_at_zero_is_one(a, b, c):
    assert hyp2f1(a, b, c, 0) == 1


def test_hyp2f1_matches_arcsin_quadrature():
    # mpmath quadrature of int_0^0.5 (1 - t^2.2)^(-1/1.4) dt, divided by 0.5
    oracle = 1.05484321537676759
    val = hyp2f1(1 / 1.4, 1 / 2.2, 1 + 1 / 2.2, 0.5 ** 2.2)
    np.testing.assert_allclose(val.real, oracle, rtol=1e-12)
    assert abs(val.imag) < 1e-14


@pytest.mark.parametrize("c", [0, -1, -2, -5])
def test_hyp2f1_pole_parameter(c):
    with pytest.raises(PoleParameter):
        hyp2f1(1.0, 1.5, c, 0.3)


@pytest.mark.parametrize("z", [0.3, -0.7, 0.5 + 0.5j, -2.0 + 1.0j, 3.0 + 0.5j])
def test_hyp2f1_matches_euler_integral(z):
    # Euler integral for c > b > 0, an independent quadrature route
    a, b, c = 0.4, 0.6, 1.9
    pref = gamma(c) / (gamma(b) * gamma(c - b))

    def f(u):
        # u = s^(1/b) removes the endpoint singularity at t = 0
        t = u ** (1 / b)
        return (1 - t) ** (c - b - 1) * (1 - z * t) ** (-a) / b

    val = pref * integrate(f, 0.0, 1.0, tol=1e-13)
    np.testing.assert_allclose(hyp2f1(a, b, c, z), val, rtol=1e-10)


@settings(max_examples=60, deadline=None)
@given(a=st.floats(-2.5, 2.5), b=st.floats(-2.5, 2.5), c=st.floats(0.3, 3.5),
       r=st.floats(0.0, 0.8), phi=st.floats(-math.pi, math.pi))
def test_hyp2f1_contiguous_relation(a, b, c, r, phi):
    z = r * cmath.exp(1j * phi)
    lhs = c * hyp2f1(a, b, c, z) - c * hyp2f1(a + 1, b, c, z) + b * z * hyp2f1(a + 1, b + 1, c + 1, z)
    scale = max(1.0, abs(c * hyp2f1(a, b, c, z)))
    assert abs(lhs) < 1e-9 * scale


# ---------------------------------------------------------------------------
# incomplete gamma


def test_gamma_upper_at_zero():
    assert abs(gamma_upper(1, 0) - 1) < 1e-15


def test_gamma_upper_half_is_erfc():
    # both the erfc identity and mpmath give 0.8498918380799312
    expected = math.sqrt(math.pi) * math.erfc(0.5)
    np.testing.assert_allclose(gamma_upper(0.5, 0.25).real, expected, rtol=1e-12)
    np.testing.assert_allclose(expected, 0.8498918380799312, rtol=1e-14)


def test_gamma_upper_three_halves_quadrature():
    oracle = 0.50728223381177331  # mpmath quadrature of t^(1/2) e^(-t) over [1, inf)
    np.testing.assert_allclose(gamma_upper(1.5, 1.0).real, oracle, rtol=1e-12)


@pytest.mark.parametrize("a,z", [(0.5, 0.1), (1.5, 2.0), (2.3, 7.5), (0.7, 30.0), (3.0, 0.01),
                                 (1.5, 1 + 1j), (-0.5, 2.0)])
def test_gamma_upper_recurrence(a, z):
    lhs = gamma_upper(a + 1, z)
    rhs = a * gamma_upper(a, z) + z ** a * cmath.exp(-z)
    assert abs(lhs - rhs) <= 1e-10 * abs(lhs)


# ---------------------------------------------------------------------------
# erf


def test_erf_values():
    assert erf(0) == 0
    assert erf_inv(0.0) == 0.0
    # mpmath quadrature of (2/sqrt(pi)) int_0^1 exp(-t^2) dt
    np.testing.assert_allclose(erf(1.0).real, 0.842700792949714869, atol=1e-12)


@pytest.mark.parametrize("x", [0.05, 0.7, 2.0, 2.9, 3.5, 5.0, -1.3])
def test_erf_matches_stdlib_on_real_axis(x):
    np.testing.assert_allclose(erf(x).real, math.erf(x), rtol=1e-13, atol=1e-16)
    np.testing.assert_allclose(erfc(x).real, math.erfc(x), rtol=1e-12)


@pytest.mark.parametrize("z", [0.5 + 0.5j, 2.0 - 1.0j, 3.5 + 0.2j])
def test_erf_complex_is_quadrature_of_gaussian(z):
    # erf(z) = (2/sqrt(pi)) z int_0^1 exp(-z^2 s^2) ds along the straight ray
    val = 2 / math.sqrt(math.pi) * z * integrate(lambda s: cmath.exp(-(z * s) ** 2), 0.0, 1.0)
    np.testing.assert_allclose(erf(z), val, rtol=1e-12)


def test_erf_inv_round_trip_07():
    assert abs(erf_inv(erf(0.7).real) - 0.7) < 1e-13


@settings(max_examples=200, deadline=None)
@given(st.floats(-3.0, 3.0))
def test_erf_inv_inverts_erf(x):
    assert abs(erf_inv(math.erf(x)) - x) < 1e-12


@pytest.mark.parametrize("y", [1.0, -1.0, 1.5])
def test_erf_inv_domain(y):
    with pytest.raises(DomainError):
        erf_inv(y)


def test_erf_inv_complex_round_trip():
    y = 0.3 + 0.1j
    assert abs(erf(erf_inv_complex(y)) - y) < 1e-13


# ---------------------------------------------------------------------------
# Bessel order 1/3

# mpmath values of J, Y, I, K of order 1/3
BESSEL_ORACLE = {
    "J": [0.0888822606658102288, 0.672830829497946004, 0.442939818148576212,
          -0.18614516704869576, -0.133340533874261619, -0.000572266807717820084],
    "Y": [-10.6924375536295914, -0.840627826043377739, 0.343199966260344342,
          0.17020111788268761, -0.0586457723167050794, -0.112834899330312789],
    "I": [0.088882293996664228, 0.738973156425119322, 2.15878258137286302,
          2799.23960970567937, 780201111830.301054, 2.92926393656441938e+20],
    "K": [16.7150469365174598, 0.98903107424672429, 0.116544961296165249,
          0.0000178746082710553349, 2.13636647366111918e-14, 3.4139217813583628e-23],
}
BESSEL_X = [0.001, 0.5, 2.0, 10.0, 30.0, 50.0]


@pytest.mark.parametrize("kind", "JYIK")
@pytest.mark.parametrize("i", range(len(BESSEL_X)))
def test_bessel_third_against_mpmath(kind, i):
    expected = BESSEL_ORACLE[kind][i]
    got = bessel_third(kind, BESSEL_X[i])
    # J has a zero near 50, so the relative contract is taken against the envelope there
    scale = max(abs(expected), 1e-3 if kind in "JY" and BESSEL_X[i] > 20 else 0.0)
    assert abs(got - expected) <= 1e-10 * scale


def test_bessel_j_integral_representation():
    # Bessel's integral for non-integer order, evaluated by mpmath quadrature
    assert abs(bessel_third("J", 2.5) - 0.198320933418608125) < 1e-12


def test_bessel_j_small_argument_leading_term():
    x = 1e-6
    lead = (x / 2) ** (1 / 3) / math.gamma(4 / 3)
    assert abs(bessel_third("J", x) / lead - 1) < 1e-8


@pytest.mark.parametrize("x", [0.1, 0.8, 2.0, 5.0, 12.0, 20.0])
def test_bessel_wronskians(x):
    # W[J_v, Y_v] = 2/(pi x); W[I_v, K_v] = -1/x
    jy = (bessel_third("J", x) * bessel_third_derivative("Y", x)
          - bessel_third_derivative("J", x) * bessel_third("Y", x))
    ik = (bessel_third("I", x) * bessel_third_derivative("K", x)
          - bessel_third_derivative("I", x) * bessel_third("K", x))
    assert abs(jy - 2 / (math.pi * x)) < 1e-9 * max(1.0, 2 / (math.pi * x))
    assert abs(ik + 1 / x) < 1e-9 * max(1.0, 1 / x)


def test_bessel_ik_wronskian_at_two():
    x = 2.0
    w = (bessel_third("I", x) * bessel_third_derivative("K", x)
         - bessel_third_derivative("I", x) * bessel_third("K", x))
    assert abs(w + 1 / x) < 1e-10


@pytest.mark.parametrize("kind", "JYIK")
def test_bessel_derivative_matches_finite_difference(kind):
    x = 1.7
    fd = derivative(lambda s: bessel_third(kind, s.real if isinstance(s, complex) else s), x)
    assert abs(bessel_third_derivative(kind, x) - fd.real) < 1e-8


@pytest.mark.parametrize("kind", "JYIK")
def test_bessel_domain(kind):
    with pytest.raises(DomainError):
        bessel_third(kind, 0.0)


# ---------------------------------------------------------------------------
# Weierstrass P

EQUIANHARMONIC = WeierstrassInvariants(0.0, -1.0 / 16.0)


def test_wp_leading_laurent_term():
    val = weierstrass_p(1e-4, EQUIANHARMONIC)
    assert abs(val / 1e8 - 1) < 1e-6


@pytest.mark.parametrize("z,oracle", [(0.3, 11.1110930307561909), (0.7, 2.04028039985678149)])
def test_wp_against_inverse_quadrature(z, oracle):
    # mpmath root of z = int_w^inf dt / sqrt(4 t^3 - g3)
    np.testing.assert_allclose(weierstrass_p(z, EQUIANHARMONIC).real, oracle, rtol=1e-10)


def test_wp_pole_at_origin():
    with pytest.raises(PoleError):
        weierstrass_p(0.0, EQUIANHARMONIC)


def test_discriminant_flags_degenerate():
    assert WeierstrassInvariants(3.0, 1.0).degenerate
    assert not EQUIANHARMONIC.degenerate


@pytest.mark.parametrize("g2,g3", [(0.0, -1 / 16), (1.0, 0.5), (2.0 + 1j, -0.3)])
def test_wp_ode_residual(g2, g3):
    inv = WeierstrassInvariants(g2, g3)
    rng = np.random.default_rng(7)
    for z in rng.uniform(0.2, 1.0, 20):
        p = weierstrass_p(z, inv)
        # a short step keeps the truncation error of the stencil below the tolerance near z = 0.2
        dp = derivative(lambda s: weierstrass_p(s, inv), z, h=1e-4)
        res = dp * dp - (4 * p ** 3 - g2 * p - g3)
        assert abs(res) < 1e-8 * max(1.0, abs(p) ** 3)


def test_sundman_cubic_through_wp():
    # V = 4 P(tau; 0, -A/16) solves V'^2 = A + V^3
    A = 1.0
    inv = WeierstrassInvariants(0.0, -A / 16)
    for tau in np.linspace(0.2, 1.0, 9):
        V = 4 * weierstrass_p(tau, inv)
        dV = derivative(lambda s: 4 * weierstrass_p(s, inv), tau)
        assert abs(dV * dV - (A + V ** 3)) < 1e-7 * max(1.0, abs(V) ** 3)
