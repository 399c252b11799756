"""Solution families: constructors, lifting maps and the registry."""

import cmath
import math

import numpy as np
import pytest

from nrt_waves import gtf
from nrt_waves.errors import (DomainError, PoleError, UnknownFamily, UnsupportedPair,
                              ValidationError)
from nrt_waves.numerics import derivative
from nrt_waves.solutions import (FAMILIES, Case, CurveKind, ReductionSpec, build, constant_curve,
                                 family, family_index_table, lift, make_spec)
from nrt_waves.solutions import logt, logx, scaling, travelling
from nrt_waves.specialfn import hyp2f1
from nrt_waves.verify import check_relation, first_integral_residual, ode_residual


def tw_spec(q, **c):
    return ReductionSpec(Case.TRAVELLING_WAVE, q, 1.0, c)


# ---------------------------------------------------------------------------
# specs and registry


def test_spec_rejects_linear_index():
    with pytest.raises(ValidationError):
        ReductionSpec(Case.SCALING, 1.0, 1.0, {})


def test_spec_rejects_zero_b_and_complex_q():
    with pytest.raises(ValidationError):
        ReductionSpec(Case.SCALING, 2.5, 0.0, {})
    with pytest.raises(ValidationError):
        ReductionSpec(Case.SCALING, 2.5 + 1j, 1.0, {})


def test_spec_real_mode_and_perturbation():
    s = tw_spec(2.5, alpha=1.0, beta=2.0)
    assert s.real_mode
    assert not s.with_constants(beta=1j).real_mode
    assert s.perturbed("beta", 1.01).c("beta") == 2.02
    with pytest.raises(ValidationError):
        s.perturbed("gamma", 1.01)


def test_unknown_family():
    with pytest.raises(UnknownFamily):
        family("tw.nope")
    with pytest.raises(UnknownFamily):
        build("tw.nope")


def test_unknown_constant_lists_accepted_keys():
    with pytest.raises(ValidationError, match="accepted keys: .*alpha"):
        make_spec("tw.gtf.r2", bogus=1.0)


def test_fixed_q_is_enforced():
    with pytest.raises(ValidationError):
        make_spec("tw.q32.tanh", q=2.5)


@pytest.mark.parametrize("q", [2.0, 2.5, 1.5])
def test_derived_eps(q):
    assert make_spec("sc.beta0", q=q).c("eps") == pytest.approx(1 / (3 - q))
    assert make_spec("sc.bernoulli", q=q + 0.1).c("eps") == pytest.approx(1 / (2 * (2 - q - 0.1)))
    # user-supplied values win over derived defaults
    assert make_spec("sc.beta0", q=q, eps=0.7).c("eps") == 0.7


def test_index_table_lists_every_family():
    table = family_index_table()
    for fid in FAMILIES:
        assert f"`{fid}`" in table


# ---------------------------------------------------------------------------
# lifting


def test_lift_travelling_constant():
    s = tw_spec(3.0, alpha=0.0)
    f = lift(s, constant_curve(1.5), constant_curve(0.0))
    for x, t in [(0.0, 0.0), (1.3, -2.0)]:
        assert f.psi(x, t) == 1.5 and f.phi(x, t) == 0


def test_lift_scaling_at_unit_time():
    sol = build("sc.beta0")
    f = sol.fields()
    assert f.psi(1.0, 1.0) == sol.P(1.0)
    assert f.phi(1.0, 1.0) == sol.Q(1.0)


def test_lift_log_x_closed_form():
    q, b, t0 = 4.0, 1.0, 0.5
    sol = build("lx.c2zero", q=q, b=b, sigma=0.0, z0=t0)
    f = sol.fields()
    for x, t in [(1.0, 1.0), (2.0, 0.7)]:
        want = (2 * b * (q - 3) / (q - 1) * (t + t0)) ** (1 / (q - 1)) * x ** (-2 / (q - 1))
        assert abs(f.psi(x, t) - want) < 1e-13


@pytest.mark.parametrize("fid,x,t", [("sc.beta0", 0.5, -1.0), ("lt.erf", 1.0, 0.0),
                                     ("lx.c2zero", -1.0, 1.0)])
def test_lift_domain_errors(fid, x, t):
    f = build(fid).fields()
    with pytest.raises(DomainError):
        f.psi(x, t)
    assert f.sample(x, t) is None


def test_lift_principal_override():
    f = build("lx.c2zero").fields(principal=True)
    assert cmath.isfinite(f.psi(-1.0, 1.0))


def test_lift_requires_z_curves():
    with pytest.raises(ValidationError):
        build("lt.abel.q3").fields()


# ---------------------------------------------------------------------------
# travelling waves


def test_r1_matches_tan_closed_form_at_three_halves():
    s = tw_spec(1.5, alpha=1.0, beta=1.0, z0=0.0, K=1.0, Ktilde=0.0)
    P1 = travelling.tw_P_gtf(s, "r1")
    P2 = travelling.tw_P_polynomial(s, "q32_tan")
    for z in np.linspace(0.1, 1.2, 12):
        assert abs(P1(z) - P2(z)) < 1e-9 * max(1.0, abs(P2(z)))


@pytest.mark.parametrize("branch,q", [("r1", 1.3), ("r1", 0.5), ("r2", 2.5), ("r2", 3.5)])
def test_gtf_wave_first_integral(branch, q):
    s = tw_spec(q, alpha=1.0, beta=1.0, z0=0.0, K1=1.0, K2=0.0)
    P = travelling.tw_P_gtf(s, branch)
    lo, hi = travelling_window(s, branch)
    rep = first_integral_residual("tw.first_integral", s, P, np.linspace(lo, hi, 20))
    assert rep.max_abs < 1e-7


def travelling_window(spec, branch):
    from nrt_waves.solutions.registry import _gtf_window
    return _gtf_window(spec, branch)


def test_r2_complex_constants_bounded():
    # Figure 1 constants: alpha = beta = i at q = 2.5 oscillate without blowing up on z > 0
    s = ReductionSpec(Case.TRAVELLING_WAVE, 2.5, -0.5j, {"alpha": 1j, "beta": 1j})
    P = travelling.tw_P_gtf(s, "r2")
    vals = [abs(P(z)) for z in np.linspace(0.3, 3.0, 40)]
    assert all(math.isfinite(v) for v in vals) and max(vals) < 1e3


def test_r2_q_zero_constant():
    s = tw_spec(2.5, alpha=1.0, beta=1.0, K1=0.0, K2=0.7)
    Q = travelling.tw_Q_gtf(s)
    assert all(Q(z) == 0.7 for z in (0.2, 0.9))


def test_r2_q_equation():
    sol = build("tw.gtf.r2")
    rep = check_relation("tw.Q", sol.spec, sol.curves, np.linspace(*sol.window, 20))
    assert rep.max_abs < 1e-6


def test_q32_tanh_residual():
    sol = build("tw.q32.tanh")
    rep = ode_residual(sol.spec.case, sol.spec, sol.P, sol.Q, np.linspace(0.35, 2.4, 20))
    assert rep.components["P"] < 1e-9


def test_q32_sign_conditions():
    with pytest.raises(ValidationError):
        travelling.tw_P_polynomial(tw_spec(1.5, alpha=1.0, beta=1.0), "q32_tanh")
    with pytest.raises(ValidationError):
        travelling.tw_P_polynomial(tw_spec(1.5, alpha=1.0, beta=-1.0), "q32_tan")


def test_q32_q_zero_and_slope():
    s = tw_spec(1.5, alpha=-1.0, beta=1.0, K=0.0, Ktilde=0.3)
    assert travelling.tw_Q_q32(s, "hyperbolic")(0.8) == 0.3
    s = tw_spec(1.5, alpha=-1.0, beta=1.0, K=4.0, Ktilde=0.3, z0=0.0)
    k0, k1 = travelling.q32_constants(s, "hyperbolic")
    Q = travelling.tw_Q_q32(s, "hyperbolic")
    assert abs(Q(0.0) - 0.3) < 1e-15
    # Q' = K/2 + (K/2) cosh(2 k1 z)
    assert abs(derivative(Q, 0.0) - 4.0) < 1e-8
    assert abs(derivative(Q, 0.6) - (2 + 2 * cmath.cosh(2 * k1 * 0.6))) < 1e-8


def test_q0_implicit_relation():
    s = tw_spec(0.0, alpha=1.0, beta=1.0, z0=0.0)
    P = travelling.tw_P_polynomial(s, "q0_implicit")
    assert P.kind is CurveKind.IMPLICIT
    for z in (0.6, 1.5, 2.8):
        p = P(z).real
        assert abs(p - math.log(1 + p) - z) < 1e-10


def test_integer_implicit_slope():
    sol = build("tw.integer", q=4.0)
    for z in np.linspace(*sol.window, 7)[1:-1]:
        assert abs(sol.P.residual(z)) < 1e-10
        p = sol.P(z).real
        assert abs(derivative(sol.P, z) - (p ** 4 + p ** 3)) < 1e-6 * max(1.0, p ** 4)


# ---------------------------------------------------------------------------
# scaling


def test_beta0_separable_limit():
    s = ReductionSpec(Case.SCALING, 2.5, -1.5, {"alpha": 0.0, "eps": 2.0, "sigma": -1.0})
    P = scaling.sc_P_beta0(s)
    # alpha = 0: P^(1-q) = (1-q) z^2 / (2 b (3-q))
    for z in (0.5, 1.3):
        want = ((1 - 2.5) * z * z / (2 * -1.5 * 0.5)) ** (1 / (1 - 2.5))
        assert abs(P(z) - want) < 1e-13


def test_beta0_density_at_origin_q2():
    spec = make_spec("sc.beta0", q=2.0, b=-0.5j, alpha=1j)
    alpha, b, q = 1j, -0.5j, 2.0
    want = (1 / ((-1 / b) * alpha) * 2 * alpha * (1 - q)).real
    assert abs(scaling.beta0_density_closed(spec, 0.0, 1.0) - want) < 1e-15


def test_bernoulli_q_constant_when_k1_zero():
    sol = build("sc.bernoulli", K1=0.0, K2=0.4)
    assert all(sol.Q(z) == 0.4 for z in np.linspace(0.6, 1.9, 10))
    # the stencil of a constant is zero up to rounding amplified by 1/h^2
    rep = check_relation("sc.Q", sol.spec, sol.curves, np.linspace(0.6, 1.9, 10))
    assert rep.max_abs < 1e-9


@pytest.mark.parametrize("C", [0.0, 0.2])
def test_bernoulli_q3_gamma_slope(C):
    # Gamma(3/2, -L) with L = log z + C > 0 differentiates to e^C (-L)^(1/2) = i e^C sqrt(L)
    sol = build("sc.bernoulli.q3", C=C)
    for z in (1.7, 2.5, 3.6):
        want = 1j * math.exp(C) * math.sqrt(math.log(z) + C)
        assert abs(derivative(sol.Q, z) - want) < 1e-8


@pytest.mark.parametrize("sign,matches", [(-1.0, True), (1.0, False)])
def test_bernoulli_hypergeometric_argument_sign(sign, matches):
    spec = make_spec("sc.bernoulli", q=2.7)
    ha, hb, hc = scaling.bernoulli_hyp_params(spec.q)
    pref = spec.c("K1", 1.0) * spec.c("K") ** (1 / (spec.q - 1))

    def Q(z):
        return pref * z * hyp2f1(ha, hb, hc, scaling.bernoulli_hyp_argument(spec, z, sign=sign))

    # large z keeps |argument| < 1 for both signs
    errs = [abs(derivative(Q, z) - scaling.bernoulli_Q_prime(spec, z)) for z in (15.0, 20.0, 30.0)]
    assert (max(errs) < 1e-8) == matches


def test_bernoulli_complex_b_residual():
    sol = build("sc.bernoulli", q=2.5, b=1j, K=1.0, window=(0.5, 2.0))
    rep = check_relation("sc.P", sol.spec, sol.curves, np.linspace(0.55, 1.95, 20))
    assert rep.max_abs < 1e-6


def test_q52_y_relation():
    sol = build("sc.q52")
    for z in np.linspace(1.2, 3.8, 6):
        assert abs(sol.curves["Y"](z) - sol.P(z) ** -0.5) < 1e-10 * abs(sol.curves["Y"](z))


def test_q52_q_zero():
    sol = build("sc.q52", K1=0.0, K2=-0.2)
    assert sol.Q(2.0) == -0.2


# ---------------------------------------------------------------------------
# log(t)


def test_erf_boundary_singularity():
    sol = build("lt.erf")
    with pytest.raises(PoleError):
        sol.P(-sol.spec.r("z0"))


def test_erf_linear_q():
    sol = build("lt.erf", K1=2.0, K2=-1.0)
    assert abs(sol.Q(0.7) - 0.4) < 1e-15
    rep = check_relation("lt.Q", sol.spec, sol.curves, np.linspace(0.5, 3.0, 10))
    # exact for a line up to stencil rounding
    assert rep.max_abs < 1e-9


def test_sinh_wiring_matches_gtf():
    s = make_spec("lt.sinh")
    R = logt.lt_R_sinh(s)
    assert abs(R(0.7) - gtf.sinh_pq(0.7, (2, 2 / 3)).value) < 1e-14
    rep = first_integral_residual("lt.R", s, R, np.linspace(0.3, 3.0, 20))
    assert rep.max_abs < 1e-7


@pytest.mark.parametrize("m,n,tol", [(1, 2, 1e-10), (2, 3, 1e-9), (0, 3, 1e-7)])
def test_sundman_closed_forms(m, n, tol):
    sol = build("lt.sundman", m=m, n=n)
    chk = next(c for c in sol.checks if c.relation == "lt.sundman.V")
    rep = check_relation(chk.relation, sol.spec, sol.curves, np.linspace(*chk.window, 20))
    assert rep.max_abs < tol


def test_sundman_rejects_bad_pair():
    with pytest.raises((UnsupportedPair, ValidationError)):
        build("lt.sundman", m=3, n=2)


def test_sundman_numeric_pair_reconstructs():
    sol = build("lt.sundman", m=1, n=4)
    assert not sol.extras["sundman"].closed
    with pytest.raises(UnsupportedPair):
        logt.lt_sundman(sol.spec, 1, 4, closed=True)


def test_abel_q3_consistency():
    sol = build("lt.abel.q3")
    curve = sol.extras["abel"]
    for tau in (0.6, 1.0, 1.7):
        y, w = curve["y"](tau), curve["w"](tau)
        f = curve["f"](tau) if "f" in curve else None
        if f is not None:
            K = sol.spec.c("K", 1.0)
            assert abs((w - y) - 2 * K * tau) < 1e-10


def test_abel_q52_residual():
    sol = build("lt.abel.q52", C1=1.0, C2=0.0)
    rep = check_relation("lt.abel.w", sol.spec, sol.curves, np.linspace(0.5, 3.0, 20))
    assert rep.max_abs < 1e-6


def test_abel_rejects_inconsistent_parameter():
    with pytest.raises(ValidationError):
        build("lt.abel.q52", a=7.0)


# ---------------------------------------------------------------------------
# log(x)


def test_c2zero_system_complex_b():
    sol = build("lx.c2zero", q=4.0, b=1j, sigma=1.0)
    zs = np.linspace(1.05, 1.95, 20)
    assert check_relation("lx.c2zero.P1", sol.spec, sol.curves, zs).max_abs < 1e-9
    assert check_relation("lx.c2zero.Q1", sol.spec, sol.curves, zs).max_abs < 1e-9


@pytest.mark.parametrize("sigma", [0.0, -1.0])
def test_c2zero_constant_q(sigma):
    sol = build("lx.c2zero", sigma=sigma, K=2.5)
    assert sol.Q(1.4) == 2.5


def test_q3_implicit_slope():
    sol = build("lx.q3")
    s = sol.spec
    b, c2, K = s.b.real, s.r("c2"), s.r("K")
    for z in np.linspace(*sol.window, 6)[1:-1]:
        p = sol.P(z).real
        want = K * p * p - p ** 3 / (b * c2 * c2) - p / c2
        assert abs(derivative(sol.P, z) - want) < 1e-7


def test_q3_requires_nonzero_c2():
    with pytest.raises(ValidationError):
        logx.lx_c2nonzero_q3(make_spec("lx.q3", c2=0.0))


def test_q73_chain_residual():
    sol = build("lx.q73")
    for chk in sol.checks:
        rep = check_relation(chk.relation, sol.spec, sol.curves, np.linspace(*chk.window, 20))
        assert rep.max_abs < 1e-6
