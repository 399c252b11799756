"""Acceptance suite: criteria 1-10 at their stated tolerances.

Each test prints one ``criterion N: PASS|FAIL`` line (visible with ``pytest -v``
or ``-s``) and then asserts it.
"""

import math
import time
import warnings

import mpmath
import numpy as np
import pytest
from scipy.integrate import quad

from nrt_waves import cli, density, gtf, verify
from nrt_waves.errors import DomainError, ZeroMass
from nrt_waves.gtf import GtfParams
from nrt_waves.numerics import derivative
from nrt_waves.solutions import Case, build
from nrt_waves.specialfn import (WeierstrassInvariants, bessel_third, bessel_third_derivative,
                                 erf, gamma_upper, hyp2f1, weierstrass_p)

LATTICE = (1.2, 1.5, 2.0, 2.5, 3.5)
PAIRS = [(p, q) for p in LATTICE for q in LATTICE]

FAMILY_CASES = [
    ("tw.gtf.r1", {}), ("tw.gtf.r2", {}), ("tw.q32.tanh", {}), ("tw.q32.tan", {}),
    ("tw.q0", {}), ("tw.q12", {}),
    ("tw.integer", {"q": 3.0}), ("tw.integer", {"q": 4.0}), ("tw.integer", {"q": 5.0}),
    ("sc.beta0", {}), ("sc.bernoulli", {"q": 2.5}), ("sc.bernoulli.q3", {}), ("sc.q52", {}),
    ("lt.erf", {"q": 3.0}), ("lt.sinh", {"q": 5.0}),
    ("lt.sundman", {"m": 1, "n": 2}), ("lt.sundman", {"m": 2, "n": 3}),
    ("lt.sundman", {"m": 0, "n": 3}),
    ("lt.abel.q3", {}), ("lt.abel.q4", {}), ("lt.abel.q52", {}),
    ("lx.c2zero", {}), ("lx.q3", {}), ("lx.q73", {}),
]


def case_id(fid, kw):
    return fid + "".join(f" {k}={v:g}" for k, v in kw.items())


def report(capsys, n, ok, detail):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


@pytest.fixture(scope="module")
def solutions():
    return {case_id(f, kw): build(f, **kw) for f, kw in FAMILY_CASES}


# ---------------------------------------------------------------------------
# generalized trigonometric functions


def test_criterion_01_gtf_identities(capsys):
    start = time.perf_counter()
    worst_c = worst_h = 0.0
    for p, q in PAIRS:
        P = GtfParams(p, q)
        for x in np.linspace(0.0, gtf.pi_pq(P) / 2, 50):
            s, c = gtf.sin_cos_pq(x, P)
            worst_c = max(worst_c, abs(abs(c.value) ** p + abs(s.value) ** q - 1))
        # stay inside the real domain when sinh_pq blows up in finite time
        top = min(2.0, 0.9 * gtf.sinh_blowup(p, q))
        for x in np.linspace(0.0, top, 50):
            s, c = gtf.sinh_cosh_pq(x, P)
            worst_h = max(worst_h, abs(abs(c.value) ** p - abs(s.value) ** q - 1))
    elapsed = time.perf_counter() - start
    ok = worst_c < 1e-10 and worst_h < 1e-10 and elapsed < 10
    report(capsys, 1, ok, f"circular {worst_c:.1e}, hyperbolic {worst_h:.1e} "
                          f"(tol 1e-10), {elapsed:.1f} s (limit 10 s)")


def test_criterion_02_gtf_quadrature_oracle(capsys):
    worst = 0.0
    for p, q in PAIRS:
        P = GtfParams(p, q)
        for z in np.linspace(0.05, 0.95, 20):
            oracle = float(mpmath.quad(lambda t: (1 - t ** q) ** (-1.0 / p), [0, z]))
            worst = max(worst, abs(gtf.arcsin_pq(z, P) - oracle))
        for z in np.linspace(0.1, 3.0, 20):
            oracle = float(mpmath.quad(lambda t: (1 + t ** q) ** (-1.0 / p), [0, z]))
            worst = max(worst, abs(gtf.arcsinh_pq(z, P) - oracle))
    report(capsys, 2, worst < 1e-10, f"max |inverse - mpmath quadrature| {worst:.1e} (tol 1e-10)")


def test_criterion_03_duality(capsys):
    worst, pairs, points = 0.0, 0, 0
    for p, q in PAIRS:
        P = GtfParams(p, q)
        try:
            R = P.dual()
        except DomainError:
            continue
        lim = min(gtf.pi_pq(P) / 2, gtf.pi_pq(R) / 2,
                  gtf.sinh_blowup(p, q), gtf.sinh_blowup(R.p, q))
        pairs += 1
        # rounding is amplified as cos -> 0, so sample the inner 80% of the domain
        for x in np.linspace(0.0, 0.8 * lim, 20)[1:]:
            worst = max(worst, gtf.duality_check(x, P))
            points += 1
    ok = worst < 1e-9 and pairs > 0
    report(capsys, 3, ok, f"{pairs} admissible pairs, {points} points, max residual "
                          f"{worst:.1e} (tol 1e-9)")


def test_criterion_04_classical_degeneration(capsys):
    P = GtfParams(2, 2)
    worst = 0.0
    for x in np.linspace(0.0, 1.5, 61):
        pairs = [(gtf.sin_pq(x, P).value, math.sin(x)), (gtf.cos_pq(x, P).value, math.cos(x)),
                 (gtf.sinh_pq(x, P).value, math.sinh(x)),
                 (gtf.cosh_pq(x, P).value, math.cosh(x)),
                 (gtf.tanh_pq(x, P).value, math.tanh(x)),
                 (gtf.tan_pq(x, P).value / (1 + math.tan(x) ** 2), math.tan(x) /
                  (1 + math.tan(x) ** 2))]
        worst = max(worst, *(abs(a - b) for a, b in pairs))
    report(capsys, 4, worst < 1e-12, f"max deviation on [0, 1.5] {worst:.1e} (tol 1e-12)")


# ---------------------------------------------------------------------------
# solution families


def test_criterion_05_ode_gates(capsys, solutions):
    start = time.perf_counter()
    failed, worst = [], (0.0, "")
    for cid, sol in solutions.items():
        rep = verify.family_report(sol)
        if not rep.passed(verify.ODE_TOL):
            failed.append(f"{cid} ({rep.max_abs:.1e})")
        worst = max(worst, (rep.max_abs, cid))
    elapsed = time.perf_counter() - start
    ok = not failed and elapsed < 60
    detail = (f"{len(solutions)} families, worst {worst[0]:.1e} ({worst[1]}), tol 1e-6, "
              f"{elapsed:.1f} s (limit 60 s)")
    report(capsys, 5, ok, detail + (f"; failing: {', '.join(failed)}" if failed else ""))


LIFTED = [case_id(f, kw) for f, kw in FAMILY_CASES if f.startswith(("tw.", "sc."))]


def test_criterion_06_pde_convergence(capsys, solutions):
    lo, hi = verify.ORDER_BAND
    orders, failed = {}, []
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        for cid in LIFTED:
            sol = solutions[cid]
            assert sol.spec.case in (Case.TRAVELLING_WAVE, Case.SCALING)
            order = verify.pde_study(sol).conv_order
            orders[cid] = order
            if order is None or not lo < order < hi:
                failed.append(cid)
    spread = (min(orders.values()), max(orders.values()))
    report(capsys, 6, not failed,
           f"{len(orders)} lifted families, orders in [{spread[0]:.3f}, {spread[1]:.3f}] "
           f"(band 2.0 +- 0.3)" + (f"; failing: {', '.join(failed)}" if failed else ""))


def test_criterion_07_negative_controls(capsys, solutions):
    ratios, failed = {}, []
    for cid, sol in solutions.items():
        ctl = verify.negative_control(sol, factor=1.01)
        ratios[cid] = ctl.best_ratio
        if not ctl.passed(10.0):
            failed.append(f"{cid} ({ctl.constant}: {ctl.best_ratio:.1e})")
    low = min(ratios, key=ratios.get)
    report(capsys, 7, not failed,
           f"{len(ratios)} families, smallest ratio {ratios[low]:.1e} ({low}), need >= 10"
           + (f"; failing: {', '.join(failed)}" if failed else ""))


# ---------------------------------------------------------------------------
# figures


def test_criterion_08_figure_presets(capsys, figures):
    notes, failed = [], []
    for name in density.FIGURE_PRESETS:
        lifted, closed = figures.lifted(name), figures.closed(name)
        finite = not lifted.singular.any() and not closed.singular.any()
        diff = float(np.max(np.abs(lifted.raw - closed.raw))) if finite else math.inf
        if not (finite and diff < 1e-9):
            failed.append(name)
        notes.append(diff)
    for name, (p, q) in cli.GTF_PRESETS.items():
        xs = np.linspace(0.0, 2 * gtf.pi_pq(GtfParams(p, q)), 241)
        table, rep = cli.gtf_table(p, q, xs)
        finite = all(math.isfinite(v) for v in table.columns["sin"] + table.columns["cos"])
        if not (finite and rep["identity_max_abs"] < 1e-10):
            failed.append(name)
    report(capsys, 8, not failed,
           f"{len(density.FIGURE_PRESETS)} density presets, two-path max {max(notes):.1e} "
           f"(tol 1e-9); {len(cli.GTF_PRESETS)} GTF presets finite"
           + (f"; failing: {', '.join(failed)}" if failed else ""))


# ---------------------------------------------------------------------------
# special functions


def _wp_inverse(w, g2, g3):
    """``z`` with ``P(z) = w``: integral of ``1/sqrt(4t^3 - g2 t - g3)`` over ``[w, inf)``."""
    with mpmath.workdps(40):
        # the slowly decaying tail needs extra digits and split intervals
        f = lambda t: 1 / mpmath.sqrt(4 * t ** 3 - g2 * t - g3)  # noqa: E731
        return float(mpmath.quad(f, [w, 2 * w, 10 * w, mpmath.inf]))


def test_criterion_09_special_functions(capsys):
    errs = {}
    hyp = [((0.5, 0.5, 1.5, 0.25)), ((1.0, 1.0, 2.0, -0.7)), ((-0.4, 1 / 3, 5 / 6, 0.9)),
           ((0.3, 0.7, 1.9, 0.4 + 0.3j)), ((1.2, -0.5, 2.5, -3.0))]
    errs["2F1"] = max(abs(hyp2f1(a, b, c, z) - complex(mpmath.hyp2f1(a, b, c, z)))
                      / max(1.0, abs(complex(mpmath.hyp2f1(a, b, c, z))))
                      for a, b, c, z in hyp)
    gam = [(1.5, 1.0), (0.5, 0.25), (1.5, -0.5), (2.3, 4.0), (1.5, 0.3 + 0.2j)]
    errs["Gamma(a,z)"] = max(abs(gamma_upper(a, z) - complex(mpmath.gammainc(a, z)))
                             / max(1.0, abs(complex(mpmath.gammainc(a, z)))) for a, z in gam)
    errs["Gamma recurrence"] = max(
        abs(gamma_upper(a + 1, z) - (a * gamma_upper(a, z) + z ** a * math.exp(-z)))
        for a, z in [(0.5, 0.7), (1.5, 2.0), (2.5, 0.1)])
    erfz = [0.3, -1.2, 2.9, 0.5 + 0.5j, 1.0 - 0.3j]
    errs["erf"] = max(abs(erf(z) - complex(mpmath.erf(z))) for z in erfz)
    bes = {"J": mpmath.besselj, "Y": mpmath.bessely, "I": mpmath.besseli, "K": mpmath.besselk}
    errs["Bessel 1/3"] = max(
        abs(bessel_third(k, x) - float(f(mpmath.mpf(1) / 3, x)))
        / max(1.0 if k in "JY" else 0.0, abs(float(f(mpmath.mpf(1) / 3, x))))
        for k, f in bes.items() for x in (0.2, 1.0, 3.7, 9.0))
    errs["Wronskians"] = max(
        max(abs(bessel_third("J", x) * bessel_third_derivative("Y", x)
                - bessel_third_derivative("J", x) * bessel_third("Y", x) - 2 / (math.pi * x)),
            abs(bessel_third("I", x) * bessel_third_derivative("K", x)
                - bessel_third_derivative("I", x) * bessel_third("K", x) + 1 / x))
        for x in (0.5, 2.0, 7.0))
    g2, g3 = 0.0, -1 / 16
    inv = WeierstrassInvariants(g2, g3)
    errs["wp inverse"] = max(abs(_wp_inverse(weierstrass_p(z, inv).real, g2, g3) - z)
                             for z in (0.3, 0.5, 0.7))
    errs["wp ODE"] = max(
        abs(derivative(lambda s: weierstrass_p(s, inv), z, h=1e-4) ** 2
            - (4 * weierstrass_p(z, inv) ** 3 - g2 * weierstrass_p(z, inv) - g3))
        / max(1.0, abs(weierstrass_p(z, inv)) ** 3) for z in (0.3, 0.6, 0.9))
    tol = {"2F1": 1e-12, "Gamma(a,z)": 1e-12, "Gamma recurrence": 1e-12, "erf": 1e-13,
           "Bessel 1/3": 1e-10, "Wronskians": 1e-9, "wp inverse": 1e-10, "wp ODE": 1e-8}
    failed = [k for k in errs if not errs[k] < tol[k]]
    report(capsys, 9, not failed,
           ", ".join(f"{k} {errs[k]:.0e}/{tol[k]:.0e}" for k in errs)
           + (f"; failing: {', '.join(failed)}" if failed else ""))


# ---------------------------------------------------------------------------
# normalisation

NORMALIZABLE = [n for n in density.FIGURE_PRESETS if n != "fig1-q2"]


def test_criterion_10_normalization(capsys, figures):
    worst, failed = 0.0, []
    for name in NORMALIZABLE:
        prof = figures.normalized(name)
        cuts = sorted({*prof.breakpoints, *density.detect_jumps(prof)})
        # independent integrator for the check
        total, _ = quad(lambda x: prof.density(x) / prof.n_omega, *prof.omega,
                        points=cuts or None, limit=500, epsabs=1e-13, epsrel=1e-13)
        worst = max(worst, abs(total - 1))
        if not abs(total - 1) < 1e-8:
            failed.append(name)
    report(capsys, 10, not failed,
           f"{len(NORMALIZABLE)} presets, max |int rho - 1| {worst:.1e} (tol 1e-8); "
           "fig1-q2 has K1 = 0 and is tracked as an expected failure"
           + (f"; failing: {', '.join(failed)}" if failed else ""))


@pytest.mark.xfail(strict=True, raises=ZeroMass,
                   reason="K1 = sign(q - 2) = 0 at q = 2 makes the density vanish identically")
def test_criterion_10_zero_mass_preset(figures):
    figures.normalized("fig1-q2")
