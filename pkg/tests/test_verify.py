"""Residual engine: reports, relations, convergence studies and negative controls."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nrt_waves import verify
from nrt_waves.errors import NonMonotone, TooFewPoints, UnknownRelation, ValidationError
from nrt_waves.solutions import (Case, CurveFn, CurveKind, ReductionSpec, build, constant_curve,
                                 lift)
from nrt_waves.verify import (Grid, ResidualReport, check_relation, convergence_study,
                              first_integral_residual, negative_control, ode_residual,
                              pde_residual, pde_study)


def closed(func, name="P"):
    return CurveFn(func, CurveKind.CLOSED, name)


# ---------------------------------------------------------------------------
# reports


def test_report_fields_and_dict():
    rep = ResidualReport(1e-8, 5e-9, 20, 1, label="x")
    d = rep.to_dict()
    assert d["max_abs"] == 1e-8 and d["points_evaluated"] == 20
    assert d["points_skipped_singular"] == 1 and d["conv_order"] is None
    assert rep.passed() and not rep.passed(1e-9)
    assert not ResidualReport(0.0, 0.0, 0, 3).passed()


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1), st.integers(1, 50)),
                min_size=3, max_size=3))
def test_combine_is_associative(parts):
    reps = [ResidualReport(m, r, n, 0) for m, r, n in parts]
    flat = ResidualReport.combine({"a": reps[0], "b": reps[1], "c": reps[2]})
    inner = ResidualReport.combine({"a": reps[0], "b": reps[1]})
    nested = ResidualReport.combine({"ab": inner, "c": reps[2]})
    assert flat.max_abs == nested.max_abs
    assert flat.points_evaluated == nested.points_evaluated
    assert flat.rms == pytest.approx(nested.rms, rel=1e-12, abs=1e-300)


# ---------------------------------------------------------------------------
# relations


def test_unknown_relation():
    s = ReductionSpec(Case.TRAVELLING_WAVE, 2.5, 1.0, {"alpha": 1.0})
    with pytest.raises(UnknownRelation):
        check_relation("tw.nope", s, {"P": constant_curve(1.0)}, [0.5])
    with pytest.raises(UnknownRelation):
        first_integral_residual("tw.P", s, constant_curve(1.0), [0.5])


def test_missing_curve():
    s = ReductionSpec(Case.TRAVELLING_WAVE, 2.5, 1.0, {"alpha": 1.0})
    with pytest.raises(ValidationError):
        check_relation("tw.Q", s, {"P": constant_curve(1.0)}, [0.5])


def test_first_integral_exact_wave():
    # at q = 2, P' = alpha P^2 + beta P with alpha = -1, beta = 1 is the logistic curve
    s = ReductionSpec(Case.TRAVELLING_WAVE, 2.0, 1.0, {"alpha": -1.0, "beta": 1.0})
    P = closed(lambda z: 1.0 / (1.0 + math.exp(-z)))
    rep = first_integral_residual("tw.first_integral", s, P, np.linspace(-2, 2, 20))
    assert rep.max_abs < 1e-10


def test_first_integral_detects_wrong_curve():
    s = ReductionSpec(Case.TRAVELLING_WAVE, 2.0, 1.0, {"alpha": -1.0, "beta": 1.0})
    P = closed(lambda z: 1.0 / (1.0 + math.exp(-1.01 * z)))
    rep = first_integral_residual("tw.first_integral", s, P, np.linspace(-2, 2, 20))
    assert rep.max_abs > 1e-4


def test_singular_samples_are_skipped():
    s = ReductionSpec(Case.TRAVELLING_WAVE, 2.0, 1.0, {"alpha": -1.0, "beta": 1.0})
    P = CurveFn(lambda z: 1.0 / (1.0 + math.exp(-z)), CurveKind.CLOSED, "P", ((0.45, 0.55),))
    rep = first_integral_residual("tw.first_integral", s, P, [0.1, 0.5, 0.9])
    assert rep.points_evaluated == 2 and rep.points_skipped_singular == 1


def test_too_few_points():
    s = ReductionSpec(Case.TRAVELLING_WAVE, 2.0, 1.0, {"alpha": -1.0, "beta": 1.0})
    P = CurveFn(lambda z: 1.0, CurveKind.CLOSED, "P", ((0.0, 1.0),))
    with pytest.raises(TooFewPoints):
        first_integral_residual("tw.first_integral", s, P, [0.1, 0.5, 0.9])


def test_ode_residual_components():
    sol = build("tw.q32.tanh")
    rep = ode_residual(sol.spec.case, sol.spec, sol.P, sol.Q, np.linspace(0.4, 2.4, 20))
    assert set(rep.components) == {"P", "Q"}
    assert rep.max_abs < verify.ODE_TOL


def test_run_checks_cover_family():
    sol = build("sc.beta0")
    reps = verify.run_checks(sol)
    assert set(reps) == {c.name for c in sol.checks}
    assert all(r.points_evaluated == 20 for r in reps.values())


# ---------------------------------------------------------------------------
# convergence studies


def test_convergence_order_two():
    rep = convergence_study(lambda h: ResidualReport(3 * h * h, h * h, 1, 0))
    assert rep.conv_order == pytest.approx(2.0, abs=1e-12)
    assert rep.steps_used == list(verify.PDE_STEPS)


def test_convergence_nonmonotone_warns():
    def op(h):
        e = 1e-3 if h == verify.PDE_STEPS[1] else h ** 2
        return ResidualReport(e, e, 1, 0)

    with pytest.warns(NonMonotone):
        rep = convergence_study(op)
    assert rep.nonmonotone


def test_convergence_step_validation():
    op = lambda h: ResidualReport(h, h, 1, 0)  # noqa: E731
    with pytest.raises(ValidationError):
        convergence_study(op, steps=(1e-2, 5e-3))
    with pytest.raises(ValidationError):
        convergence_study(op, steps=(1e-2, 2e-2, 5e-3))


def test_pde_residual_of_static_fields():
    s = ReductionSpec(Case.TRAVELLING_WAVE, 3.0, 1.0, {"alpha": 0.0})
    f = lift(s, constant_curve(2.0), constant_curve(0.5))
    rep = pde_residual(f, Grid((0.0, 1.0), (0.0, 1.0)), 1e-2)
    assert rep.max_abs < 1e-12


def test_pde_order_travelling_wave():
    rep = pde_study(build("tw.gtf.r2"))
    lo, hi = verify.ORDER_BAND
    assert lo < rep.conv_order < hi


def test_pde_detects_wrong_lift():
    sol = build("sc.beta0")
    good = pde_residual(sol.fields(), verify.default_pde_grid(sol), 2.5e-3).max_abs
    wrong = sol.spec.with_constants(eps=sol.spec.c("eps") * 1.05)
    f = lift(wrong, sol.P, sol.Q)
    bad = pde_residual(f, verify.default_pde_grid(sol), 2.5e-3).max_abs
    assert bad > 100 * good


# ---------------------------------------------------------------------------
# negative controls


@pytest.mark.parametrize("fid", ["tw.q32.tanh", "sc.beta0", "lt.erf", "lx.c2zero"])
def test_negative_control(fid):
    rep = negative_control(build(fid))
    assert rep.passed()
    d = rep.to_dict()
    assert d["best_ratio"] == rep.best_ratio and d["factor"] == 1.01


def test_negative_control_named_constant():
    rep = negative_control(build("tw.gtf.r2"), constant="alpha")
    assert rep.constant == "alpha" and rep.passed()


def test_negative_control_rejects_unknown_constant():
    with pytest.raises(ValidationError):
        negative_control(build("tw.gtf.r2"), constant="zeta")
