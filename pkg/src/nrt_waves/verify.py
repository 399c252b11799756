"""Residual engine: substitute constructed solutions back into their equations.

Every relation is written as a list of terms whose sum should vanish.  The
residual at a sample is ``|sum|``; reports also carry the relative size
``|sum| / max(1, max |term|)`` so cancellation between large terms is
visible.  Derivatives are finite differences only: 5-point stencils for the
reduced ODEs and second-order central differences for the PDE system.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

import numpy as np

from .branch import clog, cpow
from .errors import (BracketError, DomainError, NonConvergence, NonMonotone, PoleError,
                     TooFewPoints, UnknownRelation, ValidationError)
from .numerics import default_step, derivative, derivatives, midpoints
from .solutions.core import Case, CurveFn, FieldPair, ReductionSpec
from .solutions.logt import abel_A, sinh_A
from .solutions.logx import q3_w, q73_coefficient

#: Default ODE gate on the maximum absolute residual.
ODE_TOL = 1e-6
#: Accepted band for the PDE convergence order.
ORDER_BAND = (1.7, 2.3)
#: Steps of the PDE convergence study.
PDE_STEPS = (1e-2, 5e-3, 2.5e-3)
#: Floor on the nominal residual when forming negative-control ratios.
CONTROL_FLOOR = 1e-10

_SKIP = (PoleError, DomainError, BracketError, ZeroDivisionError, OverflowError)


@dataclass
class ResidualReport:
    """Norms of a residual over a sample set.

    Attributes
    ----------
    max_abs, rms : float
        Maximum and root-mean-square of ``|sum of terms|``.
    points_evaluated, points_skipped_singular : int
    conv_order : float or None
        Least-squares slope of ``log max_abs`` against ``log h``; set only by
        :func:`convergence_study` with at least three steps.
    steps_used : list of float
    max_rel : float
        Maximum of ``|sum| / max(1, max |term|)``.
    components : dict of str to float
        Per-equation maxima when several residuals are combined.
    nonmonotone : bool
        Set when a convergence study saw residuals fail to decrease.
    label : str
    """

    max_abs: float
    rms: float
    points_evaluated: int
    points_skipped_singular: int
    conv_order: float | None = None
    steps_used: list = field(default_factory=list)
    max_rel: float = 0.0
    components: dict = field(default_factory=dict)
    nonmonotone: bool = False
    label: str = ""

    def passed(self, tol: float = ODE_TOL) -> bool:
        """``max_abs < tol`` with at least one evaluated point."""
        return self.points_evaluated > 0 and self.max_abs < tol

    def to_dict(self) -> dict:
        return {
            "label": self.label, "max_abs": self.max_abs, "rms": self.rms,
            "max_rel": self.max_rel, "points_evaluated": self.points_evaluated,
            "points_skipped_singular": self.points_skipped_singular,
            "conv_order": self.conv_order, "steps_used": list(self.steps_used),
            "components": dict(self.components), "nonmonotone": self.nonmonotone,
        }

    @classmethod
    def combine(cls, reports: Mapping[str, "ResidualReport"], label: str = "") -> "ResidualReport":
        """Associative reduction: maxima of maxima, pooled rms, summed counts."""
        reps = list(reports.values())
        if not reps:
            return cls(0.0, 0.0, 0, 0, label=label)
        n = sum(r.points_evaluated for r in reps)
        ss = sum(r.rms ** 2 * r.points_evaluated for r in reps)
        return cls(max(r.max_abs for r in reps), math.sqrt(ss / n) if n else 0.0, n,
                   sum(r.points_skipped_singular for r in reps),
                   max_rel=max(r.max_rel for r in reps),
                   components={k: r.max_abs for k, r in reports.items()}, label=label)


def _reduce(values: list[tuple[float, float]], skipped: int, label: str) -> ResidualReport:
    total = len(values) + skipped
    if total == 0:
        raise ValidationError("empty sample set")
    if skipped > 0.5 * total:
        raise TooFewPoints(f"{label}: {skipped} of {total} sample points skipped as singular")
    if not values:
        return ResidualReport(0.0, 0.0, 0, skipped, label=label)
    absr = np.array([v[0] for v in values])
    rel = np.array([v[1] for v in values])
    return ResidualReport(float(absr.max()), float(np.sqrt(np.mean(absr ** 2))), len(values),
                          skipped, max_rel=float(rel.max()), label=label)


# ---------------------------------------------------------------------------
# relation registry


def _d(f: Callable, s: float):
    return derivatives(f, s, default_step(s))


def _pow(f: Callable, k: float) -> Callable:
    return lambda s: cpow(f(s), k)


def _alpha(spec: ReductionSpec) -> complex:
    if spec.has("alpha"):
        return spec.c("alpha")
    return spec.c("c4") / spec.b


def _nl(spec: ReductionSpec, P: Callable, s: float, order: int) -> complex:
    """``d^order/dz^order`` of ``P^(2-q)/(2-q)``, or of ``log P`` at ``q = 2``."""
    q = spec.q
    if q == 2:
        return derivative(lambda z: clog(P(z)), s, order, default_step(s))
    return derivative(_pow(P, 2 - q), s, order, default_step(s)) / (2 - q)


def _tw_P(spec, c, s):
    P = c["P"]
    return (_nl(spec, P, s, 2), -_alpha(spec) * derivative(P, s))


def _tw_Q(spec, c, s):
    P, Q, q, b = c["P"], c["Q"], spec.q, spec.b
    _, dQ, d2Q = _d(Q, s)
    return (b * cpow(P(s), 1 - q) * d2Q, _alpha(spec) * b * dQ, -spec.c("c6", 0.0) * Q(s))


def _tw_first(spec, c, s):
    P, q = c["P"], spec.q
    p = P(s)
    return (derivative(P, s), -_alpha(spec) * cpow(p, q), -spec.c("beta") * cpow(p, q - 1))


def _sc_P(spec, c, s):
    P, q, b, eps = c["P"], spec.q, spec.b, spec.c("eps")
    return (eps * s * derivative(P, s), (2 * eps - 1) / (q - 1) * P(s), -b * _nl(spec, P, s, 2))


def _sc_Q(spec, c, s):
    P, Q, q, b = c["P"], c["Q"], spec.q, spec.b
    q0, dQ, d2Q = _d(Q, s)
    return (spec.c("eps") * s * dQ, spec.c("sigma", 0.0) * q0, b * cpow(P(s), 1 - q) * d2Q)


def _sc_beta0(spec, c, s):
    P, q, b = c["P"], spec.q, spec.b
    return (b * _nl(spec, P, s, 1), -s * P(s) / (3 - q), -spec.c("beta", 0.0))


def _sc_eqY(spec, c, s):
    q, b = spec.q, spec.b
    Y = c["Y"] if "Y" in c else _pow(c["P"], 2 - q)
    y = Y(s)
    return (derivative(Y, s), -s * cpow(y, 1 / (2 - q)) / (2 * b), -y / s,
            spec.c("gamma", 0.0) / s)


def _sc_M(spec, c, s):
    q, b = spec.q, spec.b
    M = c["M"] if "M" in c else _pow(c["P"], 1 - q)
    return (derivative(M, s), -(q - 1) / (q - 2) * M(s) / s, -(q - 1) / (2 * b * (q - 2)) * s)


def _lt_P(spec, c, s):
    P, q, b = c["P"], spec.q, spec.b
    return (P(s), -spec.c("c4", 0.0) * (q - 1) * derivative(P, s),
            b * (q - 1) * _nl(spec, P, s, 2))


def _lt_Q(spec, c, s):
    P, Q, q, b = c["P"], c["Q"], spec.q, spec.b
    q0, dQ, d2Q = _d(Q, s)
    return (spec.c("c4", 0.0) * dQ, spec.c("sigma", 0.0) * q0, b * cpow(P(s), 1 - q) * d2Q)


def _lt_Psq(spec, c, s):
    P, q, b = c["P"], spec.q, spec.b
    p, dp, _ = _d(P, s)
    if q == 3:
        return (dp * dp, -(spec.c("C", 0.0) - clog(p) / b) * p ** 4)
    return (dp * dp, -spec.c("K", 1.0) * cpow(p, 2 * (q - 1)),
            -2 / (b * (q - 1) * (q - 3)) * cpow(p, q + 1))


def _lt_G(spec, c, p):
    G, q, b = c["G"], spec.q, spec.b
    return (derivative(G, p), -2 * (q - 1) * G(p) / p, 2 * cpow(p, q) / (b * (q - 1)))


def _lt_R(spec, c, t):
    R, q = c["R"], spec.q
    dR = derivative(R, t)
    return (dR * dR, -1.0, -cpow(R(t), (q - 3) / (q - 2)))


def _sundman_V(spec, c, t):
    V = c["V"]
    A = sinh_A(spec)
    v, dv, _ = _d(V, t)
    return (dv * dv, -A * v ** spec.i("m"), -v ** spec.i("n"))


def _sundman_P(spec, c, t):
    Pt, Z, q = c["Ptau"], c["Z"], spec.q
    p, dp, _ = _d(Pt, t)
    pz = dp / derivative(Z, t)
    return (pz * pz, -cpow(p, 2 * (q - 1)), -sinh_A(spec) * cpow(p, q + 1))


def _abel_w(spec, c, t):
    y, w = c["y"], c["w"]
    wv = w(t)
    return (wv * derivative(w, t) / derivative(y, t), -wv, -abel_A(spec) * c["y_pow"](t))


def _abel_F(spec, c, t):
    F, P, q, b = c["F"], c["Ptau"], spec.q, spec.b
    c4 = spec.c("c4")
    f, p = F(t), P(t)
    return (derivative(F, t) / derivative(P, t), -(q - 1) * f / p,
            -(c4 / b) * cpow(p, q - 1), cpow(p, q) / (b * (q - 1) * f))


def _lx_P(spec, c, s):
    P, q, b, c2 = c["P"], spec.q, spec.b, spec.c("c2", 0.0)
    p, dp, d2p = _d(P, s)
    H = c2 * cpow(p, 1 - q) * dp + 2 / (q - 1) * cpow(p, 2 - q)
    dH = (c2 * ((1 - q) * cpow(p, -q) * dp * dp + cpow(p, 1 - q) * d2p)
          + 2 * (2 - q) / (q - 1) * cpow(p, 1 - q) * dp)
    return (dp, b * c2 * dH, b * (3 - q) / (q - 1) * H)


def _lx_Q(spec, c, s):
    P, Q, q, b = c["P"], c["Q"], spec.q, spec.b
    c2, sigma = spec.c("c2", 0.0), spec.c("sigma", 0.0)
    q0, dQ, d2Q = _d(Q, s)
    k = -b * cpow(P(s), 1 - q)
    return (dQ, k * (sigma + 1) * (c2 * dQ + sigma * q0), k * c2 * (c2 * d2Q + sigma * dQ))


def _lx_c2zero_P(spec, c, s):
    P, q, b = c["P"], spec.q, spec.b
    return (derivative(P, s), -2 * b * (q - 3) * cpow(P(s), 2 - q) / (q - 1) ** 2)


def _lx_c2zero_Q(spec, c, s):
    P, Q, q, b = c["P"], c["Q"], spec.q, spec.b
    sigma = spec.c("sigma", 0.0)
    return (derivative(Q, s), -b * sigma * (sigma + 1) * cpow(P(s), 1 - q) * Q(s))


def _lx_q3_w(spec, c, s):
    P = c["P"]
    return (derivative(P, s), -q3_w(spec, P(s)))


def _q73_canonical(spec, c, xi):
    S = c["s"]
    sv = S(xi)
    return (sv * derivative(S, xi), -sv, -q73_coefficient(spec, xi))


def _q73_pre(spec, c, p):
    W, b, c2 = c["w"], spec.b, spec.c("c2")
    w = W(p)
    return (w * derivative(W, p), -4 / (3 * p) * w * w, cpow(p, 4 / 3) * w / (b * c2 * c2),
            3 / (4 * c2 * c2) * p)


@dataclass(frozen=True)
class Relation:
    """A residual relation: term function plus the curves it reads."""

    func: Callable
    curves: tuple[str, ...]
    description: str


RELATIONS: dict[str, Relation] = {
    "tw.P": Relation(_tw_P, ("P",), "(P^(2-q))''/(2-q) - alpha P'"),
    "tw.Q": Relation(_tw_Q, ("P", "Q"), "b P^(1-q) Q'' + alpha b Q' - c6 Q"),
    "tw.first_integral": Relation(_tw_first, ("P",), "P' - alpha P^q - beta P^(q-1)"),
    "sc.P": Relation(_sc_P, ("P",),
                     "eps z P' + (2 eps - 1)/(q-1) P - b/(2-q) (P^(2-q))''"),
    "sc.Q": Relation(_sc_Q, ("P", "Q"), "eps z Q' + sigma Q + b P^(1-q) Q''"),
    "sc.beta0.first_integral": Relation(_sc_beta0, ("P",),
                                        "b/(2-q) (P^(2-q))' - z P/(3-q) - beta"),
    "sc.eqY": Relation(_sc_eqY, ("Y",), "Y' - z Y^(1/(2-q))/(2b) - Y/z + gamma/z"),
    "sc.M": Relation(_sc_M, ("M",),
                     "M' - (q-1)/(q-2) M/z - (q-1)/(2b(q-2)) z, M = P^(1-q)"),
    "lt.P": Relation(_lt_P, ("P",), "P - c4 (q-1) P' + b (q-1)/(2-q) (P^(2-q))''"),
    "lt.Q": Relation(_lt_Q, ("P", "Q"), "c4 Q' + sigma Q + b P^(1-q) Q''"),
    "lt.Psq": Relation(_lt_Psq, ("P",),
                       "P'^2 - K P^(2(q-1)) - 2 P^(q+1)/(b(q-1)(q-3)); q = 3: P'^2 - (C - log P/b) P^4"),
    "lt.G": Relation(_lt_G, ("G",), "dG/dP - 2(q-1) G/P + 2 P^q/(b(q-1))"),
    "lt.R": Relation(_lt_R, ("R",), "R'^2 - 1 - R^((q-3)/(q-2))"),
    "lt.sundman.V": Relation(_sundman_V, ("V",), "V'^2 - A V^m - V^n"),
    "lt.sundman.P": Relation(_sundman_P, ("Ptau", "Z"),
                             "(dP/dZ)^2 - P^(2(q-1)) - A P^(q+1)"),
    "lt.abel.w": Relation(_abel_w, ("y", "w", "y_pow"), "w dw/dy - w - A y^(2-q)"),
    "lt.abel.F": Relation(_abel_F, ("F", "Ptau"),
                          "dF/dP - (q-1) F/P - (c4/b) P^(q-1) + P^q/(b(q-1)F)"),
    "lx.P": Relation(_lx_P, ("P",), "P' + b [c2 H' + (3-q)/(q-1) H]"),
    "lx.Q": Relation(_lx_Q, ("P", "Q"),
                     "Q' - b P^(1-q) [(sigma+1)(c2 Q' + sigma Q) + c2 (c2 Q'' + sigma Q')]"),
    "lx.c2zero.P1": Relation(_lx_c2zero_P, ("P",), "P' - 2b(q-3) P^(2-q)/(q-1)^2"),
    "lx.c2zero.Q1": Relation(_lx_c2zero_Q, ("P", "Q"), "Q' - b sigma (sigma+1) P^(1-q) Q"),
    "lx.q3.w": Relation(_lx_q3_w, ("P",), "P' - (K P^2 - P^3/(b c2^2) - P/c2)"),
    "lx.q73.canonical": Relation(_q73_canonical, ("s",), "s s' - s - R(xi)"),
    "lx.q73.precanonical": Relation(
        _q73_pre, ("w",), "w w' - 4 w^2/(3P) + P^(4/3) w/(b c2^2) + 3P/(4 c2^2)"),
}

_ODE_RELATIONS = {
    Case.TRAVELLING_WAVE: ("tw.P", "tw.Q"),
    Case.SCALING: ("sc.P", "sc.Q"),
    Case.LOG_T: ("lt.P", "lt.Q"),
    Case.LOG_X: ("lx.P", "lx.Q"),
}


def relation(relation_id: str) -> Relation:
    """Look up a relation, raising :class:`UnknownRelation`."""
    try:
        return RELATIONS[relation_id]
    except KeyError:
        raise UnknownRelation(
            f"unknown relation {relation_id!r}; known: {', '.join(sorted(RELATIONS))}") from None


def _sample_terms(rel: Relation, spec, curves, s, zones):
    if any(c.is_singular(s) for c in zones):
        return None
    try:
        terms = [complex(t) for t in rel.func(spec, curves, s)]
    except _SKIP:
        return None
    if not all(cmath.isfinite(t) for t in terms):
        return None
    total = abs(sum(terms))
    return total, total / max(1.0, max(abs(t) for t in terms))


def check_relation(relation_id: str, spec: ReductionSpec, curves: Mapping[str, CurveFn],
                   samples: Iterable[float], *, label: str = "") -> ResidualReport:
    """Residual of a registered relation over ``samples``.

    Parameters
    ----------
    relation_id : str
        Key of :data:`RELATIONS`.
    spec : ReductionSpec
        Supplies the constants appearing in the relation.
    curves : mapping
        Curves named as the relation expects (``P``, ``Q``, ``Y``, ...).
    samples : iterable of float
        Values of the independent variable.

    Raises
    ------
    UnknownRelation
    ValidationError
        If a required curve is missing.
    TooFewPoints
        If more than half the samples are singular.
    """
    rel = relation(relation_id)
    needed = [k for k in rel.curves if k not in curves]
    alt = {"Y": "P", "M": "P"}
    if any(alt.get(k) not in curves for k in needed):
        raise ValidationError(f"relation {relation_id} needs curves {', '.join(rel.curves)}")
    used = [k if k in curves else alt[k] for k in rel.curves]
    zones = [curves[k] for k in used if curves[k].singular]
    values, skipped = [], 0
    for s in samples:
        out = _sample_terms(rel, spec, curves, float(s), zones)
        if out is None:
            skipped += 1
        else:
            values.append(out)
    return _reduce(values, skipped, label or relation_id)


def ode_residual(case, spec: ReductionSpec, P: CurveFn, Q: CurveFn,
                 z_samples: Iterable[float]) -> ResidualReport:
    """Residuals of a reduction's ODE pair at ``z_samples``.

    Travelling wave: ``(P^(2-q))''/(2-q) = alpha P'`` and
    ``b P^(1-q) Q'' + alpha b Q' = c6 Q``; scaling, log(t) and log(x) use
    their own pairs.  Components ``P`` and ``Q`` are reported separately.

    Examples
    --------
    >>> from nrt_waves.solutions import build
    >>> sol = build("tw.q32.tanh")
    >>> ode_residual(sol.spec.case, sol.spec, sol.P, sol.Q, [0.5, 1.0, 1.5]).max_abs < 1e-8
    True
    """
    z = list(z_samples)
    p_id, q_id = _ODE_RELATIONS[Case(case)]
    curves = {"P": P, "Q": Q}
    return ResidualReport.combine({
        "P": check_relation(p_id, spec, curves, z),
        "Q": check_relation(q_id, spec, curves, z)}, label="ode")


_FIRST_ORDER_CURVE = {
    "tw.first_integral": "P", "sc.beta0.first_integral": "P", "sc.eqY": "Y", "sc.M": "M",
    "lt.Psq": "P", "lt.G": "G", "lt.R": "R", "lt.sundman.V": "V", "lx.c2zero.P1": "P",
    "lx.q3.w": "P", "lx.q73.canonical": "s", "lx.q73.precanonical": "w",
}


def first_integral_residual(relation_id: str, spec: ReductionSpec, curve: CurveFn,
                            z_samples: Iterable[float]) -> ResidualReport:
    """Residual of a single-curve first-order relation.

    Examples
    --------
    >>> from nrt_waves.solutions import ReductionSpec, Case, lt_G
    >>> s = ReductionSpec(Case.LOG_T, 4.0, 1.0, {"K": 1})
    >>> first_integral_residual("lt.G", s, lt_G(s), [0.5, 1.0, 1.5]).max_abs < 1e-9
    True
    """
    if relation_id not in _FIRST_ORDER_CURVE:
        relation(relation_id)
        raise UnknownRelation(f"{relation_id!r} is not a single-curve first-order relation")
    return check_relation(relation_id, spec, {_FIRST_ORDER_CURVE[relation_id]: curve},
                          z_samples)


def run_checks(solution, *, n: int = 20, checks=None) -> dict[str, ResidualReport]:
    """Evaluate a family's checks at ``n`` cell midpoints of each window."""
    out = {}
    for chk in (solution.checks if checks is None else checks):
        out[chk.name] = check_relation(chk.relation, solution.spec, solution.curves,
                                       midpoints(*chk.window, n), label=chk.name)
    return out


def family_report(solution, *, n: int = 20) -> ResidualReport:
    """All checks of a family reduced to one report."""
    return ResidualReport.combine(run_checks(solution, n=n), label=solution.family.family_id)


# ---------------------------------------------------------------------------
# negative controls


@dataclass
class ControlReport:
    """Outcome of a negative control.

    Attributes
    ----------
    constant : str
        Perturbed constant.
    factor : float
    ratios : dict of str to float
        Per check, perturbed maximum over ``max(nominal maximum, CONTROL_FLOOR)``.
    nominal, perturbed : dict of str to float
        Per-check maxima (``nan`` where the perturbed curve could not be
        evaluated on the nominal window).
    """

    constant: str
    factor: float
    ratios: dict
    nominal: dict
    perturbed: dict

    @property
    def best_ratio(self) -> float:
        return max(self.ratios.values(), default=0.0)

    def passed(self, threshold: float = 10.0) -> bool:
        return self.best_ratio >= threshold

    def to_dict(self) -> dict:
        return {"constant": self.constant, "factor": self.factor, "ratios": self.ratios,
                "nominal": self.nominal, "perturbed": self.perturbed,
                "best_ratio": self.best_ratio}


def perturbed_checks(solution, constant: str, factor: float, *,
                     n: int = 20) -> dict[str, ResidualReport | None]:
    """Curves rebuilt with ``constant`` scaled by ``factor``, checked against the nominal equations.

    Checks whose perturbed curves cannot be evaluated on the nominal window map to ``None``.
    """
    from .solutions.registry import build_from_spec

    pert = build_from_spec(solution.spec.perturbed(constant, factor), window=solution.window)
    out = {}
    for chk in solution.checks:
        try:
            out[chk.name] = check_relation(chk.relation, solution.spec, pert.curves,
                                           midpoints(*chk.window, n), label=chk.name)
        except (TooFewPoints, NonConvergence, ValidationError):
            out[chk.name] = None
    return out


def negative_control(solution, *, constant: str | None = None, factor: float = 1.01,
                     n: int = 20) -> ControlReport:
    """Rebuild a family with one constant scaled and re-check with the nominal constants.

    The perturbed curves solve the perturbed equations, so evaluating them
    against the nominal ones must leave a residual far above round-off.
    """
    key = constant or solution.family.control
    nominal = run_checks(solution, n=n)
    perturbed = perturbed_checks(solution, key, factor, n=n)
    ratios, nom, per = {}, {}, {}
    for chk in solution.checks:
        nom[chk.name] = nominal[chk.name].max_abs
        rep = perturbed[chk.name]
        if rep is None:
            per[chk.name], ratios[chk.name] = math.nan, 0.0
            continue
        per[chk.name] = rep.max_abs
        ratios[chk.name] = rep.max_abs / max(nom[chk.name], CONTROL_FLOOR)
    return ControlReport(key, factor, ratios, nom, per)


# ---------------------------------------------------------------------------
# PDE residuals


@dataclass(frozen=True)
class Grid:
    """Rectangle ``[x_lo, x_hi] x [t_lo, t_hi]`` sampled at cell midpoints."""

    x: tuple[float, float]
    t: tuple[float, float]
    nx: int = 10
    nt: int = 5

    def points(self):
        for t in midpoints(*self.t, self.nt):
            for x in midpoints(*self.x, self.nx):
                yield float(x), float(t)


def _pde_terms(fields: FieldPair, x: float, t: float, h: float):
    spec = fields.reduction
    q, b = spec.q, spec.b
    pts = {}
    for key in ((x, t), (x - h, t), (x + h, t), (x, t - h), (x, t + h)):
        v = fields.sample(*key)
        if v is None:
            return None
        pts[key] = v
    psi0, phi0 = pts[(x, t)]
    psi_t = (pts[(x, t + h)][0] - pts[(x, t - h)][0]) / (2 * h)
    phi_t = (pts[(x, t + h)][1] - pts[(x, t - h)][1]) / (2 * h)
    left, right = pts[(x - h, t)], pts[(x + h, t)]
    if q == 2:
        g = [clog(v[0]) for v in (left, pts[(x, t)], right)]
        nl = b * (g[0] - 2 * g[1] + g[2]) / (h * h)
    else:
        g = [cpow(v[0], 2 - q) for v in (left, pts[(x, t)], right)]
        nl = b / (2 - q) * (g[0] - 2 * g[1] + g[2]) / (h * h)
    phi_xx = (left[1] - 2 * phi0 + right[1]) / (h * h)
    r1 = (psi_t, nl)
    r2 = (phi_t, -b * cpow(psi0, 1 - q) * phi_xx)
    return r1, r2


def pde_residual(fields: FieldPair, grid: Grid, h: float) -> ResidualReport:
    """Second-order finite-difference residuals of the governing system.

    ``R1 = Psi_t + b/(2-q) (Psi^(2-q))_xx`` (``b (log Psi)_xx`` at ``q = 2``)
    and ``R2 = Phi_t - b Psi^(1-q) Phi_xx`` at every grid point whose
    stencil avoids flagged singularities.  Components ``R1`` and ``R2``
    are reported separately.

    Raises
    ------
    TooFewPoints
        If more than half the grid points were skipped.
    """
    v1, v2, skipped = [], [], 0
    for x, t in grid.points():
        try:
            out = _pde_terms(fields, x, t, h)
        except _SKIP:
            out = None
        if out is None or not all(cmath.isfinite(v) for r in out for v in r):
            skipped += 1
            continue
        for dest, terms in zip((v1, v2), out):
            tot = abs(sum(terms))
            dest.append((tot, tot / max(1.0, max(abs(v) for v in terms))))
    rep = ResidualReport.combine({"R1": _reduce(v1, skipped, "R1"),
                                  "R2": _reduce(v2, skipped, "R2")}, label="pde")
    rep.points_evaluated = len(v1)
    rep.points_skipped_singular = skipped
    rep.steps_used = [h]
    return rep


def convergence_study(residual_op: Callable[[float], ResidualReport],
                      steps=PDE_STEPS) -> ResidualReport:
    """Run ``residual_op`` at each step and fit the convergence order.

    Parameters
    ----------
    residual_op : callable
        ``h -> ResidualReport``.
    steps : sequence of float
        At least three, strictly decreasing.

    Returns
    -------
    ResidualReport
        The finest-step report with ``conv_order`` (least-squares slope of
        ``log max_abs`` against ``log h``) and ``steps_used``.  A
        :class:`~nrt_waves.errors.NonMonotone` warning is issued, and
        ``nonmonotone`` set, when residuals fail to decrease.

    Examples
    --------
    >>> rep = convergence_study(lambda h: ResidualReport(h * h, h * h, 1, 0))
    >>> round(rep.conv_order, 12)
    2.0
    """
    steps = [float(h) for h in steps]
    if len(steps) < 3:
        raise ValidationError("a convergence study needs at least three steps")
    if any(b >= a for a, b in zip(steps, steps[1:])):
        raise ValidationError("steps must be strictly decreasing")
    reports = [residual_op(h) for h in steps]
    errs = [r.max_abs for r in reports]
    final = reports[-1]
    final.steps_used = steps
    final.components = {**final.components, **{f"max_abs@{h:g}": e for h, e in zip(steps, errs)}}
    decreasing = all(b < a for a, b in zip(errs, errs[1:]))
    if all(e > 0 for e in errs):
        slope = np.polyfit(np.log(steps), np.log(errs), 1)[0]
        final.conv_order = float(slope)
    else:
        final.conv_order = None
    if not decreasing:
        final.nonmonotone = True
        warnings.warn(f"residuals did not decrease with the step: {errs}", NonMonotone,
                      stacklevel=2)
    return final


def default_pde_grid(solution, *, t=(1.0, 1.2), x=(1.0, 1.2), nx: int = 10,
                     nt: int = 5, margin: float = 0.1) -> Grid:
    """Grid in ``(x, t)`` whose similarity variable stays inside the family window.

    For the log(x) case ``x`` is fixed to the given interval and the ``t``
    range is derived instead.
    """
    if solution.window is None:
        raise ValidationError(f"family {solution.family.family_id} has no z window to lift")
    lo, hi = solution.window
    pad = margin * (hi - lo)
    lo, hi = lo + pad, hi - pad
    spec = solution.spec
    case = spec.case
    if case is Case.TRAVELLING_WAVE:
        c4 = (spec.c("c4") if spec.has("c4") else spec.c("alpha") * spec.b).real
        shifts = [c4 * tt for tt in t]
        xr = (lo + max(shifts), hi + min(shifts))
    elif case is Case.SCALING:
        eps = spec.c("eps").real
        scales = [tt ** eps for tt in t]
        ends = [(lo * s, hi * s) for s in scales]
        xr = (max(e[0] for e in ends), min(e[1] for e in ends))
    elif case is Case.LOG_T:
        c4 = spec.c("c4", 0.0).real
        shifts = [c4 * math.log(tt) for tt in t]
        xr = (lo + max(shifts), hi + min(shifts))
    else:
        c2 = spec.c("c2", 0.0).real
        shifts = [c2 * math.log(xx) for xx in x]
        tr = (lo + max(shifts), hi + min(shifts))
        if not tr[1] > tr[0]:
            raise ValidationError("window too narrow for the requested x range")
        return Grid(tuple(x), tr, nx, nt)
    if not xr[1] > xr[0]:
        raise ValidationError("window too narrow for the requested t range")
    return Grid(xr, tuple(t), nx, nt)


def pde_study(solution, *, grid: Grid | None = None, steps=PDE_STEPS) -> ResidualReport:
    """Convergence study of the lifted fields of ``solution`` on ``grid``."""
    fields = solution.fields()
    grid = grid or default_pde_grid(solution)
    return convergence_study(lambda h: pde_residual(fields, grid, h), steps)


__all__ = [
    "ResidualReport", "Relation", "RELATIONS", "relation", "check_relation", "ode_residual",
    "first_integral_residual", "run_checks", "family_report", "ControlReport",
    "negative_control", "perturbed_checks", "Grid", "pde_residual", "convergence_study",
    "default_pde_grid", "pde_study", "ODE_TOL", "ORDER_BAND", "PDE_STEPS",
]
