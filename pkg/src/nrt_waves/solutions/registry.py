"""Registry of named solution families.

Each family id (``tw.gtf.r2``, ``sc.bernoulli.q3``, ``lt.erf``, ...) maps to
default constants for a real test mode, the constant keys it accepts, a
builder producing its curves and the residual checks that certify it.
:func:`build` is the single entry point used by the CLI and the
acceptance suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from ..errors import UnknownFamily, ValidationError
from ..gtf import GtfParams, pi_pq
from ..numerics import integrate
from . import logt, logx, scaling, travelling
from .core import Case, CurveFn, FieldPair, ReductionSpec, constant_curve, lift


@dataclass(frozen=True)
class Check:
    """One residual check of a family.

    Attributes
    ----------
    name : str
        Label in reports.
    relation : str
        Relation id understood by :mod:`nrt_waves.verify`.
    window : (float, float)
        Sampling interval of the independent variable.
    variable : str
        Name of that variable (``z``, ``tau``, ``P``, ``xi``).
    """

    name: str
    relation: str
    window: tuple[float, float]
    variable: str = "z"


@dataclass
class Solution:
    """A constructed family member: curves plus the checks that certify it.

    Attributes
    ----------
    family : FamilyInfo
    spec : ReductionSpec
    curves : dict of str to CurveFn
        ``P`` and ``Q`` over ``z`` when available, plus family-specific
        intermediate curves (``Y``, ``G``, ``R``, ``V``, ``w``, ``s``, ...).
    checks : tuple of Check
    window : (float, float)
        Regular ``z`` interval of ``P`` and ``Q`` (``None`` if there is no
        ``P(z)``).
    extras : dict
        Underlying solver objects, e.g. the Sundman reconstruction.
    """

    family: "FamilyInfo"
    spec: ReductionSpec
    curves: dict[str, CurveFn]
    checks: tuple[Check, ...]
    window: tuple[float, float] | None
    extras: dict = field(default_factory=dict)

    @property
    def P(self) -> CurveFn | None:
        return self.curves.get("P")

    @property
    def Q(self) -> CurveFn | None:
        return self.curves.get("Q")

    @property
    def liftable(self) -> bool:
        """True when both ``P(z)`` and ``Q(z)`` exist."""
        return self.P is not None and self.Q is not None

    def fields(self, *, principal: bool = False) -> FieldPair:
        """Lift ``P``, ``Q`` to ``Psi(x, t)``, ``Phi(x, t)``."""
        if not self.liftable:
            raise ValidationError(f"family {self.family.family_id} has no P(z), Q(z) to lift")
        return lift(self.spec, self.P, self.Q, principal=principal)


@dataclass(frozen=True)
class FamilyInfo:
    """Static description of a family.

    Attributes
    ----------
    family_id : str
    case : Case
    description : str
    q, b : float, complex
        Real-test-mode defaults.
    defaults : dict
        Default constants.
    optional : tuple of str
        Further accepted constant keys without defaults.
    builder : callable
        ``builder(spec, window) -> Solution`` pieces.
    control : str
        Constant perturbed by the negative control.
    printed_density : bool
        Whether a closed-form density exists for two-path checks.
    fixed_q : float or None
        The only admissible ``q``, if the family pins it.
    derived : callable or None
        ``derived(q) -> dict`` of defaults that depend on ``q`` (e.g. ``eps``).
    """

    family_id: str
    case: Case
    description: str
    q: float
    b: complex
    defaults: dict
    builder: Callable
    control: str
    optional: tuple[str, ...] = ()
    printed_density: bool = False
    fixed_q: float | None = None
    derived: Callable | None = None

    @property
    def accepted_keys(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.defaults) | set(self.optional)))


FAMILIES: dict[str, FamilyInfo] = {}


def _register(info: FamilyInfo):
    FAMILIES[info.family_id] = info


def _inner(window, frac=0.0):
    lo, hi = window
    pad = frac * (hi - lo)
    return (lo + pad, hi - pad)


# ---------------------------------------------------------------------------
# travelling waves

_TW_CHECKS = (("P-equation", "tw.P"), ("Q-equation", "tw.Q"),
              ("first-integral", "tw.first_integral"))


def _tw_checks(window, spec):
    # the first integral's principal powers P^q, P^(q-1) leave the wave's branch
    # once arg P grows, so with complex constants only the ODE pair is checked
    pairs = _TW_CHECKS if spec.real_mode else _TW_CHECKS[:2]
    return tuple(Check(n, r, window) for n, r in pairs)


def _gtf_window(spec, branch):
    """``z`` interval mapping to ``[0.15, 0.65]`` of the first quarter period of ``tan_a``."""
    gamma, a = travelling.gtf_phase(spec, branch)
    if abs(gamma.imag) > 1e-14 * abs(gamma):
        # complex phase: principal powers continue the tangent's branch only for z > 0
        return (0.25, 3.0)
    quarter = pi_pq(GtfParams.single(a)) / 2
    # a <= 1 has no pole on the real line: tan grows without bound
    lo, hi = (0.15 * quarter, 0.65 * quarter) if math.isfinite(quarter) else (0.45, 4.5)
    z0 = spec.c("z0", 0.0).real
    ends = sorted((lo / gamma.real - z0, hi / gamma.real - z0))
    return tuple(ends)


def _build_tw_gtf(branch):
    def build(spec, window):
        P = travelling.tw_P_gtf(spec, branch)
        if branch == "r2":
            Q = travelling.tw_Q_gtf(spec)
        else:
            Q = constant_curve(spec.c("K2", 0.0), "tw.gtf.r1.Q")
        window = window or _gtf_window(spec, branch)
        return {"P": P, "Q": Q}, _tw_checks(window, spec), window, {}
    return build


def _build_tw_q32(trig):
    def build(spec, window):
        case = "q32_tanh" if trig == "hyperbolic" else "q32_tan"
        P = travelling.tw_P_polynomial(spec, case)
        Q = travelling.tw_Q_q32(spec, trig)
        return {"P": P, "Q": Q}, _tw_checks(window, spec), window, {}
    return build


def _build_tw_implicit(case):
    def build(spec, window):
        P = travelling.tw_P_polynomial(spec, case)
        Q = constant_curve(spec.c("K2", 1.0), "tw.Q")
        if window is None and case == "integer_q_implicit":
            ends = sorted(travelling.integer_q_z_of_P(spec, p) for p in (0.5, 1.5))
            window = tuple(ends)
        if window is None:
            raise ValidationError("this family needs an explicit z window")
        return {"P": P, "Q": Q}, _tw_checks(window, spec), window, {}
    return build


_register(FamilyInfo(
    "tw.gtf.r1", Case.TRAVELLING_WAVE,
    "generalized-tangent travelling wave, branch r1 (q < 2)",
    1.3, 1.0, {"alpha": 1.0, "beta": 1.0, "z0": 0.0, "K2": 1.0},
    _build_tw_gtf("r1"), "beta", optional=("c4", "c6")))
_register(FamilyInfo(
    "tw.gtf.r2", Case.TRAVELLING_WAVE,
    "generalized-tangent travelling wave, branch r2 (q > 1), with auxiliary field",
    2.5, 1.0, {"alpha": 1.0, "beta": 1.0, "z0": 0.0, "K1": 1.0, "K2": 0.0},
    _build_tw_gtf("r2"), "beta", optional=("c4", "c6"), printed_density=True))
_register(FamilyInfo(
    "tw.q32.tanh", Case.TRAVELLING_WAVE, "q = 3/2 tanh^2 wave (alpha beta < 0)",
    1.5, 1.0, {"alpha": -1.0, "beta": 1.0, "z0": 0.0, "K": 1.0, "Ktilde": 0.0},
    _build_tw_q32("hyperbolic"), "beta", optional=("c4", "c6"), fixed_q=1.5))
_register(FamilyInfo(
    "tw.q32.tan", Case.TRAVELLING_WAVE, "q = 3/2 tan^2 wave (alpha beta > 0)",
    1.5, 1.0, {"alpha": 1.0, "beta": 1.0, "z0": 0.0, "K": 1.0, "Ktilde": 0.0},
    _build_tw_q32("circular"), "beta", optional=("c4", "c6"), fixed_q=1.5))
_register(FamilyInfo(
    "tw.q0", Case.TRAVELLING_WAVE, "q = 0 implicit wave with a logarithm",
    0.0, 1.0, {"alpha": 1.0, "beta": 1.0, "z0": 0.0, "K2": 1.0},
    _build_tw_implicit("q0_implicit"), "beta", optional=("c4", "c6", "P_lo", "P_hi"),
    fixed_q=0.0))
_register(FamilyInfo(
    "tw.q12", Case.TRAVELLING_WAVE, "q = 1/2 implicit wave with arctan/arctanh",
    0.5, 1.0, {"alpha": 1.0, "beta": 1.0, "z0": 0.0, "K2": 1.0},
    _build_tw_implicit("q12_implicit"), "beta", optional=("c4", "c6", "P_lo", "P_hi"),
    fixed_q=0.5))
_register(FamilyInfo(
    "tw.integer", Case.TRAVELLING_WAVE,
    "integer q >= 3 implicit wave (logarithm plus power sum)",
    4.0, 1.0, {"alpha": 1.0, "beta": 1.0, "z0": 0.0, "K2": 1.0},
    _build_tw_implicit("integer_q_implicit"), "beta",
    optional=("c4", "c6", "P_lo", "P_hi")))

_TW_DEFAULT_WINDOWS = {"tw.q32.tanh": (0.3, 2.5), "tw.q32.tan": (0.3, 2.6),
                       "tw.q0": (0.5, 3.0), "tw.q12": (4.0, 8.0)}


# ---------------------------------------------------------------------------
# scaling


def _build_sc_beta0(spec, window):
    P = scaling.sc_P_beta0(spec)
    Q = scaling.sc_Q_sigma_m1(spec)
    checks = (Check("P-equation", "sc.P", window), Check("Q-equation", "sc.Q", window),
              Check("first-integral", "sc.beta0.first_integral", window))
    return {"P": P, "Q": Q}, checks, window, {}


def _build_sc_bernoulli(spec, window):
    P = scaling.sc_P_gamma0(spec)
    Q = scaling.sc_Q_gamma0(spec)
    checks = (Check("P-equation", "sc.P", window), Check("Q-equation", "sc.Q", window),
              Check("Y-equation", "sc.eqY", window), Check("M-equation", "sc.M", window))
    return {"P": P, "Q": Q}, checks, window, {}


def _build_sc_q52(spec, window):
    P = scaling.sc_P_q52(spec)
    Q = scaling.sc_Q_q52(spec, anchor=window[0])
    Y = scaling.sc_Y_q52(spec)
    checks = (Check("P-equation", "sc.P", window), Check("Q-equation", "sc.Q", window),
              Check("Y-equation", "sc.eqY", window))
    return {"P": P, "Q": Q, "Y": Y}, checks, window, {}


_register(FamilyInfo(
    "sc.beta0", Case.SCALING, "separable scaling wave (eps = 1/(3-q), beta = 0), sigma = -1",
    2.5, -1.5, {"alpha": 1.0, "eps": 2.0, "sigma": -1.0},
    _build_sc_beta0, "b", optional=("beta",), printed_density=True,
    derived=lambda q: {"eps": scaling.beta0_eps(q)} if q != 3 else {}))
_register(FamilyInfo(
    "sc.bernoulli", Case.SCALING,
    "Bernoulli scaling wave (eps = 1/(2(2-q)), gamma = 0) with hypergeometric Q",
    2.5, -1.0, {"K": 1.0, "eps": -1.0, "sigma": 0.0, "K1": 1.0, "K2": 0.0},
    _build_sc_bernoulli, "b", optional=("gamma",), printed_density=True,
    derived=lambda q: {"eps": scaling.bernoulli_eps(q)} if q != 2 else {}))
_register(FamilyInfo(
    "sc.bernoulli.q3", Case.SCALING,
    "Bernoulli scaling wave at q = 3 with incomplete-gamma Q",
    3.0, 1.0, {"C": 0.0, "eps": -0.5, "sigma": 0.0, "K1": 1.0, "K2": 0.0},
    _build_sc_bernoulli, "b", optional=("gamma",), printed_density=True, fixed_q=3.0))
_register(FamilyInfo(
    "sc.q52", Case.SCALING, "generalized-tanh scaling wave at q = 5/2 (gamma != 0)",
    2.5, -1.0, {"gamma": -1.0, "eps": -1.0, "sigma": 0.0, "K1": 1.0, "K2": 0.0},
    _build_sc_q52, "gamma", fixed_q=2.5))

_SC_DEFAULT_WINDOWS = {"sc.beta0": (-2.0, 2.0), "sc.bernoulli": (0.5, 2.0),
                       "sc.bernoulli.q3": (1.5, 4.0), "sc.q52": (1.0, 4.0)}


# ---------------------------------------------------------------------------
# log(t)


def _build_lt_erf(spec, window):
    P = logt.lt_P_erf(spec)
    Q = logt.lt_Q_linear(spec)
    checks = (Check("P-equation", "lt.P", window), Check("Q-equation", "lt.Q", window),
              Check("squared-slope", "lt.Psq", window))
    return {"P": P, "Q": Q}, checks, window, {}


def _build_lt_sinh(spec, window):
    P = logt.lt_P_sinh(spec)
    Q = logt.lt_Q_linear(spec)
    curves = {"P": P, "Q": Q, "R": logt.lt_R_sinh(spec), "G": logt.lt_G(spec)}
    checks = (Check("P-equation", "lt.P", window), Check("Q-equation", "lt.Q", window),
              Check("squared-slope", "lt.Psq", window),
              Check("R-equation", "lt.R", (0.3, 3.0), "tau"),
              Check("G-equation", "lt.G", (0.5, 2.0), "P"))
    return curves, checks, window, {}


def _build_lt_sundman(spec, window):
    m, n = spec.i("m", 1), spec.i("n", 2)
    sol = logt.lt_sundman(spec, m, n)
    tau_win = _inner(sol.window, 0.05)
    curves = {"V": sol.curve["V"], "Ptau": sol.curve["P"], "Z": sol.curve["Z"]}
    checks = [Check("V-equation", "lt.sundman.V", tau_win, "tau"),
              Check("P(Z)-equation", "lt.sundman.P", tau_win, "tau")]
    if sol.sqrtK.imag == 0 and sol.sqrtK.real > 0:
        zs = sorted(sol.curve["Z"](t).real / sol.sqrtK.real for t in sol.window)
        if window is None:
            window = _inner(tuple(zs), 0.1)
        curves["P"] = sol.P_of_z()
        curves["Q"] = logt.lt_Q_linear(spec)
        if sol.closed:
            # numeric pairs cover a short, steep stretch of z; they are checked in tau only
            checks += [Check("P-equation", "lt.P", window),
                       Check("squared-slope", "lt.Psq", window)]
    return curves, tuple(checks), window, {"sundman": sol}


def _build_lt_abel(qcase):
    def build(spec, window):
        curve = logt.lt_abel_parametric(spec, qcase)
        tau_win = window or _ABEL_WINDOWS[qcase]
        curves = {"y": curve["y"], "w": curve["w"], "y_pow": curve["y_pow"],
                  "Ptau": curve["P"], "F": curve["F"]}
        checks = (Check("Abel-equation", "lt.abel.w", tau_win, "tau"),
                  Check("F-equation", "lt.abel.F", tau_win, "tau"))
        return curves, checks, None, {"abel": curve}
    return build


_ABEL_WINDOWS = {"q3": (0.5, 2.0), "q52": (0.5, 3.0), "q4": (0.5, 2.0)}

_register(FamilyInfo(
    "lt.erf", Case.LOG_T, "q = 3 log(t) wave through the inverse error function",
    3.0, -1.0, {"C": 0.0, "sign": 1, "z0": 0.0, "c4": 0.0, "sigma": 0.0, "K1": 1.0, "K2": 0.0},
    _build_lt_erf, "b", fixed_q=3.0))
_register(FamilyInfo(
    "lt.sinh", Case.LOG_T, "log(t) wave through the biparametric generalized sinh",
    5.0, 0.25, {"K": 1.0, "z0": 0.0, "tau0": 0.0, "c4": 0.0, "sigma": 0.0, "K1": 1.0,
                "K2": 0.0},
    _build_lt_sinh, "b", optional=("A",)))
_register(FamilyInfo(
    "lt.sundman", Case.LOG_T, "Sundman-transformed log(t) wave V'^2 = A V^m + V^n",
    5.0, -0.25, {"K": 1.0, "m": 1, "n": 2, "tau0": 0.0, "c4": 0.0, "sigma": 0.0, "K1": 1.0,
                 "K2": 0.0},
    _build_lt_sundman, "b", optional=("A",)))
_register(FamilyInfo(
    "lt.abel.q3", Case.LOG_T, "parametric Abel solution at q = 3 (Gaussian quadrature)",
    3.0, 0.25, {"c4": 1.0, "sign": 1, "C": math.sqrt(math.pi) / 2 * math.erf(1.0) - 1.0},
    _build_lt_abel("q3"), "c4", optional=("K",), fixed_q=3.0))
_register(FamilyInfo(
    "lt.abel.q52", Case.LOG_T, "parametric Abel solution at q = 5/2 (Bessel functions)",
    2.5, -1.0, {"c4": 1.0, "sign": -1, "C1": 1.0, "C2": 0.0},
    _build_lt_abel("q52"), "c4", optional=("a",), fixed_q=2.5))
_register(FamilyInfo(
    "lt.abel.q4", Case.LOG_T, "parametric Abel solution at q = 4 (Bessel functions)",
    4.0, 1.0, {"c4": 1.0, "sign": 1, "C1": 1.0, "C2": 0.0},
    _build_lt_abel("q4"), "c4", optional=("a",), fixed_q=4.0))

_LT_DEFAULT_WINDOWS = {"lt.erf": (0.3, 3.2), "lt.sinh": (-2.0, -0.2)}


# ---------------------------------------------------------------------------
# log(x)


def _build_lx_c2zero(spec, window):
    P, Q = logx.lx_c2zero(spec)
    checks = (Check("P-equation", "lx.P", window), Check("Q-equation", "lx.Q", window),
              Check("P first-order", "lx.c2zero.P1", window),
              Check("Q first-order", "lx.c2zero.Q1", window))
    return {"P": P, "Q": Q}, checks, window, {}


def _q3_z_of_P(spec, p):
    b, c2, K = spec.b.real, spec.r("c2"), spec.r("K", 0.0)
    p_ref = spec.r("P_ref", 1.0)
    integrand = lambda u: 1.0 / (u ** 3 - K * b * c2 * c2 * u * u + b * c2 * u)  # noqa: E731
    return -b * c2 * c2 * integrate(integrand, p_ref, p).real - spec.r("z0", 0.0)


def _build_lx_q3(spec, window):
    P = logx.lx_c2nonzero_q3(spec)
    Q = constant_curve(spec.c("K2", 1.0), "lx.q3.Q")
    if window is None:
        window = _inner(tuple(sorted(_q3_z_of_P(spec, p) for p in (0.5, 2.0))), 0.05)
    checks = (Check("P-equation", "lx.P", window), Check("Q-equation", "lx.Q", window),
              Check("slope", "lx.q3.w", window))
    return {"P": P, "Q": Q}, checks, window, {}


def _build_lx_q73(spec, window):
    ab = logx.lx_c2nonzero_q73(spec)
    xi_win = _inner(ab.window, 0.05)
    p_win = _inner(ab.P_window, 0.05)
    checks = (Check("canonical Abel", "lx.q73.canonical", xi_win, "xi"),
              Check("pre-canonical Abel", "lx.q73.precanonical", p_win, "P"))
    return {"s": ab.s, "w": ab.w}, checks, None, {"abel": ab}


_register(FamilyInfo(
    "lx.c2zero", Case.LOG_X, "separable log(x) power-law wave (c2 = 0)",
    4.0, 1.0, {"sigma": 1.0, "K": 1.0, "z0": 0.0, "c2": 0.0},
    _build_lx_c2zero, "b", optional=("t0",), printed_density=True))
_register(FamilyInfo(
    "lx.q3", Case.LOG_X, "q = 3 log(x) wave from an implicit quadrature (c2 != 0)",
    3.0, 1.0, {"c2": 1.0, "K": 0.0, "z0": 0.0, "P_ref": 1.0, "sigma": 0.0, "K2": 1.0},
    _build_lx_q3, "b", optional=("t0",), fixed_q=3.0))
_register(FamilyInfo(
    "lx.q73", Case.LOG_X, "q = 7/3 log(x) slope from the canonical Abel equation (c2 != 0)",
    7.0 / 3.0, -1.0, {"c2": 1.0, "xi0": 1.0, "s0": 2.0, "xi1": 3.0, "sigma": 0.0},
    _build_lx_q73, "b", fixed_q=7.0 / 3.0))

_LX_DEFAULT_WINDOWS = {"lx.c2zero": (1.0, 2.0)}

_DEFAULT_WINDOWS = {**_TW_DEFAULT_WINDOWS, **_SC_DEFAULT_WINDOWS, **_LT_DEFAULT_WINDOWS,
                    **_LX_DEFAULT_WINDOWS}


# ---------------------------------------------------------------------------


def family(family_id: str) -> FamilyInfo:
    """Look up a family, raising :class:`UnknownFamily` for unregistered ids."""
    try:
        return FAMILIES[family_id]
    except KeyError:
        raise UnknownFamily(
            f"unknown family {family_id!r}; known: {', '.join(sorted(FAMILIES))}") from None


def make_spec(family_id: str, *, q=None, b=None, **constants) -> ReductionSpec:
    """Spec of a family with defaults filled in and unknown keys rejected."""
    info = family(family_id)
    unknown = sorted(set(constants) - set(info.accepted_keys))
    if unknown:
        raise ValidationError(
            f"family {family_id} does not accept {', '.join(unknown)}; "
            f"accepted keys: {', '.join(info.accepted_keys)}")
    q = info.q if q is None else q
    if info.fixed_q is not None and abs(complex(q) - info.fixed_q) > 1e-14:
        raise ValidationError(f"family {family_id} requires q = {info.fixed_q:g}")
    derived = info.derived(complex(q).real) if info.derived is not None else {}
    merged = {**info.defaults, **derived,
              **{k: v for k, v in constants.items() if v is not None}}
    return ReductionSpec(info.case, q, info.b if b is None else b, merged, family_id)


def build_from_spec(spec: ReductionSpec, *, window=None) -> Solution:
    """Construct the family named by ``spec.family``."""
    info = family(spec.family)
    if window is None:
        window = _DEFAULT_WINDOWS.get(info.family_id)
    window = None if window is None else (float(window[0]), float(window[1]))
    curves, checks, win, extras = info.builder(spec, window)
    return Solution(info, spec, curves, tuple(checks), win, extras)


def build(family_id: str, *, q=None, b=None, window=None, **constants) -> Solution:
    """Construct a family member.

    Parameters
    ----------
    family_id : str
        Registered id, see :func:`family_index_table`.
    q, b : optional
        Override the real-test-mode defaults.
    window : (float, float), optional
        ``z`` interval for the checks; defaults per family.
    **constants
        Family constants overriding the defaults.

    Raises
    ------
    UnknownFamily
        For unregistered ids.
    ValidationError
        For unknown constant keys (the message lists the accepted keys) or
        constraint violations reported by the constructors.

    Examples
    --------
    >>> sol = build("lx.c2zero", sigma=0)
    >>> abs(sol.P(1.5) - 1.0) < 1e-15
    True
    """
    return build_from_spec(make_spec(family_id, q=q, b=b, **constants), window=window)


def family_index_table() -> str:
    """Markdown table of the registered families."""
    rows = ["| id | case | default q | description | accepted constants |",
            "|---|---|---|---|---|"]
    for fid, info in FAMILIES.items():
        rows.append(f"| `{fid}` | {info.case.value} | {info.q:g} | {info.description} | "
                    f"{', '.join(info.accepted_keys)} |")
    return "\n".join(rows)


__all__ = ["Check", "Solution", "FamilyInfo", "FAMILIES", "family", "make_spec", "build",
           "build_from_spec", "family_index_table"]
