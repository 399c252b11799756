"""Travelling-wave families ``Psi = P(x - c4 t)``, ``Phi = Q e^{c6 t}``.

With ``alpha = c4 / b`` the reduced wave equation integrates once to
``P' = alpha P^q + beta P^(q-1)``.  The general solution is written with
generalized tangents (branches ``r1`` and ``r2``); special indices give
elementary closed forms or implicit relations.
"""

from __future__ import annotations

import cmath
import math
from enum import Enum

from ..branch import cpow
from ..errors import PoleError, ValidationError
from ..gtf import GtfParams, sin_cos_pq, tan_pq
from .core import Case, CurveFn, CurveKind, ImplicitCurve, ReductionSpec, _real_if_possible


class GtfBranch(str, Enum):
    """Branch of the generalized-tangent travelling wave."""

    R1 = "r1"
    R2 = "r2"


class PolynomialCase(str, Enum):
    """Travelling waves with elementary or implicit closed forms."""

    Q32_TANH = "q32_tanh"
    Q32_TAN = "q32_tan"
    Q0_IMPLICIT = "q0_implicit"
    Q12_IMPLICIT = "q12_implicit"
    INTEGER_Q_IMPLICIT = "integer_q_implicit"


class Trig(str, Enum):
    HYPERBOLIC = "hyperbolic"
    CIRCULAR = "circular"


def _check_case(spec: ReductionSpec):
    if spec.case is not Case.TRAVELLING_WAVE:
        raise ValidationError("travelling-wave constructor needs a travelling-wave spec")


def _pow_or_pole(w: complex, s: float, where: str) -> complex:
    try:
        return cpow(w, s)
    except ZeroDivisionError as exc:
        raise PoleError(f"{where}: zero raised to a negative power") from exc


def gtf_phase(spec: ReductionSpec, branch) -> tuple[complex, float]:
    """Scale ``gamma`` of the tangent argument and the GTF index ``a``.

    ``r1``: ``gamma1 = alpha^(2-q) (2-q) / beta^(1-q)``, ``a = 1/(2-q)``.
    ``r2``: ``gamma2 = beta^(q-1) (1-q) / alpha^(q-2)``, ``a = 1/(q-1)``.
    """
    q = spec.q
    alpha, beta = spec.c("alpha"), spec.c("beta")
    if alpha == 0 or beta == 0:
        raise ValidationError("generalized-tangent waves need alpha != 0 and beta != 0")
    if GtfBranch(branch) is GtfBranch.R1:
        return cpow(alpha, 2 - q) * (2 - q) / cpow(beta, 1 - q), 1.0 / (2.0 - q)
    return cpow(beta, q - 1) * (1 - q) / cpow(alpha, q - 2), 1.0 / (q - 1.0)


def tw_P_gtf(spec: ReductionSpec, branch) -> CurveFn:
    """Generalized-tangent travelling wave.

    Parameters
    ----------
    spec : ReductionSpec
        Travelling-wave spec with ``alpha``, ``beta`` and optional ``z0``.
    branch : {'r1', 'r2'}
        ``r1``: ``P = (beta/alpha) tan_a(gamma1 (z+z0))^(1/(2-q))`` with
        ``a = 1/(2-q)``, requires ``q < 2``.
        ``r2``: ``P = (beta/alpha) tan_a(gamma2 (z+z0))^(1/(1-q))`` with
        ``a = 1/(q-1)``, requires ``q > 1``.

    Returns
    -------
    CurveFn

    Raises
    ------
    ValidationError
        If ``q`` is outside the branch's range.
    PoleError
        At evaluation, on poles of the generalized tangent (or its zeros
        when the outer exponent is negative).

    Examples
    --------
    >>> s = ReductionSpec(Case.TRAVELLING_WAVE, 1.5, 1.0, {"alpha": 1, "beta": 1})
    >>> P = tw_P_gtf(s, "r1")
    >>> abs(P(0.5) - math.tan(0.25) ** 2) < 1e-12
    True
    """
    _check_case(spec)
    branch = GtfBranch(branch)
    q = spec.q
    if branch is GtfBranch.R1 and not q < 2:
        raise ValidationError("branch r1 requires q < 2")
    if branch is GtfBranch.R2 and not q > 1:
        raise ValidationError("branch r2 requires q > 1")
    gamma, a = gtf_phase(spec, branch)
    params = GtfParams.single(a)
    ratio = spec.c("beta") / spec.c("alpha")
    z0 = spec.c("z0", 0.0)
    outer = 1.0 / (2.0 - q) if branch is GtfBranch.R1 else 1.0 / (1.0 - q)

    def P(z):
        zt = gamma * (z + z0)
        tn = tan_pq(_real_if_possible(zt), params).value
        return ratio * _pow_or_pole(tn, outer, "generalized tangent wave")

    singular = ((-z0.real - 1e-6, -z0.real + 1e-6),) if outer < 0 else ()
    return CurveFn(P, CurveKind.CLOSED, f"tw.gtf.{branch.value}.P", singular)


def tw_Q_gtf(spec: ReductionSpec) -> CurveFn:
    """Auxiliary field of the ``r2`` wave for ``c6 = 0``.

    ``Q = K1 (alpha^(q-2)/beta^(q-1)) [sin_a(zt) cos_a(zt)^((2-q)/(q-1)) - zt] + K2``
    with ``a = 1/(q-1)`` and ``zt = gamma2 (z + z0)``.

    Examples
    --------
    >>> s = ReductionSpec(Case.TRAVELLING_WAVE, 2.5, 1.0,
    ...                   {"alpha": 1, "beta": 1, "K1": 0, "K2": 3})
    >>> tw_Q_gtf(s)(-1.0)
    (3+0j)
    """
    _check_case(spec)
    q = spec.q
    if not q > 1:
        raise ValidationError("the r2 auxiliary field requires q > 1")
    if spec.c("c6", 0.0) != 0:
        raise ValidationError("the generalized-tangent auxiliary field requires c6 = 0")
    gamma, a = gtf_phase(spec, GtfBranch.R2)
    params = GtfParams.single(a)
    alpha, beta = spec.c("alpha"), spec.c("beta")
    K1, K2 = spec.c("K1", 1.0), spec.c("K2", 0.0)
    z0 = spec.c("z0", 0.0)
    pref = K1 * cpow(alpha, q - 2) / cpow(beta, q - 1)
    cexp = (2.0 - q) / (q - 1.0)

    def Q(z):
        if K1 == 0:
            return K2
        zt = gamma * (z + z0)
        s, c = sin_cos_pq(_real_if_possible(zt), params)
        return pref * (s.value * _pow_or_pole(c.value, cexp, "auxiliary field") - zt) + K2

    return CurveFn(Q, CurveKind.CLOSED, "tw.gtf.r2.Q")


def tw_density_closed(spec: ReductionSpec, x: float, t: float) -> float:
    """Printed closed-form travelling-wave density (unnormalised).

    ``Re{(beta^(2-q)/alpha) tan_a(zt)^(1/(1-q)) (K1 alpha^(q-2) s c^((2-q)/(q-1))
    - K1 alpha^(q-2) zt + K2 beta^(q-1))}`` with ``z = x - alpha b t``.
    """
    q = spec.q
    gamma, a = gtf_phase(spec, GtfBranch.R2)
    params = GtfParams.single(a)
    alpha, beta = spec.c("alpha"), spec.c("beta")
    K1, K2 = spec.c("K1", 1.0), spec.c("K2", 0.0)
    z0 = spec.c("z0", 0.0)
    z = x - alpha * spec.b * t
    zt = gamma * (z + z0)
    s, c = sin_cos_pq(_real_if_possible(zt), params)
    tn = s.value / c.value
    aq = cpow(alpha, q - 2)
    bracket = (K1 * aq * s.value * _pow_or_pole(c.value, (2 - q) / (q - 1), "density")
               - K1 * aq * zt + K2 * cpow(beta, q - 1))
    val = cpow(beta, 2 - q) / alpha * _pow_or_pole(tn, 1 / (1 - q), "density") * bracket
    return val.real


# ---------------------------------------------------------------------------
# elementary and implicit cases


def q32_constants(spec: ReductionSpec, trig) -> tuple[complex, complex]:
    """``(k0, k1)`` of the q = 3/2 waves from ``alpha``, ``beta``.

    Hyperbolic: ``2 k1 + alpha k0 = 0``, ``beta = 2 k0 k1``.
    Circular: ``2 k1 - alpha k0 = 0``, ``beta = 2 k0 k1``.
    """
    alpha, beta = spec.c("alpha"), spec.c("beta")
    if alpha == 0:
        raise ValidationError("q = 3/2 waves need alpha != 0")
    prod = alpha * beta
    if Trig(trig) is Trig.HYPERBOLIC:
        if prod.imag == 0 and prod.real >= 0:
            raise ValidationError("the tanh wave requires alpha*beta < 0")
        k0 = cmath.sqrt(-beta / alpha)
        return k0, -alpha * k0 / 2
    if prod.imag == 0 and prod.real <= 0:
        raise ValidationError("the tan wave requires alpha*beta > 0")
    k0 = cmath.sqrt(beta / alpha)
    return k0, alpha * k0 / 2


def _require_q(spec: ReductionSpec, q: float, label: str):
    if spec.q != q:
        raise ValidationError(f"{label} requires q = {q}, got {spec.q}")


def _real_constants(spec: ReductionSpec, names) -> list[float]:
    out = []
    for n in names:
        v = spec.c(n, 0.0) if n == "z0" else spec.c(n)
        if v.imag != 0:
            raise ValidationError(f"implicit waves are solved in real arithmetic; {n} must be real")
        out.append(v.real)
    return out


def tw_P_polynomial(spec: ReductionSpec, case) -> CurveFn:
    """Travelling waves for the elementary indices ``q = 3/2, 0, 1/2`` and integer ``q >= 3``.

    Parameters
    ----------
    spec : ReductionSpec
    case : PolynomialCase
        ``q32_tanh``/``q32_tan``: ``P = k0^2 tanh^2(k1 z + z0)`` or the
        ``tan`` analogue.  ``q0_implicit``: ``alpha P - beta log(beta + alpha P)
        = alpha^2 (z + z0)``.  ``q12_implicit``: with ``P = u^-2``,
        ``1/u + (sqrt(alpha beta)/alpha) arctan(beta u / sqrt(alpha beta)) =
        alpha (z + z0)/2`` (``arctanh`` form when ``alpha beta < 0``).
        ``integer_q_implicit``: the logarithm-plus-power-sum relation.

    Returns
    -------
    CurveFn
        Closed kind for ``q = 3/2``, implicit kind otherwise.

    Raises
    ------
    BracketError
        At evaluation, when no root lies in the configured bracket.
    """
    _check_case(spec)
    case = PolynomialCase(case)
    z0c = spec.c("z0", 0.0)
    if case in (PolynomialCase.Q32_TANH, PolynomialCase.Q32_TAN):
        _require_q(spec, 1.5, "the q = 3/2 wave")
        trig = Trig.HYPERBOLIC if case is PolynomialCase.Q32_TANH else Trig.CIRCULAR
        k0, k1 = q32_constants(spec, trig)
        fn = cmath.tanh if trig is Trig.HYPERBOLIC else cmath.tan

        def P(z):
            return k0 * k0 * fn(k1 * z + z0c) ** 2

        return CurveFn(P, CurveKind.CLOSED, f"tw.{case.value}.P")

    alpha, beta, z0 = _real_constants(spec, ("alpha", "beta", "z0"))
    if alpha == 0 or beta == 0:
        raise ValidationError("implicit waves need alpha != 0 and beta != 0")
    lo_user = spec.r("P_lo", 0.0) if spec.has("P_lo") else None
    hi_user = spec.r("P_hi", 0.0) if spec.has("P_hi") else None

    def bracket(lo_default, hi_default=1e4):
        return (lo_user if lo_user is not None else lo_default,
                hi_user if hi_user is not None else hi_default)

    if case is PolynomialCase.Q0_IMPLICIT:
        _require_q(spec, 0.0, "the q = 0 wave")
        lo = max(0.0, -beta / alpha)
        lo += 1e-12 * max(1.0, abs(lo))

        def rel(p, z):
            arg = beta + alpha * p
            if arg <= 0:
                return math.nan
            return alpha * p - beta * math.log(arg) - alpha * alpha * (z + z0)

        return ImplicitCurve(rel, bracket(lo), name="tw.q0.P", geometric=lo > 0)

    if case is PolynomialCase.Q12_IMPLICIT:
        _require_q(spec, 0.5, "the q = 1/2 wave")
        prod = alpha * beta
        if prod > 0:
            root = math.sqrt(prod)

            def rel(p, z):
                u = p ** -0.5
                return 1.0 / u + root / alpha * math.atan(beta * u / root) - alpha * (z + z0) / 2
            lo = 1e-12
        else:
            root = math.sqrt(-prod)
            lo = abs(beta / alpha) * (1 + 1e-12)

            def rel(p, z):
                u = p ** -0.5
                return 1.0 / u + root / alpha * math.atanh(beta * u / root) - alpha * (z + z0) / 2

        return ImplicitCurve(rel, bracket(lo, 1e6), name="tw.q12.P", geometric=True)

    n = spec.q
    if not (float(n).is_integer() and n >= 3):
        raise ValidationError("the integer-index wave requires integer q >= 3")
    n = int(n)
    r = -alpha / beta
    lo = max(0.0, -beta / alpha)
    lo += 1e-12 * max(1.0, abs(lo))

    def rel(p, z):
        arg = 1.0 + beta / (alpha * p)
        if arg <= 0:
            return math.nan
        acc = math.log(arg) + sum(r ** -j / (j * p ** j) for j in range(1, n - 1))
        return r ** (n - 2) * acc + beta * (z + z0)

    return ImplicitCurve(rel, bracket(lo), name=f"tw.integer.q{n}.P", geometric=lo > 0)


def integer_q_z_of_P(spec: ReductionSpec, p: float) -> float:
    """Invert the integer-index relation for ``z`` given ``P`` (window helper)."""
    n = int(spec.q)
    alpha, beta, z0 = spec.r("alpha"), spec.r("beta"), spec.r("z0", 0.0)
    r = -alpha / beta
    acc = math.log(1.0 + beta / (alpha * p)) + sum(r ** -j / (j * p ** j) for j in range(1, n - 1))
    return -(r ** (n - 2)) * acc / beta - z0


def tw_Q_q32(spec: ReductionSpec, trig) -> CurveFn:
    """Auxiliary field of the ``q = 3/2`` waves for ``c6 = 0``.

    ``Q = K z/2 + (K/(4 k1)) sinh(2 (k1 z + z0)) + Ktilde`` (hyperbolic) or
    the ``sin`` analogue (circular).

    Examples
    --------
    >>> s = ReductionSpec(Case.TRAVELLING_WAVE, 1.5, 1.0,
    ...                   {"alpha": -1, "beta": 1, "K": 0, "Ktilde": 2})
    >>> tw_Q_q32(s, "hyperbolic")(0.7)
    (2+0j)
    """
    _check_case(spec)
    _require_q(spec, 1.5, "the q = 3/2 auxiliary field")
    if spec.c("c6", 0.0) != 0:
        raise ValidationError("the q = 3/2 auxiliary field requires c6 = 0")
    trig = Trig(trig)
    _, k1 = q32_constants(spec, trig)
    K, Kt = spec.c("K", 1.0), spec.c("Ktilde", 0.0)
    z0 = spec.c("z0", 0.0)
    fn = cmath.sinh if trig is Trig.HYPERBOLIC else cmath.sin

    def Q(z):
        return K * z / 2 + K / (4 * k1) * fn(2 * (k1 * z + z0)) + Kt

    return CurveFn(Q, CurveKind.CLOSED, f"tw.q32.{trig.value}.Q")


__all__ = [
    "GtfBranch", "PolynomialCase", "Trig", "gtf_phase", "tw_P_gtf", "tw_Q_gtf",
    "tw_density_closed", "q32_constants", "tw_P_polynomial", "tw_Q_q32",
    "integer_q_z_of_P",
]
