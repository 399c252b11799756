"""Scaling families ``Psi = P(z) t^((1-2 eps)/(q-1))``, ``Phi = Q(z) t^(-sigma)``, ``z = x t^(-eps)``.

Three exact branches are implemented:

* ``eps = 1/(3-q)`` with vanishing integration constant (separable form);
* ``eps = 1/(2(2-q))`` with ``gamma = 0`` (Bernoulli form, and its
  ``q = 3`` logarithmic limit);
* ``eps = 1/(2(2-q))``, ``q = 5/2`` with ``gamma != 0`` (generalized tanh).
"""

from __future__ import annotations

import cmath
import math

from ..branch import cpow
from ..errors import DomainError, PoleError, PoleParameter, ValidationError
from ..gtf import GtfParams, arcsinh_pq, sinh_pq, tanh_pq
from ..numerics import AnchoredIntegral
from ..specialfn import gamma_upper, hyp2f1
from ..specialfn._gamma import is_nonpositive_integer
from .core import Case, CurveFn, CurveKind, ReductionSpec, _real_if_possible


def _check_case(spec: ReductionSpec):
    if spec.case is not Case.SCALING:
        raise ValidationError("scaling constructor needs a scaling spec")


def _check_eps(spec: ReductionSpec, eps: float, label: str):
    if spec.has("eps") and abs(spec.c("eps") - eps) > 1e-14:
        raise ValidationError(f"{label} requires eps = {eps}, got {spec.c('eps')}")


def _pow(w, s, where):
    try:
        return cpow(w, s)
    except ZeroDivisionError as exc:
        raise PoleError(f"{where}: zero raised to a negative power") from exc


def beta0_eps(q: float) -> float:
    return 1.0 / (3.0 - q)


def bernoulli_eps(q: float) -> float:
    return 1.0 / (2.0 * (2.0 - q))


def sc_P_beta0(spec: ReductionSpec) -> CurveFn:
    """Separable scaling wave, ``P^(1-q) = ((1-q)/b) (z^2/(2(3-q)) + alpha)``.

    Raises
    ------
    ValidationError
        For ``q = 3`` (no such scaling) or an ``eps`` other than ``1/(3-q)``.

    Examples
    --------
    >>> s = ReductionSpec(Case.SCALING, 2.0, -1.0, {"alpha": 1})
    >>> abs(sc_P_beta0(s)(0.0) - 1.0) < 1e-15
    True
    """
    _check_case(spec)
    q, b = spec.q, spec.b
    if q == 3:
        raise ValidationError("the separable scaling wave requires q != 3")
    _check_eps(spec, beta0_eps(q), "the separable scaling wave")
    alpha = spec.c("alpha")

    def P(z):
        inner = (1 - q) / b * (z * z / (2 * (3 - q)) + alpha)
        if q == 2:
            if inner == 0:
                raise PoleError("separable scaling wave: bracket vanishes")
            return 1.0 / inner
        return _pow(inner, 1.0 / (1.0 - q), "separable scaling wave")

    return CurveFn(P, CurveKind.CLOSED, "sc.beta0.P")


def sc_Q_sigma_m1(spec: ReductionSpec) -> CurveFn:
    """Auxiliary field ``Q = z^2 + 2 alpha (1-q)`` of the separable wave (``sigma = -1``)."""
    _check_case(spec)
    if spec.c("sigma", -1.0) != -1:
        raise ValidationError("this auxiliary field requires sigma = -1")
    q = spec.q
    alpha = spec.c("alpha")
    return CurveFn(lambda z: z * z + 2 * alpha * (1 - q), CurveKind.CLOSED, "sc.beta0.Q")


def beta0_density_closed(spec: ReductionSpec, x: float, t: float) -> float:
    """Printed density of the separable wave (unnormalised).

    ``Re{[((1-q)/b)(z^2/(2(3-q)) + alpha)]^(1/(1-q)) [z^2 + 2 alpha (1-q)] t^((q-2)/(q-3))}``
    with ``z = x t^(1/(q-3))``.
    """
    q, b = spec.q, spec.b
    alpha = spec.c("alpha")
    z = x * cpow(t, 1.0 / (q - 3.0))
    inner = (1 - q) / b * (z * z / (2 * (3 - q)) + alpha)
    val = _pow(inner, 1 / (1 - q), "density") * (z * z + 2 * alpha * (1 - q)) \
        * cpow(t, (q - 2) / (q - 3))
    return val.real


# ---------------------------------------------------------------------------
# Bernoulli branch (gamma = 0)


def bernoulli_c(spec: ReductionSpec) -> complex:
    """Coefficient ``(q-1)/(2 b (q-3))`` of ``z^2`` in ``P^(1-q)``."""
    q = spec.q
    return (q - 1) / (2 * spec.b * (q - 3))


def bernoulli_M(spec: ReductionSpec, z) -> complex:
    """``M = P^(1-q) = (q-1) z^2/(2b(q-3)) + K z^((q-1)/(q-2))`` (``q != 3``)."""
    q = spec.q
    return bernoulli_c(spec) * z * z + spec.c("K") * _pow(z, (q - 1) / (q - 2), "M")


def _q3_log(z, C: complex) -> complex:
    """``log z + C`` of the q = 3 branch; its zero is the boundary of the wave."""
    L = cmath.log(z) + C
    if abs(L) <= 1e-12 * max(1.0, abs(C)):
        raise PoleError(f"log z + C vanishes at z = {z}")
    return L


def sc_P_gamma0(spec: ReductionSpec) -> CurveFn:
    """Bernoulli-branch scaling wave.

    ``q != 3``: ``P^(1-q) = (q-1) z^2/(2b(q-3)) + K z^((q-1)/(q-2))``.
    ``q = 3``: ``P^(-2) = z^2 (log z + C)/b``.

    Raises
    ------
    ValidationError
        For ``q = 2`` or a mismatched ``eps``.
    """
    _check_case(spec)
    q, b = spec.q, spec.b
    if q == 2:
        raise ValidationError("the Bernoulli scaling branch requires q != 2")
    _check_eps(spec, bernoulli_eps(q), "the Bernoulli scaling branch")
    if q == 3:
        C = spec.c("C", 0.0)

        def P3(z):
            return _pow(z * z * _q3_log(z, C) / b, -0.5, "q = 3 Bernoulli wave")

        sing = (math.exp(-C.real) - 1e-9, math.exp(-C.real) + 1e-9) if C.imag == 0 else None
        return CurveFn(P3, CurveKind.CLOSED, "sc.bernoulli.q3.P",
                       (sing,) if sing else ())

    def P(z):
        return _pow(bernoulli_M(spec, z), 1.0 / (1.0 - q), "Bernoulli wave")

    return CurveFn(P, CurveKind.CLOSED, "sc.bernoulli.P", ((-1e-9, 1e-9),))


def bernoulli_Q_prime(spec: ReductionSpec, z) -> complex:
    """``Q' = K1 [(q-1)/(2b(q-3)) z^((q-3)/(q-2)) + K]^(1/(q-1))``."""
    q = spec.q
    inner = bernoulli_c(spec) * _pow(z, (q - 3) / (q - 2), "Q'") + spec.c("K")
    return spec.c("K1", 1.0) * _pow(inner, 1.0 / (q - 1.0), "Q'")


def bernoulli_hyp_params(q: float) -> tuple[float, float, float]:
    """``(a, b, c)`` of the hypergeometric primitive of ``Q'``."""
    return (q - 2) / (q - 3), 1 / (1 - q), (2 * q - 5) / (q - 3)


def bernoulli_hyp_argument(spec: ReductionSpec, z, *, sign: float = -1.0) -> complex:
    """Argument ``-(q-1)/(2bK(q-3)) z^((q-3)/(q-2))`` of the primitive.

    ``sign=+1`` gives the argument without the minus sign, which does not
    differentiate back to ``Q'`` (kept for the negative test).
    """
    q = spec.q
    return sign * bernoulli_c(spec) / spec.c("K") * _pow(z, (q - 3) / (q - 2), "argument")


def sc_Q_gamma0(spec: ReductionSpec, *, anchor: float | None = None,
                force_quadrature: bool = False) -> CurveFn:
    """Auxiliary field of the Bernoulli branch (``sigma = 0``).

    ``q != 3``: ``Q = K1 K^(1/(q-1)) z 2F1((q-2)/(q-3), 1/(1-q); (2q-5)/(q-3); w) + K2``
    with ``w = -(q-1) z^((q-3)/(q-2)) / (2bK(q-3))``.  When the third
    parameter is a non-positive integer (e.g. ``q = 5/2``) the primitive of
    ``Q'`` is taken by quadrature from ``anchor`` instead.
    ``q = 3``: ``Q = K1 Gamma(3/2, -log z - C) + K2``.

    Parameters
    ----------
    spec : ReductionSpec
    anchor : float, optional
        Base point of the quadrature primitive (default ``1``).
    force_quadrature : bool
        Use the quadrature primitive even when the closed form exists.
    """
    _check_case(spec)
    q = spec.q
    if spec.c("sigma", 0.0) != 0:
        raise ValidationError("the Bernoulli auxiliary field requires sigma = 0")
    K1, K2 = spec.c("K1", 1.0), spec.c("K2", 0.0)
    if K1 == 0:
        return CurveFn(lambda z: K2, CurveKind.CLOSED, "sc.bernoulli.Q")
    if q == 3:
        C = spec.c("C", 0.0)

        def Q3(z):
            w = -_q3_log(z, C)
            # drop the -0j of a real argument so negative w sits on the principal side
            w = complex(w.real, w.imag + 0.0)
            return K1 * gamma_upper(1.5, w) + K2

        return CurveFn(Q3, CurveKind.CLOSED, "sc.bernoulli.q3.Q")
    ha, hb, hc = bernoulli_hyp_params(q)
    if force_quadrature or is_nonpositive_integer(hc, 1e-12):
        base = 1.0 if anchor is None else float(anchor)
        prim = AnchoredIntegral(lambda u: bernoulli_Q_prime(spec, u), base)

        def Qq(z):
            return prim(complex(z).real) + K2

        return CurveFn(Qq, CurveKind.QUADRATURE, "sc.bernoulli.Q")
    pref = K1 * _pow(spec.c("K"), 1.0 / (q - 1.0), "Q")

    def Q(z):
        return pref * z * hyp2f1(ha, hb, hc, bernoulli_hyp_argument(spec, z)) + K2

    return CurveFn(Q, CurveKind.CLOSED, "sc.bernoulli.Q")


def bernoulli_density_closed(spec: ReductionSpec, x: float, t: float) -> float:
    """Printed density of the Bernoulli branch (unnormalised), ``Re{P Q t^(1/(q-2))}``.

    ``z = x t^(-1/(2(2-q)))``; uses the hypergeometric primitive for
    ``q != 3`` and the incomplete gamma form at ``q = 3``.

    Raises
    ------
    PoleParameter
        When the hypergeometric form does not exist (e.g. ``q = 5/2``).
    """
    q, b = spec.q, spec.b
    z = _real_if_possible(x * cpow(t, -bernoulli_eps(q)))
    K1, K2 = spec.c("K1", 1.0), spec.c("K2", 0.0)
    if q == 3:
        C = spec.c("C", 0.0)
        L = _q3_log(z, C)
        P = _pow(z * z * L / b, -0.5, "density")
        Q = K1 * gamma_upper(1.5, complex(-L.real, -L.imag + 0.0)) + K2
        return (P * Q * t).real
    ha, hb, hc = bernoulli_hyp_params(q)
    if is_nonpositive_integer(hc, 1e-12):
        raise PoleParameter(f"no hypergeometric primitive at q = {q} (third parameter {hc})")
    P = _pow(bernoulli_M(spec, z), 1.0 / (1.0 - q), "density")
    Q = K1 * _pow(spec.c("K"), 1 / (q - 1), "density") * z \
        * hyp2f1(ha, hb, hc, bernoulli_hyp_argument(spec, z)) + K2
    return (P * Q * cpow(t, 1.0 / (q - 2.0))).real


# ---------------------------------------------------------------------------
# q = 5/2 with gamma != 0

_Q52 = GtfParams(2.0 / 3.0, 2.0 / 3.0)


def q52_constants(spec: ReductionSpec) -> tuple[complex, complex]:
    """``(A, B)`` of ``Y = A z tanh_{2/3}(B/z)^(1/3)``.

    ``A = (2 gamma b)^(-1/2)`` and ``B = -3 gamma (2 gamma b)^(1/2)``, so that
    ``2 B b A^3 = -3`` holds on every branch.
    """
    gamma, b = spec.c("gamma"), spec.b
    if gamma == 0:
        raise ValidationError("the generalized-tanh scaling wave requires gamma != 0")
    root = cmath.sqrt(2 * gamma * b)
    return 1.0 / root, -3.0 * gamma * root


def sc_Y_q52(spec: ReductionSpec) -> CurveFn:
    """``Y = P^(2-q) = A z [tanh_{2/3}(B/z)]^(1/3)``."""
    A, B = q52_constants(spec)

    def Y(z):
        if z == 0:
            raise PoleError("generalized-tanh wave is singular at z = 0", nearest=0.0)
        th = tanh_pq(_real_if_possible(B / z), _Q52).value
        return A * z * _pow(th, 1.0 / 3.0, "Y")

    return CurveFn(Y, CurveKind.CLOSED, "sc.q52.Y", ((-1e-9, 1e-9),))


def sc_P_q52(spec: ReductionSpec) -> CurveFn:
    """Generalized-tanh scaling wave at ``q = 5/2``, ``P = Y^(-2)``.

    Equivalently ``P = (2 gamma b / z^2) [tanh_{2/3}(B/z)]^(-2/3)``.

    Examples
    --------
    >>> s = ReductionSpec(Case.SCALING, 2.5, -1.0, {"gamma": -1})
    >>> P, Y = sc_P_q52(s), sc_Y_q52(s)
    >>> abs(P(2.0) ** -0.5 - Y(2.0)) < 1e-12
    True
    """
    _check_case(spec)
    if spec.q != 2.5:
        raise ValidationError("the generalized-tanh scaling wave requires q = 5/2")
    _check_eps(spec, bernoulli_eps(2.5), "the generalized-tanh scaling wave")
    Y = sc_Y_q52(spec)
    return CurveFn(lambda z: _pow(Y(z), -2.0, "P"), CurveKind.CLOSED, "sc.q52.P",
                   ((-1e-9, 1e-9),))


def sc_Q_q52(spec: ReductionSpec, *, anchor: float = 1.0) -> CurveFn:
    """``Q = K1 int_anchor^z sinh_{2/3}(B/u)^(2/3) du + K2`` by anchored quadrature.

    When ``B/z > 0`` the integral is taken in ``r = log s`` with
    ``s = sinh_{2/3}(B/u)``, where
    ``du = -B (1 + s^(2/3))^(-3/2) ds / arcsinh_{2/3}(s)^2``; each node then
    costs one forward ``arcsinh`` instead of an inversion, and the panels
    stay few although ``s`` grows quickly as ``u`` decreases.
    """
    _check_case(spec)
    if spec.c("sigma", 0.0) != 0:
        raise ValidationError("the generalized-tanh auxiliary field requires sigma = 0")
    K1, K2 = spec.c("K1", 1.0), spec.c("K2", 0.0)
    if K1 == 0:
        return CurveFn(lambda z: K2, CurveKind.CLOSED, "sc.q52.Q")
    _, B = q52_constants(spec)
    sing = ((-1e-9, 1e-9),)

    if B.imag != 0 or not B.real / anchor > 0:
        def integrand(u):
            return _pow(sinh_pq(_real_if_possible(B / u), _Q52).value, 2.0 / 3.0, "Q'")

        prim = AnchoredIntegral(integrand, anchor)
        return CurveFn(lambda z: K1 * prim(complex(z).real) + K2, CurveKind.QUADRATURE,
                       "sc.q52.Q", sing)

    Br = B.real

    def r_of(u):
        return math.log(sinh_pq(Br / u, _Q52).value.real)

    def integrand_r(r):
        s = math.exp(r)
        v = arcsinh_pq(s, _Q52).real
        return s ** (5.0 / 3.0) * (-Br) * (1.0 + s ** (2.0 / 3.0)) ** -1.5 / (v * v)

    prim = AnchoredIntegral(integrand_r, r_of(anchor))

    def Q(z):
        z = complex(z)
        if z.imag != 0 or (z.real > 0) != (anchor > 0):
            raise DomainError("the auxiliary quadrature cannot cross z = 0")
        return K1 * prim(r_of(z.real)) + K2

    return CurveFn(Q, CurveKind.QUADRATURE, "sc.q52.Q", sing)
