"""Log(x) families ``Psi = P(z) x^(-2/(q-1))``, ``Phi = Q(z) x^(-sigma)``, ``z = t - c2 log x``.

``c2 = 0`` separates variables and has a closed power-law solution.  For
``c2 != 0`` the slope ``w(P) = P'`` obeys a first-order equation that is
linear at ``q = 3`` (giving an implicit quadrature for ``P``) and an Abel
equation of the second kind at ``q = 7/3``.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import solve_ivp

from ..branch import cpow
from ..errors import NonConvergence, PoleError, ValidationError
from ..numerics import integrate
from .core import Case, CurveFn, CurveKind, ImplicitCurve, ReductionSpec


def _check_case(spec: ReductionSpec):
    if spec.case is not Case.LOG_X:
        raise ValidationError("log(x) constructor needs a log(x) spec")


def _pow(w, s, where):
    try:
        return cpow(w, s)
    except ZeroDivisionError as exc:
        raise PoleError(f"{where}: zero raised to a negative power") from exc


def _z0(spec: ReductionSpec) -> complex:
    """Shift ``z0``; ``t0`` is accepted as its alias in the density's notation."""
    if spec.has("t0") and spec.has("z0") and spec.c("t0") != spec.c("z0"):
        raise ValidationError("t0 and z0 name the same shift and must agree")
    if spec.has("t0"):
        return spec.c("t0")
    return spec.c("z0", 0.0)


def c2zero_Q_exponent(spec: ReductionSpec) -> complex:
    """``sigma (sigma+1) (q-1) / (2 (q-3))``."""
    q = spec.q
    sigma = spec.c("sigma", 0.0)
    return sigma * (sigma + 1) * (q - 1) / (2 * (q - 3))


def lx_c2zero(spec: ReductionSpec) -> tuple[CurveFn, CurveFn]:
    """Separable ``c2 = 0`` solution.

    ``P = (2b(q-3)(z+z0)/(q-1))^(1/(q-1))`` and
    ``Q = K (z+z0)^(sigma(sigma+1)(q-1)/(2(q-3)))``.

    Returns
    -------
    (CurveFn, CurveFn)
        ``P`` and ``Q``; the density is :func:`c2zero_density_closed`.

    Examples
    --------
    >>> s = ReductionSpec(Case.LOG_X, 4.0, 1.5, {"sigma": 0, "K": 2})
    >>> P, Q = lx_c2zero(s)
    >>> abs(P(1.0) - 1.0) < 1e-15, Q(3.0)
    (True, (2+0j))
    """
    _check_case(spec)
    q, b = spec.q, spec.b
    if spec.c("c2", 0.0) != 0:
        raise ValidationError("the separable log(x) solution requires c2 = 0")
    if q == 3:
        raise ValidationError("the separable log(x) solution degenerates at q = 3")
    z0 = _z0(spec)
    K = spec.c("K", 1.0)
    base = 2 * b * (q - 3) / (q - 1)
    expo = c2zero_Q_exponent(spec)

    def P(z):
        return _pow(base * (z + z0), 1.0 / (q - 1.0), "separable log(x) wave")

    def Q(z):
        if expo == 0:
            return K
        return K * _pow(z + z0, expo, "separable log(x) auxiliary field")

    sing = ((-z0.real - 1e-9, -z0.real + 1e-9),)
    return (CurveFn(P, CurveKind.CLOSED, "lx.c2zero.P", sing),
            CurveFn(Q, CurveKind.CLOSED, "lx.c2zero.Q", sing))


def c2zero_density_closed(spec: ReductionSpec, x: float, t: float) -> float:
    """Printed ``c2 = 0`` density (unnormalised).

    ``Re[K (2b(q-3)/(q-1))^(1/(q-1)) (t+t0)^(1/(q-1) + s) x^(-2/(q-1) - sigma)]``
    with ``s = sigma(sigma+1)(q-1)/(2(q-3))``.
    """
    q, b = spec.q, spec.b
    sigma = spec.c("sigma", 0.0)
    K = spec.c("K", 1.0)
    t0 = _z0(spec)
    val = (K * cpow(2 * b * (q - 3) / (q - 1), 1 / (q - 1))
           * cpow(t + t0, 1 / (q - 1) + c2zero_Q_exponent(spec))
           * cpow(x, -2 / (q - 1) - sigma))
    return val.real


# ---------------------------------------------------------------------------
# c2 != 0


def q3_w(spec: ReductionSpec, p):
    """Slope ``w(P) = K P^2 - P^3/(b c2^2) - P/c2`` at ``q = 3``."""
    b, c2, K = spec.b, spec.c("c2"), spec.c("K", 0.0)
    return K * p * p - p ** 3 / (b * c2 * c2) - p / c2


def q3_poles(spec: ReductionSpec) -> list[float]:
    """Real roots of ``P^3 - K b c2^2 P^2 + b c2 P`` (poles of the quadrature)."""
    b, c2, K = spec.b, spec.c("c2"), spec.c("K", 0.0)
    roots = np.roots([1.0, -K * b * c2 * c2, b * c2, 0.0])
    return sorted(r.real for r in roots if abs(r.imag) < 1e-12)


def lx_c2nonzero_q3(spec: ReductionSpec, *, P_ref: float | None = None) -> ImplicitCurve:
    """Implicit ``q = 3`` solution from ``-b c2^2 int_{P_ref}^P dp / D(p) = z + z0``.

    ``D(p) = p^3 - K b c2^2 p^2 + b c2 p``.  The integral is evaluated by
    adaptive quadrature and inverted by bracketed root finding between the
    real roots of ``D``, which are poles of the quadrature path.

    Raises
    ------
    ValidationError
        For ``c2 = 0`` or complex constants.
    """
    _check_case(spec)
    if spec.q != 3:
        raise ValidationError("this log(x) quadrature family requires q = 3")
    c2 = spec.c("c2", 0.0)
    if c2 == 0:
        raise ValidationError("the q = 3 log(x) quadrature requires c2 != 0 (it divides by c2)")
    if not spec.real_mode:
        raise ValidationError("the q = 3 log(x) quadrature is solved in real arithmetic")
    b, c2r, K = spec.b.real, c2.real, spec.r("K", 0.0)
    z0 = _z0(spec).real
    p_ref = spec.r("P_ref", 1.0) if P_ref is None else float(P_ref)
    poles = q3_poles(spec)
    if any(abs(p_ref - r) < 1e-12 for r in poles):
        raise ValidationError("P_ref sits on a pole of the quadrature")
    lo = max([r for r in poles if r < p_ref], default=-1e6)
    hi = min([r for r in poles if r > p_ref], default=1e6)
    pad = 1e-9 * max(1.0, abs(lo), abs(hi))
    lo, hi = lo + pad, hi - pad

    def integrand(p):
        return 1.0 / (p ** 3 - K * b * c2r * c2r * p * p + b * c2r * p)

    def rel(p, z):
        return (-b * c2r * c2r * integrate(integrand, p_ref, p).real) - (z + z0)

    curve = ImplicitCurve(rel, (lo, hi), name="lx.q3.P", scan=8, geometric=lo > 0)
    curve.poles = tuple(poles)
    return curve


def q73_coefficient(spec: ReductionSpec, xi) -> complex:
    """Right-hand side of the canonical Abel equation ``s s' - s = R(xi)``.

    ``R = (3b/4) (-b c2^2 xi)^(-5/3)``, which in real mode equals
    ``-(3/4) (-b)^(-2/3) (c2^2)^(-5/3) xi^(-5/3)``.
    """
    b, c2 = spec.b, spec.c("c2")
    return 0.75 * b * cpow(-b * c2 * c2 * xi, -5.0 / 3.0)


class AbelCanonical:
    """Numeric solution ``s(xi)`` of the canonical ``q = 7/3`` Abel equation.

    Attributes
    ----------
    s : CurveFn
        ``s(xi)`` from a DOP853 integration with dense output.
    w : CurveFn
        Slope ``w(P) = s(xi(P)) P^(4/3)`` with ``xi = -P/(b c2^2)``.
    window : (float, float)
        ``xi`` interval of the integration.
    """

    def __init__(self, spec: ReductionSpec, xi0: float, s0: complex, xi1: float,
                 rtol: float = 1e-12):
        self.spec = spec
        b, c2 = spec.b, spec.c("c2")
        span = xi1 - xi0
        ext = (xi0, xi1 + 0.02 * span)

        def rhs(x, y):
            return [1.0 + q73_coefficient(spec, x) / y[0]]

        s0 = complex(s0)
        sol = solve_ivp(rhs, ext, [s0], method="DOP853", rtol=rtol, atol=1e-14,
                        dense_output=True)
        if not sol.success:
            raise NonConvergence(f"canonical Abel integration failed: {sol.message}")
        back = solve_ivp(rhs, (xi0, xi0 - 0.02 * span), [s0], method="DOP853",
                         rtol=rtol, atol=1e-14, dense_output=True)
        self._fwd, self._back = sol, back
        self.window = (float(xi0), float(xi1))

        def s(x):
            x = complex(x).real
            return complex((self._fwd if x >= xi0 else self._back).sol(x)[0])

        self.s = CurveFn(s, CurveKind.QUADRATURE, "lx.q73.s")
        scale = -1.0 / (b * c2 * c2)

        def w(p):
            return s(_real(scale * p)) * cpow(p, 4.0 / 3.0)

        self.w = CurveFn(w, CurveKind.QUADRATURE, "lx.q73.w")
        self.P_window = tuple(sorted((_real(x / scale) for x in self.window)))


def _real(v: complex) -> float:
    v = complex(v)
    if abs(v.imag) > 1e-12 * max(1.0, abs(v)):
        raise ValidationError("the q = 7/3 substitution chain needs real xi; use real b and c2")
    return v.real


def lx_c2nonzero_q73(spec: ReductionSpec) -> AbelCanonical:
    """Canonical Abel data at ``q = 7/3`` with a numeric ``s(xi)``.

    Initial data ``xi0`` (default 1), ``s0`` (default 2) and end point
    ``xi1`` (default 3) are read from the spec.
    """
    _check_case(spec)
    if abs(spec.q - 7.0 / 3.0) > 1e-14:
        raise ValidationError("the Abel log(x) family requires q = 7/3")
    if spec.c("c2", 0.0) == 0:
        raise ValidationError("the Abel log(x) family requires c2 != 0")
    xi0, xi1 = spec.r("xi0", 1.0), spec.r("xi1", 3.0)
    if not xi1 > xi0:
        raise ValidationError("xi1 must exceed xi0")
    s0 = spec.c("s0", 2.0)
    if s0 == 0:
        raise ValidationError("s0 must be nonzero (the Abel equation divides by s)")
    return AbelCanonical(spec, xi0, s0, xi1)


def lx_c2nonzero(spec: ReductionSpec, qcase: str):
    """Dispatch the ``c2 != 0`` constructors by ``qcase`` (``"q3"`` or ``"q73"``)."""
    if qcase == "q3":
        return lx_c2nonzero_q3(spec)
    if qcase == "q73":
        return lx_c2nonzero_q73(spec)
    raise ValidationError(f"unknown log(x) case {qcase!r}; expected 'q3' or 'q73'")


__all__ = ["lx_c2zero", "c2zero_density_closed", "lx_c2nonzero", "lx_c2nonzero_q3", "q3_w",
           "q3_poles", "q73_coefficient", "AbelCanonical", "lx_c2nonzero_q73"]
