"""Log(t) families ``Psi = P(z) t^(1/(q-1))``, ``Phi = Q(z) t^(-sigma)``, ``z = x - c4 log t``.

For ``c4 = 0`` the squared slope ``G = P'^2`` obeys a linear equation in
``P``; its solutions give the inverse-error-function wave (``q = 3``), the
biparametric ``sinh`` wave and the Sundman-transformed polynomial
equations ``V'^2 = A V^m + V^n``.  For ``c4 != 0`` the slope equation
becomes the Abel equation ``w w_y = w + A y^(2-q)``, solved parametrically
for ``q = 3, 4, 5/2``.
"""

from __future__ import annotations

import cmath
import math
from enum import Enum
from fractions import Fraction

from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from ..branch import cpow
from ..errors import DomainError, NonConvergence, PoleError, UnsupportedPair, ValidationError
from ..gtf import GtfParams, sinh_pq
from ..specialfn import (WeierstrassInvariants, bessel_order, erf, erf_inv,
                         erf_inv_complex, weierstrass_p)
from .core import Case, CurveFn, CurveKind, ParametricCurve, ReductionSpec, _real_if_possible

_SQRT_PI = math.sqrt(math.pi)

#: The ten admissible ``(m, n)`` exponent pairs of the Sundman transform.
SUNDMAN_PAIRS = tuple((m, n) for m in range(5) for n in range(m + 1, 5))

#: Pairs with a closed-form ``V(tau)``.
SUNDMAN_CLOSED = ((1, 2), (2, 3), (0, 3))


def _check_case(spec: ReductionSpec):
    if spec.case is not Case.LOG_T:
        raise ValidationError("log(t) constructor needs a log(t) spec")


def _pow(w, s, where):
    try:
        return cpow(w, s)
    except ZeroDivisionError as exc:
        raise PoleError(f"{where}: zero raised to a negative power") from exc


def _require_c4_zero(spec: ReductionSpec, label: str):
    if spec.c("c4", 0.0) != 0:
        raise ValidationError(f"{label} requires c4 = 0")


# ---------------------------------------------------------------------------
# c4 = 0


def erf_A(spec: ReductionSpec) -> complex:
    """``A = (i / sqrt(b)) e^(b C)`` (only ``A^2 = -e^(2bC)/b`` matters)."""
    b = spec.b
    return 1j / cmath.sqrt(b) * cmath.exp(b * spec.c("C", 0.0))


def lt_P_erf(spec: ReductionSpec) -> CurveFn:
    """Inverse-error-function wave at ``q = 3``, ``c4 = 0``.

    ``P = exp{[erf^-1(1 -+ (A/sqrt(pi)) (z + z0))]^2 + b C}`` with the upper
    sign for ``sign = +1``.

    Raises
    ------
    PoleError
        At evaluation, where the ``erf^-1`` argument reaches ``+-1``.
    DomainError
        At evaluation in real arithmetic when the argument leaves (-1, 1).

    Examples
    --------
    >>> s = ReductionSpec(Case.LOG_T, 3.0, -1.0, {"C": 0.0})
    >>> P = lt_P_erf(s)
    >>> abs(P(math.sqrt(math.pi)) - 1.0) < 1e-15
    True
    """
    _check_case(spec)
    if spec.q != 3:
        raise ValidationError("the inverse-error-function wave requires q = 3")
    _require_c4_zero(spec, "the inverse-error-function wave")
    A = erf_A(spec)
    sign = spec.i("sign", 1)
    if sign not in (1, -1):
        raise ValidationError("sign must be +1 or -1")
    z0 = spec.c("z0", 0.0)
    bC = spec.b * spec.c("C", 0.0)

    def P(z):
        arg = 1.0 - sign * A / _SQRT_PI * (z + z0)
        if abs(arg.imag) <= 1e-15 * max(1.0, abs(arg)):
            y = arg.real
            if abs(y) == 1.0:
                raise PoleError("inverse error function argument reaches the boundary")
            if abs(y) > 1.0:
                raise DomainError(f"inverse error function argument {y} outside (-1, 1)")
            e = erf_inv(y)
        else:
            e = erf_inv_complex(arg)
        return cmath.exp(e * e + bC)

    sing = ()
    if A.imag == 0:
        edge = -z0.real
        other = edge + sign * 2 * _SQRT_PI / A.real
        sing = ((edge - 1e-9, edge + 1e-9), (other - 1e-9, other + 1e-9))
    return CurveFn(P, CurveKind.CLOSED, "lt.erf.P", sing)


def lt_Q_linear(spec: ReductionSpec) -> CurveFn:
    """Auxiliary field ``Q = K1 z + K2`` of the ``c4 = 0``, ``sigma = 0`` families.

    Examples
    --------
    >>> s = ReductionSpec(Case.LOG_T, 3.0, -1.0, {"K1": 2, "K2": 1})
    >>> lt_Q_linear(s)(0.5)
    (2+0j)
    """
    _check_case(spec)
    _require_c4_zero(spec, "the linear auxiliary field")
    if spec.c("sigma", 0.0) != 0:
        raise ValidationError("the linear auxiliary field requires sigma = 0")
    K1, K2 = spec.c("K1", 1.0), spec.c("K2", 0.0)
    return CurveFn(lambda z: K1 * z + K2, CurveKind.CLOSED, "lt.Q")


def sinh_A(spec: ReductionSpec) -> complex:
    """``A = 2 / (K b (q-1)(q-3))``."""
    q = spec.q
    return 2.0 / (spec.c("K", 1.0) * spec.b * (q - 1) * (q - 3))


def sinh_params(q: float) -> GtfParams:
    """GTF parameters ``(2, (q-3)/(q-2))`` of the ``sinh`` wave."""
    r = (q - 3.0) / (q - 2.0)
    if not r > 0:
        raise ValidationError("the sinh wave needs (q-3)/(q-2) > 0, i.e. q < 2 or q > 3")
    return GtfParams(2.0, r)


def lt_P_sinh(spec: ReductionSpec) -> CurveFn:
    """Biparametric ``sinh`` wave for ``c4 = 0``.

    ``P = A^(1/(q-3)) [sinh_{2,(q-3)/(q-2)}((2-q) sqrt(K) A^((q-2)/(q-3)) (z + z0))]^(1/(2-q))``.

    Examples
    --------
    >>> s = ReductionSpec(Case.LOG_T, 5.0, 0.25, {"K": 1})
    >>> P = lt_P_sinh(s)
    >>> round(P(-0.5).real, 12) == round(sinh_pq(1.5, (2, 2 / 3)).value.real ** (-1 / 3), 12)
    True
    """
    _check_case(spec)
    q = spec.q
    if q in (2.0, 3.0):
        raise ValidationError("the sinh wave requires q not in {1, 2, 3}")
    _require_c4_zero(spec, "the sinh wave")
    params = sinh_params(q)
    A = sinh_A(spec)
    K = spec.c("K", 1.0)
    z0 = spec.c("z0", 0.0)
    scale = (2 - q) * cmath.sqrt(K) * cpow(A, (q - 2) / (q - 3))
    pref = cpow(A, 1.0 / (q - 3))

    def P(z):
        arg = scale * (z + z0)
        s = sinh_pq(_real_if_possible(arg), params).value
        return pref * _pow(s, 1.0 / (2 - q), "sinh wave")

    return CurveFn(P, CurveKind.CLOSED, "lt.sinh.P", ((-z0.real - 1e-9, -z0.real + 1e-9),))


def lt_R_sinh(spec: ReductionSpec) -> CurveFn:
    """Intermediate ``R(tau) = sinh_{2,(q-3)/(q-2)}(tau + tau0)``."""
    params = sinh_params(spec.q)
    tau0 = spec.c("tau0", 0.0)
    return CurveFn(lambda t: sinh_pq(_real_if_possible(t + tau0), params).value,
                   CurveKind.CLOSED, "lt.sinh.R")


def lt_G(spec: ReductionSpec) -> CurveFn:
    """Squared slope ``G(P)`` solving the linear slope equation.

    ``q != 3``: ``G = 2 P^(q+1)/(b(q-1)(q-3)) + K P^(2(q-1))``;
    ``q = 3``: ``G = (C - log(P)/b) P^4``.
    """
    q, b = spec.q, spec.b
    if q == 3:
        C = spec.c("C", 0.0)
        return CurveFn(lambda p: (C - cmath.log(p) / b) * p ** 4, CurveKind.CLOSED, "lt.G")
    K = spec.c("K", 1.0)
    return CurveFn(lambda p: 2 * cpow(p, q + 1) / (b * (q - 1) * (q - 3))
                   + K * cpow(p, 2 * (q - 1)), CurveKind.CLOSED, "lt.G")


# ---------------------------------------------------------------------------
# Sundman transform


def sundman_exponents(q: float, m: int, n: int) -> tuple[float, float]:
    """``(eps, delta)`` from ``eps (q-3) = n-m`` and
    ``2 delta (n-m) = 2m(q-2) - n(q-1) - 2(q-3)``.

    Examples
    --------
    >>> sundman_exponents(5.0, 1, 2)
    (0.5, -3.0)
    """
    if (m, n) not in SUNDMAN_PAIRS:
        raise ValidationError(f"(m, n) = ({m}, {n}) is not an admissible pair {SUNDMAN_PAIRS}")
    if q == 3:
        raise ValidationError("the Sundman transform requires q != 3")
    eps = (n - m) / (q - 3.0)
    delta = (2 * m * (q - 2) - n * (q - 1) - 2 * (q - 3)) / (2.0 * (n - m))
    return eps, delta


def sundman_V_closed(A: complex, m: int, n: int, tau0: complex = 0.0):
    """Closed ``V(tau)`` for ``(1,2)``, ``(2,3)`` and ``(0,3)``.

    Raises
    ------
    UnsupportedPair
        For the other seven pairs.
    """
    if (m, n) == (1, 2):
        return lambda t: -A / 2 * (1 + cmath.cosh(t + tau0))
    if (m, n) == (2, 3):
        rA = cmath.sqrt(A)
        return lambda t: -A / cmath.cosh(rA * (t + tau0) / 2) ** 2
    if (m, n) == (0, 3):
        inv = WeierstrassInvariants(0.0, -A / 16)
        return lambda t: 4 * weierstrass_p(t + tau0, inv)
    raise UnsupportedPair(f"no closed form for (m, n) = ({m}, {n}); use the numeric reconstruction")


class SundmanSolution:
    """Solution of ``V'^2 = A V^m + V^n`` and the reconstructed ``P(Z)``.

    Attributes
    ----------
    curve : ParametricCurve
        Components ``V``, ``P = V^eps`` and ``Z`` (integrated from
        ``dZ/dtau = eps P^delta``), all functions of ``tau``.
    eps, delta : float
        Transform exponents.
    A : complex
        Coefficient of the transformed equation.
    closed : bool
        Whether ``V`` is the closed form or a numeric integral.
    window : (float, float)
        ``tau`` interval covered by the reconstruction.
    """

    def __init__(self, curve, eps, delta, A, closed, window, sqrtK):
        self.curve = curve
        self.eps = eps
        self.delta = delta
        self.A = A
        self.closed = closed
        self.window = window
        self.sqrtK = sqrtK

    def P_of_z(self) -> CurveFn:
        """``P`` as a function of ``z`` (``Z = sqrt(K) z``) by inverting ``Z(tau)``."""
        lo, hi = self.window
        Zc, Pc = self.curve["Z"], self.curve["P"]

        def P(z):
            target = self.sqrtK * z
            f = lambda t: (Zc(t) - target).real  # noqa: E731
            try:
                tau = brentq(f, lo, hi, xtol=1e-15, rtol=4 * 2.0 ** -52)
            except ValueError as exc:
                raise DomainError(f"z={z} outside the reconstructed range") from exc
            return Pc(tau)

        return CurveFn(P, CurveKind.PARAMETRIC, "lt.sundman.P(z)")


def lt_sundman(spec: ReductionSpec, m: int, n: int, *, window=None, closed: bool | None = None,
               V0: float = 1.05, rtol: float = 1e-12) -> SundmanSolution:
    """Sundman-transformed ``c4 = 0`` family.

    Parameters
    ----------
    spec : ReductionSpec
        Needs ``K`` (``A = 2/(K b (q-1)(q-3))``) and optional ``tau0``.
    m, n : int
        Exponent pair, ``0 <= m < n <= 4``.
    window : (float, float), optional
        ``tau`` interval; defaults depend on the pair.
    closed : bool, optional
        Force the closed form (``True``) or the numeric solution
        (``False``); default uses the closed form where it exists.
    V0 : float
        Initial value ``V(tau0)`` of the numeric solution.
    rtol : float
        Relative tolerance of the Runge-Kutta integration.

    Returns
    -------
    SundmanSolution

    Raises
    ------
    UnsupportedPair
        If ``closed=True`` for a pair without a closed form.
    """
    _check_case(spec)
    _require_c4_zero(spec, "the Sundman transform")
    q = spec.q
    eps, delta = sundman_exponents(q, m, n)
    A = sinh_A(spec)
    if spec.has("A") and abs(spec.c("A") - A) > 1e-12 * max(1.0, abs(A)):
        raise ValidationError(f"A must equal 2/(K b (q-1)(q-3)) = {A}")
    tau0 = spec.c("tau0", 0.0)
    has_closed = (m, n) in SUNDMAN_CLOSED
    if closed is None:
        closed = has_closed
    if closed and not has_closed:
        sundman_V_closed(A, m, n)
    if window is None:
        window = {(1, 2): (-2.0, 2.0), (2, 3): (-2.0, 2.0), (0, 3): (1.9, 2.95)}.get(
            (m, n), (0.0, 0.3)) if closed else (tau0.real, tau0.real + 0.3)
    lo, hi = (float(window[0]), float(window[1]))
    sqrtK = cmath.sqrt(spec.c("K", 1.0))
    span = (lo - 1e-2 * (hi - lo), hi + 1e-2 * (hi - lo))

    if closed:
        Vf = sundman_V_closed(A, m, n, tau0)

        def rhs(t, y):
            return [eps * cpow(Vf(t), eps * delta)]

        sol = solve_ivp(rhs, (lo, span[1]), [0j], method="DOP853", rtol=rtol,
                        atol=1e-14, dense_output=True)
        back = solve_ivp(rhs, (lo, span[0]), [0j], method="DOP853", rtol=rtol,
                         atol=1e-14, dense_output=True)
        if not (sol.success and back.success):
            raise NonConvergence("Sundman reconstruction failed")

        def Z(t):
            return complex((sol if t >= lo else back).sol(t)[0])

        V = Vf
    else:
        v0 = complex(V0)
        slope2 = A * v0 ** m + v0 ** n
        dv0 = cmath.sqrt(slope2)

        def rhs(t, y):
            v = y[0]
            acc = n * v ** (n - 1) + (m * A * v ** (m - 1) if m > 0 else 0)
            return [y[1], acc / 2, eps * cpow(v, eps * delta)]

        start = tau0.real
        sol = solve_ivp(rhs, (start, span[1]), [v0, dv0, 0j], method="DOP853",
                        rtol=rtol, atol=1e-14, dense_output=True)
        if not sol.success:
            raise NonConvergence(f"numeric Sundman integration failed: {sol.message}")
        if lo < start:
            raise ValidationError("numeric Sundman window must start at tau0")

        def V(t):
            return complex(sol.sol(t)[0])

        def Z(t):
            return complex(sol.sol(t)[2])

    curve = ParametricCurve({"V": V, "P": lambda t: cpow(V(t), eps), "Z": Z},
                            name=f"lt.sundman.{m}{n}")
    return SundmanSolution(curve, eps, delta, A, closed, (lo, hi), sqrtK)


# ---------------------------------------------------------------------------
# c4 != 0: parametric Abel solutions


class AbelCase(str, Enum):
    Q3 = "q3"
    Q4 = "q4"
    Q52 = "q52"


_ABEL_Q = {AbelCase.Q3: 3.0, AbelCase.Q4: 4.0, AbelCase.Q52: 2.5}


def abel_A(spec: ReductionSpec) -> complex:
    """``A = (-b)^(2-q) / (c4^2 (q-1))``."""
    q = spec.q
    c4 = spec.c("c4")
    if c4 == 0:
        raise ValidationError("the Abel parametrisation requires c4 != 0")
    return cpow(-spec.b, 2 - q) / (c4 * c4 * (q - 1))


def _real_cbrt(x: complex) -> complex:
    if x.imag == 0:
        return complex(math.copysign(abs(x.real) ** (1.0 / 3.0), x.real))
    return cpow(x, 1.0 / 3.0)


def abel_parameter(qcase, A: complex, sign: int) -> complex:
    """Parameter ``K`` (q = 3) or ``a`` (q = 4, 5/2) matching ``A``.

    q = 3: ``A = -+2 K^2``; q = 4: ``A = -36 a^3``; q = 5/2: ``A = -+a^(3/2)/3``
    with the upper sign for ``sign = +1``.
    """
    qcase = AbelCase(qcase)
    if qcase is AbelCase.Q3:
        return cmath.sqrt(-sign * A / 2)
    if qcase is AbelCase.Q4:
        return _real_cbrt(-A / 36)
    return cpow(-sign * 3 * A, 2.0 / 3.0)


def abel_A_of_parameter(qcase, par: complex, sign: int) -> complex:
    """Inverse of :func:`abel_parameter`."""
    qcase = AbelCase(qcase)
    if qcase is AbelCase.Q3:
        return -sign * 2 * par * par
    if qcase is AbelCase.Q4:
        return -36 * par ** 3
    return -sign * cpow(par, 1.5) / 3


def _bessel_pair(sign: int, C1: float, C2: float):
    kinds = ("J", "Y") if sign > 0 else ("I", "K")
    third, m23 = Fraction(1, 3), Fraction(-2, 3)

    def Z(t):
        return C1 * bessel_order(kinds[0], third, t) + (
            C2 * bessel_order(kinds[1], third, t) if C2 else 0.0)

    def dZ(t):
        out = 0.0
        for kind, coef in zip(kinds, (C1, C2)):
            if not coef:
                continue
            lower = bessel_order(kind, m23, t)
            val = bessel_order(kind, third, t)
            deriv = (-lower if kind == "K" else lower) - val / (3.0 * t)
            out += coef * deriv
        return out

    return Z, dZ


def lt_abel_parametric(spec: ReductionSpec, qcase) -> ParametricCurve:
    """Parametric solution ``(y(tau), w(tau))`` of ``w w_y = w + A y^(2-q)``.

    Parameters
    ----------
    spec : ReductionSpec
        Needs ``c4 != 0``, ``sign`` (+1 upper, -1 lower) and either ``C``
        (q = 3) or ``C1``, ``C2`` (Bessel cases).  ``K``/``a`` may be given
        and must then agree with ``A = (-b)^(2-q)/(c4^2 (q-1))``.
    qcase : {'q3', 'q4', 'q52'}

    Returns
    -------
    ParametricCurve
        Components ``y``, ``w``, ``y_pow`` (``y^(2-q)`` on the branch fixed
        by the parametrisation), ``P = -b y`` and ``F = -c4 P^(q-1) w``.

    Raises
    ------
    ValidationError
        If the supplied ``K``/``a`` is inconsistent with ``A``.
    """
    _check_case(spec)
    qcase = AbelCase(qcase)
    q = _ABEL_Q[qcase]
    if spec.q != q:
        raise ValidationError(f"Abel case {qcase.value} requires q = {q}")
    sign = spec.i("sign", 1)
    if sign not in (1, -1):
        raise ValidationError("sign must be +1 (upper) or -1 (lower)")
    A = abel_A(spec)
    key = "K" if qcase is AbelCase.Q3 else "a"
    if spec.has(key):
        par = spec.c(key)
        implied = abel_A_of_parameter(qcase, par, sign)
        if abs(implied - A) > 1e-10 * max(1.0, abs(A)):
            raise ValidationError(
                f"{key}={par} gives A={implied}, but (-b)^(2-q)/(c4^2 (q-1)) = {A}")
    else:
        par = abel_parameter(qcase, A, sign)
    b, c4 = spec.b, spec.c("c4")

    if qcase is AbelCase.Q3:
        C = spec.c("C", 0.0)
        K = par

        def f(t):
            if sign > 0:
                return _SQRT_PI / 2 * erf(t) - C
            return _SQRT_PI / 2 * (-1j * erf(1j * t)) - C

        def y(t):
            ft = f(t)
            if ft == 0:
                raise PoleError("f vanishes: pole of the q = 3 parametrisation")
            return K * cmath.exp(-sign * t * t) / ft

        def w(t):
            ft = f(t)
            if ft == 0:
                raise PoleError("f vanishes: pole of the q = 3 parametrisation")
            return K / ft * (cmath.exp(-sign * t * t) + sign * 2 * t * ft)

        def y_pow(t):
            return 1.0 / y(t)

    else:
        C1, C2 = spec.r("C1", 1.0), spec.r("C2", 0.0)
        Z, dZ = _bessel_pair(sign, C1, C2)
        a = par

        def parts(t):
            t = float(complex(t).real)
            z, dz = Z(t), dZ(t)
            u1 = t * dz + z / 3
            u2 = u1 * u1 + sign * t * t * z * z
            return z, u1, u2

        if qcase is AbelCase.Q52:
            ra = cmath.sqrt(a)

            def y(t):
                z, u1, _ = parts(t)
                return a * t ** (-4 / 3) * u1 * u1 / (z * z)

            def w(t):
                z, _, u2 = parts(t)
                return a * t ** (-4 / 3) * u2 / (z * z)

            def y_pow(t):
                z, u1, _ = parts(t)
                return z / (ra * t ** (-2 / 3) * u1)

        else:
            def y(t):
                z, _, u2 = parts(t)
                return 2 * a * t ** (4 / 3) * z * z / u2

            def w(t):
                z, u1, u2 = parts(t)
                u3 = sign * 2 / 3 * t * t * z ** 3 - 2 * u1 * u2
                return sign * 3 * a * t ** (-2 / 3) * u3 / (z * u2)

            def y_pow(t):
                return y(t) ** -2

    def P(t):
        return -b * y(t)

    def F(t):
        return -c4 * cpow(P(t), q - 1) * w(t)

    curve = ParametricCurve({"y": y, "w": w, "y_pow": y_pow, "P": P, "F": F},
                            name=f"lt.abel.{qcase.value}")
    curve.A = A
    curve.parameter = par
    return curve
