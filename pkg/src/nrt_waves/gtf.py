"""Biparametric generalized trigonometric and hyperbolic functions.

``sin_{p,q}`` is the inverse of

    arcsin_{p,q}(z) = int_0^z (1 - t^q)^(-1/p) dt = z 2F1(1/p, 1/q; 1 + 1/q; z^q),

``cos_{p,q} = d/dz sin_{p,q} = (1 - sin^q)^(1/p)`` so that
``cos^p + sin^q = 1``.  The hyperbolic variants invert
``arcsinh_{p,q}(z) = z 2F1(1/p, 1/q; 1 + 1/q; -z^q)`` with
``cosh^p - sinh^q = 1``.

Real arguments
--------------
* odd symmetry in ``sin``/``sinh`` (``|sin|^q`` is used in the identities);
* ``p, q > 1``: symmetry about ``pi_pq/2`` and period ``2 pi_pq``;
* ``p <= 1``: ``pi_pq`` is infinite and the maximal monotone branch on the
  whole real line is returned;
* ``p > 1, q <= 1``: only the principal interval ``[-pi_pq/2, pi_pq/2]``.

Complex arguments
-----------------
The inverse function (hypergeometric form, principal powers) is continued
by predictor-corrector Newton steps along the straight path from the real
seed ``Re z`` to ``z``; results carry ``branch_note = analytic-continuation``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .branch import cpow
from .errors import DomainError, NonConvergence, PoleError, ValidationError
from .specialfn import gamma, hyp2f1

_MAX_ITER = 200
_EPS = 2.0 ** -52


class Branch(str, Enum):
    """Provenance of a GTF value."""

    PRINCIPAL = "principal"
    CONTINUATION = "analytic-continuation"


@dataclass(frozen=True)
class GtfParams:
    """Exponent pair ``(p, q)`` of the generalized trigonometric functions.

    Parameters
    ----------
    p, q : float
        Positive exponents.
    """

    p: float
    q: float

    def __post_init__(self):
        p, q = float(self.p), float(self.q)
        if not (p > 0 and q > 0 and math.isfinite(p) and math.isfinite(q)):
            raise ValidationError(f"GTF exponents must be positive and finite, got p={p}, q={q}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def single(cls, a: float) -> "GtfParams":
        """Single-parameter form ``tan_a = tan_{a,a}``."""
        return cls(a, a)

    @property
    def classical(self) -> bool:
        """True in the classical regime ``p, q > 1`` (periodic extension)."""
        return self.p > 1 and self.q > 1

    def dual(self) -> "GtfParams":
        """Dual pair ``(r, q)`` with ``1/p + 1/r = 1 + 1/q``.

        Raises
        ------
        DomainError
            If ``1 + 1/q - 1/p <= 0`` (no positive ``r``).
        """
        inv_r = 1.0 + 1.0 / self.q - 1.0 / self.p
        if inv_r <= 0:
            raise DomainError(f"no admissible dual exponent for p={self.p}, q={self.q}")
        return GtfParams(1.0 / inv_r, self.q)


@dataclass(frozen=True)
class GtfValue:
    """A GTF value together with how it was obtained."""

    value: complex
    branch_note: Branch = Branch.PRINCIPAL

    def __complex__(self) -> complex:
        return complex(self.value)

    def __float__(self) -> float:
        v = complex(self.value)
        if v.imag != 0.0:
            raise TypeError("GTF value is not real")
        return v.real

    @property
    def real(self) -> float:
        return complex(self.value).real

    @property
    def imag(self) -> float:
        return complex(self.value).imag


def _as_params(params) -> GtfParams:
    if isinstance(params, GtfParams):
        return params
    p, q = params
    return GtfParams(p, q)


# ---------------------------------------------------------------------------
# inverse functions


def _arcsin_raw(z: complex, P: GtfParams) -> complex:
    if z == 0:
        return 0j
    return z * hyp2f1(1.0 / P.p, 1.0 / P.q, 1.0 + 1.0 / P.q, cpow(z, P.q))


def _arcsinh_raw(z: complex, P: GtfParams) -> complex:
    if z == 0:
        return 0j
    return z * hyp2f1(1.0 / P.p, 1.0 / P.q, 1.0 + 1.0 / P.q, -cpow(z, P.q))


def arcsin_pq(z, params) -> complex:
    """Generalized arcsine ``z 2F1(1/p, 1/q; 1+1/q; z^q)``.

    Real negative arguments use odd symmetry; other complex arguments use
    the principal branch of ``z^q``.

    Parameters
    ----------
    z : complex
    params : GtfParams or (p, q)

    Returns
    -------
    complex

    Examples
    --------
    >>> abs(arcsin_pq(1.0, GtfParams(2, 2)) - math.pi / 2) < 1e-14
    True
    """
    P = _as_params(params)
    z = complex(z)
    if z.imag == 0 and z.real < 0:
        return -_arcsin_raw(complex(-z.real), P)
    return _arcsin_raw(z, P)


def arcsinh_pq(z, params) -> complex:
    """Generalized inverse hyperbolic sine ``z 2F1(1/p, 1/q; 1+1/q; -z^q)``."""
    P = _as_params(params)
    z = complex(z)
    if z.imag == 0 and z.real < 0:
        return -_arcsinh_raw(complex(-z.real), P)
    return _arcsinh_raw(z, P)


@lru_cache(maxsize=256)
def _pi_pq_cached(p: float, q: float) -> float:
    if p <= 1:
        return math.inf
    # 2 arcsin(1) = 2 Gamma(1 + 1/q) Gamma(1 - 1/p) / Gamma(1 + 1/q - 1/p)
    val = 2.0 * (gamma(1.0 + 1.0 / q) * gamma(1.0 - 1.0 / p) / gamma(1.0 + 1.0 / q - 1.0 / p))
    return val.real


def pi_pq(params) -> float:
    """Generalized half-period ``pi_{p,q} = 2 arcsin_{p,q}(1)``.

    Returns ``math.inf`` (the divergence marker) when ``p <= 1``.

    Examples
    --------
    >>> abs(pi_pq(GtfParams(2, 2)) - math.pi) < 1e-14
    True
    """
    P = _as_params(params)
    return _pi_pq_cached(P.p, P.q)


@lru_cache(maxsize=256)
def sinh_blowup(p: float, q: float) -> float:
    """Finite limit of ``arcsinh_{p,q}`` at infinity (``inf`` when ``q <= p``).

    ``sinh_{p,q}`` has a pole there.
    """
    if q <= p:
        return math.inf
    a, b = 1.0 / q, 1.0 / p - 1.0 / q
    return (gamma(a) * gamma(b) / gamma(a + b)).real / q


# ---------------------------------------------------------------------------
# real inversion


def _newton_increasing(f, df, lo, hi, x0):
    """Safeguarded Newton for an increasing function with f(lo) <= 0 <= f(hi)."""
    x = min(max(x0, lo), hi)
    for _ in range(_MAX_ITER):
        fx = f(x)
        if fx == 0:
            return x
        if fx < 0:
            lo = x
        else:
            hi = x
        d = df(x)
        xn = x - fx / d if (d > 0 and math.isfinite(d)) else math.nan
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
        if abs(xn - x) <= 2 * _EPS * max(abs(x), 1e-300) or hi - lo <= 2 * _EPS * max(abs(hi), 1e-300):
            return xn
        x = xn
    raise NonConvergence("GTF Newton inversion did not converge", bracket=(lo, hi))


def _sin_cos_principal(x: float, P: GtfParams) -> tuple[float, float]:
    """(sin, cos) for 0 <= x <= pi_pq/2 (any x >= 0 when p <= 1)."""
    p, q = P.p, P.q
    if x == 0:
        return 0.0, 1.0
    half = 0.5 * pi_pq(P)
    if x >= half:
        return 1.0, 0.0
    if p > 1 and x > 0.5 * half:
        # Complementary inversion in c = cos keeps full accuracy near the top.
        k = p / (q * (p - 1.0))
        a, b, cc = 1.0 - 1.0 / p, 1.0 - 1.0 / q, 2.0 - 1.0 / p
        target = half - x

        def g(c):
            if c <= 0:
                return -target
            return k * c ** (p - 1.0) * hyp2f1(a, b, cc, c ** p).real - target

        def dg(c):
            if c <= 0 or c >= 1:
                return math.inf
            return (p / q) * c ** (p - 2.0) * (1.0 - c ** p) ** (1.0 / q - 1.0)

        c0 = min(1.0, (target / k) ** (1.0 / (p - 1.0)))
        c = _newton_increasing(g, dg, 0.0, 1.0, c0)
        s = (1.0 - c ** p) ** (1.0 / q)
        return s, c

    def f(s):
        if s >= 1:
            return math.inf if p <= 1 else half - x
        return _arcsin_raw(complex(s), P).real - x

    def df(s):
        if s >= 1:
            return math.inf
        return (1.0 - s ** q) ** (-1.0 / p)

    s = _newton_increasing(f, df, 0.0, 1.0, min(x, 0.5))
    return s, (1.0 - s ** q) ** (1.0 / p)


def _reduce_real(x: float, P: GtfParams) -> tuple[float, float, float, bool]:
    """Map real x onto the principal interval.

    Returns (x_reduced, sin_sign, cos_sign, principal).
    """
    principal = x >= 0
    sin_sign = 1.0
    cos_sign = 1.0
    if x < 0:
        x = -x
        sin_sign = -1.0
    if P.p <= 1:
        return x, sin_sign, cos_sign, principal
    pi_ = pi_pq(P)
    half = 0.5 * pi_
    if x <= half:
        return x, sin_sign, cos_sign, principal
    if P.q <= 1:
        raise DomainError(
            f"sin_{{p,q}} with q <= 1 is only defined on [-pi_pq/2, pi_pq/2]; got |x|={x}")
    principal = False
    x = math.fmod(x, 2.0 * pi_)
    if x > pi_:
        x -= pi_
        sin_sign = -sin_sign
        cos_sign = -cos_sign
    if x > half:
        x = pi_ - x
        cos_sign = -cos_sign
    return x, sin_sign, cos_sign, principal


def _sin_cos_real(x: float, P: GtfParams) -> tuple[float, float, bool]:
    xr, ss, cs, principal = _reduce_real(x, P)
    s, c = _sin_cos_principal(xr, P)
    return ss * s, cs * c, principal


def _sinh_real(x: float, P: GtfParams) -> float:
    if x == 0:
        return 0.0
    if x < 0:
        return -_sinh_real(-x, P)
    limit = sinh_blowup(P.p, P.q)
    if x >= limit:
        raise PoleError(f"sinh_{{p,q}} blows up at x={limit}", nearest=limit)
    p, q = P.p, P.q

    def f(s):
        return _arcsinh_raw(complex(s), P).real - x

    def df(s):
        return (1.0 + s ** q) ** (-1.0 / p)

    hi = max(1.0, 2.0 * x)
    while f(hi) < 0:
        hi *= 4.0
        if hi > 1e150:
            raise PoleError("sinh_{p,q} overflow", nearest=limit)
    return _newton_increasing(f, df, 0.0, hi, min(x, hi))


# ---------------------------------------------------------------------------
# complex continuation


def _continue(fwd, dinv, z: complex, x0: float, s0: complex) -> complex:
    """Solve fwd(s) = z by Newton continuation from fwd(s0) = x0.

    ``dinv(s)`` is ``1/fwd'(s)``, i.e. ds/dz.
    """
    s = complex(s0)
    t = 0.0
    dt = 0.125
    delta = z - x0
    failures = 0
    while t < 1.0:
        t_new = min(1.0, t + dt)
        target = x0 + delta * t_new
        try:
            step = delta * (t_new - t)
            guess = s + step * dinv(s)
            ok = False
            cur = guess
            for _ in range(40):
                r = fwd(cur) - target
                d = dinv(cur)
                corr = r * d
                cur = cur - corr
                if not cmath.isfinite(cur):
                    break
                if abs(corr) <= 4 * _EPS * max(abs(cur), 1e-300):
                    ok = True
                    break
            if ok and abs(cur - guess) > 0.25 * max(abs(step * dinv(s)), 1e-12) + 1e-10 * abs(cur):
                ok = abs(cur - s) < 0.5 * max(abs(s), abs(step))
        except (ZeroDivisionError, OverflowError, ValueError, NonConvergence):
            ok = False
        if not ok:
            dt *= 0.5
            failures += 1
            if dt < 1e-9 or failures > 400:
                raise NonConvergence("GTF complex continuation failed",
                                     attempts=("newton-continuation",))
            continue
        s = cur
        t = t_new
        dt = min(0.25, dt * 1.5)
    return s


def _sin_cos_complex(z: complex, P: GtfParams) -> tuple[complex, complex]:
    p, q = P.p, P.q
    # Reduce the real part with the same symmetries as on the real line.
    x = z.real
    sign_s = 1.0
    sign_c = 1.0
    if x < 0:
        z = -z
        sign_s = -1.0
        x = -x
    if P.p > 1:
        pi_ = pi_pq(P)
        half = 0.5 * pi_
        if x > half:
            if P.q <= 1:
                raise DomainError("complex sin_{p,q} with q <= 1 needs |Re z| <= pi_pq/2")
            k = math.floor(x / (2.0 * pi_))
            z -= 2.0 * pi_ * k
            x = z.real
            if x > pi_:
                z -= pi_
                x = z.real
                sign_s, sign_c = -sign_s, -sign_c
            if x > half:
                z = pi_ - z
                x = z.real
                sign_c = -sign_c
    s0, _ = _sin_cos_principal(x, P)

    def fwd(s):
        return _arcsin_raw(s, P)

    def dinv(s):
        return cpow(1.0 - cpow(s, q), 1.0 / p)

    s = _continue(fwd, dinv, z, x, complex(s0))
    c = cpow(1.0 - cpow(s, q), 1.0 / p)
    return sign_s * s, sign_c * c


def _sinh_complex(z: complex, P: GtfParams) -> complex:
    p, q = P.p, P.q
    sign = 1.0
    if z.real < 0:
        z = -z
        sign = -1.0
    x = z.real
    s0 = _sinh_real(x, P)

    def fwd(s):
        return _arcsinh_raw(s, P)

    def dinv(s):
        return cpow(1.0 + cpow(s, q), 1.0 / p)

    return sign * _continue(fwd, dinv, z, x, complex(s0))


# ---------------------------------------------------------------------------
# public forward functions


def sin_cos_pq(z, params) -> tuple[GtfValue, GtfValue]:
    """``(sin_{p,q}(z), cos_{p,q}(z))`` from a single inversion."""
    P = _as_params(params)
    z = complex(z)
    if z.imag == 0:
        s, c, principal = _sin_cos_real(z.real, P)
        note = Branch.PRINCIPAL if principal else Branch.CONTINUATION
        return GtfValue(complex(s), note), GtfValue(complex(c), note)
    s, c = _sin_cos_complex(z, P)
    return GtfValue(s, Branch.CONTINUATION), GtfValue(c, Branch.CONTINUATION)


def sin_pq(z, params) -> GtfValue:
    """Generalized sine, the inverse of :func:`arcsin_pq`.

    Parameters
    ----------
    z : complex
    params : GtfParams or (p, q)

    Returns
    -------
    GtfValue

    Raises
    ------
    DomainError
        Real ``|z| > pi_pq/2`` when ``p > 1`` and ``q <= 1``.
    NonConvergence
        If the inversion fails.

    Examples
    --------
    >>> abs(sin_pq(math.pi / 2, GtfParams(2, 2)).value - 1) < 1e-15
    True
    """
    return sin_cos_pq(z, params)[0]


def cos_pq(z, params) -> GtfValue:
    """Generalized cosine ``(1 - sin^q)^(1/p)`` (derivative of ``sin_pq``)."""
    return sin_cos_pq(z, params)[1]


def tan_pq(z, params) -> GtfValue:
    """Generalized tangent ``sin_pq / cos_pq``.

    Raises
    ------
    PoleError
        Where ``cos_pq`` vanishes.
    """
    s, c = sin_cos_pq(z, params)
    if c.value == 0:
        raise PoleError("tan_{p,q} pole: cos_{p,q} vanishes", nearest=complex(z))
    return GtfValue(s.value / c.value, s.branch_note)


def sinh_pq(z, params) -> GtfValue:
    """Generalized hyperbolic sine, the inverse of :func:`arcsinh_pq`.

    Raises
    ------
    PoleError
        At or beyond the finite blow-up point when ``q > p``.
    """
    P = _as_params(params)
    z = complex(z)
    if z.imag == 0:
        return GtfValue(complex(_sinh_real(z.real, P)), Branch.PRINCIPAL)
    return GtfValue(_sinh_complex(z, P), Branch.CONTINUATION)


def _cosh_from_sinh(s: complex, P: GtfParams, real: bool) -> complex:
    if real:
        return complex((1.0 + abs(s.real) ** P.q) ** (1.0 / P.p))
    return cpow(1.0 + cpow(s, P.q), 1.0 / P.p)


def cosh_pq(z, params) -> GtfValue:
    """Generalized hyperbolic cosine ``(1 + sinh^q)^(1/p)``."""
    P = _as_params(params)
    sv = sinh_pq(z, P)
    return GtfValue(_cosh_from_sinh(sv.value, P, complex(z).imag == 0), sv.branch_note)


def tanh_pq(z, params) -> GtfValue:
    """Generalized hyperbolic tangent ``sinh_pq / cosh_pq``."""
    P = _as_params(params)
    sv = sinh_pq(z, P)
    ch = _cosh_from_sinh(sv.value, P, complex(z).imag == 0)
    return GtfValue(sv.value / ch, sv.branch_note)


def sinh_cosh_pq(z, params) -> tuple[GtfValue, GtfValue]:
    """``(sinh_{p,q}(z), cosh_{p,q}(z))`` from a single inversion."""
    P = _as_params(params)
    sv = sinh_pq(z, P)
    return sv, GtfValue(_cosh_from_sinh(sv.value, P, complex(z).imag == 0), sv.branch_note)


def tan_a(z, a: float) -> GtfValue:
    """Single-parameter tangent ``tan_a = tan_{a,a}``."""
    return tan_pq(z, GtfParams.single(a))


def tanh_a(z, a: float) -> GtfValue:
    """Single-parameter hyperbolic tangent ``tanh_a = tanh_{a,a}``."""
    return tanh_pq(z, GtfParams.single(a))


# ---------------------------------------------------------------------------
# duality


def duality_check(x: float, params) -> float:
    """Largest residual of the four duality relations at real ``x``.

    With ``r`` from ``1/p + 1/r = 1 + 1/q``:

    * ``sinh_{p,q} x = sin_{r,q} x / cos_{r,q}^{r/q} x``
    * ``cosh_{p,q} x = 1 / cos_{r,q}^{r/p} x``
    * ``sin_{p,q} x = sinh_{r,q} x / cosh_{r,q}^{r/q} x``
    * ``cos_{p,q} x = 1 / cosh_{r,q}^{r/p} x``

    Raises
    ------
    DomainError
        If ``x`` is outside either principal domain or no ``r`` exists.

    Examples
    --------
    >>> duality_check(0.0, GtfParams(2, 2))
    0.0
    """
    P = _as_params(params)
    R = P.dual()
    x = float(x)
    ax = abs(x)
    for par in (P, R):
        if ax > 0.5 * pi_pq(par):
            raise DomainError(f"x={x} outside the principal domain of sin for {par}")
        if ax >= sinh_blowup(par.p, par.q):
            raise DomainError(f"x={x} beyond the sinh blow-up point for {par}")
    if x == 0:
        return 0.0
    r, p, q = R.p, P.p, P.q
    s_pq, c_pq, _ = _sin_cos_real(x, P)
    s_rq, c_rq, _ = _sin_cos_real(x, R)
    sh_pq = _sinh_real(x, P)
    ch_pq = (1.0 + abs(sh_pq) ** q) ** (1.0 / p)
    sh_rq = _sinh_real(x, R)
    ch_rq = (1.0 + abs(sh_rq) ** q) ** (1.0 / r)
    res = (
        abs(sh_pq - s_rq / c_rq ** (r / q)),
        abs(ch_pq - 1.0 / c_rq ** (r / p)),
        abs(s_pq - sh_rq / ch_rq ** (r / q)),
        abs(c_pq - 1.0 / ch_rq ** (r / p)),
    )
    return float(max(res))


__all__ = [
    "Branch",
    "GtfParams",
    "GtfValue",
    "arcsin_pq",
    "arcsinh_pq",
    "cos_pq",
    "cosh_pq",
    "duality_check",
    "pi_pq",
    "sin_cos_pq",
    "sin_pq",
    "sinh_blowup",
    "sinh_cosh_pq",
    "sinh_pq",
    "tan_a",
    "tan_pq",
    "tanh_a",
    "tanh_pq",
]
