"""Error function for complex argument and its real inverse.

``erf`` uses a Taylor-type series for ``|z| < 3`` and the Laplace
continued fraction for ``erfc`` beyond, with the split fixed at 3 where
both reach full double precision.
"""

from __future__ import annotations

import cmath
import math

from ..errors import DomainError, NonConvergence

ERF_SPLIT = 3.0
_EPS = 2.0 ** -53
_TWO_OVER_SQRTPI = 2.0 / math.sqrt(math.pi)


def _series_pos(z: complex) -> complex:
    # erf z = 2/sqrt(pi) e^{-z^2} sum 2^n z^(2n+1) / (2n+1)!!  (no cancellation when |Re z| >= |Im z|)
    z2 = z * z
    term = z
    total = term
    for n in range(1, 2000):
        term *= 2.0 * z2 / (2 * n + 1)
        total += term
        if abs(term) <= _EPS * abs(total):
            return _TWO_OVER_SQRTPI * cmath.exp(-z2) * total
    raise NonConvergence("erf series did not converge")


def _series_alt(z: complex) -> complex:
    # Maclaurin series sum (-1)^n z^(2n+1) / (n! (2n+1))
    z2 = z * z
    power = z
    total = z
    for n in range(1, 2000):
        power *= -z2 / n
        term = power / (2 * n + 1)
        total += term
        if abs(term) <= _EPS * abs(total):
            return _TWO_OVER_SQRTPI * total
    raise NonConvergence("erf series did not converge")


def _erfc_cf(z: complex) -> complex:
    """erfc for Re z >= 2 and |z| >= 3 via modified Lentz."""
    # erfc z = e^{-z^2}/sqrt(pi) * 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))
    tiny = 1e-300
    f = z
    c = z
    d = 0.0
    for n in range(1, 20000):
        an = n / 2.0
        d = z + an * d
        if d == 0:
            d = tiny
        c = z + an / c
        if c == 0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) <= _EPS:
            return cmath.exp(-z * z) / (math.sqrt(math.pi) * f)
    raise NonConvergence("erfc continued fraction did not converge")


def erf(z: complex) -> complex:
    """Error function of a complex argument.

    Regions: the continued fraction for ``|Re z| >= 2`` with ``|z| >= 3``,
    the exponentially scaled series close to the real axis, and the
    Maclaurin series elsewhere (it has no cancellation near the imaginary
    axis).

    Examples
    --------
    >>> abs(erf(1.0) - 0.842700792949715) < 1e-15
    True
    """
    z = complex(z)
    if z == 0:
        return 0.0j
    if abs(z.real) >= 2.0 and abs(z) >= ERF_SPLIT:
        if z.real < 0:
            return -(1.0 - _erfc_cf(-z))
        return 1.0 - _erfc_cf(z)
    if abs(z.imag) <= 1.0:
        return _series_pos(z)
    return _series_alt(z)


def erfc(z: complex) -> complex:
    """Complementary error function ``1 - erf(z)``, cancellation-free for ``Re z >= 1.5``."""
    z = complex(z)
    if z.real >= 1.5:
        return _erfc_cf(z)
    return 1.0 - erf(z)


def erf_inv(y: float) -> float:
    """Inverse error function on (-1, 1).

    Newton steps on ``erf`` from a rational initial guess, finished with a
    Halley step; for ``|y| > 0.5`` the residual is formed with ``erfc`` so
    that precision is kept as ``|y| -> 1``.

    Raises
    ------
    DomainError
        If ``|y| >= 1``.

    Examples
    --------
    >>> erf_inv(0.0)
    0.0
    """
    y = float(y)
    if not -1.0 < y < 1.0:
        raise DomainError(f"erf_inv requires |y| < 1, got {y}")
    if y == 0.0:
        return 0.0
    if y < 0:
        return -erf_inv(-y)
    # Giles' single-precision approximation as the starting guess
    w = -math.log((1.0 - y) * (1.0 + y))
    if w < 5.0:
        w -= 2.5
        p = 2.81022636e-08
        for coef in (3.43273939e-07, -3.5233877e-06, -4.39150654e-06, 0.00021858087,
                     -0.00125372503, -0.00417768164, 0.246640727, 1.50140941):
            p = coef + p * w
    else:
        w = math.sqrt(w) - 3.0
        p = -0.000200214257
        for coef in (0.000100950558, 0.00134934322, -0.00367342844, 0.00573950773,
                     -0.0076224613, 0.00943887047, 1.00167406, 2.83297682):
            p = coef + p * w
    x = p * y
    use_c = y > 0.5
    target = 1.0 - y if use_c else y
    for _ in range(50):
        if use_c:
            r = target - math.erfc(x)  # erf(x) - y  ==  (1-y) - erfc(x)
        else:
            r = math.erf(x) - target
        dfdx = _TWO_OVER_SQRTPI * math.exp(-x * x)
        if dfdx == 0.0:
            break
        step = r / dfdx
        # Halley correction, f'' = -2x f'
        step = step / (1.0 + x * step)
        x -= step
        if abs(step) <= 1e-16 * max(1.0, abs(x)):
            break
    return x


def erf_inv_complex(y: complex) -> complex:
    """Inverse error function for complex argument by Newton iteration.

    Used where a travelling-wave family is evaluated with complex constants.
    """
    y = complex(y)
    if y.imag == 0.0 and -1.0 < y.real < 1.0:
        return complex(erf_inv(y.real))
    x = complex(erf_inv(max(-0.999999, min(0.999999, y.real))), 0.0)
    for _ in range(200):
        r = erf(x) - y
        dfdx = _TWO_OVER_SQRTPI * cmath.exp(-x * x)
        step = r / dfdx
        step = step / (1.0 + x * step)
        x -= step
        if abs(step) <= 1e-15 * max(1.0, abs(x)):
            return x
    raise NonConvergence("complex erf_inv Newton iteration did not converge")
