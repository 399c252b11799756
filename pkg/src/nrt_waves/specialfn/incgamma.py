"""Upper incomplete gamma function Gamma(a, z) on the principal branch."""

from __future__ import annotations

import cmath

from ..errors import DomainError, NonConvergence, PoleParameter
from ._gamma import gamma, is_nonpositive_integer

_EPS = 2.0 ** -53
_MAX_ITER = 5000
_TINY = 1e-300


def _lower_series(a: complex, z: complex) -> complex:
    """gamma(a, z) = z^a e^{-z} sum_n z^n / (a (a+1) ... (a+n))."""
    term = 1.0 / a
    total = term
    small = 0
    for n in range(1, _MAX_ITER):
        term *= z / (a + n)
        total += term
        if abs(term) <= _EPS * abs(total):
            small += 1
            if small >= 2:
                return cmath.exp(a * cmath.log(z) - z) * total
        else:
            small = 0
    raise NonConvergence("lower incomplete gamma series did not converge",
                         attempts=("series",))


def _upper_cf(a: complex, z: complex) -> complex:
    """Modified Lentz evaluation of the Legendre continued fraction."""
    bn = z + 1.0 - a
    f = 1.0 / bn if bn != 0 else 1.0 / _TINY
    c = 1.0 / _TINY
    d = 1.0 / bn if bn != 0 else 1.0 / _TINY
    for n in range(1, _MAX_ITER):
        an = -n * (n - a)
        bn += 2.0
        d = an * d + bn
        if d == 0:
            d = _TINY
        c = bn + an / c
        if c == 0:
            c = _TINY
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) <= _EPS:
            return cmath.exp(a * cmath.log(z) - z) * f
    raise NonConvergence("incomplete gamma continued fraction did not converge",
                         attempts=("continued-fraction",))


def gamma_upper(a: complex, z: complex) -> complex:
    """Upper incomplete gamma function.

    Parameters
    ----------
    a : complex
        Order.
    z : complex
        Lower integration limit; non-real or negative ``z`` uses the
        principal branch of ``z**a``.

    Returns
    -------
    complex
        ``Gamma(a, z) = int_z^inf t^(a-1) e^(-t) dt``.

    Notes
    -----
    The continued fraction is used when ``Re z > 0`` and
    ``|z| > max(1.5, Re a + 1)``; otherwise ``Gamma(a) - gamma(a, z)`` with
    the lower function from its power series.

    Examples
    --------
    >>> abs(gamma_upper(1, 0) - 1) < 1e-15
    True
    """
    a, z = complex(a), complex(z)
    if z == 0:
        if a.real > 0:
            return gamma(a)
        raise DomainError("Gamma(a, 0) diverges for Re(a) <= 0")
    if z.real > 0 and abs(z) > max(1.5, a.real + 1.0):
        return _upper_cf(a, z)
    if is_nonpositive_integer(a):
        raise PoleParameter("series path undefined for a = 0, -1, -2, ...")
    return gamma(a) - _lower_series(a, z)
