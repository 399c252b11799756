"""Principal-branch conventions for complex powers and logarithms.

Every non-integer power in the package is evaluated as

    w**s = exp(s * Log w)

with ``Log`` the principal logarithm (argument in (-pi, pi]).  Negative
reals therefore map to ``exp(s * (log|w| + i*pi))``.  Integer exponents
use ordinary repeated multiplication so that no spurious imaginary part
appears for negative bases.
"""

from __future__ import annotations

import cmath
import math

import numpy as np


def _is_integer(s: complex) -> bool:
    return s.imag == 0.0 and float(s.real).is_integer()


def cpow(w, s):
    """Principal power ``w**s`` for scalar complex ``w`` and ``s``.

    Parameters
    ----------
    w, s : complex
        Base and exponent.

    Returns
    -------
    complex
        ``exp(s * Log w)``; ``0`` when ``w == 0`` and ``Re s > 0``.

    Raises
    ------
    ZeroDivisionError
        If ``w == 0`` and ``Re s <= 0`` with ``s != 0``.
    """
    w = complex(w)
    s = complex(s)
    if s == 0:
        return 1.0 + 0.0j
    if w == 0:
        if s.real > 0:
            return 0.0j
        raise ZeroDivisionError("0 raised to a non-positive power")
    if _is_integer(s) and abs(s.real) <= 64:
        return w ** int(s.real)
    return cmath.exp(s * cmath.log(w))


def rpow(x: float, s: float) -> float:
    """Real power of a non-negative real, ``x**s`` (``0**s = 0`` for s > 0)."""
    if x < 0:
        raise ValueError("rpow requires a non-negative base")
    if x == 0:
        if s > 0:
            return 0.0
        if s == 0:
            return 1.0
        return math.inf
    return x ** s


def cpow_array(w, s):
    """Vectorized principal power over numpy arrays.

    Parameters
    ----------
    w : array_like of complex
        Bases.
    s : complex
        Common exponent.

    Returns
    -------
    numpy.ndarray
        Complex array ``exp(s * Log w)``.
    """
    w = np.asarray(w, dtype=complex)
    s = complex(s)
    if s == 0:
        return np.ones_like(w)
    if _is_integer(s) and abs(s.real) <= 64:
        return w ** int(s.real)
    out = np.zeros_like(w)
    nz = w != 0
    out[nz] = np.exp(s * np.log(w[nz]))
    if not np.all(nz) and s.real <= 0:
        out[~nz] = complex(np.inf, 0.0)
    return out


def clog(w):
    """Principal logarithm of a scalar."""
    return cmath.log(complex(w))
