"""Bessel functions of order +-1/3 (and the internal orders +-2/3).

Only the orders needed by the parametric Abel solutions are provided.

* ``x < 20``: ascending series summed in 60-digit decimal arithmetic, so
  the cancellation in ``J``, ``Y`` and ``K = pi/(2 sin nu pi)(I_-nu - I_nu)``
  costs nothing at double precision.
* ``x >= 20``: Hankel asymptotic expansions truncated at the smallest term.

``Y`` and ``K`` come from the connection formulas with ``J_{-nu}`` and
``I_{-nu}``.
"""

from __future__ import annotations

import math
from decimal import Decimal, localcontext
from enum import Enum
from fractions import Fraction

from ..errors import DomainError

ASYMPTOTIC_SWITCH = 20.0
_DIGITS = 60

# Gamma(1/3), Gamma(2/3), pi, sqrt(3) to 60 digits.
_G13 = Decimal("2.67893853470774763365569294097467764412868937795730110095043")
_G23 = Decimal("1.35411793942640041694528802815451378551932726605679369839402")
_PI = Decimal("3.14159265358979323846264338327950288419716939937510582097494")
_SQRT3 = Decimal("1.73205080756887729352744634150587236694280525381038062805581")

_ORDERS = (Fraction(1, 3), Fraction(-1, 3), Fraction(2, 3), Fraction(-2, 3))


class BesselKind(str, Enum):
    """Bessel function families."""

    J = "J"
    Y = "Y"
    I = "I"  # noqa: E741
    K = "K"


def _gamma_nu_plus_one(nu: Fraction) -> Decimal:
    # Gamma(nu + 1) for nu in {+-1/3, +-2/3}
    return {
        Fraction(1, 3): _G13 / 3,
        Fraction(-1, 3): _G23,
        Fraction(2, 3): 2 * _G23 / 3,
        Fraction(-2, 3): _G13,
    }[nu]


def _ascending(nu: Fraction, x: float, modified: bool) -> Decimal:
    """sum_k (-+x^2/4)^k / (k! Gamma(k+nu+1)) times (x/2)^nu, in Decimal."""
    with localcontext() as ctx:
        ctx.prec = _DIGITS
        xd = Decimal(repr(x))
        half = xd / 2
        q = half * half
        if not modified:
            q = -q
        nud = Decimal(nu.numerator) / Decimal(nu.denominator)
        term = 1 / _gamma_nu_plus_one(nu)
        total = term
        eps = Decimal(10) ** (-_DIGITS + 5)
        k = 0
        while True:
            k += 1
            term = term * q / (k * (k + nud))
            total += term
            if abs(term) < eps * abs(total) and k > 2:
                break
            if k > 2000:
                break
        return total * (half ** nud)


def _trig_nu(nu: Fraction) -> tuple[Decimal, Decimal]:
    """(cos(nu*pi), sin(nu*pi)) exactly for nu in {1/3, 2/3}."""
    if nu == Fraction(1, 3):
        return Decimal("0.5"), _SQRT3 / 2
    if nu == Fraction(2, 3):
        return Decimal("-0.5"), _SQRT3 / 2
    raise ValueError(nu)


def _series_value(kind: BesselKind, nu: Fraction, x: float) -> float:
    with localcontext() as ctx:
        ctx.prec = _DIGITS
        if kind is BesselKind.J:
            return float(_ascending(nu, x, False))
        if kind is BesselKind.I:
            return float(_ascending(nu, x, True))
        a = abs(nu)
        cos_nu, sin_nu = _trig_nu(a)
        if kind is BesselKind.Y:
            ya = (_ascending(a, x, False) * cos_nu - _ascending(-a, x, False)) / sin_nu
            if nu > 0:
                return float(ya)
            # Y_{-a} = cos(a pi) Y_a + sin(a pi) J_a
            return float(cos_nu * ya + sin_nu * _ascending(a, x, False))
        # K is even in the order
        ka = _PI / (2 * sin_nu) * (_ascending(-a, x, True) - _ascending(a, x, True))
        return float(ka)


def _hankel_pq(nu: float, x: float) -> tuple[float, float]:
    """Asymptotic P and Q series for J/Y, truncated at the smallest term."""
    mu = 4.0 * nu * nu
    p_sum, q_sum = 1.0, 0.0
    term = 1.0
    prev = math.inf
    for k in range(1, 200):
        term *= (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if abs(term) > prev:
            break
        prev = abs(term)
        if k % 2 == 1:
            q_sum += term * (-1) ** ((k - 1) // 2)
        else:
            p_sum += term * (-1) ** (k // 2)
        if abs(term) < 1e-18:
            break
    return p_sum, q_sum


def _modified_asym(nu: float, x: float, sign: float) -> float:
    """sum_k sign^k a_k(nu) / x^k for I (sign=-1) and K (sign=+1)."""
    mu = 4.0 * nu * nu
    total = 1.0
    term = 1.0
    prev = math.inf
    for k in range(1, 200):
        term *= (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if abs(term) > prev:
            break
        prev = abs(term)
        total += term * (sign ** k)
        if abs(term) < 1e-18:
            break
    return total


def _asymptotic_value(kind: BesselKind, nu: Fraction, x: float) -> float:
    a = float(abs(nu))
    if kind in (BesselKind.J, BesselKind.Y):
        p, q = _hankel_pq(a, x)
        omega = x - a * math.pi / 2 - math.pi / 4
        amp = math.sqrt(2.0 / (math.pi * x))
        ja = amp * (p * math.cos(omega) - q * math.sin(omega))
        ya = amp * (p * math.sin(omega) + q * math.cos(omega))
        cos_nu, sin_nu = math.cos(a * math.pi), math.sin(a * math.pi)
        if kind is BesselKind.J:
            return ja if nu > 0 else cos_nu * ja - sin_nu * ya
        return ya if nu > 0 else cos_nu * ya + sin_nu * ja
    ka = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) * _modified_asym(a, x, 1.0)
    if kind is BesselKind.K:
        return ka
    ia = math.exp(x) / math.sqrt(2.0 * math.pi * x) * _modified_asym(a, x, -1.0)
    if nu > 0:
        return ia
    return ia + 2.0 / math.pi * math.sin(a * math.pi) * ka


def bessel_order(kind, nu: Fraction, x: float) -> float:
    """Bessel function of order ``nu`` in {+-1/3, +-2/3}.

    Parameters
    ----------
    kind : {'J', 'Y', 'I', 'K'} or BesselKind
    nu : fractions.Fraction
    x : float
        Positive argument.
    """
    kind = BesselKind(kind)
    nu = Fraction(nu)
    if nu not in _ORDERS:
        raise ValueError(f"order {nu} not supported; only +-1/3 and +-2/3")
    x = float(x)
    if not x > 0:
        raise DomainError(f"Bessel functions require x > 0, got {x}")
    if x < ASYMPTOTIC_SWITCH:
        return _series_value(kind, nu, x)
    return _asymptotic_value(kind, nu, x)


def bessel_third(kind, x: float, negative: bool = False) -> float:
    """Bessel function of order 1/3 (or -1/3 when ``negative``).

    Parameters
    ----------
    kind : {'J', 'Y', 'I', 'K'}
        Function family.
    x : float
        Argument, must be positive.
    negative : bool, optional
        Evaluate order -1/3 instead of +1/3.

    Returns
    -------
    float

    Raises
    ------
    DomainError
        If ``x <= 0``.

    Examples
    --------
    >>> round(bessel_third('J', 1.0), 12)
    0.730876402169
    """
    return bessel_order(kind, Fraction(-1 if negative else 1, 3), x)


def bessel_third_derivative(kind, x: float) -> float:
    """Derivative of the order-1/3 function with respect to ``x``.

    Uses ``C'_nu = C_{nu-1} - nu C_nu / x`` for J, Y, I and
    ``K'_nu = -K_{nu-1} - nu K_nu / x``.
    """
    kind = BesselKind(kind)
    lower = bessel_order(kind, Fraction(-2, 3), x)
    value = bessel_order(kind, Fraction(1, 3), x)
    if kind is BesselKind.K:
        return -lower - value / (3.0 * x)
    return lower - value / (3.0 * x)
