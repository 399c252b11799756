"""Weierstrass elliptic function from its Laurent series and duplication.

Near the origin ``P(z) = z^-2 + sum_{k>=2} c_k z^(2k-2)`` with
``c_2 = g2/20``, ``c_3 = g3/28`` and the standard convolution recurrence.
A general argument is halved until it falls well inside the disc of
convergence, evaluated there, and doubled back with

    P(2u) = (6 P^2 - g2/2)^2 / (4 (4 P^3 - g2 P - g3)) - 2 P.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import lru_cache

from ..errors import PoleError

_N_COEF = 40
_SAFETY = 0.3
OVERFLOW = 1e14


@dataclass(frozen=True)
class WeierstrassInvariants:
    """Lattice invariants ``(g2, g3)``.

    Attributes
    ----------
    g2, g3 : complex
    """

    g2: complex
    g3: complex

    def __post_init__(self):
        object.__setattr__(self, "g2", complex(self.g2))
        object.__setattr__(self, "g3", complex(self.g3))
        if not (cmath.isfinite(self.g2) and cmath.isfinite(self.g3)):
            raise ValueError("Weierstrass invariants must be finite")

    @property
    def discriminant(self) -> complex:
        """``g2^3 - 27 g3^2``."""
        return self.g2 ** 3 - 27.0 * self.g3 ** 2

    @property
    def degenerate(self) -> bool:
        """True when the discriminant vanishes (the lattice degenerates)."""
        scale = max(abs(self.g2) ** 3, 27.0 * abs(self.g3) ** 2, 1e-300)
        return abs(self.discriminant) <= 1e-14 * scale


@lru_cache(maxsize=64)
def _laurent(g2: complex, g3: complex) -> tuple[tuple[complex, ...], float]:
    """Laurent coefficients c_2..c_N and a safe evaluation radius."""
    c = [0j, 0j, g2 / 20.0, g3 / 28.0]
    for k in range(4, _N_COEF + 1):
        acc = sum(c[m] * c[k - m] for m in range(2, k - 1))
        c.append(3.0 * acc / ((2 * k + 1) * (k - 3)))
    # Root-test estimate of the distance to the nearest lattice point.
    radius = float("inf")
    for k in range(_N_COEF - 8, _N_COEF + 1):
        if c[k] != 0:
            radius = min(radius, abs(c[k]) ** (-1.0 / (2 * k - 2)))
    if radius == float("inf"):
        radius = 1.0
    return tuple(c), _SAFETY * radius


def _series(z: complex, coef) -> complex:
    z2 = z * z
    total = 0j
    for k in range(len(coef) - 1, 1, -1):
        total = total * z2 + coef[k]
    return 1.0 / z2 + total * z2


def weierstrass_p(z: complex, inv: WeierstrassInvariants) -> complex:
    """Weierstrass P-function ``P(z; g2, g3)``.

    Parameters
    ----------
    z : complex
        Argument; must not be a lattice point.
    inv : WeierstrassInvariants
        Invariants of the lattice.

    Returns
    -------
    complex

    Raises
    ------
    PoleError
        If ``|P|`` exceeds the overflow threshold; ``nearest`` carries the
        estimate ``z - 1/sqrt(P)`` of the nearby lattice point.

    Examples
    --------
    >>> inv = WeierstrassInvariants(0.0, -1 / 16)
    >>> abs(weierstrass_p(1e-4, inv) * 1e-8 - 1) < 1e-12
    True
    """
    z = complex(z)
    if z == 0:
        raise PoleError("P has a double pole at the origin", nearest=0j)
    coef, r0 = _laurent(inv.g2, inv.g3)
    n = 0
    u = z
    while abs(u) > r0:
        u *= 0.5
        n += 1
        if n > 200:
            break
    val = _series(u, coef)
    g2, g3 = inv.g2, inv.g3
    for _ in range(n):
        denom = 4.0 * (4.0 * val ** 3 - g2 * val - g3)
        if denom == 0:
            raise PoleError("argument is a lattice point", nearest=z)
        val = (6.0 * val * val - 0.5 * g2) ** 2 / denom - 2.0 * val
        if not cmath.isfinite(val):
            raise PoleError("argument is a lattice point", nearest=z)
    if abs(val) > OVERFLOW:
        raise PoleError("argument too close to a lattice point",
                        nearest=z - 1.0 / cmath.sqrt(val))
    return val
