"""Special-function kernels used by the solution families.

All functions are pure and thread-safe.
"""

from ._gamma import gamma, rgamma
from .bessel import BesselKind, bessel_order, bessel_third, bessel_third_derivative
from .erf import erf, erf_inv, erf_inv_complex, erfc
from .hypergeometric import hyp2f1
from .incgamma import gamma_upper
from .weierstrass import WeierstrassInvariants, weierstrass_p

__all__ = [
    "BesselKind",
    "WeierstrassInvariants",
    "bessel_order",
    "bessel_third",
    "bessel_third_derivative",
    "erf",
    "erf_inv",
    "erf_inv_complex",
    "erfc",
    "gamma",
    "gamma_upper",
    "hyp2f1",
    "rgamma",
    "weierstrass_p",
]
