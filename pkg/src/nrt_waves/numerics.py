"""Finite-difference stencils and Gauss-Legendre quadrature helpers.

These are the numerical primitives shared by the solution constructors
(quadrature-kind curves), the density normalisation and the residual
engine.  Differentiation is always numerical; nothing here knows about
the governing equations.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import NonConvergence

#: Relative step of the 5-point ODE stencils, ``h = STEP_REL * max(1, |z|)``.
STEP_REL = 1e-3

_GL_LOW = np.polynomial.legendre.leggauss(20)
_GL_HIGH = np.polynomial.legendre.leggauss(40)


def default_step(z: complex) -> float:
    """Stencil step for a sample located at ``z``."""
    return STEP_REL * max(1.0, abs(z))


def derivative(f: Callable[[float], complex], z: float, order: int = 1,
               h: float | None = None) -> complex:
    """Fourth-order central finite difference of ``f`` at ``z``.

    Parameters
    ----------
    f : callable
        Function of one real variable (complex values allowed).
    z : float
        Evaluation point.
    order : {1, 2}
        Derivative order.
    h : float, optional
        Step; defaults to :func:`default_step`.

    Returns
    -------
    complex

    Examples
    --------
    >>> abs(derivative(math.sin, 0.3) - math.cos(0.3)) < 1e-12
    True
    """
    if h is None:
        h = default_step(z)
    fm2, fm1, fp1, fp2 = f(z - 2 * h), f(z - h), f(z + h), f(z + 2 * h)
    if order == 1:
        return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h)
    if order == 2:
        f0 = f(z)
        return (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h)
    raise ValueError("only first and second derivatives are supported")


def derivatives(f: Callable[[float], complex], z: float,
                h: float | None = None) -> tuple[complex, complex, complex]:
    """Value, first and second derivative from one 5-point stencil."""
    if h is None:
        h = default_step(z)
    fm2, fm1, f0, fp1, fp2 = (f(z - 2 * h), f(z - h), f(z), f(z + h), f(z + 2 * h))
    d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h)
    d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h)
    return f0, d1, d2


def gauss_legendre(f: Callable[[float], complex], a: float, b: float,
                   rule=_GL_HIGH) -> complex:
    """Fixed-order Gauss-Legendre rule on ``[a, b]``."""
    x, w = rule
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return half * sum(wi * f(mid + half * xi) for xi, wi in zip(x, w))


def integrate(f: Callable[[float], complex], a: float, b: float, *,
              tol: float = 1e-13, max_depth: int = 40,
              breakpoints=()) -> complex:
    """Adaptive Gauss-Legendre quadrature (20- vs 40-point bisection).

    Parameters
    ----------
    f : callable
        Integrand of one real variable, may be complex valued.
    a, b : float
        Limits; ``a > b`` flips the sign.
    tol : float
        Accept a panel when the two rules differ by less than
        ``tol * max(1, |I|)`` scaled by the panel's share of ``[a, b]``.
    max_depth : int
        Maximum bisection depth.
    breakpoints : iterable of float
        Interior points where the integrand is not smooth; panels are
        split there first and nodes never land on them.

    Returns
    -------
    complex

    Raises
    ------
    NonConvergence
        If some panel cannot meet the tolerance within ``max_depth``.

    Examples
    --------
    >>> abs(integrate(math.exp, 0.0, 1.0) - (math.e - 1)) < 1e-14
    True
    """
    if a == b:
        return 0.0j
    if a > b:
        return -integrate(f, b, a, tol=tol, max_depth=max_depth, breakpoints=breakpoints)
    cuts = [a] + sorted(p for p in breakpoints if a < p < b) + [b]
    total = 0.0j
    length = b - a
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        stack = [(lo, hi, 0)]
        while stack:
            u, v, depth = stack.pop()
            coarse = gauss_legendre(f, u, v, _GL_LOW)
            fine = gauss_legendre(f, u, v, _GL_HIGH)
            share = (v - u) / length
            if abs(fine - coarse) <= tol * max(1.0, abs(fine)) * max(share, 1e-3):
                total += fine
                continue
            if depth >= max_depth:
                raise NonConvergence(
                    f"adaptive quadrature did not converge on [{u}, {v}]",
                    attempts=("gauss-legendre-20/40",), bracket=(u, v))
            m = 0.5 * (u + v)
            stack.append((u, m, depth + 1))
            stack.append((m, v, depth + 1))
    return complex(total)


class AnchoredIntegral:
    """Primitive ``F(z) = int_anchor^z f`` with cached whole panels.

    Whole panels ``[anchor + k*width, anchor + (k+1)*width]`` are integrated
    once and cached; the remaining partial panel is integrated on demand.
    The result is a smooth function of ``z``, which keeps finite
    differences of quadrature-defined curves clean.

    Not thread safe: the panel cache is mutated on first use.
    """

    def __init__(self, f: Callable[[float], complex], anchor: float,
                 width: float = 0.25, tol: float = 1e-14):
        self.f = f
        self.anchor = float(anchor)
        self.width = float(width)
        self.tol = tol
        self._cum = {0: 0.0j}

    def _through(self, k: int) -> complex:
        """Integral from the anchor to the k-th grid point."""
        if k in self._cum:
            return self._cum[k]
        step = 1 if k > 0 else -1
        j = 0
        while j + step in self._cum and j != k:
            j += step
        acc = self._cum[j]
        while j != k:
            u = self.anchor + j * self.width
            v = self.anchor + (j + step) * self.width
            acc += integrate(self.f, u, v, tol=self.tol)
            j += step
            self._cum[j] = acc
        return acc

    def __call__(self, z: float) -> complex:
        z = float(z)
        k = math.floor((z - self.anchor) / self.width) if z >= self.anchor else \
            math.ceil((z - self.anchor) / self.width)
        base = self.anchor + k * self.width
        return self._through(k) + integrate(self.f, base, z, tol=self.tol)


def midpoints(lo: float, hi: float, n: int) -> np.ndarray:
    """``n`` cell midpoints of ``[lo, hi]``; never hits the endpoints."""
    return lo + (np.arange(n) + 0.5) * (hi - lo) / n
