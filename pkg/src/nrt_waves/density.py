"""Probability density ``rho = Re(Psi Phi) / N`` on a finite window.

Profiles are sampled on an ``x`` grid at one snapshot time.  Normalisation
integrates the unnormalised density over the window by adaptive quadrature,
splitting at declared breakpoints and at jumps located from the samples.
Two routes to ``rho`` exist for families with a printed closed form: the
lifted fields (:func:`density_profile`) and the closed formula
(:func:`density_closed`); they are cross-checked in the tests.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .errors import (DomainError, NonConvergence, NonIntegrable, PoleError, PoleParameter,
                     UnknownFamily, ValidationError, ZeroMass)
from .numerics import integrate, midpoints
from .solutions import FieldPair, ReductionSpec, Solution, build
from .solutions.logx import c2zero_density_closed
from .solutions.scaling import beta0_density_closed, bernoulli_density_closed
from .solutions.travelling import tw_density_closed

NORMALIZE_TOL = 1e-10
ZERO_MASS_TOL = 1e-10
JUMP_FACTOR = 20.0

_SINGULAR = (PoleError, DomainError, ZeroDivisionError, OverflowError, PoleParameter)


def thread_count() -> int:
    """Worker cap from ``NRT_WAVES_THREADS`` (default 1)."""
    raw = os.environ.get("NRT_WAVES_THREADS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValidationError(f"NRT_WAVES_THREADS must be an integer, got {raw!r}") from exc
    return max(1, n)


def evaluate_grid(func: Callable[[float], complex], xs: Sequence[float]) -> list:
    """``func`` at each point, with ``None`` where it is singular.

    Runs on up to :func:`thread_count` threads; the order of results follows ``xs``.
    """
    def one(x):
        try:
            v = complex(func(float(x)))
        except _SINGULAR:
            return None
        return v if math.isfinite(v.real) and math.isfinite(v.imag) else None

    n = thread_count()
    if n == 1 or len(xs) < 2:
        return [one(x) for x in xs]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(one, xs))


def density_pointwise(fields: FieldPair, x: float, t: float, n_omega: float = 1.0) -> float:
    """``Re(Psi Phi) / N`` at one point.

    ``(w Phi + conj(w Phi)) / 2`` equals ``Re(Psi Phi)``, so only the real
    part of the product is formed.

    Raises
    ------
    PoleError, DomainError
        Propagated from the fields.

    Examples
    --------
    >>> from nrt_waves.solutions import Case, ReductionSpec, constant_curve, lift
    >>> s = ReductionSpec(Case.TRAVELLING_WAVE, 3.0, 1.0, {"alpha": 0.0})
    >>> f = lift(s, constant_curve(2.0), constant_curve(1.5))
    >>> density_pointwise(f, 0.1, 0.2)
    3.0
    """
    return (fields.psi(x, t) * fields.phi(x, t)).real / n_omega


@dataclass(frozen=True)
class DensityProfile:
    """Sampled density at one time.

    Attributes
    ----------
    x : ndarray
        Sample abscissae.
    raw : ndarray
        Unnormalised ``Re(Psi Phi)``; ``nan`` marks a flagged singular point.
    t : float
        Snapshot time.
    omega : (float, float)
        Normalisation window.
    n_omega : float
        Normalisation factor; 1 before :func:`normalize`.
    im_max : float
        Largest ``|Im(Psi Phi)|`` over the samples (discarded, but monitored).
    density : callable or None
        Unnormalised density ``x -> Re(Psi Phi)`` used by :func:`normalize`.
    breakpoints : tuple of float
        Points inside ``omega`` where the density is not smooth.
    source : str
        ``"lifted"`` or ``"closed"``.
    """

    x: np.ndarray
    raw: np.ndarray
    t: float
    omega: tuple[float, float]
    n_omega: float = 1.0
    im_max: float = 0.0
    density: Callable[[float], float] | None = field(default=None, compare=False, repr=False)
    breakpoints: tuple[float, ...] = ()
    source: str = "lifted"

    @property
    def rho(self) -> np.ndarray:
        """Normalised samples ``raw / n_omega``."""
        return self.raw / self.n_omega

    @property
    def samples(self) -> list[tuple[float, float | None]]:
        """``(x, rho)`` pairs with ``None`` at singular points."""
        return [(float(x), None if math.isnan(r) else float(r)) for x, r in zip(self.x, self.rho)]

    @property
    def singular(self) -> np.ndarray:
        return np.isnan(self.raw)

    @property
    def negative(self) -> bool:
        """Whether any sample is negative (reported, never clamped)."""
        return bool(np.any(self.rho[~self.singular] < 0))

    @classmethod
    def from_function(cls, func: Callable[[float], float], xs, t: float, omega, *,
                      breakpoints=(), source: str = "closed") -> "DensityProfile":
        """Sample a real density function on ``xs``."""
        xs = np.asarray(xs, dtype=float)
        vals = evaluate_grid(func, xs)
        raw = np.array([np.nan if v is None else v.real for v in vals])
        return cls(xs, raw, float(t), _omega(omega), 1.0, 0.0, func, tuple(breakpoints), source)


def _omega(omega) -> tuple[float, float]:
    lo, hi = float(omega[0]), float(omega[1])
    if not hi > lo:
        raise ValidationError(f"window must have hi > lo, got {omega}")
    return lo, hi


def _grid(grid, omega) -> np.ndarray:
    if grid is None:
        return midpoints(omega[0], omega[1], 240)
    if isinstance(grid, int):
        return midpoints(omega[0], omega[1], grid)
    return np.asarray(grid, dtype=float)


def density_profile(fields: FieldPair, t: float, omega, grid=None, *,
                    breakpoints=()) -> DensityProfile:
    """Sample ``Re(Psi Phi)`` of lifted fields on a grid.

    Parameters
    ----------
    fields : FieldPair
    t : float
    omega : (float, float)
        Normalisation window.
    grid : int or array_like, optional
        Sample points, or a number of midpoints of ``omega`` (default 240).
    breakpoints : iterable of float
        Known non-smooth points of the density inside ``omega``.

    Returns
    -------
    DensityProfile
        Unnormalised; singular samples are ``nan``.
    """
    omega = _omega(omega)
    xs = _grid(grid, omega)
    prods = evaluate_grid(lambda x: fields.psi(x, t) * fields.phi(x, t), xs)
    raw = np.array([np.nan if v is None else v.real for v in prods])
    ims = [abs(v.imag) for v in prods if v is not None]

    def rho(x):
        return density_pointwise(fields, x, t)

    return DensityProfile(xs, raw, float(t), omega, 1.0, max(ims, default=0.0), rho,
                          tuple(breakpoints), "lifted")


def _locate_jump(f, a: float, b: float, fa: float, fb: float, iters: int = 45) -> float:
    """Bisect towards the larger one-sided change between ``a`` and ``b``."""
    for _ in range(iters):
        m = 0.5 * (a + b)
        fm = f(m)
        if abs(fm - fa) > abs(fb - fm):
            b, fb = m, fm
        else:
            a, fa = m, fm
    return 0.5 * (a + b)


def detect_jumps(profile: DensityProfile) -> list[float]:
    """Jumps of the density located from its samples.

    A step between neighbours larger than ``JUMP_FACTOR`` times the median
    step is bisected to machine resolution.  Branch changes of principal
    powers in complex mode produce such jumps.
    """
    if profile.density is None:
        return []
    ok = ~profile.singular
    xs, r = profile.x[ok], profile.raw[ok]
    if len(xs) < 3:
        return []
    d = np.abs(np.diff(r))
    med = float(np.median(d))
    if med == 0.0:
        return []
    jumps = []
    for i in np.nonzero(d > JUMP_FACTOR * med)[0]:
        try:
            jumps.append(_locate_jump(profile.density, xs[i], xs[i + 1], r[i], r[i + 1]))
        except _SINGULAR:
            continue
    return jumps


def mass(profile: DensityProfile, tol: float = NORMALIZE_TOL) -> float:
    """``int_omega Re(Psi Phi) dx`` of the unnormalised density.

    Raises
    ------
    NonIntegrable
        When the quadrature meets a singular point or does not converge.
    """
    if profile.density is None:
        raise ValidationError("profile carries no density function to integrate")
    lo, hi = profile.omega
    cuts = sorted({*profile.breakpoints, *detect_jumps(profile)})
    try:
        return integrate(profile.density, lo, hi, tol=tol, breakpoints=cuts).real
    except NonConvergence as exc:
        raise NonIntegrable(f"density quadrature failed on {profile.omega}: {exc}") from exc
    except _SINGULAR as exc:
        raise NonIntegrable(f"density is singular inside {profile.omega}: {exc}") from exc


def normalize(profile: DensityProfile, tol: float = NORMALIZE_TOL) -> DensityProfile:
    """Set ``n_omega = int_omega Re(Psi Phi) dx`` and rescale the samples.

    Idempotent: the factor is always recomputed from the unnormalised density.

    Raises
    ------
    ZeroMass
        When the integral vanishes relative to ``int |rho|`` estimated from the samples.
    NonIntegrable
        See :func:`mass`.

    Examples
    --------
    >>> p = DensityProfile.from_function(lambda x: 2.0, [0.5, 1.5], 0.0, (0.0, 4.0))
    >>> n = normalize(p)
    >>> n.n_omega, n.rho.tolist()
    (8.0, [0.25, 0.25])
    """
    n = mass(profile, tol)
    finite = profile.raw[~profile.singular]
    scale = float(np.mean(np.abs(finite))) * (profile.omega[1] - profile.omega[0]) \
        if finite.size else 0.0
    if scale == 0.0 or abs(n) <= ZERO_MASS_TOL * scale:
        raise ZeroMass(f"density integrates to {n:.3g} over {profile.omega}")
    return replace(profile, n_omega=n)


def mass_rate(fields: FieldPair, omega, t: float, h: float = 1e-3,
              breakpoints=()) -> float:
    """Diagnostic ``dN/dt`` by a central difference of the window mass.

    The families are not known to conserve the mass on a finite window;
    this is reported, never asserted.
    """
    def at(s):
        return mass(density_profile(fields, s, omega, 60, breakpoints=breakpoints))

    return (at(t + h) - at(t - h)) / (2 * h)


# ---------------------------------------------------------------------------
# printed closed forms

CLOSED_DENSITIES: dict[str, Callable[[ReductionSpec, float, float], float]] = {
    "tw.gtf.r2": tw_density_closed,
    "sc.beta0": beta0_density_closed,
    "sc.bernoulli": bernoulli_density_closed,
    "sc.bernoulli.q3": bernoulli_density_closed,
    "lx.c2zero": c2zero_density_closed,
}


def density_closed(family_id: str, spec: ReductionSpec, grid, t: float, omega=None, *,
                   breakpoints=()) -> DensityProfile:
    """Evaluate a family's printed closed-form density directly.

    Parameters
    ----------
    family_id : str
        One of ``CLOSED_DENSITIES``.
    spec : ReductionSpec
    grid : int or array_like
        Sample points or a number of midpoints of ``omega``.
    t : float
    omega : (float, float), optional
        Defaults to the span of ``grid``.

    Raises
    ------
    UnknownFamily
        When the family has no printed density.
    """
    try:
        func = CLOSED_DENSITIES[family_id]
    except KeyError:
        raise UnknownFamily(family_id) from None
    if omega is None:
        pts = np.asarray(grid, dtype=float)
        omega = (float(pts.min()), float(pts.max()))
    omega = _omega(omega)
    return DensityProfile.from_function(lambda x: func(spec, x, t), _grid(grid, omega), t,
                                        omega, breakpoints=breakpoints, source="closed")


# ---------------------------------------------------------------------------
# figure presets


@dataclass(frozen=True)
class FigurePreset:
    """Constants, snapshot time and window of one plotted density.

    Constants the captions leave open take documented defaults: ``z0 = 0``
    and ``omega`` equal to the plotted window.
    """

    name: str
    family_id: str
    q: float
    b: complex
    constants: dict
    t: float
    omega: tuple[float, float]
    n: int = 240
    breakpoints: tuple[float, ...] = ()

    def solution(self) -> Solution:
        return build(self.family_id, q=self.q, b=self.b, **self.constants)

    def grid(self) -> np.ndarray:
        return midpoints(self.omega[0], self.omega[1], self.n)

    def lifted(self) -> DensityProfile:
        return density_profile(self.solution().fields(), self.t, self.omega, self.grid(),
                               breakpoints=self.breakpoints)

    def closed(self) -> DensityProfile:
        sol = self.solution()
        return density_closed(self.family_id, sol.spec, self.grid(), self.t, self.omega,
                              breakpoints=self.breakpoints)


FIG1_Q = (1.9, 2.0, 2.1, 2.2, 2.3)


def _fig1(q: float) -> FigurePreset:
    k1 = float(np.sign(q - 2.0))
    return FigurePreset(f"fig1-q{q:g}", "tw.gtf.r2", q, -0.5j,
                        {"alpha": 1j, "beta": 1j, "K1": k1, "K2": 0.0, "z0": 0.0},
                        0.0, (-3.0, 3.0), breakpoints=(0.0,))


FIGURE_PRESETS: dict[str, FigurePreset] = {p.name: p for p in map(_fig1, FIG1_Q)}
FIGURE_PRESETS["fig2"] = FigurePreset("fig2", "sc.beta0", 2.0, -0.5j, {"alpha": 1j}, 1.0,
                                      (-3.0, 3.0))


def figure_preset(name: str) -> FigurePreset:
    try:
        return FIGURE_PRESETS[name]
    except KeyError:
        raise ValidationError(
            f"unknown figure preset {name!r}; known: {', '.join(FIGURE_PRESETS)}") from None


__all__ = ["density_pointwise", "DensityProfile", "density_profile", "normalize", "mass",
           "mass_rate", "detect_jumps", "density_closed", "CLOSED_DENSITIES", "FigurePreset",
           "FIGURE_PRESETS", "FIG1_Q", "figure_preset", "evaluate_grid", "thread_count"]
