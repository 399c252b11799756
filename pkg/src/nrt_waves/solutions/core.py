"""Shared types for the solution families: specs, curves and lifted fields.

A :class:`ReductionSpec` pins the reduction case, the nonlinearity index
``q``, the coefficient ``b`` and a per-family namespace of integration
constants.  Reduced solutions are exposed as :class:`CurveFn` objects and
assembled into PDE fields by :func:`lift`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Callable, Mapping

from scipy.optimize import brentq

from ..branch import cpow
from ..errors import BracketError, DomainError, NonConvergence, PoleError, ValidationError


class Case(str, Enum):
    """The four similarity reductions of the governing system."""

    TRAVELLING_WAVE = "travelling-wave"
    SCALING = "scaling"
    LOG_T = "log-t"
    LOG_X = "log-x"


class CurveKind(str, Enum):
    """How a reduced curve is evaluated."""

    CLOSED = "closed"
    QUADRATURE = "quadrature"
    IMPLICIT = "implicit"
    PARAMETRIC = "parametric"


#: Integer-valued selectors that may appear among the constants.
INTEGER_KEYS = frozenset({"m", "n", "sign"})


def _coerce(name: str, value) -> complex | int:
    if name in INTEGER_KEYS:
        if isinstance(value, complex):
            if value.imag != 0:
                raise ValidationError(f"constant {name!r} must be an integer")
            value = value.real
        if float(value) != int(value):
            raise ValidationError(f"constant {name!r} must be an integer")
        return int(value)
    try:
        v = complex(value)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"constant {name!r} is not a number: {value!r}") from exc
    if not (math.isfinite(v.real) and math.isfinite(v.imag)):
        raise ValidationError(f"constant {name!r} must be finite")
    return v


@dataclass(frozen=True)
class ReductionSpec:
    """Reduction case, nonlinearity index, ``b`` and integration constants.

    Parameters
    ----------
    case : Case
        Which similarity reduction the family belongs to.
    q : float
        Nonlinearity index; ``q = 1`` (the linear equation) is rejected.
    b : complex
        Coefficient ``hbar / (2 m i)``; real values give the real test mode.
    constants : mapping
        Family-namespaced constants such as ``alpha``, ``beta``, ``K1``.
    family : str, optional
        Registry identifier of the family the spec was built for.

    Examples
    --------
    >>> s = ReductionSpec(Case.TRAVELLING_WAVE, 2.5, 1.0, {"alpha": 1, "beta": 1})
    >>> s.c("alpha")
    (1+0j)
    >>> s.perturbed("beta", 1.01).c("beta")
    (1.01+0j)
    """

    case: Case
    q: float
    b: complex
    constants: Mapping[str, complex] = field(default_factory=dict)
    family: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "case", Case(self.case))
        q = self.q
        if isinstance(q, complex):
            if q.imag != 0:
                raise ValidationError("q must be real")
            q = q.real
        q = float(q)
        if not math.isfinite(q):
            raise ValidationError("q must be finite")
        if q == 1.0:
            raise ValidationError("q = 1 is the linear equation; the reductions need q != 1")
        object.__setattr__(self, "q", q)
        b = _coerce("b", self.b)
        if b == 0:
            raise ValidationError("b must be nonzero")
        object.__setattr__(self, "b", b)
        consts = {k: _coerce(k, v) for k, v in dict(self.constants).items()}
        object.__setattr__(self, "constants", MappingProxyType(consts))

    # -- access -------------------------------------------------------------

    def has(self, name: str) -> bool:
        return name in self.constants

    def c(self, name: str, default=None) -> complex:
        """Constant ``name`` as a complex number."""
        if name in self.constants:
            return complex(self.constants[name])
        if default is None:
            raise ValidationError(f"constant {name!r} is required by this family")
        return complex(default)

    def r(self, name: str, default=None) -> float:
        """Constant ``name`` as a real number (rejects complex values)."""
        v = self.c(name, default)
        if v.imag != 0:
            raise ValidationError(f"constant {name!r} must be real here, got {v}")
        return v.real

    def i(self, name: str, default=None) -> int:
        """Integer-valued selector such as ``m``, ``n`` or ``sign``."""
        if name in self.constants:
            return int(self.constants[name])
        if default is None:
            raise ValidationError(f"constant {name!r} is required by this family")
        return int(default)

    @property
    def real_mode(self) -> bool:
        """True when ``b`` and every constant are real."""
        return self.b.imag == 0 and all(
            complex(v).imag == 0 for v in self.constants.values())

    # -- derivation ---------------------------------------------------------

    def with_constants(self, **updates) -> "ReductionSpec":
        """Copy with some constants replaced (``q`` and ``b`` allowed too)."""
        q = updates.pop("q", self.q)
        b = updates.pop("b", self.b)
        consts = dict(self.constants)
        consts.update(updates)
        return ReductionSpec(self.case, q, b, consts, self.family)

    def perturbed(self, name: str, factor: float) -> "ReductionSpec":
        """Copy with one constant (or ``q``/``b``) multiplied by ``factor``."""
        if name == "q":
            return self.with_constants(q=self.q * factor)
        if name == "b":
            return self.with_constants(b=self.b * factor)
        if name not in self.constants:
            raise ValidationError(f"cannot perturb unknown constant {name!r}")
        if name in INTEGER_KEYS:
            raise ValidationError(f"cannot perturb integer selector {name!r}")
        return self.with_constants(**{name: self.c(name) * factor})

    def as_dict(self) -> dict:
        return {"case": self.case.value, "q": self.q, "b": self.b,
                "constants": dict(self.constants), "family": self.family}


# ---------------------------------------------------------------------------
# curves


class CurveFn:
    """Evaluable reduced solution ``z -> value``.

    Parameters
    ----------
    func : callable
        Evaluation routine.
    kind : CurveKind
        Closed form, quadrature, implicit or parametric component.
    name : str
        Label used in reports.
    singular : sequence of (float, float)
        Family-declared exclusion intervals (poles, branch points).
    """

    def __init__(self, func: Callable[[complex], complex], kind: CurveKind,
                 name: str = "", singular=()):
        self._func = func
        self.kind = CurveKind(kind)
        self.name = name
        self.singular = tuple((float(lo), float(hi)) for lo, hi in singular)

    def __call__(self, z) -> complex:
        return complex(self._func(z))

    eval = __call__

    def is_singular(self, z) -> bool:
        """True when ``z`` lies in a declared exclusion zone."""
        zr = complex(z).real
        return any(lo <= zr <= hi for lo, hi in self.singular)

    def __repr__(self):
        return f"CurveFn({self.name!r}, kind={self.kind.value})"


class ImplicitCurve(CurveFn):
    """Curve defined by a real relation ``R(P, z) = 0`` solved per query.

    Roots are located by scanning the bracket for sign changes and refined
    with Brent's method.  When several roots exist the one closest to the
    previous answer is returned, so a sweep follows one branch.  That
    continuation state makes instances unsafe to share across threads.

    Parameters
    ----------
    relation : callable
        ``R(P, z)`` for real ``P`` and ``z``.
    bracket : (float, float) or callable
        Search interval for ``P``, or a function of ``z`` returning one.
    scan : int
        Number of scan cells used to isolate sign changes.
    tol : float
        Required ``|R|`` at the returned root.
    """

    def __init__(self, relation: Callable[[float, float], float], bracket, *,
                 name: str = "", singular=(), scan: int = 64, tol: float = 1e-10,
                 geometric: bool = False):
        super().__init__(self._solve, CurveKind.IMPLICIT, name, singular)
        self.relation = relation
        self.bracket = bracket
        self.scan = scan
        self.tol = tol
        self.geometric = geometric
        self._last: float | None = None

    def _grid(self, lo: float, hi: float):
        if self.geometric and lo > 0:
            r = (hi / lo) ** (1.0 / self.scan)
            return [lo * r ** k for k in range(self.scan + 1)]
        return [lo + (hi - lo) * k / self.scan for k in range(self.scan + 1)]

    def _solve(self, z) -> float:
        zc = complex(z)
        if zc.imag != 0:
            raise DomainError("implicit curves are solved on the real line only")
        z = zc.real
        lo, hi = self.bracket(z) if callable(self.bracket) else self.bracket
        grid = self._grid(lo, hi)
        vals = [self.relation(p, z) for p in grid]
        roots = []
        for (p0, v0), (p1, v1) in zip(zip(grid, vals), zip(grid[1:], vals[1:])):
            if v0 == 0:
                roots.append(p0)
            elif v0 * v1 < 0:
                roots.append(brentq(lambda p: self.relation(p, z), p0, p1,
                                    xtol=1e-300, rtol=4 * 2.0 ** -52, maxiter=200))
        if vals[-1] == 0:
            roots.append(grid[-1])
        if not roots:
            raise BracketError(f"no root of the implicit relation in [{lo}, {hi}] at z={z}")
        if self._last is None or len(roots) == 1:
            root = roots[0]
        else:
            root = min(roots, key=lambda p: abs(p - self._last))
        res = abs(self.relation(root, z))
        if res >= self.tol:
            raise NonConvergence(f"implicit root residual {res:.3e} exceeds {self.tol}",
                                 bracket=(lo, hi))
        self._last = root
        return root

    def residual(self, z) -> float:
        """``|R(P(z), z)|`` for the root returned at ``z``."""
        return abs(self.relation(self._solve(z), complex(z).real))


class ParametricCurve:
    """Bundle of component curves sharing one parameter ``tau``.

    Components are addressed by name, e.g. ``curve["y"]``, and each is a
    :class:`CurveFn` of kind ``parametric``.
    """

    def __init__(self, components: Mapping[str, Callable[[float], complex]],
                 name: str = "", singular=()):
        self.name = name
        self.singular = tuple(singular)
        self.components = {
            k: CurveFn(f, CurveKind.PARAMETRIC, f"{name}.{k}", singular)
            for k, f in components.items()}
        self.kind = CurveKind.PARAMETRIC

    def __getitem__(self, key: str) -> CurveFn:
        return self.components[key]

    def __contains__(self, key: str) -> bool:
        return key in self.components

    def __call__(self, tau) -> dict[str, complex]:
        return {k: c(tau) for k, c in self.components.items()}

    def keys(self):
        return self.components.keys()


def constant_curve(value: complex, name: str = "Q") -> CurveFn:
    """Curve returning ``value`` everywhere."""
    v = complex(value)
    return CurveFn(lambda z: v, CurveKind.CLOSED, name)


# ---------------------------------------------------------------------------
# lifting


@dataclass(frozen=True)
class FieldPair:
    """Lifted fields ``Psi(x, t)``, ``Phi(x, t)`` of one reduced solution.

    ``psi`` and ``phi`` raise :class:`~nrt_waves.errors.PoleError` or
    :class:`~nrt_waves.errors.DomainError` at singular points; use
    :meth:`sample` to get ``None`` markers instead.
    """

    psi: Callable[[float, float], complex]
    phi: Callable[[float, float], complex]
    reduction: ReductionSpec
    similarity: Callable[[float, float], complex]

    def sample(self, x: float, t: float):
        """``(psi, phi)`` at ``(x, t)``, or ``None`` at a flagged singularity."""
        try:
            p, f = self.psi(x, t), self.phi(x, t)
        except (PoleError, DomainError, ZeroDivisionError, OverflowError):
            return None
        if not (cmath.isfinite(p) and cmath.isfinite(f)):
            return None
        return p, f


def _tw_c4(spec: ReductionSpec) -> complex:
    if spec.has("c4"):
        return spec.c("c4")
    return spec.c("alpha") * spec.b


def lift(spec: ReductionSpec, P: CurveFn, Q: CurveFn, *, principal: bool = False) -> FieldPair:
    """Assemble ``Psi``, ``Phi`` from reduced curves via the case's similarity map.

    Parameters
    ----------
    spec : ReductionSpec
    P, Q : CurveFn
        Reduced wave and auxiliary curves.
    principal : bool
        Allow ``t <= 0`` (Cases 2, 3) or ``x <= 0`` (Case 4) by taking
        principal-branch powers and logarithms.

    Returns
    -------
    FieldPair

    Raises
    ------
    DomainError
        At evaluation time, for ``t <= 0`` or ``x <= 0`` as above unless
        ``principal`` is set.

    Examples
    --------
    >>> s = ReductionSpec(Case.TRAVELLING_WAVE, 3.0, 1.0, {"alpha": 0.0})
    >>> f = lift(s, constant_curve(2.0), constant_curve(0.0))
    >>> f.psi(0.3, 1.2), f.phi(0.3, 1.2)
    ((2+0j), 0j)
    """
    q = spec.q

    def _need_positive(v: float, what: str):
        if not principal and not (complex(v).real > 0 and complex(v).imag == 0):
            raise DomainError(f"{what} must be positive for this reduction (got {v})")

    if spec.case is Case.TRAVELLING_WAVE:
        c4 = _tw_c4(spec)
        c6 = spec.c("c6", 0.0)

        def z_of(x, t):
            return x - c4 * t

        def psi(x, t):
            return P(_real_if_possible(z_of(x, t)))

        def phi(x, t):
            return Q(_real_if_possible(z_of(x, t))) * cmath.exp(c6 * t)

    elif spec.case is Case.SCALING:
        eps = spec.c("eps")
        sigma = spec.c("sigma", 0.0)
        k = (1.0 - 2.0 * eps) / (q - 1.0)

        def z_of(x, t):
            _need_positive(t, "t")
            return x * cpow(t, -eps)

        def psi(x, t):
            return P(_real_if_possible(z_of(x, t))) * cpow(t, k)

        def phi(x, t):
            return Q(_real_if_possible(z_of(x, t))) * cpow(t, -sigma)

    elif spec.case is Case.LOG_T:
        c4 = spec.c("c4", 0.0)
        sigma = spec.c("sigma", 0.0)

        def z_of(x, t):
            _need_positive(t, "t")
            return x - c4 * cmath.log(t)

        def psi(x, t):
            return P(_real_if_possible(z_of(x, t))) * cpow(t, 1.0 / (q - 1.0))

        def phi(x, t):
            return Q(_real_if_possible(z_of(x, t))) * cpow(t, -sigma)

    else:
        c2 = spec.c("c2", 0.0)
        sigma = spec.c("sigma", 0.0)

        def z_of(x, t):
            _need_positive(x, "x")
            return t - c2 * cmath.log(x)

        def psi(x, t):
            return P(_real_if_possible(z_of(x, t))) * cpow(x, -2.0 / (q - 1.0))

        def phi(x, t):
            return Q(_real_if_possible(z_of(x, t))) * cpow(x, -sigma)

    return FieldPair(psi, phi, spec, z_of)


def _real_if_possible(z: complex):
    z = complex(z)
    return z.real if z.imag == 0 else z
