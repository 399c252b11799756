"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class NrtError(Exception):
    """Base class for all package errors."""


class ValidationError(NrtError, ValueError):
    """Invalid parameters or constants supplied to a constructor."""


class DomainError(NrtError, ValueError):
    """Argument outside the domain where a function is defined."""


class PoleParameter(NrtError, ValueError):
    """Parameter sits on a pole of a special function (e.g. c = 0, -1, ...)."""


class NonConvergence(NrtError, ArithmeticError):
    """Iterative method failed to converge within its budget.

    Parameters
    ----------
    message : str
        Description of the failure.
    attempts : tuple of str, optional
        Names of the evaluation paths that were tried.
    bracket : tuple of float, optional
        Final bracket of a root search, if any.
    """

    def __init__(self, message: str, *, attempts=(), bracket=None):
        super().__init__(message)
        self.attempts = tuple(attempts)
        self.bracket = bracket


class PoleError(NrtError, ArithmeticError):
    """Evaluation point coincides with (or is too close to) a pole.

    Parameters
    ----------
    message : str
        Description of the failure.
    nearest : complex, optional
        Estimate of the nearest pole location.
    """

    def __init__(self, message: str, *, nearest=None):
        super().__init__(message)
        self.nearest = nearest


class BracketError(NrtError, ArithmeticError):
    """No sign change was found in the configured root bracket."""


class UnsupportedPair(NrtError, ValueError):
    """Sundman exponent pair without a closed-form solution."""


class UnknownFamily(NrtError, KeyError):
    """Solution family identifier is not registered."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class UnknownRelation(NrtError, KeyError):
    """First-integral relation identifier is not registered."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ZeroMass(NrtError, ArithmeticError):
    """Density integrates to zero so it cannot be normalized."""


class NonIntegrable(NrtError, ArithmeticError):
    """Quadrature of the density failed (e.g. near a singular endpoint)."""


class TooFewPoints(NrtError, ArithmeticError):
    """More than half the residual sample points were skipped as singular."""


class NonMonotone(UserWarning):
    """Residuals did not decrease as the finite-difference step was refined."""
