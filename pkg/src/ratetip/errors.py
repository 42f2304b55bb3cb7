"""Exception hierarchy shared across the package.

Two top branches: ``ConfigError`` for bad user input (CLI exit code 2) and
``NumericalError`` for failures of the numerics themselves (exit code 3).
"""

from __future__ import annotations


class RatetipError(Exception):
    """Base class for all package errors."""


class ConfigError(RatetipError):
    """Invalid run configuration (unknown key, bad value, bad combination)."""


class NumericalError(RatetipError):
    """A numerical procedure failed to produce a usable result."""


class IntegrationError(NumericalError):
    """Base class for integrator failures."""


class StepBudgetExceeded(IntegrationError):
    """The step budget ran out before reaching the end time."""


class Blowup(IntegrationError):
    """Trajectory left the escape radius (a tipping outcome, not a bug)."""

    def __init__(self, t: float, state, radius: float):
        self.t = float(t)
        self.state = state
        self.radius = float(radius)
        self.partial = None  # IntegrationResult computed before the escape, when available
        super().__init__(f"state escaped |x| > {radius:g} at t = {t:.6g}")


class NonFiniteState(IntegrationError):
    """NaN or Inf appeared in the state vector."""


class NoReturn(NumericalError):
    """No qualifying section crossing occurred within the flight-time cap."""


class NoCrossing(NumericalError):
    """A run produced no section crossings at all."""


class NewtonDiverged(NumericalError):
    """Newton iteration failed to reduce the residual within its budget."""


class SingularJacobian(NumericalError):
    """Newton matrix (DP - I) is numerically singular."""


class ComplexMultipliers(NumericalError):
    """Return-map Jacobian has a complex eigenvalue pair (unsupported here)."""


class NoBracket(NumericalError):
    """A root-bracketing search found no sign change on the given range."""


class NoRealEquilibria(NumericalError):
    """The frozen system has no real equilibria (negative discriminant)."""


class DegenerateEigenbasis(NumericalError):
    """Stable/unstable eigenvectors are too close to parallel to invert."""
