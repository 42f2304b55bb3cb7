"""Monotone parameter shifts between two asymptotic values.

A shift profile maps a dimensionless "shift time" s to a parameter value
that ramps monotonically from ``lambda_minus`` (s -> -inf) to
``lambda_plus`` (s -> +inf).  Profiles are rate-free: callers evaluate them
at s = r*t, so the same profile serves every rate in a sweep.

Three kinds ship: the smooth tanh ramp, a continuous piecewise-linear
approximation of it, and a constant (for frozen-system consistency checks).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import ConfigError


class ShiftKind(enum.Enum):
    TANH = "tanh"
    PIECEWISE_LINEAR = "piecewise_linear"
    CONSTANT = "constant"


@dataclass(frozen=True)
class ShiftProfile:
    """A monotone ramp between ``lambda_minus`` and ``lambda_plus``.

    ``delta`` is the closeness threshold: the tanh ramp is exactly
    delta-close to its limits at s = +/- tau (see :func:`tau_threshold`),
    and the piecewise-linear kind is constant outside [-tau, tau].
    A Constant profile fixes the value at ``lambda_minus`` and ignores
    ``lambda_plus`` / ``delta``.
    """

    kind: ShiftKind
    lambda_minus: float
    lambda_plus: float = 0.0
    delta: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.lambda_minus) and math.isfinite(self.lambda_plus)):
            raise ConfigError("shift limits must be finite")
        if self.kind is ShiftKind.CONSTANT:
            return
        if not self.lambda_minus < self.lambda_plus:
            raise ConfigError(
                f"shift requires lambda_minus < lambda_plus, "
                f"got {self.lambda_minus} >= {self.lambda_plus}"
            )
        if self.delta is not None:
            width = self.lambda_plus - self.lambda_minus
            # delta = width/2 gives tau = 0 and is allowed as a boundary case.
            if not 0.0 < self.delta <= width / 2.0:
                raise ConfigError(
                    f"delta must lie in (0, {width / 2.0}], got {self.delta}"
                )
        elif self.kind is ShiftKind.PIECEWISE_LINEAR:
            raise ConfigError("piecewise-linear shift requires delta")

    @property
    def width(self) -> float:
        return self.lambda_plus - self.lambda_minus


def tau_threshold(profile: ShiftProfile) -> float:
    """Shift time tau at which the tanh ramp is delta-close to its limits.

    tau = (ln(width - delta) - ln(delta)) / width, so that
    eval_shift(tanh, +tau) == lambda_plus - delta exactly (and symmetrically
    at -tau).  Rejects delta >= width, where the logarithm degenerates.
    """
    if profile.delta is None:
        raise ConfigError("tau_threshold requires a profile with delta set")
    width = profile.width
    if profile.delta >= width:
        raise ConfigError(f"delta ({profile.delta}) must be smaller than the shift width ({width})")
    return (math.log(width - profile.delta) - math.log(profile.delta)) / width


def eval_shift(profile: ShiftProfile, s: float) -> float:
    """Evaluate the shift at shift-time s.

    Tanh:      (width/2) * (tanh(width*s/2) + 1) + lambda_minus
    Piecewise: lambda_minus below -tau, lambda_plus above +tau, and the
               chord through (-tau, lambda_minus), (+tau, lambda_plus)
               in between (slope width/(2*tau)).
    Constant:  lambda_minus for every s.
    """
    if profile.kind is ShiftKind.CONSTANT:
        return profile.lambda_minus
    width = profile.width
    if profile.kind is ShiftKind.TANH:
        return 0.5 * width * (math.tanh(0.5 * width * s) + 1.0) + profile.lambda_minus
    tau = tau_threshold(profile)
    if s < -tau:
        return profile.lambda_minus
    if s > tau:
        return profile.lambda_plus
    mid = 0.5 * (profile.lambda_plus + profile.lambda_minus)
    if tau == 0.0:
        return mid
    return mid + (width / (2.0 * tau)) * s


def shift_derivative(profile: ShiftProfile, s: float) -> float:
    """d(eval_shift)/ds; at the piecewise kinks returns the interior slope."""
    if profile.kind is ShiftKind.CONSTANT:
        return 0.0
    width = profile.width
    if profile.kind is ShiftKind.TANH:
        x = 0.5 * width * s
        if abs(x) > 350.0:  # cosh would overflow; derivative is 0 to machine precision
            return 0.0
        return 0.25 * width * width / math.cosh(x) ** 2
    tau = tau_threshold(profile)
    if -tau <= s <= tau and tau > 0.0:
        return width / (2.0 * tau)
    return 0.0
