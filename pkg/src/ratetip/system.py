"""The Rossler vector field, frozen and with a time-dependent parameter.

States are plain numpy arrays of shape (3,).  The frozen system is

    x' = -y - z
    y' = x + a*y
    z' = b + z*(x - c)

and the nonautonomous variant replaces ``a`` by ``shift(rate * t)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NoRealEquilibria
from .shift import ShiftProfile, eval_shift

State = np.ndarray  # shape (3,), float64

DEFAULT_PARAMS_TUPLE = (0.2, 0.2, 5.7)


@dataclass(frozen=True)
class RosslerParams:
    """Frozen-system parameters (a, b, c); defaults (0.2, 0.2, 5.7)."""

    a: float = 0.2
    b: float = 0.2
    c: float = 5.7

    def __post_init__(self):
        for name in ("a", "b", "c"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"parameter {name} must be finite")


@dataclass(frozen=True)
class NonautonomousSpec:
    """The shifted system: fixed (b, c), ``a`` driven by shift(rate * t)."""

    b: float
    c: float
    shift: ShiftProfile
    rate: float

    def __post_init__(self):
        if not self.rate > 0.0:
            raise ConfigError(f"rate must be positive, got {self.rate}")

    def a_of_t(self, t: float) -> float:
        return eval_shift(self.shift, self.rate * t)

    def frozen_at(self, t: float) -> RosslerParams:
        return RosslerParams(self.a_of_t(t), self.b, self.c)

    def future_params(self) -> RosslerParams:
        """Frozen parameters of the future limit system (a = lambda_plus)."""
        return RosslerParams(self.shift.lambda_plus, self.b, self.c)

    def past_params(self) -> RosslerParams:
        return RosslerParams(self.shift.lambda_minus, self.b, self.c)


def vector_field_frozen(p: RosslerParams, s: State) -> State:
    """Right-hand side of the frozen Rossler system."""
    x, y, z = s
    return np.array([-y - z, x + p.a * y, p.b + z * (x - p.c)])


def jacobian_frozen(p: RosslerParams, s: State) -> np.ndarray:
    """3x3 Jacobian of the frozen field at state s."""
    x, _, z = s
    return np.array(
        [
            [0.0, -1.0, -1.0],
            [1.0, p.a, 0.0],
            [z, 0.0, x - p.c],
        ]
    )


def divergence_frozen(p: RosslerParams, s: State) -> float:
    """div f = a + x - c (trace of the Jacobian)."""
    return p.a + s[0] - p.c


def equilibria(p: RosslerParams) -> tuple[State, ...]:
    """Equilibria of the frozen system, inner (smaller |zeta|) first.

    Writing the equilibria as zeta * (a, -1, 1), zeta solves
    a*zeta^2 - c*zeta + b = 0.  For a = 0 the quadratic degenerates and the
    single equilibrium (0, -b/c, b/c) is returned on its own; this case is
    reachable because the shift passes through a = 0.

    Raises
    ------
    NoRealEquilibria
        If c^2 < 4ab.
    """
    if p.a == 0.0:
        z = p.b / p.c
        return (np.array([0.0, -z, z]),)
    disc = p.c * p.c - 4.0 * p.a * p.b
    if disc < 0.0:
        raise NoRealEquilibria(f"c^2 - 4ab = {disc:g} < 0 at {p}")
    root = math.sqrt(disc)
    # Stable quadratic roots of a*z^2 - c*z + b = 0: the rationalized partner
    # b/q avoids the cancellation that hits the naive formula when a is tiny.
    q = 0.5 * (p.c + math.copysign(root, p.c)) if p.c != 0.0 else 0.5 * root
    if q == 0.0:  # b = c = 0: both equilibria collapse to the origin
        return (np.zeros(3),)
    zetas = sorted((p.b / q, q / p.a), key=abs)
    return tuple(z * np.array([p.a, -1.0, 1.0]) for z in zetas)


def inner_equilibrium(p: RosslerParams) -> State:
    """The equilibrium with smaller |zeta| (the one undergoing the Hopf)."""
    return equilibria(p)[0]


def vector_field_nonautonomous(spec: NonautonomousSpec, t: float, s: State) -> State:
    """Shifted Rossler field: frozen field with a = shift(rate * t)."""
    x, y, z = s
    a = eval_shift(spec.shift, spec.rate * t)
    return np.array([-y - z, x + a * y, spec.b + z * (x - spec.c)])
