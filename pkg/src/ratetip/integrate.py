"""Adaptive explicit Runge-Kutta integration with dense output and events.

The stepper is the Dormand-Prince 5(4) embedded pair (the ode45 method):
order-5 propagation with an order-4 error estimate and the standard
quartic dense-output interpolant, which event localization refines by
bisection.  Per-step error is controlled componentwise against
``atol + rtol * |state|``.

Everything here is deterministic: identical inputs produce bitwise
identical outputs on one platform.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import Blowup, ConfigError, NonFiniteState, StepBudgetExceeded

Field = Callable[[float, np.ndarray], np.ndarray]

# Dormand-Prince 5(4) tableau.
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# b5 - b4: weights of the embedded error estimate.
_E = np.array(
    [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
)
# Quartic dense-output coefficients for the pair (state at t0 + theta*h is
# y0 + h * (K^T P) @ [theta, theta^2, theta^3, theta^4]).
_P = np.array(
    [
        [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
        [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
        [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
        [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
        [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
    ]
)

_A_ARR = tuple(np.array(row) for row in _A)

EVENT_SURFACE_TOL = 1e-10
EVENT_TIME_TOL = 1e-12


@dataclass(frozen=True)
class IntegratorConfig:
    rtol: float = 1e-12
    atol: float = 1e-12
    h_init: float = 1e-3
    h_max: float = 0.1
    max_steps: int = 100_000_000
    escape_radius: float = 1e4

    def __post_init__(self):
        if self.rtol <= 0.0 or self.atol <= 0.0:
            raise ConfigError("tolerances must be positive")
        if self.h_init <= 0.0 or self.h_max <= 0.0:
            raise ConfigError("step sizes must be positive")
        if self.max_steps < 1:
            raise ConfigError("max_steps must be at least 1")


class Direction(enum.Enum):
    RISING = "rising"
    FALLING = "falling"
    BOTH = "both"


@dataclass(frozen=True)
class EventSpec:
    """A surface-crossing event g(t, state) = 0.

    ``direction`` filters by the sign of dg/dt at the crossing (Rising means
    g goes negative to positive); ``constraint`` optionally rejects
    crossings outside a region of interest.
    """

    surface: Callable[[float, np.ndarray], float]
    direction: Direction = Direction.BOTH
    constraint: Callable[[float, np.ndarray], bool] | None = None


@dataclass(frozen=True)
class SolutionSample:
    t: float
    state: np.ndarray


@dataclass
class IntegrationResult:
    t: float
    state: np.ndarray
    events: list[tuple[float, np.ndarray]] = field(default_factory=list)
    samples: list[SolutionSample] = field(default_factory=list)
    n_steps: int = 0


class _DenseSegment:
    """Dense output over one accepted step [t0, t0 + h]."""

    __slots__ = ("t0", "h", "y0", "q")

    def __init__(self, t0: float, h: float, y0: np.ndarray, k: np.ndarray):
        self.t0 = t0
        self.h = h
        self.y0 = y0
        self.q = k.T @ _P  # (n, 4)

    def eval(self, t: float) -> np.ndarray:
        theta = (t - self.t0) / self.h
        powers = np.array([theta, theta * theta, theta**3, theta**4])
        return self.y0 + self.h * (self.q @ powers)


def _error_norm(err: np.ndarray, y_old: np.ndarray, y_new: np.ndarray, cfg: IntegratorConfig) -> float:
    scale = cfg.atol + cfg.rtol * np.maximum(np.abs(y_old), np.abs(y_new))
    ratio = err / scale
    return math.sqrt(float(np.mean(ratio * ratio)))


def _refine_event(seg: _DenseSegment, g: Callable, ta: float, tb: float, ga: float) -> tuple[float, np.ndarray]:
    """Bisection-secured localization of a sign change of g on [ta, tb]."""
    for _ in range(200):
        tm = 0.5 * (ta + tb)
        if tb - ta <= EVENT_TIME_TOL or tm in (ta, tb):
            break
        ym = seg.eval(tm)
        gm = g(tm, ym)
        if gm == 0.0:
            return tm, ym
        if (gm < 0.0) == (ga < 0.0):
            ta = tm
        else:
            tb = tm
    tm = 0.5 * (ta + tb)
    return tm, seg.eval(tm)


def integrate(
    field: Field,
    t0: float,
    t1: float,
    x0: np.ndarray,
    cfg: IntegratorConfig = IntegratorConfig(),
    *,
    sample_dt: float | None = None,
) -> IntegrationResult:
    """Integrate ``field`` from (t0, x0) to t1.

    Returns the final state plus, when ``sample_dt`` is given, the dense
    output sampled on the uniform grid t0, t0 + sample_dt, ...

    Raises StepBudgetExceeded, Blowup (escape radius hit) or NonFiniteState.
    """
    return _run(field, t0, t1, x0, cfg, None, None, sample_dt)


def integrate_with_events(
    field: Field,
    t0: float,
    t1: float,
    x0: np.ndarray,
    cfg: IntegratorConfig,
    event: EventSpec,
    *,
    max_events: int | None = None,
    sample_dt: float | None = None,
) -> IntegrationResult:
    """Integrate and report every qualifying crossing of the event surface.

    Each sign change of the surface along the dense output that matches the
    requested direction and constraint is refined to |surface| < 1e-10
    (time bracket 1e-12).  Events come back in increasing time.  When
    ``max_events`` is set, integration stops at the final accepted event and
    the result's (t, state) is that crossing.
    """
    return _run(field, t0, t1, x0, cfg, event, max_events, sample_dt)


def _run(
    field: Field,
    t0: float,
    t1: float,
    x0: np.ndarray,
    cfg: IntegratorConfig,
    event: EventSpec | None,
    max_events: int | None,
    sample_dt: float | None,
) -> IntegrationResult:
    if not t1 > t0:
        raise ConfigError(f"integration requires t0 < t1, got [{t0}, {t1}]")
    y = np.asarray(x0, dtype=float).copy()
    if y.ndim != 1:
        raise ConfigError("state must be a 1-D array")
    if not np.all(np.isfinite(y)):
        raise NonFiniteState(f"non-finite initial state {y}")
    n = y.size

    result = IntegrationResult(t=t0, state=y.copy())
    if sample_dt is not None:
        result.samples.append(SolutionSample(t0, y.copy()))
        next_sample = t0 + sample_dt
        sample_index = 1
    else:
        next_sample = math.inf
        sample_index = 0

    t = t0
    h = min(cfg.h_init, cfg.h_max, t1 - t0)
    k = np.empty((7, n))
    k[0] = field(t, y)
    g_old = event.surface(t, y) if event is not None else 0.0

    n_steps = 0
    min_h = 16.0 * np.finfo(float).eps * max(abs(t0), abs(t1), 1.0)

    while t < t1:
        if t1 - t <= min_h:  # within roundoff of the end point
            break
        if n_steps >= cfg.max_steps:
            raise StepBudgetExceeded(f"exceeded {cfg.max_steps} steps at t = {t:.6g}")
        n_steps += 1

        h = min(h, t1 - t)
        for i in range(1, 7):
            y_stage = y + h * (_A_ARR[i] @ k[:i])
            k[i] = field(t + _C[i] * h, y_stage)
        # _B5 has zero weight on the last stage; k[6] is f at the new point (FSAL).
        y_new = y + h * (_B5[:6] @ k[:6])
        k[6] = field(t + h, y_new)
        err = h * (_E @ k)

        if not np.all(np.isfinite(y_new)):
            # Retry smaller before giving up; genuine blowups trip the
            # escape radius on an accepted step instead.
            h *= 0.25
            if h < min_h:
                raise NonFiniteState(f"non-finite state near t = {t:.6g}")
            continue

        err_norm = _error_norm(err, y, y_new, cfg)
        if not math.isfinite(err_norm):
            h *= 0.25
            if h < min_h:
                raise NonFiniteState(f"error estimate diverged near t = {t:.6g}")
            continue

        if err_norm > 1.0:
            h *= max(0.2, 0.9 * err_norm**-0.2)
            if h < min_h:
                raise NonFiniteState(f"step size underflow at t = {t:.6g}")
            continue

        # Accepted step.
        t_new = t + h
        seg: _DenseSegment | None = None

        if event is not None:
            g_new = event.surface(t_new, y_new)
            seg = _DenseSegment(t, h, y, k.copy())
            t_mid = t + 0.5 * h
            y_mid = seg.eval(t_mid)
            g_mid = event.surface(t_mid, y_mid)
            done = _collect_events(event, seg, result.events,
                                   (t, t_mid, t_new), (g_old, g_mid, g_new),
                                   max_events)
            if done:
                t_ev, y_ev = result.events[-1]
                result.t = t_ev
                result.state = y_ev
                result.n_steps = n_steps
                _append_samples(result, seg, t_ev, next_sample, sample_dt)
                return result
            g_old = g_new

        if sample_dt is not None and next_sample <= t_new:
            if seg is None:
                seg = _DenseSegment(t, h, y, k.copy())
            while next_sample <= t_new and next_sample <= t1:
                st = seg.eval(next_sample) if next_sample < t_new else y_new
                result.samples.append(SolutionSample(next_sample, st.copy()))
                sample_index += 1
                next_sample = t0 + sample_index * sample_dt

        t = t_new
        y = y_new
        k[0] = k[6]

        if float(np.max(np.abs(y))) > cfg.escape_radius:
            result.t = t
            result.state = y.copy()
            result.n_steps = n_steps
            exc = Blowup(t, y.copy(), cfg.escape_radius)
            exc.partial = result  # what was computed before the escape
            raise exc

        if err_norm == 0.0:
            h = min(5.0 * h, cfg.h_max)
        else:
            h = min(h * min(5.0, max(0.2, 0.9 * err_norm**-0.2)), cfg.h_max)

    result.t = t
    result.state = y
    result.n_steps = n_steps
    return result


def _collect_events(
    event: EventSpec,
    seg: _DenseSegment,
    out: list[tuple[float, np.ndarray]],
    times: tuple[float, float, float],
    values: tuple[float, float, float],
    max_events: int | None,
) -> bool:
    """Scan the step's sub-brackets for sign changes; True when max_events hit."""
    for idx in range(2):
        ta, tb = times[idx], times[idx + 1]
        ga, gb = values[idx], values[idx + 1]
        if ga == 0.0 or not (ga < 0.0) != (gb < 0.0):
            continue
        rising = ga < 0.0
        if event.direction is Direction.RISING and not rising:
            continue
        if event.direction is Direction.FALLING and rising:
            continue
        t_ev, y_ev = _refine_event(seg, event.surface, ta, tb, ga)
        if event.constraint is not None and not event.constraint(t_ev, y_ev):
            continue
        out.append((t_ev, y_ev))
        if max_events is not None and len(out) >= max_events:
            return True
    return False


def _append_samples(result: IntegrationResult, seg: _DenseSegment, t_stop: float,
                    next_sample: float, sample_dt: float | None) -> None:
    if sample_dt is None:
        return
    while next_sample <= t_stop:
        result.samples.append(SolutionSample(next_sample, seg.eval(next_sample)))
        next_sample += sample_dt
