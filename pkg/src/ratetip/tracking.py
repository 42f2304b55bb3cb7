"""Pullback-attractor runs, the gap function, and critical-rate detection.

The pullback attractor of the shifted system with an equilibrium past limit
is approximated by a single trajectory started near that equilibrium at a
sufficiently negative time.  Its final section crossing before the horizon
T, measured against the saddle orbit of the future system, gives the gap
eta(r); sign changes of eta over a rate sweep bracket candidate critical
rates, which bisection refines and a shadowing check confirms.

Two gap conventions ship:

* ``UNSTABLE_COEFFICIENT`` (default): write the displacement from gamma as
  alpha*v_s + beta*v_u and return beta, the local signed distance from the
  stable manifold.  Its roots are the actual connection candidates.
* ``STABLE_PROJECTION``: the plain projection <d, v_s>/|v_s|^2 onto the
  stable eigenvector.  It vanishes
  on a different line through gamma, so its roots generally differ; both
  are reported and every root must still pass the shadowing confirmation.
"""

from __future__ import annotations

import enum
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import Blowup, ConfigError, DegenerateEigenbasis, NoCrossing
from .integrate import IntegratorConfig, integrate
from .poincare import DEFAULT_SECTION, CrossingRecord, Section, detect_crossings
from .system import (
    NonautonomousSpec,
    State,
    inner_equilibrium,
    vector_field_nonautonomous,
)
from .upo import PeriodicOrbit

#: Reference starting point near the past equilibrium used by the default
#: run configuration.  Note its y and z
#: signs do not satisfy the equilibrium equations; pass "auto" in the run
#: config to substitute the solved equilibrium instead.
REFERENCE_Z_INIT = (-0.007, 0.035, -0.035)

#: Generous upper bound on one section return, used to cap confirmation runs.
RETURN_TIME_BOUND = 10.0


class GapMode(enum.Enum):
    UNSTABLE_COEFFICIENT = "unstable_coefficient"
    STABLE_PROJECTION = "stable_projection"


class FateClass(enum.Enum):
    STRONG_TRACKING = "strong_tracking"
    WEAK_TRACKING = "weak_tracking"
    DIVERGED = "diverged"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class PullbackRunConfig:
    """How the pullback trajectory is produced: start, horizon, tolerances."""

    z_init: tuple[float, float, float] = REFERENCE_Z_INIT
    t_start: float = -30.0
    T: float = 150.0
    integ: IntegratorConfig = field(default_factory=IntegratorConfig)

    def __post_init__(self):
        if not (self.t_start < 0.0 < self.T):
            raise ConfigError(
                f"need t_start < 0 < T, got t_start={self.t_start}, T={self.T}"
            )

    def z_init_array(self) -> State:
        return np.asarray(self.z_init, dtype=float)


def resolve_z_init(spec: NonautonomousSpec, z_init) -> tuple[float, float, float]:
    """Resolve the "auto" marker to the solved inner equilibrium at a = lambda_minus."""
    if isinstance(z_init, str):
        if z_init != "auto":
            raise ConfigError(f'z_init must be a 3-vector or "auto", got {z_init!r}')
        eq = inner_equilibrium(spec.past_params())
        return (float(eq[0]), float(eq[1]), float(eq[2]))
    arr = np.asarray(z_init, dtype=float)
    if arr.shape != (3,):
        raise ConfigError(f"z_init must have 3 components, got shape {arr.shape}")
    return (float(arr[0]), float(arr[1]), float(arr[2]))


@dataclass(frozen=True)
class GapResult:
    """One gap evaluation; ``status`` records per-row failures in scans."""

    r: float
    eta: float
    n_crossings: int
    t_last: float
    mode: GapMode
    status: str = "ok"


@dataclass(frozen=True)
class CriticalRate:
    r_c: float
    eta_at_root: float
    n_crossings: int
    confirmed: bool
    shadow_periods: int
    mode: GapMode


@dataclass(frozen=True)
class Fate:
    fate: FateClass
    detail: float


@dataclass(frozen=True)
class RefineConfig:
    tol_r: float = 1e-9
    tol_eta: float = 1e-6
    max_iter: int = 80


@dataclass(frozen=True)
class ConfirmConfig:
    shadow_periods: int = 3
    tube_eps: float = 0.05


def pullback_final_crossing(
    spec: NonautonomousSpec,
    run: PullbackRunConfig,
    section: Section = DEFAULT_SECTION,
) -> tuple[CrossingRecord, int]:
    """Last section crossing with t <= T of the pullback trajectory, plus the count.

    Raises NoCrossing when the trajectory never meets the section, and
    Blowup when it escapes (a tipping outcome for the caller to classify).
    """
    fld = lambda t, s: vector_field_nonautonomous(spec, t, s)
    records = detect_crossings(fld, run.t_start, run.T, run.z_init_array(), run.integ, section)
    if not records:
        raise NoCrossing(f"no section crossing in [{run.t_start}, {run.T}] at r = {spec.rate}")
    return records[-1], len(records)


def gap_displacement_coefficients(
    point_xz: np.ndarray, orbit: PeriodicOrbit
) -> tuple[float, float]:
    """Coefficients (alpha, beta) of d = alpha*v_s + beta*v_u."""
    basis = np.column_stack([orbit.v_s, orbit.v_u])
    if abs(np.linalg.det(basis)) < 1e-8:
        raise DegenerateEigenbasis("stable/unstable eigenvectors nearly parallel")
    alpha, beta = np.linalg.solve(basis, point_xz - orbit.gamma.as_array())
    return float(alpha), float(beta)


def gap_value(point_xz: np.ndarray, orbit: PeriodicOrbit, mode: GapMode) -> float:
    """The gap of a section point relative to the orbit, in the chosen mode."""
    if mode is GapMode.STABLE_PROJECTION:
        d = point_xz - orbit.gamma.as_array()
        return float(d @ orbit.v_s) / float(orbit.v_s @ orbit.v_s)
    return gap_displacement_coefficients(point_xz, orbit)[1]


def gap(
    spec: NonautonomousSpec,
    run: PullbackRunConfig,
    orbit: PeriodicOrbit,
    mode: GapMode = GapMode.UNSTABLE_COEFFICIENT,
) -> GapResult:
    """Gap eta(r) of the pullback trajectory's final crossing before T."""
    last, count = pullback_final_crossing(spec, run)
    eta = gap_value(last.point.as_array(), orbit, mode)
    return GapResult(spec.rate, eta, count, last.t, mode)


def _gap_row(args) -> GapResult:
    spec, run, orbit, mode = args
    try:
        return gap(spec, run, orbit, mode)
    except NoCrossing:
        return GapResult(spec.rate, math.nan, 0, math.nan, mode, status="no_crossing")
    except Blowup:
        return GapResult(spec.rate, math.nan, 0, math.nan, mode, status="blowup")


def scan_eta(
    spec: NonautonomousSpec,
    run: PullbackRunConfig,
    orbit: PeriodicOrbit,
    r_min: float,
    r_max: float,
    samples: int,
    mode: GapMode = GapMode.UNSTABLE_COEFFICIENT,
    jobs: int = 1,
) -> list[GapResult]:
    """Evaluate the gap on a uniform rate grid; failures become status rows.

    Grid points are independent and evaluated in parallel when jobs > 1;
    results always come back in increasing r.
    """
    if not r_min < r_max:
        raise ConfigError(f"need r_min < r_max, got [{r_min}, {r_max}]")
    if samples < 2:
        raise ConfigError(f"need at least 2 samples, got {samples}")
    rates = np.linspace(r_min, r_max, samples)
    tasks = [(replace(spec, rate=float(r)), run, orbit, mode) for r in rates]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_gap_row, tasks, chunksize=4))
    return [_gap_row(t) for t in tasks]


def count_sign_changes(rows: list[GapResult]) -> int:
    """Sign changes of eta between consecutive ok rows."""
    etas = [row.eta for row in rows if row.status == "ok"]
    return sum(
        1 for a, b in zip(etas[:-1], etas[1:]) if a != 0.0 and (a < 0.0) != (b < 0.0)
    )


def _refine_bracket(
    spec: NonautonomousSpec,
    run: PullbackRunConfig,
    orbit: PeriodicOrbit,
    mode: GapMode,
    lo: GapResult,
    hi: GapResult,
    refine: RefineConfig,
    depth: int = 0,
) -> list[tuple[float, GapResult]]:
    """Bisect one sign-change bracket, splitting wherever the crossing count jumps."""
    if lo.status != "ok" or hi.status != "ok":
        return []
    if (lo.eta < 0.0) == (hi.eta < 0.0):
        return []
    if depth > 80:
        return []

    iterations = 0
    while hi.r - lo.r > refine.tol_r:
        iterations += 1
        if iterations > refine.max_iter:
            break  # accept the bracket as-is; the tol_eta filter has the last word
        mid = _gap_row((replace(spec, rate=0.5 * (lo.r + hi.r)), run, orbit, mode))
        if mid.status != "ok":
            return []
        if mid.n_crossings != lo.n_crossings or mid.n_crossings != hi.n_crossings:
            # eta is discontinuous where a new crossing enters before T:
            # split there and refine the constant-count sub-brackets.
            return _refine_bracket(spec, run, orbit, mode, lo, mid, refine, depth + 1) + _refine_bracket(
                spec, run, orbit, mode, mid, hi, refine, depth + 1
            )
        if mid.eta == 0.0:
            return [(mid.r, mid)]
        if (mid.eta < 0.0) == (lo.eta < 0.0):
            lo = mid
        else:
            hi = mid

    # Secant polish inside the final bracket, falling back to the endpoint
    # with the smaller gap.
    best = lo if abs(lo.eta) <= abs(hi.eta) else hi
    denom = hi.eta - lo.eta
    if denom != 0.0:
        r_star = lo.r - lo.eta * (hi.r - lo.r) / denom
        if lo.r <= r_star <= hi.r:
            polished = _gap_row((replace(spec, rate=r_star), run, orbit, mode))
            if polished.status == "ok" and abs(polished.eta) < abs(best.eta):
                best = polished
    return [(best.r, best)]


def find_critical_rates(
    spec: NonautonomousSpec,
    run: PullbackRunConfig,
    orbit: PeriodicOrbit,
    r_min: float,
    r_max: float,
    samples: int,
    mode: GapMode = GapMode.UNSTABLE_COEFFICIENT,
    refine: RefineConfig = RefineConfig(),
    confirm: ConfirmConfig = ConfirmConfig(),
    jobs: int = 1,
    scan_rows: list[GapResult] | None = None,
) -> list[CriticalRate]:
    """Scan, bracket, refine and confirm the roots of eta on [r_min, r_max].

    Only brackets whose endpoints share the same crossing count are refined
    directly (the continuity guard); brackets with a count jump are split
    during refinement.  Every root is then checked by
    :func:`confirm_weak_tracking`.  An empty list is a valid outcome.
    """
    rows = scan_rows if scan_rows is not None else scan_eta(
        spec, run, orbit, r_min, r_max, samples, mode, jobs
    )
    brackets = []
    for a, b in zip(rows[:-1], rows[1:]):
        if a.status != "ok" or b.status != "ok":
            continue
        if a.eta != 0.0 and (a.eta < 0.0) != (b.eta < 0.0):
            brackets.append((a, b))

    roots: list[tuple[float, GapResult]] = []
    if jobs > 1 and len(brackets) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(_refine_bracket, spec, run, orbit, mode, a, b, refine)
                for a, b in brackets
            ]
            for fut in futures:
                roots.extend(fut.result())
    else:
        for a, b in brackets:
            roots.extend(_refine_bracket(spec, run, orbit, mode, a, b, refine))

    out = []
    for r_c, row in sorted(roots, key=lambda item: item[0]):
        if abs(row.eta) > refine.tol_eta:
            continue  # refinement contract: discard anything that failed to sharpen
        confirmed, periods = confirm_weak_tracking(
            replace(spec, rate=r_c),
            run,
            orbit,
            r_c,
            K=confirm.shadow_periods,
            tube_eps=confirm.tube_eps,
        )
        out.append(
            CriticalRate(
                r_c=r_c,
                eta_at_root=row.eta,
                n_crossings=row.n_crossings,
                confirmed=confirmed,
                shadow_periods=periods,
                mode=mode,
            )
        )
    return out


def _post_horizon_crossings(
    spec: NonautonomousSpec,
    run: PullbackRunConfig,
    max_returns: int,
    section: Section,
) -> tuple[list[CrossingRecord], float | None]:
    """Crossings collected after T, and the escape time if the run blew up."""
    fld = lambda t, s: vector_field_nonautonomous(spec, t, s)
    try:
        at_horizon = integrate(fld, run.t_start, run.T, run.z_init_array(), run.integ)
    except Blowup as exc:
        return [], exc.t
    horizon = run.T + max_returns * RETURN_TIME_BOUND
    try:
        return (
            detect_crossings(fld, run.T, horizon, at_horizon.state, run.integ, section)[:max_returns],
            None,
        )
    except Blowup as exc:
        return [], exc.t


def _longest_tube_streak(
    crossings: list[CrossingRecord], orbit: PeriodicOrbit, tube_eps: float
) -> int:
    gamma = orbit.gamma.as_array()
    best = current = 0
    for rec in crossings:
        if np.linalg.norm(rec.point.as_array() - gamma) < tube_eps:
            current += 1
            best = max(best, current)
        else:
            current = 0
    return best


def confirm_weak_tracking(
    spec: NonautonomousSpec,
    run: PullbackRunConfig,
    orbit: PeriodicOrbit,
    r_c: float,
    K: int = 3,
    tube_eps: float = 0.05,
    max_returns: int = 30,
    section: Section = DEFAULT_SECTION,
) -> tuple[bool, int]:
    """Shadowing check at a refined root.

    Continues the run past T (where the shift is numerically constant) for
    up to ``max_returns`` section returns and counts the longest streak of
    consecutive crossings within ``tube_eps`` of gamma.  Confirmed means
    streak >= K.  A blowup simply fails to confirm.
    """
    if tube_eps > 5.0:
        warnings.warn(
            f"tube_eps = {tube_eps} is wider than the section itself; "
            "confirmation is vacuous",
            stacklevel=2,
        )
    spec_rc = replace(spec, rate=r_c)
    crossings, _ = _post_horizon_crossings(spec_rc, run, max_returns, section)
    streak = _longest_tube_streak(crossings, orbit, tube_eps)
    return streak >= K, streak


def classify_fate(
    spec: NonautonomousSpec,
    run: PullbackRunConfig,
    r: float,
    horizon: float,
    orbit: PeriodicOrbit,
    K: int = 3,
    tube_eps: float = 0.05,
    max_returns: int = 30,
    section: Section = DEFAULT_SECTION,
) -> Fate:
    """Classify the outcome of one run at rate r.

    Diverged if the escape radius is hit before the horizon; WeakTracking
    if the post-horizon crossings shadow gamma for K returns; StrongTracking
    if they instead spread over a band wider than 10 * tube_eps;
    Undecided otherwise.
    """
    spec_r = replace(spec, rate=r)
    run_h = replace(run, T=horizon)
    crossings, escape_t = _post_horizon_crossings(spec_r, run_h, max_returns, section)
    if escape_t is not None:
        return Fate(FateClass.DIVERGED, escape_t)
    if not crossings:
        return Fate(FateClass.UNDECIDED, 0.0)
    streak = _longest_tube_streak(crossings, orbit, tube_eps)
    if streak >= K:
        return Fate(FateClass.WEAK_TRACKING, float(streak))
    pts = np.array([[c.point.u, c.point.v] for c in crossings])
    diameter = float(
        np.max(np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1))
    )
    if diameter > 10.0 * tube_eps:
        return Fate(FateClass.STRONG_TRACKING, diameter)
    return Fate(FateClass.UNDECIDED, diameter)


def weak_tracking_feasible(dim_past_attractor: float, dim_stable_set_of_subset: float) -> bool:
    """Dimension condition: dim(A-) <= dim(W^s(S+)) is necessary for weak tracking."""
    if dim_past_attractor < 0.0 or dim_stable_set_of_subset < 0.0:
        raise ConfigError("dimensions must be non-negative")
    return dim_past_attractor <= dim_stable_set_of_subset
