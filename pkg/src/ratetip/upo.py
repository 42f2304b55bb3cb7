"""Period-one unstable periodic orbit of the frozen system.

The orbit is located as a fixed point of the section return map with a
damped Newton iteration, seeded by the closest-recurrence pair of a long
trajectory.  Floquet data comes from the 2x2 return-map Jacobian.

One numerical subtlety: the return-map determinant equals
exp(integral of div f over one period), which for this system is of order
1e-13 and far below the noise floor of any finite-difference Jacobian.
The unstable multiplier and both eigenvectors are well conditioned and are
taken from the finite-difference matrix, but the stable multiplier is
recovered from the divergence integral (lambda_s = det / lambda_u), which
resolves it to full precision and keeps the determinant positive as the
orientation-preserving flow requires.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    Blowup,
    ComplexMultipliers,
    NewtonDiverged,
    NoBracket,
    NoReturn,
    SingularJacobian,
)
from .integrate import IntegratorConfig, integrate
from .poincare import (
    DEFAULT_SECTION,
    Section,
    SectionPoint,
    detect_crossings,
    return_map,
    return_map_jacobian,
)
from .system import RosslerParams, divergence_frozen, vector_field_frozen

#: Fixed start state for recurrence scouting; any generic point of the
#: basin works, this one is kept fixed for determinism.
RECURRENCE_START = np.array([1.0, 1.0, 1.0])


@dataclass(frozen=True)
class PeriodicOrbit:
    """Section fixed point gamma with period and Floquet data.

    For a saddle orbit |lambda_s| < 1 < |lambda_u|; for a stable orbit both
    multipliers lie inside the unit circle (naming is by modulus ordering).
    Eigenvectors are unit vectors with the first nonzero component positive.
    """

    gamma: SectionPoint
    period: float
    lambda_s: float
    lambda_u: float
    v_s: np.ndarray
    v_u: np.ndarray
    params: RosslerParams

    @property
    def det(self) -> float:
        return self.lambda_s * self.lambda_u


def seed_guess_from_recurrence(
    p: RosslerParams,
    cfg: IntegratorConfig,
    *,
    transient: float = 200.0,
    duration: float = 2000.0,
    start: np.ndarray = RECURRENCE_START,
) -> SectionPoint:
    """Crossing of a long trajectory whose successor is nearest to itself.

    Runs ``transient`` time units to settle onto the attractor, then
    collects section crossings for ``duration`` and returns the first
    element of the closest first-return pair.  The scout run uses at most
    1e-9 tolerances (the guess only has to land inside Newton's basin).
    """
    scout = replace(cfg, rtol=max(cfg.rtol, 1e-9), atol=max(cfg.atol, 1e-9))
    field = lambda t, s: vector_field_frozen(p, s)
    settled = integrate(field, 0.0, transient, start, scout).state
    records = detect_crossings(field, 0.0, duration, settled, scout)
    if len(records) < 10:
        raise NoReturn(
            f"only {len(records)} crossings in {duration} time units; "
            "no usable recurrence statistics"
        )
    pts = np.array([[r.point.u, r.point.v] for r in records])
    dists = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    best = int(np.argmin(dists))
    return records[best].point


def _eig2(J: np.ndarray) -> tuple[float, float, np.ndarray, np.ndarray]:
    """Closed-form eigenpairs of a real 2x2 matrix, ordered by |eigenvalue|.

    Raises ComplexMultipliers on a complex pair; the section maps handled
    here have near-zero determinant, so real pairs are the generic case.
    """
    tr = J[0, 0] + J[1, 1]
    det = J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
    disc = tr * tr - 4.0 * det
    if disc < 0.0:
        raise ComplexMultipliers(f"complex multiplier pair (trace {tr:g}, det {det:g})")
    root = np.sqrt(disc)
    lams = sorted((0.5 * (tr - root), 0.5 * (tr + root)), key=abs)

    def eigvec(lam: float) -> np.ndarray:
        # (J - lam I) v = 0; pick the better-conditioned row.
        r1 = np.array([J[0, 0] - lam, J[0, 1]])
        r2 = np.array([J[1, 0], J[1, 1] - lam])
        row = r1 if np.linalg.norm(r1) >= np.linalg.norm(r2) else r2
        v = np.array([-row[1], row[0]])
        nrm = np.linalg.norm(v)
        if nrm == 0.0:  # J is lam * I; any direction works
            v, nrm = np.array([1.0, 0.0]), 1.0
        v = v / nrm
        lead = v[0] if v[0] != 0.0 else v[1]
        return v if lead > 0.0 else -v

    return lams[0], lams[1], eigvec(lams[0]), eigvec(lams[1])


def _flow_determinant(
    p: RosslerParams, gamma: SectionPoint, period: float, cfg: IntegratorConfig
) -> float:
    """det DP = exp(integral of div f) over one period from gamma's lift."""

    def augmented(t, s):
        base = vector_field_frozen(p, s[:3])
        return np.append(base, divergence_frozen(p, s[:3]))

    s0 = np.append(gamma.lift(), 0.0)
    res = integrate(augmented, 0.0, period, s0, cfg)
    return float(np.exp(res.state[3]))


def find_fixed_point(
    p: RosslerParams,
    guess: SectionPoint,
    cfg: IntegratorConfig,
    *,
    tol: float = 1e-9,
    max_iter: int = 50,
    h_fd: float = 1e-6,
    section: Section = DEFAULT_SECTION,
) -> PeriodicOrbit:
    """Newton solve of P(xi) = xi starting from ``guess``.

    Steps are damped (halved up to 5 times) whenever the residual does not
    decrease.  Converged means ||P(xi) - xi|| < tol.

    Raises NewtonDiverged (including when the underlying return map fails),
    SingularJacobian, or ComplexMultipliers.
    """

    def residual(q: SectionPoint) -> tuple[np.ndarray, float]:
        image, flight = return_map(p, q, cfg, section)
        return image.as_array() - q.as_array(), flight

    xi = guess
    try:
        f_val, flight = residual(xi)
        f_norm = float(np.linalg.norm(f_val))
        for _ in range(max_iter):
            if f_norm < tol:
                break
            jac = return_map_jacobian(p, xi, cfg, h_fd, section)
            newton_matrix = jac - np.eye(2)
            if abs(np.linalg.det(newton_matrix)) < 1e-12:
                raise SingularJacobian(f"|det(DP - I)| < 1e-12 at {xi}")
            step = np.linalg.solve(newton_matrix, -f_val)
            for _ in range(6):
                trial = SectionPoint(xi.u + step[0], xi.v + step[1])
                try:
                    f_trial, flight_trial = residual(trial)
                except (NoReturn, Blowup):
                    step = step / 2.0
                    continue
                if float(np.linalg.norm(f_trial)) < f_norm:
                    break
                step = step / 2.0
            else:
                raise NewtonDiverged(f"residual stalled at {f_norm:.3g} near {xi}")
            xi, f_val, flight = trial, f_trial, flight_trial
            f_norm = float(np.linalg.norm(f_val))
        else:
            raise NewtonDiverged(f"no convergence in {max_iter} iterations (||F|| = {f_norm:.3g})")
    except (NoReturn, Blowup) as exc:
        raise NewtonDiverged(f"return map failed during Newton: {exc}") from exc

    jac = return_map_jacobian(p, xi, cfg, h_fd, section)
    _, lam_u, v_s, v_u = _eig2(jac)
    det = _flow_determinant(p, xi, flight, cfg)
    lam_s = det / lam_u
    return PeriodicOrbit(
        gamma=xi,
        period=flight,
        lambda_s=lam_s,
        lambda_u=lam_u,
        v_s=v_s,
        v_u=v_u,
        params=p,
    )


def dominant_multiplier(orbit: PeriodicOrbit) -> float:
    """The multiplier of larger modulus (real for these section maps)."""
    return orbit.lambda_u


def locate_period_doubling(
    b: float,
    c: float,
    a_range: tuple[float, float],
    cfg: IntegratorConfig,
    *,
    tol_a: float = 1e-6,
    step: float = 0.005,
) -> float:
    """Parameter a at which the period-one orbit's multiplier crosses -1.

    Continues the orbit across ``a_range`` (each Newton solve seeded with
    the nearest previously solved gamma, starting from a recurrence seed at
    the midpoint) and bisects the sign change of
    dominant_multiplier(a) + 1.

    Raises NoBracket when the multiplier never crosses -1 on the range.
    """
    a_lo, a_hi = a_range
    if not a_lo < a_hi:
        raise NoBracket(f"empty range [{a_lo}, {a_hi}]")

    solved: dict[float, PeriodicOrbit] = {}

    def solve_at(a: float) -> PeriodicOrbit:
        if a in solved:
            return solved[a]
        p = RosslerParams(a, b, c)
        if solved:
            nearest = min(solved, key=lambda known: abs(known - a))
            guess = solved[nearest].gamma
        else:
            guess = seed_guess_from_recurrence(p, cfg)
        orbit = find_fixed_point(p, guess, cfg)
        solved[a] = orbit
        return orbit

    def objective(a: float) -> float:
        return dominant_multiplier(solve_at(a)) + 1.0

    anchor = 0.5 * (a_lo + a_hi)
    solve_at(anchor)

    # March from the anchor outwards so every solve has a nearby seed.
    grid = sorted(
        {a_lo + i * step for i in range(int(np.ceil((a_hi - a_lo) / step)) + 1)}
        | {a_lo, a_hi, anchor}
    )
    order = sorted(grid, key=lambda a: abs(a - anchor))
    values = {a: objective(a) for a in order}

    bracket = None
    for lo, hi in zip(grid[:-1], grid[1:]):
        if values[lo] == 0.0:
            return lo
        if (values[lo] < 0.0) != (values[hi] < 0.0):
            bracket = (lo, hi)
            break
    if bracket is None:
        raise NoBracket(f"multiplier + 1 has no sign change on [{a_lo}, {a_hi}]")

    lo, hi = bracket
    f_lo = values[lo]
    while hi - lo > tol_a:
        mid = 0.5 * (lo + hi)
        f_mid = objective(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
