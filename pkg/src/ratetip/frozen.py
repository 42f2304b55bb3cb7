"""Frozen-system linear diagnostics: equilibrium spectra and the Hopf point."""

from __future__ import annotations

import numpy as np

from .errors import NoBracket
from .system import RosslerParams, inner_equilibrium, jacobian_frozen


def equilibrium_eigenvalues(p: RosslerParams) -> np.ndarray:
    """Eigenvalues of the Jacobian at the inner equilibrium, Re descending.

    Computed as the roots of the characteristic cubic
    lambda^3 - tr*lambda^2 + m*lambda - det (companion-matrix roots).
    """
    jac = jacobian_frozen(p, inner_equilibrium(p))
    tr = np.trace(jac)
    det = np.linalg.det(jac)
    minors = (
        jac[1, 1] * jac[2, 2] - jac[1, 2] * jac[2, 1]
        + jac[0, 0] * jac[2, 2] - jac[0, 2] * jac[2, 0]
        + jac[0, 0] * jac[1, 1] - jac[0, 1] * jac[1, 0]
    )
    roots = np.roots([1.0, -tr, minors, -det])
    return roots[np.argsort(-roots.real)]


def _pair_real_part(p: RosslerParams) -> float:
    """Largest real part among non-real eigenvalues at the inner equilibrium."""
    eig = equilibrium_eigenvalues(p)
    complex_part = eig[np.abs(eig.imag) > 1e-12]
    if complex_part.size == 0:
        # Treat an all-real spectrum as "no oscillatory instability".
        return float(np.max(eig.real))
    return float(np.max(complex_part.real))


def locate_hopf(
    b: float,
    c: float,
    a_range: tuple[float, float],
    *,
    tol: float = 1e-10,
) -> float:
    """Parameter a where the complex pair's real part crosses zero.

    Bisection on ``a_range`` down to |Re| < tol in the bracket.

    Raises NoBracket if the real part has the same sign at both ends.
    """
    a_lo, a_hi = a_range
    f_lo = _pair_real_part(RosslerParams(a_lo, b, c))
    f_hi = _pair_real_part(RosslerParams(a_hi, b, c))
    if f_lo == 0.0:
        return a_lo
    if f_hi == 0.0:
        return a_hi
    if (f_lo < 0.0) == (f_hi < 0.0):
        raise NoBracket(
            f"pair real part does not change sign on [{a_lo}, {a_hi}] "
            f"({f_lo:.3g} vs {f_hi:.3g})"
        )
    while True:
        mid = 0.5 * (a_lo + a_hi)
        f_mid = _pair_real_part(RosslerParams(mid, b, c))
        if abs(f_mid) < tol or a_hi - a_lo < 1e-15:
            return mid
        if (f_mid < 0.0) == (f_lo < 0.0):
            a_lo, f_lo = mid, f_mid
        else:
            a_hi = mid
