import math

import numpy as np
import pytest

from ratetip.errors import NewtonDiverged, NoBracket
from ratetip.integrate import integrate
from ratetip.poincare import SectionPoint, return_map_jacobian
from ratetip.system import RosslerParams, vector_field_frozen
from ratetip.upo import (
    dominant_multiplier,
    find_fixed_point,
    seed_guess_from_recurrence,
)


class TestSeed:
    def test_deterministic(self, default_params, integ_cfg):
        a = seed_guess_from_recurrence(default_params, integ_cfg)
        b = seed_guess_from_recurrence(default_params, integ_cfg)
        assert (a.u, a.v) == (b.u, b.v)

    def test_lands_in_newton_basin(self, default_params, default_orbit, integ_cfg):
        seed = seed_guess_from_recurrence(default_params, integ_cfg)
        dist = math.hypot(seed.u - default_orbit.gamma.u, seed.v - default_orbit.gamma.v)
        assert dist < 0.05

    def test_stable_regime_recurrence_is_tight(self, integ_cfg):
        # at a = 0.08 the attractor is the period-one orbit itself
        p = RosslerParams(0.08, 0.2, 5.7)
        from ratetip.poincare import return_map

        seed = seed_guess_from_recurrence(p, integ_cfg)
        image, _ = return_map(p, seed, integ_cfg)
        assert math.hypot(image.u - seed.u, image.v - seed.v) < 1e-3


class TestFixedPoint:
    def test_residual_and_period(self, default_orbit, integ_cfg):
        from ratetip.poincare import return_map

        image, flight = return_map(default_orbit.params, default_orbit.gamma, integ_cfg)
        residual = math.hypot(
            image.u - default_orbit.gamma.u, image.v - default_orbit.gamma.v
        )
        assert residual < 1e-9
        assert 5.0 < default_orbit.period < 7.0

    def test_saddle_multipliers(self, default_orbit):
        assert abs(default_orbit.lambda_u) > 1.0 > abs(default_orbit.lambda_s)
        assert default_orbit.det > 0.0
        assert default_orbit.det == pytest.approx(
            default_orbit.lambda_s * default_orbit.lambda_u, rel=1e-12
        )

    def test_eigen_residuals(self, default_orbit, integ_cfg):
        jac = return_map_jacobian(default_orbit.params, default_orbit.gamma, integ_cfg)
        for lam, vec in (
            (default_orbit.lambda_s, default_orbit.v_s),
            (default_orbit.lambda_u, default_orbit.v_u),
        ):
            assert np.linalg.norm(jac @ vec - lam * vec) < 1e-6
        assert np.linalg.norm(default_orbit.v_s) == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.norm(default_orbit.v_u) == pytest.approx(1.0, abs=1e-12)

    def test_eigenvector_sign_convention(self, default_orbit):
        for vec in (default_orbit.v_s, default_orbit.v_u):
            lead = vec[0] if vec[0] != 0.0 else vec[1]
            assert lead > 0.0

    def test_restart_from_gamma_converges_immediately(self, default_orbit, integ_cfg):
        orbit = find_fixed_point(default_orbit.params, default_orbit.gamma, integ_cfg)
        assert orbit.gamma.u == pytest.approx(default_orbit.gamma.u, abs=1e-9)
        assert orbit.gamma.v == pytest.approx(default_orbit.gamma.v, abs=1e-9)

    def test_far_guess_never_spuriously_converges(self, default_params, integ_cfg):
        with pytest.raises(NewtonDiverged):
            find_fixed_point(default_params, SectionPoint(-50.0, 0.02), integ_cfg)

    def test_one_period_flow_shadow(self, default_orbit, integ_cfg):
        fld = lambda t, s: vector_field_frozen(default_orbit.params, s)
        res = integrate(fld, 0.0, default_orbit.period, default_orbit.gamma.lift(), integ_cfg)
        assert np.linalg.norm(res.state - default_orbit.gamma.lift()) < 1e-6

    def test_stable_orbit_at_a008(self, integ_cfg):
        p = RosslerParams(0.08, 0.2, 5.7)
        orbit = find_fixed_point(p, seed_guess_from_recurrence(p, integ_cfg), integ_cfg)
        assert abs(orbit.lambda_u) < 1.0 and abs(orbit.lambda_s) < 1.0

    def test_unstable_orbit_at_a013(self, default_orbit, integ_cfg):
        # continue from the default orbit's gamma: the saddle persists at 0.13
        p = RosslerParams(0.13, 0.2, 5.7)
        orbit = find_fixed_point(p, default_orbit.gamma, integ_cfg)
        assert orbit.lambda_u < -1.0

    def test_continuation_moves_slowly_in_a(self, default_orbit, integ_cfg):
        prev = default_orbit
        for a in (0.195, 0.19, 0.185):
            orbit = find_fixed_point(RosslerParams(a, 0.2, 5.7), prev.gamma, integ_cfg)
            move = math.hypot(
                orbit.gamma.u - prev.gamma.u, orbit.gamma.v - prev.gamma.v
            )
            assert move < 0.5
            prev = orbit


class TestPeriodDoublingScaffolding:
    def test_empty_range_rejected(self, integ_cfg):
        from ratetip.upo import locate_period_doubling

        with pytest.raises(NoBracket):
            locate_period_doubling(0.2, 5.7, (0.15, 0.05), integ_cfg)

    def test_dominant_multiplier_accessor(self, default_orbit):
        assert dominant_multiplier(default_orbit) == default_orbit.lambda_u
