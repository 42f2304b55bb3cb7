import numpy as np
import pytest

from ratetip.errors import ConfigError, NoRealEquilibria
from ratetip.shift import ShiftKind, ShiftProfile
from ratetip.system import (
    NonautonomousSpec,
    RosslerParams,
    equilibria,
    inner_equilibrium,
    jacobian_frozen,
    vector_field_frozen,
    vector_field_nonautonomous,
)

DEFAULTS = RosslerParams()


def newton_equilibrium_oracle(p, start, steps=60):
    """Independent root solve of f = 0 (plain Newton on the full field)."""
    x = np.asarray(start, dtype=float).copy()
    for _ in range(steps):
        x = x - np.linalg.solve(jacobian_frozen(p, x), vector_field_frozen(p, x))
    return x


class TestField:
    def test_origin(self):
        np.testing.assert_allclose(
            vector_field_frozen(DEFAULTS, np.zeros(3)), [0.0, 0.0, 0.2]
        )

    def test_unit_point(self):
        np.testing.assert_allclose(
            vector_field_frozen(DEFAULTS, np.ones(3)), [-2.0, 1.2, -4.5]
        )

    def test_params_validated(self):
        with pytest.raises(ConfigError):
            RosslerParams(float("nan"), 0.2, 5.7)


class TestJacobian:
    def test_at_origin(self):
        jac = jacobian_frozen(DEFAULTS, np.zeros(3))
        np.testing.assert_allclose(
            jac, [[0, -1, -1], [1, 0.2, 0], [0, 0, -5.7]]
        )

    def test_finite_difference_oracle(self):
        rng = np.random.default_rng(11)
        h = 1e-6
        for _ in range(100):
            s = rng.uniform(-10, 10, size=3)
            jac = jacobian_frozen(DEFAULTS, s)
            fd = np.empty((3, 3))
            for j in range(3):
                dx = np.zeros(3)
                dx[j] = h
                fd[:, j] = (
                    vector_field_frozen(DEFAULTS, s + dx)
                    - vector_field_frozen(DEFAULTS, s - dx)
                ) / (2 * h)
            assert np.abs(jac - fd).max() < 1e-6

    def test_trace_is_divergence(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            s = rng.uniform(-10, 10, size=3)
            jac = jacobian_frozen(DEFAULTS, s)
            assert np.trace(jac) == pytest.approx(DEFAULTS.a + s[0] - DEFAULTS.c, rel=1e-14)


class TestEquilibria:
    def test_residuals_below_1e12(self):
        for a in (-0.2, 0.2):
            p = RosslerParams(a, 0.2, 5.7)
            for eq in equilibria(p):
                assert np.linalg.norm(vector_field_frozen(p, eq)) < 1e-12

    def test_inner_value_negative_a(self):
        eq = inner_equilibrium(RosslerParams(-0.2, 0.2, 5.7))
        np.testing.assert_allclose(eq, [-0.0070089, -0.0350446, 0.0350446], atol=5e-7)
        # y and z have opposite signs and y is negative: ydot = x + a*y = 0 forces it
        assert eq[1] < 0.0 < eq[2]

    def test_inner_value_positive_a(self):
        eq = inner_equilibrium(RosslerParams(0.2, 0.2, 5.7))
        np.testing.assert_allclose(eq, [0.0070262, -0.0351310, 0.0351310], atol=5e-7)

    def test_matches_independent_newton(self):
        for a in (-0.2, 0.2):
            p = RosslerParams(a, 0.2, 5.7)
            eq = inner_equilibrium(p)
            oracle = newton_equilibrium_oracle(p, eq + 1e-3)
            assert np.linalg.norm(eq - oracle) < 1e-10

    def test_ordering_inner_first(self):
        zetas = [e[2] for e in equilibria(RosslerParams(0.2, 0.2, 5.7))]
        assert abs(zetas[0]) < abs(zetas[1])

    def test_no_real_equilibria(self):
        with pytest.raises(NoRealEquilibria):
            equilibria(RosslerParams(10.0, 10.0, 1.0))

    def test_a_zero_linear_case(self):
        eqs = equilibria(RosslerParams(0.0, 0.2, 5.7))
        assert len(eqs) == 1
        np.testing.assert_allclose(eqs[0], [0.0, -0.2 / 5.7, 0.2 / 5.7], atol=1e-15)
        assert np.linalg.norm(vector_field_frozen(RosslerParams(0.0, 0.2, 5.7), eqs[0])) < 1e-15


class TestNonautonomous:
    SHIFT = ShiftProfile(ShiftKind.TANH, -0.2, 0.2, 0.001)

    def test_constant_shift_equals_frozen_exactly(self):
        spec = NonautonomousSpec(0.2, 5.7, ShiftProfile(ShiftKind.CONSTANT, 0.13), 1.0)
        frozen = RosslerParams(0.13, 0.2, 5.7)
        rng = np.random.default_rng(2)
        for _ in range(20):
            s = rng.uniform(-8, 8, size=3)
            t = rng.uniform(-50, 50)
            np.testing.assert_array_equal(
                vector_field_nonautonomous(spec, t, s), vector_field_frozen(frozen, s)
            )

    def test_past_limit_matches_frozen(self):
        spec = NonautonomousSpec(0.2, 5.7, self.SHIFT, 1.0)
        frozen = RosslerParams(-0.2, 0.2, 5.7)
        s = np.array([1.0, -2.0, 0.5])
        diff = vector_field_nonautonomous(spec, -1e6, s) - vector_field_frozen(frozen, s)
        assert np.abs(diff).max() < 1e-10

    def test_midpoint_matches_a_zero(self):
        spec = NonautonomousSpec(0.2, 5.7, self.SHIFT, 1.0)
        s = np.array([0.3, 1.0, -0.2])
        np.testing.assert_allclose(
            vector_field_nonautonomous(spec, 0.0, s),
            vector_field_frozen(RosslerParams(0.0, 0.2, 5.7), s),
            rtol=1e-15,
        )

    def test_rate_scaling(self):
        spec1 = NonautonomousSpec(0.2, 5.7, self.SHIFT, 0.8)
        spec2 = NonautonomousSpec(0.2, 5.7, self.SHIFT, 0.4)
        s = np.array([1.0, 2.0, 3.0])
        np.testing.assert_array_equal(
            vector_field_nonautonomous(spec1, 5.0, s),
            vector_field_nonautonomous(spec2, 10.0, s),
        )

    def test_rate_must_be_positive(self):
        with pytest.raises(ConfigError):
            NonautonomousSpec(0.2, 5.7, self.SHIFT, 0.0)
