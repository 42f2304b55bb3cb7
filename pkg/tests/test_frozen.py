import numpy as np
import pytest

from ratetip.errors import NoBracket
from ratetip.frozen import equilibrium_eigenvalues, locate_hopf
from ratetip.system import RosslerParams, inner_equilibrium, jacobian_frozen


class TestEigenvalues:
    def test_stable_for_negative_a(self):
        eig = equilibrium_eigenvalues(RosslerParams(-0.2, 0.2, 5.7))
        assert np.all(eig.real < 0.0)

    def test_unstable_pair_past_hopf(self):
        eig = equilibrium_eigenvalues(RosslerParams(0.1, 0.2, 5.7))
        pair = eig[np.abs(eig.imag) > 1e-12]
        assert pair.size == 2
        assert np.all(pair.real > 0.0)

    def test_characteristic_residual(self):
        for a in (-0.2, 0.05, 0.2):
            p = RosslerParams(a, 0.2, 5.7)
            jac = jacobian_frozen(p, inner_equilibrium(p))
            for lam in equilibrium_eigenvalues(p):
                res = np.linalg.det(jac - lam * np.eye(3))
                assert abs(res) < 1e-8

    def test_sum_and_product_match_trace_and_det(self):
        p = RosslerParams(0.2, 0.2, 5.7)
        jac = jacobian_frozen(p, inner_equilibrium(p))
        eig = equilibrium_eigenvalues(p)
        assert eig.sum() == pytest.approx(np.trace(jac), abs=1e-8)
        assert np.prod(eig) == pytest.approx(np.linalg.det(jac), abs=1e-8)

    def test_sorted_by_real_part(self):
        eig = equilibrium_eigenvalues(RosslerParams(0.2, 0.2, 5.7))
        assert np.all(np.diff(eig.real) <= 1e-14)


class TestHopf:
    def test_location(self):
        a_hb = locate_hopf(0.2, 5.7, (-0.05, 0.05))
        assert a_hb == pytest.approx(0.005978, abs=1e-3)

    def test_bracket_independence(self):
        a1 = locate_hopf(0.2, 5.7, (-0.05, 0.05))
        a2 = locate_hopf(0.2, 5.7, (-0.01, 0.03))
        assert abs(a1 - a2) < 1e-8

    def test_no_bracket(self):
        with pytest.raises(NoBracket):
            locate_hopf(0.2, 5.7, (-0.2, -0.1))

    def test_pair_is_oscillatory_at_hopf(self):
        a_hb = locate_hopf(0.2, 5.7, (-0.05, 0.05))
        eig = equilibrium_eigenvalues(RosslerParams(a_hb, 0.2, 5.7))
        pair = eig[np.abs(eig.imag) > 1e-12]
        assert pair.size == 2
        assert np.all(np.abs(pair.imag) > 0.1)
