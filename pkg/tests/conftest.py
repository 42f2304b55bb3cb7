import pytest

from ratetip.integrate import IntegratorConfig
from ratetip.system import RosslerParams
from ratetip.upo import find_fixed_point, seed_guess_from_recurrence


@pytest.fixture(scope="session")
def integ_cfg():
    return IntegratorConfig()


@pytest.fixture(scope="session")
def default_params():
    return RosslerParams()


@pytest.fixture(scope="session")
def default_orbit(default_params, integ_cfg):
    """The period-one saddle orbit at (0.2, 0.2, 5.7), solved once per session."""
    guess = seed_guess_from_recurrence(default_params, integ_cfg)
    return find_fixed_point(default_params, guess, integ_cfg)
