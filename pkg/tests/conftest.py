import pytest

from camscat import fields as fl

R0, RSUP = 0.5, 2.0


@pytest.fixture(scope="session")
def zero_medium():
    return fl.Medium(fl.zero_profile(), fl.zero_profile(), R0, RSUP)


@pytest.fixture(scope="session")
def step_medium():
    """The two-region matching-oracle medium: V = 0.3 on [r0, R), no field."""
    return fl.Medium(fl.step_profile(0.3, R0, RSUP), fl.zero_profile(), R0, RSUP)


@pytest.fixture(scope="session")
def bump_step_medium():
    """Reference medium: bump field with flux 0.3 plus a step potential."""
    return fl.Medium(fl.step_profile(0.3, R0, RSUP),
                     fl.bump_field(0.3, 0.8, 1.6), R0, RSUP)


@pytest.fixture(scope="session")
def bump_field_medium():
    """Field-only medium, flux 0.3 inside [r0, R]."""
    return fl.Medium(fl.zero_profile(), fl.bump_field(0.3, 0.8, 1.6), R0, RSUP)


@pytest.fixture(scope="session")
def ab_medium():
    """Pure Aharonov-Bohm: field of flux 0.5 entirely inside the obstacle."""
    return fl.Medium(fl.zero_profile(), fl.bump_field(0.5, 0.1, 0.4), R0, 0.45)


@pytest.fixture(scope="session")
def q_zero(zero_medium):
    return fl.effective_potential(zero_medium)


@pytest.fixture(scope="session")
def q_step(step_medium):
    return fl.effective_potential(step_medium)


@pytest.fixture(scope="session")
def q_bump_step(bump_step_medium):
    return fl.effective_potential(bump_step_medium)


@pytest.fixture(scope="session")
def q_bump_field(bump_field_medium):
    return fl.effective_potential(bump_field_medium)


@pytest.fixture(scope="session")
def q_ab(ab_medium):
    return fl.effective_potential(ab_medium)
