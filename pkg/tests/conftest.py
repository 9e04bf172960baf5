import warnings

import pytest

from dcemotion.core import ObjectParams, Pulse
from dcemotion.forces import force_spectrum, force_time_series
from dcemotion.quadrature import QuadratureConfig

ACCEPTANCE_LINES = []


@pytest.fixture
def ref_pulse():
    return Pulse.gaussian_cosine(5.0, 2.0)


@pytest.fixture
def ref_params():
    return ObjectParams(0.5, 1.0, 0.01, 1.0)


@pytest.fixture(scope="session")
def negative_forces():
    """Force series at the reference config with lambda0 = -0.5 (computed once)."""
    params = ObjectParams(-0.5, 1.0, 0.01, 1.0)
    pulse = Pulse.gaussian_cosine(5.0, 2.0)
    quad = QuadratureConfig(doubling_check=False)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        fs = force_spectrum(params, pulse, quad)
        ser = force_time_series(params, pulse, quad, n_t=2401, spectrum=fs)
    return params, pulse, fs, ser


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
