import numpy as np
import pytest
from scipy.linalg import expm

from gaussnm.channels import CovarianceState, GaussianChannel
from gaussnm.linalg import symplectic_form

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20151028)


def random_symplectic(rng, n_modes, scale=0.5):
    h = rng.normal(size=(2 * n_modes, 2 * n_modes)) * scale
    h = 0.5 * (h + h.T)
    return expm(symplectic_form(n_modes) @ h)


def random_state(rng, n_modes):
    """Thermal state (symplectic eigenvalues >= 1/2) under a random symplectic."""
    s = random_symplectic(rng, n_modes)
    nu = 0.5 + rng.exponential(0.5, size=n_modes)
    return CovarianceState(s @ np.diag(np.repeat(nu, 2)) @ s.T)


def random_channel(rng, n_modes):
    dim = 2 * n_modes
    y = rng.normal(size=(dim, dim))
    return GaussianChannel(rng.normal(size=(dim, dim)), y + y.T)


def random_cp_channel(rng, n_modes, margin=0.1):
    """Random X; Y = A A^T + s I with s large enough for a CP margin of ``margin``."""
    dim = 2 * n_modes
    x = rng.normal(size=(dim, dim))
    a = rng.normal(size=(dim, dim))
    om = symplectic_form(n_modes)
    s = 0.5 * np.linalg.norm(x @ om @ x.T - om, 2) + margin
    return GaussianChannel(x, a @ a.T + s * np.eye(dim))
