import numpy as np
import pytest

from lineardag import Sem
from lineardag.sem import population_covariance

# one "[PASS]/[FAIL] criterion N" line per acceptance criterion, echoed in the
# terminal summary at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

# Three-variable example: ground truth (B, Omega) and the weight matrix of the
# wrong structure that least squares prefers, with its population-OLS
# coefficients.  All covariance entries below were derived by hand from
# Sigma = (I-B)^{-T} Omega (I-B)^{-1}.
TRIANGLE_TRUTH_B = np.array([
    [0.0, 0.0, 0.0],
    [0.5, 0.0, 0.0],
    [1.0, 0.5, 0.0],
])
TRIANGLE_TRUTH_OMEGA = np.array([0.5, 1.0, 0.5])
TRIANGLE_WRONG_B = np.array([
    [0.0, 2.0 / 3.0, 0.0],
    [0.0, 0.0, 0.0],
    [1.25, -1.0 / 3.0, 0.0],
])
TRIANGLE_SIGMA = np.array([
    [49.0 / 32.0, 13.0 / 16.0, 5.0 / 8.0],
    [13.0 / 16.0, 9.0 / 8.0, 1.0 / 4.0],
    [5.0 / 8.0, 1.0 / 4.0, 1.0 / 2.0],
])
# 0-indexed edges of the two triangle structures
TRIANGLE_TRUTH_EDGES = frozenset({(1, 0), (2, 0), (2, 1)})
TRIANGLE_WRONG_EDGES = frozenset({(0, 1), (2, 0), (2, 1)})


@pytest.fixture(scope="session")
def triangle_sem() -> Sem:
    return Sem(TRIANGLE_TRUTH_B, TRIANGLE_TRUTH_OMEGA)


@pytest.fixture(scope="session")
def triangle_sigma(triangle_sem):
    sigma = population_covariance(triangle_sem)
    assert np.allclose(sigma, TRIANGLE_SIGMA, atol=1e-14)
    return sigma


def random_sem(rng, d, density=0.4, weight_scale=1.0, ev=False) -> Sem:
    """Random acyclic SEM: strictly lower-triangular support under a random
    permutation, weights uniform away from zero."""
    perm = rng.permutation(d)
    b = np.zeros((d, d))
    for jj in range(d):
        for ii in range(jj):
            if rng.random() < density:
                mag = rng.uniform(0.3, 2.0) * weight_scale
                b[perm[ii], perm[jj]] = mag if rng.random() < 0.5 else -mag
    omega = np.ones(d) if ev else rng.uniform(0.3, 3.0, size=d)
    return Sem(b, omega)
