import numpy as np
import pytest

from sdbscan import normalize_to_sphere, spherical_caps

# filled by tests/test_acceptance.py, one line per criterion
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def two_caps():
    """Two well-separated caps, 100 points each, d=16, 10 noise points."""
    dataset, cert = spherical_caps(100, 2, 16, 0.15, noise_count=10, seed=42)
    assert cert.has_gap()
    return dataset, cert


@pytest.fixture(scope="session")
def three_caps():
    """Acceptance-scale instance: 3 caps x 100, d=16, 10 noise points."""
    dataset, cert = spherical_caps(100, 3, 16, 0.15, noise_count=10, seed=7)
    assert cert.has_gap()
    return dataset, cert


@pytest.fixture(scope="session")
def two_caps_unit(two_caps):
    dataset, _ = two_caps
    return normalize_to_sphere(dataset.points)


def random_unit(rng, d):
    v = rng.standard_normal(d)
    return v / np.linalg.norm(v)


def unit_at_cos(rng, q, c):
    """Unit vector with q-inner-product exactly c."""
    u = rng.standard_normal(q.shape[0])
    u -= (u @ q) * q
    u /= np.linalg.norm(u)
    return c * q + np.sqrt(1.0 - c * c) * u
