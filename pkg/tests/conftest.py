import math

import pytest

from camcover.camera import CameraConfig, CameraIntrinsics
from camcover.contour import DeformableContour, Pose, discretize_linear
from camcover.scenario import load_scenario

DEFAULT_INTR = CameraIntrinsics(30.0, 80.0, math.radians(26.0))


@pytest.fixture
def intr():
    return DEFAULT_INTR


@pytest.fixture(scope="session")
def large_scenario():
    return load_scenario("large")


@pytest.fixture(scope="session")
def desk_scenario():
    return load_scenario("desk")


def random_trajectory(rng, k=1, M=None, scale=50.0, reach=10.0):
    """Straight trajectory with random endpoints and orientations."""
    M = M or int(rng.integers(2, 20))
    a = Pose(*rng.uniform(-scale, scale, 2), rng.uniform(0, 2 * math.pi))
    b = Pose(a.x + rng.uniform(-reach, reach), a.y + rng.uniform(-reach, reach), rng.uniform(0, 2 * math.pi))
    return discretize_linear(a, b, M, point_index=k)


def random_contour(rng, K=5, M=6):
    return DeformableContour(tuple(random_trajectory(rng, k, M) for k in range(1, K + 1)))


def random_camera(rng, scale=100.0):
    return CameraConfig(*rng.uniform(-scale, scale, 2), rng.uniform(0, 2 * math.pi))


def random_intrinsics(rng):
    d_min = rng.uniform(5, 50)
    return CameraIntrinsics(d_min, d_min + rng.uniform(5, 80), rng.uniform(0.05, 1.4))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
