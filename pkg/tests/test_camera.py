import math

import numpy as np
import pytest

from camcover.camera import (
    CameraConfig,
    CameraIntrinsics,
    fov_polygon,
    is_visible,
    polygon_area,
    visible_oracle,
    world_to_camera,
)
from camcover.contour import Pose

from conftest import DEFAULT_INTR, random_camera, random_intrinsics

ORIGIN = CameraConfig(0, 0, 0)


@pytest.mark.parametrize(
    "s, c, expected",
    [
        ((10, 25), CameraConfig(10, 20, math.pi / 2), (5, 0)),
        ((3, 4), CameraConfig(0, 0, 0), (3, 4)),
        ((-7, 2), CameraConfig(-7, 2, 1.234), (0, 0)),
    ],
)
def test_world_to_camera_examples(s, c, expected):
    assert world_to_camera(s, c) == pytest.approx(expected, abs=1e-12)


def test_world_to_camera_origin_exact_and_isometry():
    rng = np.random.default_rng(1)
    for _ in range(500):
        c = random_camera(rng)
        assert world_to_camera(c.position, c) == (0.0, 0.0)
        a, b = rng.uniform(-100, 100, (2, 2))
        qa, qb = world_to_camera(a, c), world_to_camera(b, c)
        assert math.dist(qa, qb) == pytest.approx(math.dist(a, b), abs=1e-9)


@pytest.mark.parametrize(
    "p, expected",
    [
        (Pose(0, 50, 3 * math.pi / 2), True),
        (Pose(0, 20, 3 * math.pi / 2), False),
        (Pose(30, 50, 3 * math.pi / 2), False),
        (Pose(0, 50, math.pi / 2), False),
        (Pose(0, 30, 3 * math.pi / 2), True),
        (Pose(0, 80, 3 * math.pi / 2), True),
        (Pose(0, 0, 0), False),
    ],
)
def test_visibility_examples(p, expected):
    assert is_visible(ORIGIN, DEFAULT_INTR, p) is expected
    assert visible_oracle(ORIGIN, DEFAULT_INTR, p) is expected


def test_off_axis_example_angle():
    # the off-axis example fails the angular test, not the depth test
    assert math.degrees(math.atan2(30, 50)) > 26
    assert 30 <= 50 <= 80


def test_front_face_boundary_is_strict():
    # normal exactly perpendicular to the viewing ray is not visible
    assert not is_visible(ORIGIN, DEFAULT_INTR, Pose(0, 50, 0.0))
    assert not visible_oracle(ORIGIN, DEFAULT_INTR, Pose(0, 50, 0.0))


def test_fov_polygon_examples():
    intr = CameraIntrinsics(30, 80, math.pi / 4)
    poly = fov_polygon(ORIGIN, intr)
    np.testing.assert_allclose(poly, [(-30, 30), (30, 30), (80, 80), (-80, 80)], atol=1e-12)
    poly = fov_polygon(CameraConfig(0, 0, math.pi), intr)
    np.testing.assert_allclose(sorted(map(tuple, np.round(poly, 9))),
                               sorted([(30, -30), (-30, -30), (80, -80), (-80, -80)]), atol=1e-9)


def test_fov_polygon_area_and_winding():
    rng = np.random.default_rng(2)
    for _ in range(200):
        c, intr = random_camera(rng), random_intrinsics(rng)
        area = polygon_area(fov_polygon(c, intr))
        assert area > 0
        assert area == pytest.approx(math.tan(intr.half_angle) * (intr.d_max ** 2 - intr.d_min ** 2), rel=1e-9)


def test_intrinsics_validation():
    with pytest.raises(ValueError):
        CameraIntrinsics(50, 30, 0.4)
    with pytest.raises(ValueError):
        CameraIntrinsics(0, 30, 0.4)
    with pytest.raises(ValueError):
        CameraIntrinsics(10, 30, math.pi / 2)
    assert CameraIntrinsics.from_degrees(30, 80, 26).half_angle == pytest.approx(math.radians(26))


def test_config_normalizes_theta():
    assert CameraConfig(0, 0, -math.pi / 2).theta == pytest.approx(3 * math.pi / 2)


def test_rigid_motion_invariance():
    rng = np.random.default_rng(3)
    for _ in range(2000):
        c, intr = random_camera(rng, 60), random_intrinsics(rng)
        p = Pose(*rng.uniform(-100, 100, 2), rng.uniform(0, 2 * math.pi))
        phi = rng.uniform(0, 2 * math.pi)
        t = rng.uniform(-50, 50, 2)
        cp, sp = math.cos(phi), math.sin(phi)

        def move(x, y):
            return cp * x - sp * y + t[0], sp * x + cp * y + t[1]

        c2 = CameraConfig(*move(c.vx, c.vy), c.theta + phi)
        p2 = Pose(*move(p.x, p.y), p.rho + phi)
        if _near_boundary(c, intr, p):
            continue
        assert is_visible(c, intr, p) == is_visible(c2, intr, p2)


def _near_boundary(c, intr, p, tol=1e-6):
    x, y = world_to_camera(p.position, c)
    if min(abs(y - intr.d_min), abs(y - intr.d_max)) < tol:
        return True
    if abs(math.atan2(abs(x), y) - intr.half_angle) < tol:
        return True
    w = (p.x - c.vx, p.y - c.vy)
    n = math.hypot(*w)
    return n > 0 and abs((w[0] * math.cos(p.rho) + w[1] * math.sin(p.rho)) / n) < tol


def test_fov_convexity_along_chords():
    rng = np.random.default_rng(4)
    checked = 0
    while checked < 300:
        c, intr = random_camera(rng, 20), random_intrinsics(rng)
        poly = np.array(fov_polygon(c, intr))
        # two random interior points from convex combinations of corners
        a, b = (rng.dirichlet(np.ones(4)) @ poly for _ in range(2))
        for lam in np.linspace(0, 1, 11):
            q = (1 - lam) * a + lam * b
            x, y = world_to_camera(q, c)
            assert intr.d_min - 1e-9 <= y <= intr.d_max + 1e-9
            assert math.atan2(abs(x), y) <= intr.half_angle + 1e-9
        checked += 1


def test_oracle_agrees_on_random_draws():
    rng = np.random.default_rng(5)
    disagreements = 0
    for _ in range(3000):
        c, intr = random_camera(rng, 60), random_intrinsics(rng)
        p = Pose(*rng.uniform(-100, 100, 2), rng.uniform(0, 2 * math.pi))
        if is_visible(c, intr, p) != visible_oracle(c, intr, p) and not _near_boundary(c, intr, p):
            disagreements += 1
    assert disagreements == 0
