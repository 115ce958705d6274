"""Trapezoidal field-of-view camera model and point visibility."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .contour import Pose, normalize_angle
from .kernels import DEFAULT_EPS_ANGLE


@dataclass(frozen=True)
class CameraIntrinsics:
    """Near/far base distances (mm) and half field angle (rad) of the FOV trapezoid."""

    d_min: float
    d_max: float
    half_angle: float

    def __post_init__(self):
        if not 0 < self.d_min < self.d_max:
            raise ValueError(f"require 0 < d_min < d_max, got d_min={self.d_min}, d_max={self.d_max}")
        if not 0 < self.half_angle < math.pi / 2:
            raise ValueError(f"half_angle must lie in (0, pi/2), got {self.half_angle}")

    @classmethod
    def from_degrees(cls, d_min, d_max, half_angle_deg):
        return cls(float(d_min), float(d_max), math.radians(half_angle_deg))


@dataclass(frozen=True)
class CameraConfig:
    """Camera position (mm) and optical-axis orientation theta (rad).

    The optical axis points along ``(-sin theta, cos theta)`` in the world
    frame, i.e. the camera-frame y axis.
    """

    vx: float
    vy: float
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "vx", float(self.vx))
        object.__setattr__(self, "vy", float(self.vy))
        object.__setattr__(self, "theta", normalize_angle(float(self.theta)))

    @property
    def position(self):
        return (self.vx, self.vy)

    @property
    def axis(self):
        return (-math.sin(self.theta), math.cos(self.theta))

    def as_tuple(self):
        return (self.vx, self.vy, self.theta)


def world_to_camera(s, c: CameraConfig):
    """Express world position ``s`` in the camera frame: ``R(theta) @ (s - v)``."""
    wx = s[0] - c.vx
    wy = s[1] - c.vy
    ct, st = math.cos(c.theta), math.sin(c.theta)
    return (ct * wx + st * wy, -st * wx + ct * wy)


def camera_to_world(q, c: CameraConfig):
    ct, st = math.cos(c.theta), math.sin(c.theta)
    return (ct * q[0] - st * q[1] + c.vx, st * q[0] + ct * q[1] + c.vy)


def is_visible(c: CameraConfig, intr: CameraIntrinsics, p: Pose, eps_angle: float = DEFAULT_EPS_ANGLE) -> bool:
    """Whether camera ``c`` images the oriented point ``p``.

    Three tests, all required: depth along the optical axis within
    ``[d_min, d_max]``; angle off the optical axis at most ``half_angle``; and
    the point's normal facing the camera (angle to the camera-to-point vector
    strictly above pi/2). ``eps_angle`` only absorbs rounding at the angular
    boundaries.
    """
    wx = p.x - c.vx
    wy = p.y - c.vy
    ct, st = math.cos(c.theta), math.sin(c.theta)
    depth = -st * wx + ct * wy
    if depth < intr.d_min or depth > intr.d_max:
        return False
    lateral = ct * wx + st * wy
    if math.atan2(abs(lateral), depth) > intr.half_angle + eps_angle:
        return False
    return wx * math.cos(p.rho) + wy * math.sin(p.rho) < -math.sin(eps_angle) * math.hypot(wx, wy)


def fov_polygon(c: CameraConfig, intr: CameraIntrinsics):
    """World-frame FOV trapezoid corners, counterclockwise."""
    t = math.tan(intr.half_angle)
    near, far = intr.d_min, intr.d_max
    local = [(-near * t, near), (near * t, near), (far * t, far), (-far * t, far)]
    # local corners run counterclockwise already; rotations keep the winding
    return [camera_to_world(q, c) for q in local]


def polygon_area(poly) -> float:
    """Signed shoelace area (positive for counterclockwise)."""
    area = 0.0
    n = len(poly)
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        area += x0 * y1 - x1 * y0
    return 0.5 * area


def point_in_convex_polygon(pt, poly) -> bool:
    """Closed containment test for a counterclockwise convex polygon."""
    px, py = pt
    n = len(poly)
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        if (x1 - x0) * (py - y0) - (y1 - y0) * (px - x0) < 0:
            return False
    return True


def visible_oracle(c: CameraConfig, intr: CameraIntrinsics, p: Pose) -> bool:
    """Independent visibility check: polygon containment plus a dot-product facing test."""
    wx = p.x - c.vx
    wy = p.y - c.vy
    if wx == 0.0 and wy == 0.0:
        return False
    if not point_in_convex_polygon(p.position, fov_polygon(c, intr)):
        return False
    nx, ny = p.normal
    return wx * nx + wy * ny < 0.0
