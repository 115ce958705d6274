"""Bounding-rectangle feature points that stand in for whole trajectories."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .contour import DeformableContour, Pose, Trajectory


@dataclass(frozen=True)
class FeatureRect:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    source_index: int

    def vertices(self):
        """Corners in the fixed order (min,min), (min,max), (max,min), (max,max)."""
        return [
            (self.x_min, self.y_min),
            (self.x_min, self.y_max),
            (self.x_max, self.y_min),
            (self.x_max, self.y_max),
        ]

    def contains(self, x, y) -> bool:
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max


@dataclass(frozen=True)
class FeaturePoint:
    pose: Pose
    source_index: int
    vertex_index: int


def bounding_rectangle(traj: Trajectory) -> FeatureRect:
    arr = traj.array
    if arr.shape[0] == 0:
        raise ValueError(f"trajectory {traj.point_index} has no samples")
    xs, ys = arr[:, 0], arr[:, 1]
    return FeatureRect(float(xs.min()), float(xs.max()), float(ys.min()), float(ys.max()), traj.point_index)


def assign_vertex_orientation(traj: Trajectory, vertex_position) -> float:
    """Orientation of the sample nearest to ``vertex_position``; first index wins ties."""
    arr = traj.array
    vx, vy = vertex_position
    best_m = 0
    best_d = math.inf
    for m in range(arr.shape[0]):
        d = math.hypot(arr[m, 0] - vx, arr[m, 1] - vy)
        if d < best_d:
            best_d = d
            best_m = m
    return float(arr[best_m, 2])


def select_feature_points(contour: DeformableContour) -> list[FeaturePoint]:
    """Four feature points per trajectory, grouped by trajectory in contour order."""
    out = []
    for traj in contour.trajectories:
        rect = bounding_rectangle(traj)
        for v, (x, y) in enumerate(rect.vertices(), start=1):
            rho = assign_vertex_orientation(traj, (x, y))
            out.append(FeaturePoint(Pose(x, y, rho), traj.point_index, v))
    return out


def features_array(features) -> np.ndarray:
    """``(4K, 3)`` array of feature poses, the layout the kernels consume."""
    return np.array([fp.pose.as_tuple() for fp in features], dtype=float).reshape(-1, 3)
