"""Deformable contour model: per-point deformation trajectories."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

TWO_PI = 2.0 * math.pi


def normalize_angle(a: float) -> float:
    """Wrap an angle into ``[0, 2*pi)``."""
    a = math.fmod(a, TWO_PI)
    if a < 0.0:
        a += TWO_PI
    # fmod of a tiny negative number can round up to exactly 2*pi
    if a >= TWO_PI:
        a = 0.0
    return a


def normalize_angles(a):
    """Vectorized :func:`normalize_angle`."""
    out = np.mod(a, TWO_PI)
    return np.where(out >= TWO_PI, 0.0, out)


@dataclass(frozen=True)
class Pose:
    """Planar position in mm plus the front-face normal direction in radians."""

    x: float
    y: float
    rho: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "rho", normalize_angle(float(self.rho)))

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)

    @property
    def normal(self) -> tuple[float, float]:
        return (math.cos(self.rho), math.sin(self.rho))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.rho)


@dataclass(frozen=True)
class Trajectory:
    """M uniformly spaced samples of one contour point over ``[t0, ts]``."""

    point_index: int
    samples: tuple[Pose, ...]
    t0: float = 1.0
    ts: float = 2.0
    _array: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        samples = tuple(self.samples)
        if len(samples) < 2:
            raise ValueError(f"trajectory {self.point_index}: need at least 2 samples, got {len(samples)}")
        if not (self.ts > self.t0 > 0):
            raise ValueError(f"trajectory {self.point_index}: require ts > t0 > 0, got t0={self.t0}, ts={self.ts}")
        object.__setattr__(self, "samples", samples)
        arr = np.array([p.as_tuple() for p in samples], dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "_array", arr)

    @property
    def M(self) -> int:
        return len(self.samples)

    @property
    def array(self) -> np.ndarray:
        """Read-only ``(M, 3)`` array of ``(x, y, rho)``."""
        return self._array

    def spacings(self) -> np.ndarray:
        """Euclidean distances between consecutive sample positions."""
        return np.hypot(*np.diff(self._array[:, :2], axis=0).T)

    def is_uniform(self, tol: float = 1e-6) -> bool:
        s = self.spacings()
        return bool(s.max() - s.min() <= tol)


@dataclass(frozen=True)
class DeformableContour:
    trajectories: tuple[Trajectory, ...]

    def __post_init__(self):
        trajs = tuple(self.trajectories)
        if not trajs:
            raise ValueError("contour needs at least one trajectory")
        first = trajs[0]
        for tr in trajs[1:]:
            if (tr.M, tr.t0, tr.ts) != (first.M, first.t0, first.ts):
                raise ValueError(
                    f"trajectory {tr.point_index} has (M, t0, ts)={(tr.M, tr.t0, tr.ts)}, "
                    f"expected {(first.M, first.t0, first.ts)}"
                )
        object.__setattr__(self, "trajectories", trajs)

    @property
    def K(self) -> int:
        return len(self.trajectories)

    @property
    def M(self) -> int:
        return self.trajectories[0].M

    @property
    def t0(self) -> float:
        return self.trajectories[0].t0

    @property
    def ts(self) -> float:
        return self.trajectories[0].ts

    def samples_array(self) -> np.ndarray:
        """``(K, M, 3)`` array of every trajectory sample."""
        return np.stack([tr.array for tr in self.trajectories])

    def snapshot(self, m: int) -> np.ndarray:
        """``(K, 3)`` poses of all points at sample index ``m`` (1-based)."""
        if not 1 <= m <= self.M:
            raise ValueError(f"sample index {m} outside 1..{self.M}")
        return np.array([tr.array[m - 1] for tr in self.trajectories])


def interpolate_orientation(rho_first: float, rho_last: float, M: int, m: int) -> float:
    """Orientation of the m-th of M samples (1-based), linear in m between the endpoints.

    The interpolation runs on the raw angle values with no shortest-arc
    correction; the result is wrapped into ``[0, 2*pi)``.
    """
    if M < 2:
        raise ValueError(f"M must be >= 2, got {M}")
    if not 1 <= m <= M:
        raise ValueError(f"m must lie in 1..{M}, got {m}")
    if m == 1:
        return normalize_angle(rho_first)
    if m == M:
        return normalize_angle(rho_last)
    return normalize_angle(rho_first + (rho_last - rho_first) * (m - 1) / (M - 1))


def discretize_linear(start: Pose, end: Pose, M: int, *, point_index: int = 1,
                      t0: float = 1.0, ts: float = 2.0) -> Trajectory:
    """Straight-line trajectory from ``start`` to ``end`` with M evenly spaced samples."""
    if M < 2:
        raise ValueError(f"M must be >= 2, got {M}")
    samples = []
    for m in range(1, M + 1):
        if m == 1:
            samples.append(start)
            continue
        if m == M:
            samples.append(end)
            continue
        f = (m - 1) / (M - 1)
        samples.append(Pose(start.x + (end.x - start.x) * f,
                            start.y + (end.y - start.y) * f,
                            interpolate_orientation(start.rho, end.rho, M, m)))
    return Trajectory(point_index, tuple(samples), t0, ts)


def resample_to_spacing(samples: Sequence[Pose], d: float, *, point_index: int = 1,
                        t0: float = 1.0, ts: float = 2.0) -> Trajectory:
    """Resample a polyline of poses at equal arc-length steps strictly shorter than ``d``.

    Endpoints are kept; orientations are re-interpolated from the endpoint
    orientations.
    """
    if d <= 0:
        raise ValueError(f"spacing threshold d must be positive, got {d}")
    samples = list(samples)
    if len(samples) < 2:
        raise ValueError("need at least 2 input samples")
    xy = np.array([p.position for p in samples], dtype=float)
    seg = np.hypot(*np.diff(xy, axis=0).T)
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    length = float(cum[-1])
    M = int(math.floor(length / d)) + 2
    targets = np.linspace(0.0, length, M)
    xs = np.interp(targets, cum, xy[:, 0]) if length > 0 else np.full(M, xy[0, 0])
    ys = np.interp(targets, cum, xy[:, 1]) if length > 0 else np.full(M, xy[0, 1])
    first, last = samples[0], samples[-1]
    out = [first]
    for m in range(2, M):
        out.append(Pose(xs[m - 1], ys[m - 1], interpolate_orientation(first.rho, last.rho, M, m)))
    out.append(last)
    return Trajectory(point_index, tuple(out), t0, ts)
