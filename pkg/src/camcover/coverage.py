"""Binary coverage, the network cost, per-instant coverage rates and a brute-force check."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .camera import CameraConfig, CameraIntrinsics
from .contour import DeformableContour, Pose
from .features import FeaturePoint, features_array


class VisibilityCounter:
    """Counts (camera, point) visibility tests requested from the evaluators."""

    def __init__(self):
        self.tests = 0

    def add(self, n_cameras, n_points):
        self.tests += int(n_cameras) * int(n_points)

    def reset(self):
        self.tests = 0


COUNTER = VisibilityCounter()


@dataclass(frozen=True)
class Deployment:
    cameras: tuple[CameraConfig, ...]
    intrinsics: CameraIntrinsics

    def __post_init__(self):
        object.__setattr__(self, "cameras", tuple(self.cameras))

    @property
    def N(self) -> int:
        return len(self.cameras)

    def camera_array(self) -> np.ndarray:
        return np.array([c.as_tuple() for c in self.cameras], dtype=float).reshape(-1, 3)

    def genome(self) -> np.ndarray:
        return self.camera_array().ravel()

    @classmethod
    def from_genome(cls, genome, intrinsics: CameraIntrinsics) -> "Deployment":
        g = np.asarray(genome, dtype=float).reshape(-1, 3)
        return cls(tuple(CameraConfig(*row) for row in g), intrinsics)


def _intr_args(intr: CameraIntrinsics):
    return intr.d_min, intr.d_max, intr.half_angle


def covered_points(dep: Deployment, pts) -> np.ndarray:
    """Coverage flag for every row of a ``(P, 3)`` pose array."""
    pts = np.asarray(pts, dtype=float).reshape(-1, 3)
    COUNTER.add(dep.N, pts.shape[0])
    if dep.N == 0:
        return np.zeros(pts.shape[0], dtype=bool)
    return kernels.covered_mask(dep.camera_array(), pts, *_intr_args(dep.intrinsics))


def point_covered(dep: Deployment, p: Pose) -> int:
    """1 if any camera of the deployment sees ``p``, else 0."""
    return int(covered_points(dep, [p.as_tuple()])[0])


def cost(dep: Deployment, features) -> int:
    """Number of feature points seen by at least one camera."""
    pts = features if isinstance(features, np.ndarray) else features_array(features)
    if len(pts) == 0:
        raise ValueError("cost needs at least one feature point")
    return int(covered_points(dep, pts).sum())


def coverage_count(dep: Deployment, contour: DeformableContour, t_index: int) -> int:
    return int(covered_points(dep, contour.snapshot(t_index)).sum())


def coverage_rate(dep: Deployment, contour: DeformableContour, t_index: int) -> Fraction:
    """Exact fraction of contour points covered at sample index ``t_index`` (1-based)."""
    return Fraction(coverage_count(dep, contour, t_index), contour.K)


def coverage_rates(dep: Deployment, contour: DeformableContour) -> list[Fraction]:
    return [coverage_rate(dep, contour, m) for m in range(1, contour.M + 1)]


def format_rate(rate) -> str:
    """Percentage with two decimals; whole percentages print without decimals ("100%")."""
    pct = Fraction(rate) * 100
    if pct.denominator == 1:
        return f"{pct.numerator}%"
    return f"{float(pct):.2f}%"


@dataclass(frozen=True)
class TrajectoryCoverage:
    per_point: np.ndarray  # (K,) bool, True when every sample is covered
    aggregate: Fraction


def brute_force_trajectory_coverage(dep: Deployment, contour: DeformableContour) -> TrajectoryCoverage:
    """Check every sample of every trajectory against every camera."""
    samples = contour.samples_array()
    K, M, _ = samples.shape
    flags = covered_points(dep, samples.reshape(-1, 3)).reshape(K, M)
    per_point = flags.all(axis=1)
    return TrajectoryCoverage(per_point, Fraction(int(per_point.sum()), K))


class FeatureFitness:
    """Genome -> cost callable over a fixed feature set, with a batched variant."""

    def __init__(self, features, intrinsics: CameraIntrinsics):
        if not isinstance(features, np.ndarray):
            features = features_array(features)
        if len(features) == 0:
            raise ValueError("cost needs at least one feature point")
        self.points = np.ascontiguousarray(features, dtype=float)
        self.intrinsics = intrinsics
        self.evaluations = 0

    @property
    def max_value(self) -> int:
        return len(self.points)

    def batch(self, genomes) -> np.ndarray:
        genomes = np.atleast_2d(np.asarray(genomes, dtype=float))
        self.evaluations += genomes.shape[0]
        COUNTER.add(genomes.shape[0] * (genomes.shape[1] // 3), len(self.points))
        return kernels.batch_cost(genomes, self.points, *_intr_args(self.intrinsics))

    def __call__(self, genome) -> int:
        return int(self.batch(genome)[0])


__all__ = [
    "COUNTER",
    "Deployment",
    "FeatureFitness",
    "FeaturePoint",
    "TrajectoryCoverage",
    "VisibilityCounter",
    "brute_force_trajectory_coverage",
    "cost",
    "coverage_count",
    "coverage_rate",
    "coverage_rates",
    "covered_points",
    "format_rate",
    "point_covered",
]
