"""Camera network placement for covering a deforming 2-D contour."""

__version__ = "0.1.0"

from .camera import (
    CameraConfig,
    CameraIntrinsics,
    fov_polygon,
    is_visible,
    visible_oracle,
    world_to_camera,
)
from .contour import (
    DeformableContour,
    Pose,
    Trajectory,
    discretize_linear,
    interpolate_orientation,
    resample_to_spacing,
)
from .coverage import (
    Deployment,
    brute_force_trajectory_coverage,
    cost,
    coverage_rate,
    point_covered,
)
from .features import (
    FeaturePoint,
    FeatureRect,
    assign_vertex_orientation,
    bounding_rectangle,
    select_feature_points,
)
from .optimizer import PackParams, SearchSpace, run_iwpa, run_wpa
from .scenario import Scenario, generate_random_contour, load_scenario, save_scenario

__all__ = [
    "CameraConfig", "CameraIntrinsics", "fov_polygon", "is_visible", "visible_oracle", "world_to_camera",
    "DeformableContour", "Pose", "Trajectory", "discretize_linear", "interpolate_orientation",
    "resample_to_spacing",
    "Deployment", "brute_force_trajectory_coverage", "cost", "coverage_rate", "point_covered",
    "FeaturePoint", "FeatureRect", "assign_vertex_orientation", "bounding_rectangle", "select_feature_points",
    "PackParams", "SearchSpace", "run_iwpa", "run_wpa",
    "Scenario", "generate_random_contour", "load_scenario", "save_scenario",
]
