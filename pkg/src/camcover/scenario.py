"""Scenario files and synthetic contour generation.

A scenario is a versioned JSON document::

    {
      "schema_version": 1,
      "name": "...",
      "units": {"length": "mm", "angle": "deg"},
      "intrinsics": {"d_min": 30, "d_max": 80, "half_angle": 26},
      "N": 6,
      "space": {"x_range": [-120, 120], "y_range": [-120, 120]},
      "params": {"T": 100, "seed": 0, ...},
      "contour": {...}
    }

``units.angle`` sets how bare angle numbers are read ("deg" or "rad"); any
single angle may instead be written ``{"value": 26, "unit": "deg"}``.
Lengths are always millimetres. The contour block takes one of three forms:

* ``{"generator": "random", "seed": 7, "K": 180, "M": 12, "magnitude": 5, ...}``
* ``{"generator": "linear", "M": 12, "start": [[x, y, rho], ...], "end": [...]}``
* ``{"trajectories": [[[x, y, rho], ...], ...]}``

All three accept optional ``t0`` and ``ts`` (seconds).
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .camera import CameraIntrinsics
from .contour import DeformableContour, Pose, Trajectory, discretize_linear, normalize_angle
from .features import features_array, select_feature_points
from .optimizer import PackParams, SearchSpace

SCHEMA_VERSION = 1
ANGLE_PARAMS = ("step_ao", "theta_w", "step_bo", "step_co")
BUNDLED = {"large": "large_scale.json", "desk": "desk_scale.json"}


class ScenarioError(ValueError):
    pass


def _angle_reader(unit):
    if unit == "deg":
        return math.radians
    if unit == "rad":
        return float
    raise ScenarioError(f"units.angle: expected 'deg' or 'rad', got {unit!r}")


def _require(d, key, where):
    if not isinstance(d, dict):
        raise ScenarioError(f"{where}: expected an object, got {type(d).__name__}")
    if key not in d:
        raise ScenarioError(f"missing field '{where}.{key}'" if where else f"missing field '{key}'")
    return d[key]


def _number(v, where):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ScenarioError(f"{where}: expected a number, got {v!r}")
    return float(v)


def _angle(v, default_reader, where):
    if isinstance(v, dict):
        unit = _require(v, "unit", where)
        return _angle_reader(unit)(_number(_require(v, "value", where), f"{where}.value"))
    return default_reader(_number(v, where))


def _poses(rows, read_angle, where):
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, (list, tuple)) or len(row) != 3:
            raise ScenarioError(f"{where}[{i}]: expected [x, y, rho], got {row!r}")
        out.append(Pose(_number(row[0], f"{where}[{i}][0]"), _number(row[1], f"{where}[{i}][1]"),
                        _angle(row[2], read_angle, f"{where}[{i}][2]")))
    return out


# -- random contour generator ----------------------------------------------------------


def _outward_angles(xy):
    # central-difference tangent of a closed counterclockwise polyline
    tangent = np.roll(xy, -1, axis=0) - np.roll(xy, 1, axis=0)
    return np.array([normalize_angle(math.atan2(-tx, ty)) for tx, ty in tangent])


def generate_random_contour(seed: int, K: int = 180, magnitude: float = 5.0, *, M: int = 12,
                            radius: float = 35.0, roughness: float = 0.12,
                            t0: float = 1.0, ts: float = 12.0) -> DeformableContour:
    """Random smooth closed contour plus a small smooth deformation.

    The start shape is a circle of ``radius`` with a few low-order radial
    harmonics (relative amplitude up to ``roughness``). Each point then moves
    in a straight line under a smooth displacement field whose largest
    displacement equals ``magnitude``. Normals point outward and are
    recomputed on the deformed shape.
    """
    if K < 3:
        raise ValueError(f"K must be >= 3, got {K}")
    if magnitude < 0:
        raise ValueError(f"magnitude must be >= 0, got {magnitude}")
    rng = np.random.default_rng(seed)
    phi = 2 * np.pi * np.arange(K) / K

    def harmonics(orders, scale):
        amp = rng.uniform(0.0, scale, size=len(orders))
        phase = rng.uniform(0.0, 2 * np.pi, size=len(orders))
        return sum(a * np.cos(h * phi + p) for a, h, p in zip(amp, orders, phase))

    r = radius * (1.0 + harmonics((2, 3, 4), roughness / 3))
    start = np.column_stack([r * np.cos(phi), r * np.sin(phi)])

    radial = harmonics((1, 2, 3), 1.0)
    tangential = 0.3 * harmonics((1, 2), 1.0)
    disp = (radial[:, None] * np.column_stack([np.cos(phi), np.sin(phi)])
            + tangential[:, None] * np.column_stack([-np.sin(phi), np.cos(phi)]))
    peak = np.hypot(disp[:, 0], disp[:, 1]).max()
    disp = disp * (magnitude / peak) if peak > 0 else disp * 0.0
    end = start + disp

    rho0 = _outward_angles(start)
    rho1 = _outward_angles(end)
    trajs = [
        discretize_linear(Pose(start[k, 0], start[k, 1], rho0[k]), Pose(end[k, 0], end[k, 1], rho1[k]),
                          M, point_index=k + 1, t0=t0, ts=ts)
        for k in range(K)
    ]
    return DeformableContour(tuple(trajs))


def build_contour(cfg: dict) -> DeformableContour:
    """Materialise a canonical (internal-unit) contour cfg."""
    t0 = cfg.get("t0", 1.0)
    ts = cfg.get("ts", 2.0)
    gen = cfg.get("generator")
    if gen == "random":
        kw = {k: cfg[k] for k in ("M", "radius", "roughness") if k in cfg}
        return generate_random_contour(cfg["seed"], cfg["K"], cfg["magnitude"], t0=t0, ts=ts, **kw)
    if gen == "linear":
        trajs = [
            discretize_linear(Pose(*a), Pose(*b), cfg["M"], point_index=k, t0=t0, ts=ts)
            for k, (a, b) in enumerate(zip(cfg["start"], cfg["end"]), start=1)
        ]
        return DeformableContour(tuple(trajs))
    trajs = [Trajectory(k, tuple(Pose(*row) for row in rows), t0, ts)
             for k, rows in enumerate(cfg["trajectories"], start=1)]
    return DeformableContour(tuple(trajs))


def _parse_contour(c, read_angle) -> dict:
    where = "contour"
    if not isinstance(c, dict):
        raise ScenarioError(f"{where}: expected an object")
    cfg = {}
    for key in ("t0", "ts"):
        if key in c:
            cfg[key] = _number(c[key], f"{where}.{key}")
    gen = c.get("generator")
    if gen == "random":
        cfg["generator"] = "random"
        cfg["seed"] = int(_require(c, "seed", where))
        cfg["K"] = int(_require(c, "K", where))
        cfg["magnitude"] = _number(_require(c, "magnitude", where), f"{where}.magnitude")
        if "M" in c:
            cfg["M"] = int(c["M"])
        for key in ("radius", "roughness"):
            if key in c:
                cfg[key] = _number(c[key], f"{where}.{key}")
    elif gen == "linear":
        cfg["generator"] = "linear"
        cfg["M"] = int(_require(c, "M", where))
        start = _poses(_require(c, "start", where), read_angle, f"{where}.start")
        end = _poses(_require(c, "end", where), read_angle, f"{where}.end")
        if len(start) != len(end):
            raise ScenarioError(f"{where}: start has {len(start)} points but end has {len(end)}")
        cfg["start"] = [list(p.as_tuple()) for p in start]
        cfg["end"] = [list(p.as_tuple()) for p in end]
    elif gen is None:
        rows = _require(c, "trajectories", where)
        cfg["trajectories"] = [
            [list(p.as_tuple()) for p in _poses(tr, read_angle, f"{where}.trajectories[{k}]")]
            for k, tr in enumerate(rows)
        ]
    else:
        raise ScenarioError(f"{where}.generator: unknown generator {gen!r}")
    return cfg


# -- scenario ----------------------------------------------------------------------------


@dataclass
class Scenario:
    name: str
    intrinsics: CameraIntrinsics
    N: int
    space: SearchSpace
    params: PackParams
    contour_spec: dict
    metadata: dict = field(default_factory=dict)
    _contour: DeformableContour | None = field(default=None, init=False, repr=False, compare=False)
    _features: np.ndarray | None = field(default=None, init=False, repr=False, compare=False)

    @property
    def contour(self) -> DeformableContour:
        if self._contour is None:
            self._contour = build_contour(self.contour_spec)
        return self._contour

    def feature_points(self):
        return select_feature_points(self.contour)

    def features_array(self) -> np.ndarray:
        if self._features is None:
            self._features = features_array(self.feature_points())
        return self._features

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "units": {"length": "mm", "angle": "rad"},
            "intrinsics": {
                "d_min": self.intrinsics.d_min,
                "d_max": self.intrinsics.d_max,
                "half_angle": self.intrinsics.half_angle,
            },
            "N": self.N,
            "space": {"x_range": list(self.space.x_range), "y_range": list(self.space.y_range)},
            "params": self.params.to_dict(),
            "contour": self.contour_spec,
            "metadata": self.metadata,
        }


def scenario_from_dict(doc: dict) -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be a JSON object")
    version = _require(doc, "schema_version", "")
    if version != SCHEMA_VERSION:
        raise ScenarioError(f"schema_version {version!r} is not supported (expected {SCHEMA_VERSION})")
    units = doc.get("units", {})
    if units.get("length", "mm") != "mm":
        raise ScenarioError(f"units.length: only 'mm' is supported, got {units.get('length')!r}")
    read_angle = _angle_reader(units.get("angle", "rad"))

    intr_doc = _require(doc, "intrinsics", "")
    try:
        intr = CameraIntrinsics(
            _number(_require(intr_doc, "d_min", "intrinsics"), "intrinsics.d_min"),
            _number(_require(intr_doc, "d_max", "intrinsics"), "intrinsics.d_max"),
            _angle(_require(intr_doc, "half_angle", "intrinsics"), read_angle, "intrinsics.half_angle"),
        )
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError(f"intrinsics: {exc}") from None

    N = _require(doc, "N", "")
    if isinstance(N, bool) or not isinstance(N, int) or N < 1:
        raise ScenarioError(f"N: expected a positive integer, got {N!r}")

    space_doc = _require(doc, "space", "")
    try:
        space = SearchSpace(
            tuple(_number(v, "space.x_range") for v in _require(space_doc, "x_range", "space")),
            tuple(_number(v, "space.y_range") for v in _require(space_doc, "y_range", "space")),
            N,
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(f"space: {exc}") from None

    overrides = dict(doc.get("params", {}))
    known = set(PackParams.__dataclass_fields__)
    unknown = sorted(set(overrides) - known)
    if unknown:
        raise ScenarioError(f"params: unknown field(s) {', '.join(unknown)}")
    for key in ANGLE_PARAMS:
        if key in overrides:
            overrides[key] = _angle(overrides[key], read_angle, f"params.{key}")
    if "lambda_c_range" in overrides:
        overrides["lambda_c_range"] = tuple(overrides["lambda_c_range"])
    try:
        params = PackParams(**overrides)
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"params: {exc}") from None

    contour_spec = _parse_contour(_require(doc, "contour", ""), read_angle)
    scen = Scenario(
        name=str(doc.get("name", "")),
        intrinsics=intr,
        N=N,
        space=space,
        params=params,
        contour_spec=contour_spec,
        metadata=dict(doc.get("metadata", {})),
    )
    try:
        scen.contour
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"contour: {exc}") from None
    return scen


def load_scenario(path) -> Scenario:
    """Read a scenario JSON file, or a bundled one by name ("large", "desk")."""
    text = _read_text(path)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    try:
        return scenario_from_dict(doc)
    except ScenarioError as exc:
        raise ScenarioError(f"{path}: {exc}") from None


def _read_text(path) -> str:
    name = str(path)
    if name in BUNDLED and not os.path.exists(name):
        return resources.files("camcover.data").joinpath(BUNDLED[name]).read_text()
    return Path(path).read_text()


def save_scenario(path, scenario: Scenario):
    Path(path).write_text(json.dumps(scenario.to_dict(), indent=2) + "\n")


def bundled_scenario(name: str = "large") -> Scenario:
    return load_scenario(name)
