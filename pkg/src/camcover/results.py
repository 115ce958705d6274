"""Deployment JSON, convergence/coverage CSV tables and text reports."""

from __future__ import annotations

import csv
import io
import json
import statistics
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .camera import CameraConfig, CameraIntrinsics
from .coverage import Deployment, brute_force_trajectory_coverage, coverage_count, format_rate

SCHEMA_VERSION = 1
CSV_SCHEMA_LINE = f"# camcover-csv v{SCHEMA_VERSION}\n"


def deployment_to_dict(dep: Deployment, **extra) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "units": {"length": "mm", "angle": "rad"},
        "intrinsics": {
            "d_min": dep.intrinsics.d_min,
            "d_max": dep.intrinsics.d_max,
            "half_angle": dep.intrinsics.half_angle,
        },
        "cameras": [{"x": c.vx, "y": c.vy, "theta": c.theta} for c in dep.cameras],
    }
    doc.update(extra)
    return doc


def deployment_from_dict(doc: dict) -> Deployment:
    from .scenario import ScenarioError

    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ScenarioError(f"deployment schema_version {doc.get('schema_version')!r} is not supported")
    try:
        intr = CameraIntrinsics(**{k: float(doc["intrinsics"][k]) for k in ("d_min", "d_max", "half_angle")})
        cams = tuple(CameraConfig(float(c["x"]), float(c["y"]), float(c["theta"])) for c in doc["cameras"])
    except KeyError as exc:
        raise ScenarioError(f"deployment: missing field {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"deployment: {exc}") from None
    return Deployment(cams, intr)


def load_deployment(path) -> Deployment:
    from .scenario import ScenarioError

    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return deployment_from_dict(doc)


def write_json(path, doc):
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    buf.write(CSV_SCHEMA_LINE)
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def read_csv(path):
    """Rows of a camcover CSV as dicts (the schema comment line is skipped)."""
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def convergence_csv(history) -> str:
    return _csv_text(["iteration", "best_fitness"], [(i, int(v)) for i, v in enumerate(history)])


@dataclass
class InstantCoverage:
    index: int
    covered: int
    total: int

    @property
    def rate(self) -> Fraction:
        return Fraction(self.covered, self.total)


def instant_coverage(dep: Deployment, contour) -> list[InstantCoverage]:
    return [InstantCoverage(m, coverage_count(dep, contour, m), contour.K) for m in range(1, contour.M + 1)]


def coverage_csv(rows: list[InstantCoverage]) -> str:
    return _csv_text(["instant", "covered", "total", "rate_percent"],
                     [(r.index, r.covered, r.total, format_rate(r.rate)[:-1]) for r in rows])


def coverage_report(dep: Deployment, contour) -> str:
    rows = instant_coverage(dep, contour)
    brute = brute_force_trajectory_coverage(dep, contour)
    cells = [f"t{r.index}" for r in rows]
    rates = [format_rate(r.rate) for r in rows]
    width = max(len(s) for s in cells + rates)
    lines = [
        "Contour       " + "  ".join(s.rjust(width) for s in cells),
        "Coverage Rate " + "  ".join(s.rjust(width) for s in rates),
        "",
        f"{'instant':>7}  {'covered':>7}  {'total':>5}  rate",
    ]
    for r in rows:
        lines.append(f"{'t' + str(r.index):>7}  {r.covered:>7}  {r.total:>5}  {format_rate(r.rate)}")
    n_full = int(brute.per_point.sum())
    lines.append("")
    lines.append(f"full-trajectory coverage (every sample, every instant): "
                 f"{n_full}/{contour.K} ({format_rate(brute.aggregate)})")
    return "\n".join(lines) + "\n"


def save_result(out_dir, result, scenario) -> dict:
    """Write deployment.json, convergence.csv, coverage.csv and summary.txt; return their paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = instant_coverage(result.deployment, scenario.contour)
    paths = {
        "deployment": out / "deployment.json",
        "convergence": out / "convergence.csv",
        "coverage": out / "coverage.csv",
        "summary": out / "summary.txt",
    }
    write_json(paths["deployment"], deployment_to_dict(
        result.deployment,
        scenario=scenario.name,
        algorithm=result.algorithm,
        seed=result.seed,
        fitness=result.fitness,
        max_fitness=result.max_fitness,
        iterations=result.iterations,
    ))
    paths["convergence"].write_text(convergence_csv(result.history))
    paths["coverage"].write_text(coverage_csv(rows))
    summary = [
        f"scenario: {scenario.name}",
        f"algorithm: {result.algorithm}  seed: {result.seed}",
        f"feature cost: {result.fitness}/{result.max_fitness}",
        f"iterations: {result.iterations}  fitness evaluations: {result.evaluations}",
        "",
        coverage_report(result.deployment, scenario.contour),
    ]
    paths["summary"].write_text("\n".join(summary))
    return paths


# -- paired comparison --------------------------------------------------------------------


def iterations_to_fraction(history, fraction: float = 0.9) -> int:
    """First iteration whose best fitness reaches ``fraction`` of the run's final value."""
    target = fraction * history[-1]
    for i, v in enumerate(history):
        if v >= target:
            return i
    return len(history) - 1


@dataclass
class Comparison:
    seeds: list
    iwpa: list
    wpa: list

    def finals(self, runs):
        return [r.fitness for r in runs]

    def to90(self, runs):
        return [iterations_to_fraction(r.history) for r in runs]

    @property
    def faster_pairs(self) -> int:
        return sum(a < b for a, b in zip(self.to90(self.iwpa), self.to90(self.wpa)))

    def table_csv(self) -> str:
        rows = []
        for seed, a, b in zip(self.seeds, self.iwpa, self.wpa):
            for r in (a, b):
                rows.append((seed, r.algorithm, r.fitness, r.max_fitness, r.iterations,
                             iterations_to_fraction(r.history), r.evaluations))
        return _csv_text(["seed", "algorithm", "final_cost", "max_cost", "iterations",
                          "iterations_to_90pct", "evaluations"], rows)

    def curves_csv(self) -> str:
        length = max(len(r.history) for r in self.iwpa + self.wpa)

        def padded(h):
            return list(h) + [h[-1]] * (length - len(h))

        rows = []
        for seed, a, b in zip(self.seeds, self.iwpa, self.wpa):
            for i, (x, y) in enumerate(zip(padded(a.history), padded(b.history))):
                rows.append((seed, i, x, y))
        return _csv_text(["seed", "iteration", "iwpa_best", "wpa_best"], rows)

    def summary(self) -> str:
        lines = [f"seeds: {self.seeds[0]}..{self.seeds[-1]} ({len(self.seeds)} pairs)"]
        for name, runs in (("iwpa", self.iwpa), ("wpa", self.wpa)):
            fin = self.finals(runs)
            t90 = self.to90(runs)
            lines.append(
                f"{name}: mean final cost {statistics.mean(fin):.2f}, median {statistics.median(fin)}, "
                f"mean iterations to 90% {statistics.mean(t90):.2f}, median {statistics.median(t90)}"
            )
        lines.append(f"pairs where iwpa reaches 90% of its final cost first: {self.faster_pairs}/{len(self.seeds)}")
        return "\n".join(lines) + "\n"


def compare(scenario, seeds, params=None) -> Comparison:
    from .optimizer import run_iwpa, run_wpa

    base = scenario.params if params is None else params
    iw, wp = [], []
    for seed in seeds:
        p = base.with_overrides(seed=seed)
        iw.append(run_iwpa(scenario, p))
        wp.append(run_wpa(scenario, p))
    return Comparison(list(seeds), iw, wp)
