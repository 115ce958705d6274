"""Wolf pack search over camera deployments.

A wolf's genome is the flat vector ``(x_1, y_1, theta_1, ..., x_N, y_N, theta_N)``.
The pack is kept as two arrays (genomes and fitness); the head wolf always
sits at row 0, the next ``n_detective`` rows are detective wolves and the
rest are fierce wolves. Rows are re-sorted by descending fitness (stable, so
ties keep the lower index first) at initialisation and after every renewal.

Two search variants share one loop. The improved variant sweeps the
wandering direction deterministically and shrinks the wandering gain over
the sweep; the baseline uses unit gain and random directions.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from typing import Callable

import numpy as np

from .contour import TWO_PI

IWPA = "iwpa"
WPA = "wpa"


def wrap_angles(a):
    out = np.mod(a, TWO_PI)
    return np.where(out >= TWO_PI, 0.0, out)


def shortest_arc(frm, to):
    """Signed angular difference ``to - frm`` folded into ``[-pi, pi)``."""
    return np.mod(np.asarray(to) - np.asarray(frm) + math.pi, TWO_PI) - math.pi


@dataclass(frozen=True)
class SearchSpace:
    """Box for camera positions; orientations range over the full circle."""

    x_range: tuple[float, float]
    y_range: tuple[float, float]
    N: int

    def __post_init__(self):
        object.__setattr__(self, "x_range", tuple(float(v) for v in self.x_range))
        object.__setattr__(self, "y_range", tuple(float(v) for v in self.y_range))
        if self.N < 1:
            raise ValueError(f"need at least one camera, got N={self.N}")
        for name, (lo, hi) in (("x_range", self.x_range), ("y_range", self.y_range)):
            if not lo <= hi:
                raise ValueError(f"{name} is empty: {lo} > {hi}")

    @property
    def L(self) -> int:
        return 3 * self.N

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        u = rng.random((n, self.N, 3))
        out = np.empty_like(u)
        out[..., 0] = self.x_range[0] + u[..., 0] * (self.x_range[1] - self.x_range[0])
        out[..., 1] = self.y_range[0] + u[..., 1] * (self.y_range[1] - self.y_range[0])
        out[..., 2] = wrap_angles(u[..., 2] * TWO_PI)
        return out.reshape(n, self.L)

    def clip(self, genomes: np.ndarray) -> np.ndarray:
        """Clamp positions to the box and wrap orientations (works on one genome or a batch)."""
        g = np.array(genomes, dtype=float, copy=True)
        v = g.reshape(-1, 3)
        np.clip(v[:, 0], self.x_range[0], self.x_range[1], out=v[:, 0])
        np.clip(v[:, 1], self.y_range[0], self.y_range[1], out=v[:, 1])
        v[:, 2] = wrap_angles(v[:, 2])
        return g

    def contains(self, genome) -> bool:
        v = np.asarray(genome, dtype=float).reshape(-1, 3)
        return bool(
            np.all((v[:, 0] >= self.x_range[0]) & (v[:, 0] <= self.x_range[1]))
            and np.all((v[:, 1] >= self.y_range[0]) & (v[:, 1] <= self.y_range[1]))
            and np.all((v[:, 2] >= 0.0) & (v[:, 2] < TWO_PI))
        )


@dataclass(frozen=True)
class PackParams:
    """Search parameters. Lengths in mm, angles in radians.

    Defaults reproduce the published simulation settings; ``T`` has no
    published value and defaults to 100.
    """

    Q: int = 25
    upsilon_d: float = 0.4
    upsilon_e: float = 0.3
    time_a: int = 6
    G_a: int = 5
    step_ap: float = 3.0
    step_ao: float = math.radians(3.0)
    theta_w: float = math.radians(2.0)
    eta_w: float = 1.0
    time_b: int = 8
    step_bp: float = 2.0
    step_bo: float = math.radians(2.0)
    D_be: float = 3.0
    time_c: int = 5
    step_cp: float = 0.5
    step_co: float = math.radians(1.0)
    lambda_c_range: tuple[float, float] = (-1.0, 1.0)
    T: int = 100
    seed: int = 0
    early_stop: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lambda_c_range", tuple(float(v) for v in self.lambda_c_range))
        self.validate()

    def validate(self):
        for name in ("Q", "time_a", "G_a", "time_b", "time_c"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.T < 0:
            raise ValueError(f"T must be >= 0, got {self.T}")
        for name in ("upsilon_d", "upsilon_e"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise ValueError(f"{name} must lie in (0, 1), got {v}")
            if v * self.Q < 1 - 1e-9:
                raise ValueError(f"{name} * Q must be >= 1, got {v * self.Q}")
        for name in ("step_ap", "step_ao", "step_bp", "step_bo", "step_cp", "step_co"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.D_be < 0:
            raise ValueError(f"D_be must be >= 0, got {self.D_be}")
        lo, hi = self.lambda_c_range
        if not lo <= hi:
            raise ValueError(f"lambda_c_range is empty: {self.lambda_c_range}")
        if 1 + self.n_detective > self.Q:
            raise ValueError(f"Q={self.Q} leaves no room for a head and {self.n_detective} detectives")
        if self.n_eliminate >= self.Q:
            raise ValueError(f"cannot eliminate {self.n_eliminate} of {self.Q} wolves")

    @property
    def n_detective(self) -> int:
        return math.ceil(self.upsilon_d * self.Q - 1e-9)

    @property
    def n_eliminate(self) -> int:
        return math.floor(self.upsilon_e * self.Q + 1e-9)

    def with_overrides(self, **kw) -> "PackParams":
        return replace(self, **kw)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda_c_range"] = list(self.lambda_c_range)
        return d


@dataclass
class Wolf:
    genome: np.ndarray
    fitness: float


FitnessFn = Callable[[np.ndarray], float]


def evaluate(fitness_fn, genomes) -> np.ndarray:
    """Fitness of each genome row, using ``fitness_fn.batch`` when available."""
    genomes = np.atleast_2d(genomes)
    batch = getattr(fitness_fn, "batch", None)
    if batch is not None:
        return np.asarray(batch(genomes), dtype=float)
    return np.array([fitness_fn(g) for g in genomes], dtype=float)


@dataclass
class PackState:
    genomes: np.ndarray
    fitness: np.ndarray
    n_detective: int
    rng: np.random.Generator
    iteration: int = 0
    history: list = field(default_factory=list)

    head = 0

    @property
    def Q(self) -> int:
        return self.genomes.shape[0]

    @property
    def detectives(self) -> range:
        return range(1, 1 + self.n_detective)

    @property
    def fierce(self) -> range:
        return range(1 + self.n_detective, self.Q)

    @property
    def wolves(self) -> list[Wolf]:
        return [Wolf(self.genomes[q].copy(), float(self.fitness[q])) for q in range(self.Q)]

    @property
    def best(self) -> Wolf:
        return Wolf(self.genomes[0].copy(), float(self.fitness[0]))

    def role(self, q: int) -> str:
        if q == 0:
            return "head"
        return "detective" if q <= self.n_detective else "fierce"

    def sort(self):
        order = np.argsort(-self.fitness, kind="stable")
        self.genomes = self.genomes[order]
        self.fitness = self.fitness[order]

    def set(self, q: int, genome, fit: float):
        """Store a wolf's new genome; it takes the head's place when strictly fitter."""
        self.genomes[q] = genome
        self.fitness[q] = fit
        if q != 0 and fit > self.fitness[0]:
            self.genomes[[0, q]] = self.genomes[[q, 0]]
            self.fitness[[0, q]] = self.fitness[[q, 0]]
            return 0
        return q


def init_pack(space: SearchSpace, params: PackParams, fitness_fn, rng=None) -> PackState:
    """Uniform random pack, sorted by descending fitness."""
    params.validate()
    if rng is None:
        rng = np.random.default_rng(params.seed)
    genomes = space.sample(rng, params.Q)
    state = PackState(genomes, evaluate(fitness_fn, genomes), params.n_detective, rng)
    state.sort()
    state.history.append(float(state.fitness[0]))
    return state


# -- update equations -------------------------------------------------------------


def wander_gain(g: int, params: PackParams) -> float:
    return 1.0 - g / params.G_a + params.eta_w


def wander_step(x: float, g: int, s: int, step_a: float, params: PackParams,
                bounds=None, periodic: bool = False) -> float:
    """One wandering move of a single genome component."""
    x = x + wander_gain(g, params) * step_a * math.sin(TWO_PI * s / params.time_a + params.theta_w)
    if periodic:
        return float(wrap_angles(x))
    if bounds is not None:
        x = min(max(x, bounds[0]), bounds[1])
    return x


def wander_candidates(genome, params: PackParams, space: SearchSpace, structured: bool = True, rng=None):
    """All wandering trial genomes for one wolf, ``N * G_a * time_a`` rows.

    Each trial perturbs one camera block: the position moves along the
    direction ``phi`` and the orientation by ``sin(phi)``, both scaled by the
    gain. ``structured=False`` gives the baseline variant (gain 1, random
    ``phi`` per trial).
    """
    N = space.N
    g_idx, s_idx = np.meshgrid(np.arange(params.G_a), np.arange(1, params.time_a + 1), indexing="ij")
    g_idx, s_idx = g_idx.ravel(), s_idx.ravel()
    n_trials = g_idx.size
    if structured:
        gain = 1.0 - g_idx / params.G_a + params.eta_w
        phi = TWO_PI * s_idx / params.time_a + params.theta_w
    else:
        gain = np.ones(n_trials)
        phi = rng.uniform(0.0, TWO_PI, size=N * n_trials).reshape(N, n_trials)
    phi = np.broadcast_to(phi, (N, n_trials))
    cand = np.repeat(np.asarray(genome, dtype=float)[None, :], N * n_trials, axis=0).reshape(N, n_trials, N, 3)
    for i in range(N):
        cand[i, :, i, 0] += gain * params.step_ap * np.cos(phi[i])
        cand[i, :, i, 1] += gain * params.step_ap * np.sin(phi[i])
        cand[i, :, i, 2] += gain * params.step_ao * np.sin(phi[i])
    return space.clip(cand.reshape(N * n_trials, 3 * N))


def pack_distance(a, b) -> float:
    """Largest per-camera positional distance between two genomes (orientations ignored)."""
    a = np.asarray(a, dtype=float).reshape(-1, 3)
    b = np.asarray(b, dtype=float).reshape(-1, 3)
    return float(np.max(np.hypot(a[:, 0] - b[:, 0], a[:, 1] - b[:, 1])))


def rush_step(genome, head, params: PackParams) -> np.ndarray:
    """Move every camera block one rushing step toward the head's block."""
    x = np.array(genome, dtype=float).reshape(-1, 3)
    h = np.asarray(head, dtype=float).reshape(-1, 3)
    for i in range(x.shape[0]):
        dx, dy = h[i, 0] - x[i, 0], h[i, 1] - x[i, 1]
        dist = math.hypot(dx, dy)
        if dist <= params.step_bp:
            x[i, 0], x[i, 1] = h[i, 0], h[i, 1]
        else:
            x[i, 0] += params.step_bp * dx / dist
            x[i, 1] += params.step_bp * dy / dist
        dth = float(shortest_arc(x[i, 2], h[i, 2]))
        if abs(dth) <= params.step_bo:
            x[i, 2] = h[i, 2]
        else:
            x[i, 2] = float(wrap_angles(x[i, 2] + math.copysign(params.step_bo, dth)))
    return x.ravel()


def besiege_step(genome, prey, lam, params: PackParams) -> np.ndarray:
    """``x + lam * step_c * |prey - x|`` per component; angular gaps use the shorter arc."""
    x = np.array(genome, dtype=float).reshape(-1, 3)
    p = np.asarray(prey, dtype=float).reshape(-1, 3)
    lam = np.broadcast_to(np.asarray(lam, dtype=float), (x.size,)).reshape(-1, 3)
    x[:, :2] += lam[:, :2] * params.step_cp * np.abs(p[:, :2] - x[:, :2])
    x[:, 2] = wrap_angles(x[:, 2] + lam[:, 2] * params.step_co * np.abs(shortest_arc(x[:, 2], p[:, 2])))
    return x.ravel()


# -- pack operations ----------------------------------------------------------------


def wander(state: PackState, q: int, space: SearchSpace, params: PackParams, fitness_fn,
           structured: bool = True) -> Wolf:
    """Wandering sweep for wolf ``q``; keeps the best strictly improving trial."""
    cand = wander_candidates(state.genomes[q], params, space, structured, state.rng)
    fits = evaluate(fitness_fn, cand)
    best = int(np.argmax(fits))
    if fits[best] > state.fitness[q]:
        q = state.set(q, cand[best], fits[best])
    return Wolf(state.genomes[q].copy(), float(state.fitness[q]))


def rush(state: PackState, q: int, space: SearchSpace, params: PackParams, fitness_fn) -> Wolf:
    """Up to ``time_b`` rushing steps toward the head while farther than ``D_be``."""
    for _ in range(params.time_b):
        if pack_distance(state.genomes[q], state.genomes[0]) <= params.D_be:
            break
        g = space.clip(rush_step(state.genomes[q], state.genomes[0], params))
        q = state.set(q, g, float(evaluate(fitness_fn, g)[0]))
        if q == 0:
            break
    return Wolf(state.genomes[q].copy(), float(state.fitness[q]))


def besiege(state: PackState, q: int, prey, space: SearchSpace, params: PackParams, fitness_fn) -> Wolf:
    """``time_c`` chained besieging moves; the wolf keeps the fittest genome visited."""
    lo, hi = params.lambda_c_range
    x = state.genomes[q]
    path = np.empty((params.time_c, x.size))
    for c in range(params.time_c):
        lam = state.rng.uniform(lo, hi, size=x.size)
        x = space.clip(besiege_step(x, prey, lam, params))
        path[c] = x
    fits = evaluate(fitness_fn, path)
    best = int(np.argmax(fits))
    if fits[best] > state.fitness[q]:
        q = state.set(q, path[best], fits[best])
    return Wolf(state.genomes[q].copy(), float(state.fitness[q]))


def renew_pack(state: PackState, space: SearchSpace, params: PackParams, fitness_fn) -> PackState:
    """Replace the weakest wolves with fresh random ones and re-sort the pack."""
    state.sort()
    n_out = params.n_eliminate
    keep = state.Q - n_out
    fresh = space.sample(state.rng, n_out)
    state.genomes = np.concatenate([state.genomes[:keep], fresh])
    state.fitness = np.concatenate([state.fitness[:keep], evaluate(fitness_fn, fresh)])
    state.sort()
    return state


def iterate(state: PackState, space: SearchSpace, params: PackParams, fitness_fn, algorithm: str = IWPA):
    structured = algorithm == IWPA
    for q in state.detectives:
        wander(state, q, space, params, fitness_fn, structured)
    for q in state.fierce:
        rush(state, q, space, params, fitness_fn)
    prey = state.genomes[0].copy()
    for q in range(1, state.Q):
        besiege(state, q, prey, space, params, fitness_fn)
    renew_pack(state, space, params, fitness_fn)
    state.iteration += 1
    state.history.append(float(state.fitness[0]))
    return state


def search(space: SearchSpace, params: PackParams, fitness_fn, algorithm: str = IWPA,
           max_value: float | None = None, callback=None) -> PackState:
    """Run the pack for ``params.T`` iterations; stop early once ``max_value`` is reached."""
    if algorithm not in (IWPA, WPA):
        raise ValueError(f"unknown algorithm {algorithm!r}; expected {IWPA!r} or {WPA!r}")
    if max_value is None:
        max_value = getattr(fitness_fn, "max_value", None)
    state = init_pack(space, params, fitness_fn)
    for _ in range(params.T):
        if params.early_stop and max_value is not None and state.fitness[0] >= max_value:
            break
        iterate(state, space, params, fitness_fn, algorithm)
        if callback is not None:
            callback(state)
    return state


# -- scenario-level drivers -----------------------------------------------------------


@dataclass
class SearchResult:
    deployment: object
    fitness: int
    max_fitness: int
    history: list
    algorithm: str
    seed: int
    evaluations: int

    @property
    def iterations(self) -> int:
        return len(self.history) - 1


def run(scenario, params: PackParams | None = None, algorithm: str = IWPA) -> SearchResult:
    """Optimise the deployment of ``scenario`` (anything exposing ``features``,
    ``intrinsics``, ``space`` and ``params``)."""
    from .coverage import Deployment, FeatureFitness

    params = scenario.params if params is None else params
    fitness = FeatureFitness(scenario.features_array(), scenario.intrinsics)
    state = search(scenario.space, params, fitness, algorithm)
    best = state.best
    return SearchResult(
        deployment=Deployment.from_genome(best.genome, scenario.intrinsics),
        fitness=int(best.fitness),
        max_fitness=fitness.max_value,
        history=[int(h) for h in state.history],
        algorithm=algorithm,
        seed=params.seed,
        evaluations=fitness.evaluations,
    )


def run_iwpa(scenario, params: PackParams | None = None) -> SearchResult:
    return run(scenario, params, IWPA)


def run_wpa(scenario, params: PackParams | None = None) -> SearchResult:
    return run(scenario, params, WPA)
