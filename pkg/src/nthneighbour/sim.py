"""Monte Carlo engines for the mean n-th neighbour distance.

Three engines estimate the same quantity by different routes:

``spatial``
    Scatter N-1 uniform points in the unit-volume ball around the origin and
    measure neighbour distances geometrically.
``absolute``
    Draw the n-th neighbour distance from its Beta-derived distribution.
``chain``
    Build r_1 ... r_n by successive conditioning.

Trials are cut into fixed-size partitions that depend only on the problem
and trial count.  Partition ``i`` of engine ``e`` draws from substream
``(seed, e, i)``, and partial statistics are merged in partition order, so
results are identical for any worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .dist import AbsoluteDistanceDistribution, conditional_chain_sample, sample_distance
from .errors import ParameterError
from .params import ProblemParams
from .rng import make_stream, open_uniform
from .specfun import geometry_constants
from .stats import SampleStats, merge_all

ENGINES = ("spatial", "absolute", "chain")
SAMPLER_ENGINES = ("absolute", "chain")
_ENGINE_KEY = {name: i for i, name in enumerate(ENGINES)}

# coordinates held in memory per spatial partition
CLOUD_BUDGET = 1 << 21
SAMPLER_PARTITION = 1 << 16


@dataclass(frozen=True)
class PointCloud:
    """The N-1 non-reference points; the reference point is the origin."""

    dim: int
    radius: float
    points: np.ndarray

    @property
    def count(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class TrialResult:
    distances: np.ndarray
    enclosed_volumes: np.ndarray


@dataclass
class SpatialResult:
    """Per-index statistics; ``distance[i]`` belongs to the (i+1)-th neighbour."""

    params: ProblemParams
    trials: int
    seed: int
    distance: list[SampleStats]
    volume: list[SampleStats]


def _uniform_ball(rng: np.random.Generator, shape: tuple[int, ...], dim: int, radius: float) -> np.ndarray:
    # isotropic direction times radius R u^(1/D)
    g = rng.standard_normal(shape + (dim,))
    norm2 = _kernels.squared_norms(g)
    zero = norm2 == 0.0
    while zero.any():
        g[zero] = rng.standard_normal((int(zero.sum()), dim))
        norm2 = _kernels.squared_norms(g)
        zero = norm2 == 0.0
    r = radius * open_uniform(rng, shape) ** (1.0 / dim)
    return g * (r / np.sqrt(norm2))[..., None]


def generate_cloud(p: ProblemParams, rng: np.random.Generator) -> PointCloud:
    g = geometry_constants(p.dim)
    pts = _uniform_ball(rng, (p.N - 1,), p.dim, g.unit_ball_radius)
    return PointCloud(p.dim, g.unit_ball_radius, pts)


def knn_distances(cloud: PointCloud, k: int, *, brute_force: bool = False) -> TrialResult:
    """The k smallest distances from the origin to the cloud, ascending."""
    if isinstance(k, bool) or int(k) != k or not 1 <= k <= cloud.count:
        raise ParameterError(f"k must satisfy 1 <= k <= {cloud.count} (point count), got {k!r}")
    select = _kernels.knn_brute_force if brute_force else _kernels.knn_select
    d2, _ = select(cloud.points[None, :, :], int(k))
    dist = np.sqrt(d2[0])
    return TrialResult(dist, geometry_constants(cloud.dim).volume(dist))


def _check_trials(trials) -> int:
    if isinstance(trials, bool) or int(trials) != trials or trials < 2:
        raise ParameterError(f"trials must be an integer >= 2, got {trials!r}")
    return int(trials)


def _partitions(trials: int, size: int) -> list[int]:
    full, rest = divmod(trials, size)
    return [size] * full + ([rest] if rest else [])


def _run_partitions(task, sizes: list[int], workers: int | None):
    if workers is None:
        workers = os.cpu_count() or 1
    workers = max(1, min(int(workers), len(sizes)))
    jobs = list(enumerate(sizes))
    if workers == 1:
        return [task(i, n) for i, n in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: task(*job), jobs))


def _spatial_partition(p: ProblemParams, seed: int):
    g = geometry_constants(p.dim)

    def task(index: int, count: int):
        rng = make_stream(seed, _ENGINE_KEY["spatial"], index)
        pts = _uniform_ball(rng, (count, p.N - 1), p.dim, g.unit_ball_radius)
        d2, _ = _kernels.knn_select(pts, p.n)
        dist = np.sqrt(d2)
        vol = g.volume(dist)
        return (
            [SampleStats.from_values(dist[:, i]) for i in range(p.n)],
            [SampleStats.from_values(vol[:, i]) for i in range(p.n)],
        )

    return task


def run_spatial_trials(p: ProblemParams, trials: int, seed: int = 0, workers: int | None = None) -> SpatialResult:
    """Geometric simulation: neighbour distances and enclosed volumes for indices 1..n."""
    trials = _check_trials(trials)
    size = max(1, min(trials, CLOUD_BUDGET // ((p.N - 1) * p.dim)))
    parts = _run_partitions(_spatial_partition(p, seed), _partitions(trials, size), workers)
    distance = [merge_all(part[0][i] for part in parts) for i in range(p.n)]
    volume = [merge_all(part[1][i] for part in parts) for i in range(p.n)]
    return SpatialResult(p, trials, seed, distance, volume)


def run_sampler_trials(
    p: ProblemParams, trials: int, engine: str, seed: int = 0, workers: int | None = None
) -> SampleStats:
    """Statistics of r_n from the ``absolute`` or ``chain`` sampler."""
    if engine not in SAMPLER_ENGINES:
        raise ParameterError(f"unknown sampler engine {engine!r}; expected one of {', '.join(SAMPLER_ENGINES)}")
    trials = _check_trials(trials)
    d = AbsoluteDistanceDistribution(p)
    key = _ENGINE_KEY[engine]

    def task(index: int, count: int) -> SampleStats:
        rng = make_stream(seed, key, index)
        if engine == "absolute":
            r = sample_distance(d, rng, count)
        else:
            r = conditional_chain_sample(p, rng, count)[:, -1]
        return SampleStats.from_values(r)

    return merge_all(_run_partitions(task, _partitions(trials, SAMPLER_PARTITION), workers))


def run_engine(p: ProblemParams, trials: int, engine: str, seed: int = 0, workers: int | None = None) -> SampleStats:
    """Statistics of r_n from any of :data:`ENGINES`."""
    if engine == "spatial":
        return run_spatial_trials(p, trials, seed, workers).distance[-1]
    if engine not in ENGINES:
        raise ParameterError(f"unknown engine {engine!r}; expected one of {', '.join(ENGINES)}")
    return run_sampler_trials(p, trials, engine, seed, workers)
