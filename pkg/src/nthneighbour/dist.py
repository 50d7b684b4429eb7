"""Distribution of the n-th neighbour distance and two exact samplers.

With N-1 points uniform in the unit-volume ball around the reference point,
the volume ``V = c r^D`` enclosed by the n-th neighbour is Beta(n, N-n).
:func:`sample_distance` draws it by inverting the regularized incomplete
beta.  :func:`conditional_chain_sample` instead builds r_1, r_2, ..., r_n
one neighbour at a time: given the volume already enclosed by the first
k-1 neighbours, the normalized increment to the k-th has CDF
``1 - (1 - w)^(N-k)``, which inverts in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, ParameterError
from .params import ProblemParams
from .rng import open_uniform
from .specfun import GeometryConstants, geometry_constants, ln_beta, regularized_incomplete_beta

_RADIUS_SLACK = 1e-12


@dataclass(frozen=True)
class AbsoluteDistanceDistribution:
    params: ProblemParams

    @property
    def shape_a(self) -> float:
        return float(self.params.n)

    @property
    def shape_b(self) -> float:
        return float(self.params.N - self.params.n)

    @property
    def geometry(self) -> GeometryConstants:
        return geometry_constants(self.params.dim)

    def _volume(self, r):
        g = self.geometry
        r = np.asarray(r, dtype=np.float64)
        if np.any(r < 0.0) or np.any(r > g.unit_ball_radius * (1.0 + _RADIUS_SLACK)) or np.any(np.isnan(r)):
            raise DomainError(f"r must lie in [0, R] with R = {g.unit_ball_radius!r}")
        return np.minimum(g.volume(r), 1.0)


def density(d: AbsoluteDistanceDistribution, r):
    """Probability density of the n-th neighbour distance at ``r``.

    ``c D r^(D-1) V^(n-1) (1-V)^(N-n-1) / B(n, N-n)`` with ``V = c r^D``.
    """
    scalar = np.ndim(r) == 0
    v = d._volume(r)
    r = np.asarray(r, dtype=np.float64)
    dim = d.params.dim
    a, b = d.shape_a, d.shape_b
    g = d.geometry
    # dV/dr = c D r^(D-1); zero exponents are skipped so 0^0 stays 1
    log_p = np.full_like(v, math.log(g.ball_volume_coefficient * dim) - ln_beta(a, b))
    with np.errstate(divide="ignore"):
        if dim > 1:
            log_p += (dim - 1) * np.log(r)
        if a != 1.0:
            log_p += (a - 1.0) * np.log(v)
        if b != 1.0:
            log_p += (b - 1.0) * np.log1p(-v)
    out = np.exp(log_p)
    return float(out) if scalar else out


def cdf(d: AbsoluteDistanceDistribution, r):
    """``P(r_n <= r) = I_V(n, N-n)``."""
    v = d._volume(r)
    if np.ndim(v) == 0:
        return regularized_incomplete_beta(float(v), d.shape_a, d.shape_b)
    return _kernels.betainc_array(v, d.shape_a, d.shape_b)


def sample_volume(d: AbsoluteDistanceDistribution, rng: np.random.Generator, size=None):
    """Enclosed volumes drawn by inverse-CDF sampling of Beta(n, N-n)."""
    u = open_uniform(rng, size)
    v = _kernels.betainc_inv_array(np.atleast_1d(u), d.shape_a, d.shape_b)
    return float(v[0]) if size is None else v.reshape(np.shape(u))


def sample_distance(d: AbsoluteDistanceDistribution, rng: np.random.Generator, size=None):
    """Draw n-th neighbour distances; ``size=None`` returns a single float."""
    r = d.geometry.radius(sample_volume(d, rng, size))
    return float(r) if size is None else r


@dataclass(frozen=True)
class ConditionalStep:
    """Volume enclosed by the previous neighbour and how many points remain outside it."""

    prior_volume: float
    remaining_points: int

    def __post_init__(self):
        if not 0.0 <= self.prior_volume < 1.0:
            raise ParameterError(f"prior_volume must lie in [0, 1), got {self.prior_volume!r}")
        m = self.remaining_points
        if isinstance(m, bool) or int(m) != m or m < 1:
            raise ParameterError(f"remaining_points must be a positive integer, got {self.remaining_points!r}")


def _advance(prior, remaining: int, u):
    # inverse of 1 - (1 - w)^m, written to keep precision for small u
    w = -np.expm1(np.log1p(-u) / remaining)
    return prior + (1.0 - prior) * w


def conditional_increment_sample(step: ConditionalStep, rng: np.random.Generator, size=None):
    """Volume enclosed by the next neighbour, given ``step``."""
    u = open_uniform(rng, size)
    v = _advance(step.prior_volume, step.remaining_points, u)
    return float(v) if size is None else v


def conditional_chain_volumes(p: ProblemParams, rng: np.random.Generator, size=None) -> np.ndarray:
    """Cumulative enclosed volumes V_1 <= ... <= V_n, shape ``(n,)`` or ``(size, n)``."""
    count = 1 if size is None else int(size)
    out = np.empty((count, p.n))
    v = np.zeros(count)
    for k in range(1, p.n + 1):
        v = _advance(v, p.N - k, open_uniform(rng, count))
        out[:, k - 1] = v
    return out[0] if size is None else out


def conditional_chain_sample(p: ProblemParams, rng: np.random.Generator, size=None) -> np.ndarray:
    """Neighbour distances r_1 <= ... <= r_n built by successive conditioning."""
    return geometry_constants(p.dim).radius(conditional_chain_volumes(p, rng, size))
