"""Closed-form estimates of the mean n-th neighbour distance.

All distances are in units where the N points occupy unit volume.  Gamma
ratios are taken in log space through :func:`~nthneighbour.specfun.ln_gamma_shift`
so ``N`` can run to 1e7 and beyond without overflow or loss of digits.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .errors import DomainError
from .params import ProblemParams
from .specfun import geometry_constants, harmonic_number, ln_gamma, ln_gamma_shift


def _prefactor(dim: int) -> float:
    # Γ(D/2+1)^(1/D) / sqrt(pi), the radius of the unit-volume ball
    return geometry_constants(dim).unit_ball_radius


def _gamma_ratios(p: ProblemParams) -> float:
    """Γ(n+1/D)/Γ(n) · Γ(N)/Γ(N+1/D)."""
    s = 1.0 / p.dim
    return math.exp(ln_gamma_shift(p.n, s) - ln_gamma_shift(p.N, s))


def exact_mean_distance(p: ProblemParams) -> float:
    """Exact mean distance from the reference point to its n-th neighbour.

    ``R · Γ(n+1/D)/Γ(n) · Γ(N)/Γ(N+1/D)`` with ``R`` the radius of the
    unit-volume D-ball.  For ``D = 1`` this collapses to ``n / (2N)``.
    """
    return _prefactor(p.dim) * _gamma_ratios(p)


def heuristic_mean_distance(p: ProblemParams) -> float:
    """Crude estimate ``(n/N)^(1/D)``.

    Its derivation assumes ``N >> n``; it is evaluated for every valid
    ``(n, N)`` anyway so that estimators can be tabulated side by side.
    """
    return (p.n / p.N) ** (1.0 / p.dim)


def asymptotic_mean_distance_large_N(p: ProblemParams) -> float:
    """Large-N form ``R · Γ(n+1/D)/Γ(n) · N^(-1/D)``."""
    s = 1.0 / p.dim
    return _prefactor(p.dim) * math.exp(ln_gamma_shift(p.n, s)) * p.N ** (-s)


def _ball_radius_for_fraction(p: ProblemParams) -> float:
    return _prefactor(p.dim) * (p.n / p.N) ** (1.0 / p.dim)


def asymptotic_mean_distance_full(p: ProblemParams) -> float:
    """Large-n, large-N form ``R · (n/N)^(1/D)``."""
    return _ball_radius_for_fraction(p)


def mean_enclosed_volume(p: ProblemParams) -> float:
    """Mean volume of the ball reaching the n-th neighbour; exactly ``n/N`` for any D."""
    return p.n / p.N


def mean_volume_distance_estimate(p: ProblemParams) -> float:
    """Radius of the ball whose volume is the mean enclosed volume, ``<r_n^D>^(1/D)``.

    Same number as :func:`asymptotic_mean_distance_full`, computed by the
    same expression.
    """
    return _ball_radius_for_fraction(p)


def estimate_error_exact(p: ProblemParams) -> float:
    """Signed length ``<r_n^D>^(1/D) - <r_n>``; zero for D = 1, positive for D >= 2."""
    return mean_volume_distance_estimate(p) - exact_mean_distance(p)


def rescaled_error_exact(p: ProblemParams) -> float:
    """:func:`estimate_error_exact` divided by the unit-ball radius.

    Evaluated directly as ``(n/N)^(1/D) - Γ(n+1/D)Γ(N)/(Γ(n)Γ(N+1/D))`` so it
    can be compared against the large-D approximations.
    """
    return (p.n / p.N) ** (1.0 / p.dim) - _gamma_ratios(p)


def gamma_ratio_large_D_approx(m: int, dim: int) -> float:
    """Large-D approximation ``Γ(1+1/D) (1 + H_{m-1}/D)`` of ``Γ(m+1/D)/Γ(m)``."""
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    d = geometry_constants(dim).dim
    return math.exp(ln_gamma(1.0 + 1.0 / d)) * (1.0 + harmonic_number(int(m) - 1) / d)


def estimate_error_large_D_approx(p: ProblemParams) -> tuple[float, float]:
    """Large-D approximations to :func:`rescaled_error_exact`.

    Returns ``(harmonic_form, log_form)``::

        harmonic_form = (n/N)^(1/D) - [1 + (H_{n-1} - H_{N-1}) / D]
        log_form      = (n/N)^(1/D) - [1 + ln(n/N) / D]

    Both assume D large; the log form additionally needs n and N large.
    """
    d = p.dim
    head = (p.n / p.N) ** (1.0 / d)
    harmonic_form = head - (1.0 + (harmonic_number(p.n - 1) - harmonic_number(p.N - 1)) / d)
    log_form = head - (1.0 + math.log(p.n / p.N) / d)
    return harmonic_form, log_form


@dataclass(frozen=True)
class EstimateBundle:
    params: ProblemParams
    exact: float
    heuristic: float
    asymptotic_large_N: float
    asymptotic_full: float
    mean_volume_estimate: float
    mean_enclosed_volume: float

    @property
    def error(self) -> float:
        return self.mean_volume_estimate - self.exact

    def relative_deviations(self) -> dict[str, float]:
        """``estimate / exact - 1`` for each approximation."""
        return {
            name: getattr(self, name) / self.exact - 1.0
            for name in ("heuristic", "asymptotic_large_N", "asymptotic_full", "mean_volume_estimate")
        }

    def as_dict(self) -> dict:
        out = asdict(self)
        del out["params"]
        out["error"] = self.error
        return out


def bundle(p: ProblemParams) -> EstimateBundle:
    return EstimateBundle(
        params=p,
        exact=exact_mean_distance(p),
        heuristic=heuristic_mean_distance(p),
        asymptotic_large_N=asymptotic_mean_distance_large_N(p),
        asymptotic_full=asymptotic_mean_distance_full(p),
        mean_volume_estimate=mean_volume_distance_estimate(p),
        mean_enclosed_volume=mean_enclosed_volume(p),
    )
