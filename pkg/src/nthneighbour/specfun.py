"""Special functions: log-gamma, beta, incomplete beta, harmonic numbers.

Everything is evaluated in float64.  The scalar helpers prefixed with an
underscore carry no argument checks and are shared with the compiled
kernels in :mod:`nthneighbour._kernels`; the public functions validate
their inputs and raise :class:`~nthneighbour.errors.DomainError`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._backend import jitable
from .errors import DomainError

EULER_GAMMA = 0.57721566490153286061
HALF_LOG_2PI = 0.91893853320467274178

# Below this the series is not accurate to ~1e-16; shift up with Γ(z+1) = zΓ(z).
_STIRLING_MIN = 15.0

HARMONIC_EXACT_MAX = 1_000_000

_CF_EPS = 1e-16
_CF_TINY = 1e-300
_CF_MAXITER = 10_000


@jitable
def _stirling_tail(z):
    # sum of B_2k / (2k (2k-1) z^(2k-1)), k = 1..8, Horner in 1/z^2
    zinv = 1.0 / z
    z2 = zinv * zinv
    s = -3617.0 / 122400.0
    s = s * z2 + 1.0 / 156.0
    s = s * z2 - 691.0 / 360360.0
    s = s * z2 + 1.0 / 1188.0
    s = s * z2 - 1.0 / 1680.0
    s = s * z2 + 1.0 / 1260.0
    s = s * z2 - 1.0 / 360.0
    s = s * z2 + 1.0 / 12.0
    return s * zinv


@jitable
def _shift_up(z):
    """Return (z', prod) with z' = z + k >= _STIRLING_MIN and prod = z(z+1)...(z+k-1)."""
    prod = 1.0
    while z < _STIRLING_MIN:
        prod *= z
        z += 1.0
    return z, prod


@jitable
def _ln_gamma(z):
    zs, prod = _shift_up(z)
    return (zs - 0.5) * math.log(zs) - zs + HALF_LOG_2PI + _stirling_tail(zs) - math.log(prod)


@jitable
def _ln_gamma_ratio(a, b):
    a_s, pa = _shift_up(a)
    b_s, pb = _shift_up(b)
    d = a_s - b_s
    # (a-1/2)ln a - (b-1/2)ln b rewritten so equal large arguments do not cancel
    main = d * math.log(b_s) + (a_s - 0.5) * math.log1p(d / b_s) - d
    return main + (_stirling_tail(a_s) - _stirling_tail(b_s)) - math.log(pa / pb)


@jitable
def _ln_gamma_shift(x, s):
    # lnΓ(x+s) - lnΓ(x) with the offset kept apart from x, so x + s is never rounded
    k = 0.0
    pa = 1.0
    pb = 1.0
    while x + k < _STIRLING_MIN:
        pa *= x + k + s
        pb *= x + k
        k += 1.0
    b = x + k
    main = s * math.log(b) + (b + s - 0.5) * math.log1p(s / b) - s
    return main + (_stirling_tail(b + s) - _stirling_tail(b)) - math.log(pa / pb)


@jitable
def _ln_beta(x, y):
    return _ln_gamma(x) + _ln_gamma(y) - _ln_gamma(x + y)


@jitable
def _beta_cf(x, a, b):
    # modified Lentz evaluation of the incomplete-beta continued fraction
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAXITER + 1):
        m2 = 2.0 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            break
    return h


@jitable
def _betainc(x, a, b):
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    log_front = a * math.log(x) + b * math.log1p(-x) - _ln_beta(a, b)
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_front) * _beta_cf(x, a, b) / a
    return 1.0 - math.exp(log_front) * _beta_cf(1.0 - x, b, a) / b


@jitable
def _beta_log_density(x, a, b, ln_b):
    return (a - 1.0) * math.log(x) + (b - 1.0) * math.log1p(-x) - ln_b


@jitable
def _betainc_inv(p, a, b):
    if p <= 0.0:
        return 0.0
    if p >= 1.0:
        return 1.0
    ln_b = _ln_beta(a, b)
    lo = 0.0
    hi = 1.0
    x = a / (a + b)
    for _ in range(200):
        f = _betainc(x, a, b) - p
        if f == 0.0:
            return x
        if f < 0.0:
            lo = x
        else:
            hi = x
        if hi - lo <= 4e-16 * hi:
            break
        step = f / math.exp(_beta_log_density(x, a, b, ln_b))
        x_new = x - step
        if not (lo < x_new < hi):
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= 1e-16 * x and abs(f) <= 1e-13:
            return x_new
        x = x_new
    return x


def _check_positive(name: str, value: float) -> float:
    value = float(value)
    if not value > 0.0 or not math.isfinite(value):
        raise DomainError(f"{name} must be a finite positive number, got {value!r}")
    return value


def ln_gamma(z: float) -> float:
    """Natural log of the gamma function for ``z > 0``.

    Uses the Stirling series with eight Bernoulli terms after shifting the
    argument to at least 15 through the recurrence, which keeps the relative
    error of ``exp(ln_gamma(z))`` near 1e-14.
    """
    return _ln_gamma(_check_positive("z", z))


def ln_gamma_ratio(a: float, b: float) -> float:
    """``ln Γ(a) - ln Γ(b)`` without cancellation when ``a`` and ``b`` are close and large."""
    return _ln_gamma_ratio(_check_positive("a", a), _check_positive("b", b))


def ln_gamma_shift(x: float, s: float) -> float:
    """``ln Γ(x + s) - ln Γ(x)`` for ``x > 0``, ``x + s > 0``.

    Unlike ``ln_gamma_ratio(x + s, x)`` the offset is never added to ``x`` in
    floating point, which matters once ``x`` is large: at ``x = 1e6`` the sum
    ``x + 1/3`` alone is off by about 1e-10.
    """
    x = _check_positive("x", x)
    s = float(s)
    if not math.isfinite(s) or not x + s > 0.0:
        raise DomainError(f"x + s must be positive, got x={x!r}, s={s!r}")
    if s == 0.0:
        return 0.0
    if abs(s) > 1.0:
        return _ln_gamma_ratio(x + s, x)
    return _ln_gamma_shift(x, s)


def ln_beta(x: float, y: float) -> float:
    return _ln_beta(_check_positive("x", x), _check_positive("y", y))


def beta(x: float, y: float) -> float:
    """Euler beta function ``B(x, y) = Γ(x)Γ(y)/Γ(x+y)``."""
    return math.exp(ln_beta(x, y))


def regularized_incomplete_beta(x: float, a: float, b: float) -> float:
    """Regularized incomplete beta ``I_x(a, b)`` for ``0 <= x <= 1``.

    The continued fraction is evaluated on whichever of ``I_x(a, b)`` and
    ``1 - I_{1-x}(b, a)`` converges faster.
    """
    a = _check_positive("a", a)
    b = _check_positive("b", b)
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x!r}")
    return _betainc(x, a, b)


def inverse_regularized_incomplete_beta(p: float, a: float, b: float) -> float:
    """Solve ``I_x(a, b) = p`` for ``x`` (Newton steps, bisection safeguard)."""
    a = _check_positive("a", a)
    b = _check_positive("b", b)
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p!r}")
    return _betainc_inv(p, a, b)


@lru_cache(maxsize=256)
def _harmonic_exact(n: int) -> float:
    # smallest terms first
    return float(np.sum(1.0 / np.arange(n, 0, -1, dtype=np.float64)))


def harmonic_number(n: int) -> float:
    """``H_n = 1 + 1/2 + ... + 1/n``; ``H_0 = 0``.

    Summed directly up to ``n = 10**6``; beyond that the expansion
    ``ln n + γ + 1/(2n) - 1/(12 n^2)`` is accurate to well below 1e-20.
    """
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise DomainError(f"n must be a nonnegative integer, got {n!r}")
    n = int(n)
    if n == 0:
        return 0.0
    if n <= HARMONIC_EXACT_MAX:
        return _harmonic_exact(n)
    return math.log(n) + EULER_GAMMA + 0.5 / n - 1.0 / (12.0 * n * n)


def check_dimension(dim: int) -> int:
    if isinstance(dim, bool) or int(dim) != dim or dim < 1:
        raise DomainError(f"dimension must be an integer >= 1, got {dim!r}")
    return int(dim)


@dataclass(frozen=True)
class GeometryConstants:
    """Radius of the unit-volume D-ball and the ball-volume coefficient."""

    dim: int
    unit_ball_radius: float
    ball_volume_coefficient: float

    def volume(self, r):
        """Volume of the D-ball of radius ``r`` (scalar or array)."""
        return self.ball_volume_coefficient * np.power(r, self.dim)

    def radius(self, v):
        """Inverse of :meth:`volume` on [0, 1], clipped so rounding never exceeds the unit-ball radius."""
        r = np.power(np.divide(v, self.ball_volume_coefficient), 1.0 / self.dim)
        return np.minimum(r, self.unit_ball_radius)


# π^(D/2) and Γ(D/2+1) both stay finite in float64 up to here
_DIRECT_DIM_MAX = 300


def _ball_volume_coefficient(d: int) -> float:
    if d > _DIRECT_DIM_MAX:
        return math.exp(0.5 * d * math.log(math.pi) - _ln_gamma(0.5 * d + 1.0))
    if d % 2 == 0:
        # π^k / k!
        k = d // 2
        return math.pi**k / math.factorial(k)
    # odd D: Γ(D/2+1) = sqrt(pi) (1/2)(3/2)...(D/2), and the sqrt(pi) cancels
    k = (d - 1) // 2
    denom = 1.0
    for j in range(k + 1):
        denom *= j + 0.5
    return math.pi**k / denom


@lru_cache(maxsize=None)
def geometry_constants(dim: int) -> GeometryConstants:
    """Constants of the D-ball with unit volume.

    ``ball_volume_coefficient = pi^(D/2) / Γ(D/2+1)`` and
    ``unit_ball_radius = Γ(D/2+1)^(1/D) / sqrt(pi)``, the radius at which the
    ball volume is 1.  Even and odd D up to 300 use exact factorial and
    half-integer products rather than log-gamma.
    """
    d = check_dimension(dim)
    coefficient = _ball_volume_coefficient(d)
    if d > _DIRECT_DIM_MAX:
        # the coefficient underflows long before the radius stops being representable
        radius = math.exp(_ln_gamma(0.5 * d + 1.0) / d - 0.5 * math.log(math.pi))
    else:
        radius = coefficient ** (-1.0 / d)
    return GeometryConstants(d, radius, coefficient)
