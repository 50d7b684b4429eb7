"""Hot numeric kernels, each in a numba flavour and a pure-numpy flavour.

The module-level names without suffix (``knn_select``, ``betainc_array``,
``betainc_inv_array``) are bound to whichever flavour
:mod:`nthneighbour._backend` selected.  Both flavours stay importable so
the benchmark and the tests can compare them directly.

Squared norms are accumulated dimension by dimension in the same order in
every flavour, so the numba and numpy k-NN kernels return bit-identical
distances.
"""

from __future__ import annotations

import numpy as np

from . import specfun as _sf
from ._backend import HAVE_NUMBA, USE_NUMBA, njit

# ---------------------------------------------------------------------------
# k nearest neighbours of the origin
# ---------------------------------------------------------------------------


def squared_norms(points: np.ndarray) -> np.ndarray:
    """Squared Euclidean norms over the last axis, summed left to right."""
    acc = points[..., 0] * points[..., 0]
    for j in range(1, points.shape[-1]):
        acc = acc + points[..., j] * points[..., j]
    return acc


def knn_select_numpy(points: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(d2, idx)``, each of shape ``(T, k)``, ascending in ``d2``.

    ``points`` has shape ``(T, M, D)``: T independent clouds of M points.
    """
    d2 = squared_norms(points)
    m = d2.shape[1]
    if k < m:
        part = np.argpartition(d2, k - 1, axis=1)[:, :k]
    else:
        part = np.broadcast_to(np.arange(m), d2.shape)
    vals = np.take_along_axis(d2, part, axis=1)
    order = np.argsort(vals, axis=1, kind="stable")
    return np.take_along_axis(vals, order, axis=1), np.take_along_axis(part, order, axis=1)


@njit(nogil=True, cache=True)
def _knn_select_nb(points, k):
    t, m, dim = points.shape
    out_d2 = np.empty((t, k), dtype=np.float64)
    out_idx = np.empty((t, k), dtype=np.int64)
    buf_d2 = np.empty(k, dtype=np.float64)
    buf_idx = np.empty(k, dtype=np.int64)
    for s in range(t):
        filled = 0
        for i in range(m):
            v = points[s, i, 0] * points[s, i, 0]
            for j in range(1, dim):
                v = v + points[s, i, j] * points[s, i, j]
            if filled == k:
                if v >= buf_d2[k - 1]:
                    continue
                pos = k - 1
            else:
                pos = filled
                filled += 1
            # insertion into the sorted buffer of the k smallest so far
            while pos > 0 and buf_d2[pos - 1] > v:
                buf_d2[pos] = buf_d2[pos - 1]
                buf_idx[pos] = buf_idx[pos - 1]
                pos -= 1
            buf_d2[pos] = v
            buf_idx[pos] = i
        out_d2[s, :] = buf_d2
        out_idx[s, :] = buf_idx
    return out_d2, out_idx


def knn_select_numba(points: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    return _knn_select_nb(np.ascontiguousarray(points, dtype=np.float64), int(k))


def knn_brute_force(points: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Reference path: full sort of every squared norm."""
    d2 = squared_norms(points)
    order = np.argsort(d2, axis=1, kind="stable")[:, :k]
    return np.take_along_axis(d2, order, axis=1), order


# ---------------------------------------------------------------------------
# regularized incomplete beta on arrays (shape parameters are scalars)
# ---------------------------------------------------------------------------


@njit(nogil=True, cache=True)
def _betainc_nb(x, a, b):
    flat = x.ravel()
    out = np.empty(flat.size, dtype=np.float64)
    for i in range(flat.size):
        out[i] = _sf._betainc(flat[i], a, b)
    return out.reshape(x.shape)


@njit(nogil=True, cache=True)
def _betainc_inv_nb(p, a, b):
    flat = p.ravel()
    out = np.empty(flat.size, dtype=np.float64)
    for i in range(flat.size):
        out[i] = _sf._betainc_inv(flat[i], a, b)
    return out.reshape(p.shape)


def betainc_numba(x, a: float, b: float) -> np.ndarray:
    return _betainc_nb(np.ascontiguousarray(x, dtype=np.float64), float(a), float(b))


def betainc_inv_numba(p, a: float, b: float) -> np.ndarray:
    return _betainc_inv_nb(np.ascontiguousarray(p, dtype=np.float64), float(a), float(b))


def _beta_cf_numpy(x: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    tiny = _sf._CF_TINY
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = np.ones_like(x)
    d = 1.0 - qab * x / qap
    d = 1.0 / np.where(np.abs(d) < tiny, tiny, d)
    h = d.copy()
    live = np.arange(x.size)
    for m in range(1, _sf._CF_MAXITER + 1):
        xl, al, bl = x[live], a[live], b[live]
        cl, dl = c[live], d[live]
        m2 = 2.0 * m
        aa = m * (bl - m) * xl / ((qam[live] + m2) * (al + m2))
        dl = 1.0 + aa * dl
        dl = 1.0 / np.where(np.abs(dl) < tiny, tiny, dl)
        cl = 1.0 + aa / cl
        cl = np.where(np.abs(cl) < tiny, tiny, cl)
        hl = h[live] * (dl * cl)
        aa = -(al + m) * (qab[live] + m) * xl / ((al + m2) * (qap[live] + m2))
        dl = 1.0 + aa * dl
        dl = 1.0 / np.where(np.abs(dl) < tiny, tiny, dl)
        cl = 1.0 + aa / cl
        cl = np.where(np.abs(cl) < tiny, tiny, cl)
        delta = dl * cl
        h[live] = hl * delta
        c[live] = cl
        d[live] = dl
        live = live[np.abs(delta - 1.0) >= _sf._CF_EPS]
        if live.size == 0:
            break
    return h


def betainc_numpy(x, a: float, b: float) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    shape = x.shape
    x = x.ravel()
    out = np.where(x >= 1.0, 1.0, 0.0)
    inner = (x > 0.0) & (x < 1.0)
    xi = x[inner]
    if xi.size:
        a_arr = np.full_like(xi, a)
        b_arr = np.full_like(xi, b)
        log_front = a * np.log(xi) + b * np.log1p(-xi) - _sf._ln_beta(a, b)
        front = np.exp(log_front)
        swap = xi >= (a + 1.0) / (a + b + 2.0)
        xs = np.where(swap, 1.0 - xi, xi)
        cf = _beta_cf_numpy(xs, np.where(swap, b_arr, a_arr), np.where(swap, a_arr, b_arr))
        out[inner] = np.where(swap, 1.0 - front * cf / b, front * cf / a)
    return out.reshape(shape)


def betainc_inv_numpy(p, a: float, b: float) -> np.ndarray:
    """Vectorised Newton iteration with a bisection safeguard, mirroring the scalar routine."""
    p = np.asarray(p, dtype=np.float64)
    shape = p.shape
    p = p.ravel()
    out = np.where(p >= 1.0, 1.0, 0.0)
    live = np.flatnonzero((p > 0.0) & (p < 1.0))
    if live.size == 0:
        return out.reshape(shape)
    ln_b = _sf._ln_beta(a, b)
    x = np.full(live.size, a / (a + b))
    lo = np.zeros(live.size)
    hi = np.ones(live.size)
    pl = p[live]
    for _ in range(200):
        f = betainc_numpy(x, a, b) - pl
        lo = np.where(f < 0.0, x, lo)
        hi = np.where(f > 0.0, x, hi)
        done = (f == 0.0) | (hi - lo <= 4e-16 * hi)
        dens = np.exp((a - 1.0) * np.log(x) + (b - 1.0) * np.log1p(-x) - ln_b)
        with np.errstate(divide="ignore", invalid="ignore"):
            x_new = x - f / dens
        x_new = np.where((lo < x_new) & (x_new < hi), x_new, 0.5 * (lo + hi))
        settled = (np.abs(x_new - x) <= 1e-16 * x) & (np.abs(f) <= 1e-13)
        x_new = np.where(done & ~settled, x, x_new)
        finished = done | settled
        out[live[finished]] = x_new[finished]
        keep = ~finished
        live, x, lo, hi, pl = live[keep], x_new[keep], lo[keep], hi[keep], pl[keep]
        if live.size == 0:
            break
    out[live] = x
    return out.reshape(shape)


if USE_NUMBA:
    knn_select = knn_select_numba
    betainc_array = betainc_numba
    betainc_inv_array = betainc_inv_numba
else:
    knn_select = knn_select_numpy
    betainc_array = betainc_numpy
    betainc_inv_array = betainc_inv_numpy

__all__ = [
    "HAVE_NUMBA",
    "betainc_array",
    "betainc_inv_array",
    "betainc_inv_numpy",
    "betainc_numpy",
    "knn_brute_force",
    "knn_select",
    "knn_select_numpy",
    "squared_norms",
]
if HAVE_NUMBA:
    __all__ += ["betainc_inv_numba", "betainc_numba", "knn_select_numba"]
