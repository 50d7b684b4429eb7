"""The (D, n, N) triple that identifies one mean-distance problem."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParameterError


def _is_int(value) -> bool:
    return not isinstance(value, bool) and isinstance(value, int)


@dataclass(frozen=True)
class ProblemParams:
    """Dimension ``dim`` (D), neighbour index ``n`` and point count ``point_count`` (N).

    ``point_count`` is the number of points per unit volume including the
    reference point, so the n-th neighbour exists only for ``1 <= n <= N - 1``.
    """

    dim: int
    n: int
    point_count: int

    def __post_init__(self):
        for name in ("dim", "n", "point_count"):
            if not _is_int(getattr(self, name)):
                raise ParameterError(f"{name} must be an integer, got {getattr(self, name)!r}")
        if self.dim < 1:
            raise ParameterError(f"dim must satisfy D >= 1, got D={self.dim}")
        if self.n < 1:
            raise ParameterError(f"n must satisfy n >= 1, got n={self.n}")
        if self.n >= self.point_count:
            raise ParameterError(
                f"neighbour index must satisfy n < N, got n={self.n}, N={self.point_count}"
            )

    @property
    def N(self) -> int:
        return self.point_count

    def with_n(self, n: int) -> "ProblemParams":
        return ProblemParams(self.dim, n, self.point_count)
