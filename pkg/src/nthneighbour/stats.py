"""Streaming mean/variance accumulator that can be merged across workers."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass
class SampleStats:
    """Count, mean and sum of squared deviations (``m2``) of a sample.

    Single values go through the Welford update; arrays are reduced with
    numpy and folded in with the pairwise combination rule, which is also
    what :meth:`merge` uses.
    """

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0

    def update(self, x: float) -> None:
        self.count += 1
        delta = x - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (x - self.mean)

    def update_batch(self, values) -> None:
        values = np.asarray(values, dtype=np.float64).ravel()
        if values.size == 0:
            return
        mean = float(values.mean())
        dev = values - mean
        self._combine(values.size, mean, float(np.dot(dev, dev)))

    @classmethod
    def from_values(cls, values) -> "SampleStats":
        s = cls()
        s.update_batch(values)
        return s

    def _combine(self, count: int, mean: float, m2: float) -> None:
        if count == 0:
            return
        if self.count == 0:
            self.count, self.mean, self.m2 = count, mean, m2
            return
        total = self.count + count
        delta = mean - self.mean
        self.mean += delta * count / total
        self.m2 += m2 + delta * delta * self.count * count / total
        self.count = total

    def merge(self, other: "SampleStats") -> "SampleStats":
        """Return a new accumulator equivalent to both samples concatenated."""
        out = SampleStats(self.count, self.mean, self.m2)
        out._combine(other.count, other.mean, other.m2)
        return out

    @property
    def variance(self) -> float:
        if self.count < 2:
            return math.nan
        return self.m2 / (self.count - 1)

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)

    @property
    def standard_error(self) -> float:
        if self.count < 2:
            return math.nan
        return math.sqrt(self.variance / self.count)


def merge_all(parts) -> SampleStats:
    out = SampleStats()
    for part in parts:
        out = out.merge(part)
    return out


def combined_z(a: SampleStats, b: SampleStats) -> float:
    """Difference of two means in units of their combined standard error."""
    se = math.hypot(a.standard_error, b.standard_error)
    return (a.mean - b.mean) / se
