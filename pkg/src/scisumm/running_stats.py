"""Single-pass mean and population standard deviation (Welford's update)."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass
class RunningStats:
    count: int = 0
    mean: float = 0.0
    _m2: float = 0.0

    def update(self, value: float) -> None:
        self.count += 1
        delta = value - self.mean
        self.mean += delta / self.count
        self._m2 += delta * (value - self.mean)

    def merge(self, other: "RunningStats") -> None:
        """Fold another accumulator in (parallel-combine form)."""
        if other.count == 0:
            return
        if self.count == 0:
            self.count, self.mean, self._m2 = other.count, other.mean, other._m2
            return
        total = self.count + other.count
        delta = other.mean - self.mean
        self.mean += delta * other.count / total
        self._m2 += other._m2 + delta * delta * self.count * other.count / total
        self.count = total

    @property
    def std(self) -> float:
        """Population standard deviation; 0.0 until two values arrive."""
        if self.count == 0:
            return 0.0
        return math.sqrt(max(self._m2, 0.0) / self.count)

    def as_tuple(self) -> tuple[float, float]:
        return self.mean, self.std
