"""Cooling schedules T_n and the summability rule sum T_n log n < inf."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CoolingSchedule:
    """power: T0 * n**-a;  power-log: T0 / n * log(n + e)**-c."""

    family: str = "power"
    T0: float = 1.0
    a: float = 2.0
    c: float = 3.0

    def __post_init__(self):
        if self.family not in ("power", "power-log"):
            raise ValueError("unknown cooling family %r" % self.family)
        if not self.T0 > 0:
            raise ValueError("T0 must be positive")
        if self.family == "power" and not self.a > 0:
            raise ValueError("power cooling needs a > 0")
        if self.family == "power-log" and not self.c > 0:
            raise ValueError("power-log cooling needs c > 0")

    def temperature(self, n):
        n = np.asarray(n, dtype=np.float64)
        if self.family == "power":
            out = self.T0 * n ** (-self.a)
        else:
            out = self.T0 / n * np.log(n + math.e) ** (-self.c)
        return float(out) if np.ndim(out) == 0 else out


def temperature_at(schedule: CoolingSchedule, n: int) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    return schedule.temperature(n)


def check_cooling(schedule: CoolingSchedule) -> bool:
    """sum T_n log n converges iff a > 1 (power) or c > 2 (power-log)."""
    if schedule.family == "power":
        return schedule.a > 1
    return schedule.c > 2
