"""Scale schedules sigma_n for the proposal kernels."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ._asymptotics import LOG, LOGLOG, ZERO, Expansion

SIGMA_MIN = 1e-12

FAMILIES = ("power", "power-log", "exp-power", "custom")


@dataclass(frozen=True)
class ScaleSchedule:
    """Non-increasing positive scale sequence.

    power       sigma0 * n**-beta
    power-log   sigma0 * n**-beta * log(n + e)**gamma
    exp-power   sigma0 * exp(-rate * n**(1/root))
    custom      func(n), no analytic guarantees

    Values are floored at ``SIGMA_MIN``.
    """

    family: str = "power"
    sigma0: float = 1.0
    beta: float = 0.0
    gamma: float = 0.0
    rate: float = 1.0
    root: int = 1
    func: Optional[Callable[[int], float]] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError("unknown schedule family %r" % self.family)
        if self.family == "custom":
            if self.func is None:
                raise ValueError("custom schedule needs func")
            return
        if not self.sigma0 > 0:
            raise ValueError("sigma0 must be positive")
        if self.beta < 0:
            raise ValueError("beta must be >= 0")
        if self.family == "power-log" and self.gamma > 0 and self.gamma > 3.0 * self.beta:
            # d/dn log sigma <= 0 for all n >= 1 needs gamma <= beta * min (n+e)log(n+e)/n ~ 3.14 beta
            raise ValueError("power-log schedule with gamma > 3*beta is not non-increasing")
        if self.family == "exp-power" and (self.rate <= 0 or self.root < 1):
            raise ValueError("exp-power needs rate > 0 and root >= 1")

    @property
    def parametric(self) -> bool:
        return self.family != "custom"

    def log_sigma(self, n):
        """Unfloored log sigma_n; vectorises over ``n``."""
        n = np.asarray(n, dtype=np.float64)
        if self.family == "power":
            out = math.log(self.sigma0) - self.beta * np.log(n)
        elif self.family == "power-log":
            out = math.log(self.sigma0) - self.beta * np.log(n) + self.gamma * np.log(np.log(n + math.e))
        elif self.family == "exp-power":
            out = math.log(self.sigma0) - self.rate * n ** (1.0 / self.root)
        else:
            out = np.log(np.vectorize(lambda k: float(self.func(int(k))))(n))
        return float(out) if np.ndim(out) == 0 else out

    def sigma(self, n):
        """sigma_n clamped at ``SIGMA_MIN``."""
        ls = self.log_sigma(n)
        if np.ndim(ls):
            return np.maximum(np.exp(ls), SIGMA_MIN)
        return max(math.exp(ls), SIGMA_MIN)

    def floor_binds_from(self, horizon: int = 10**12) -> Optional[int]:
        """First n <= horizon at which the floor is active, else None."""
        target = math.log(SIGMA_MIN)
        if self.log_sigma(horizon) >= target:
            return None
        if self.log_sigma(1) < target:
            return 1
        lo, hi = 1, horizon  # log_sigma is non-increasing: lo above the floor, hi below
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.log_sigma(mid) < target:
                hi = mid
            else:
                lo = mid
        return hi

    def log_expansion(self) -> Expansion:
        """Asymptotic expansion of log sigma_n (unfloored)."""
        if self.family == "power":
            return Expansion({ZERO: math.log(self.sigma0), LOG: -self.beta})
        if self.family == "power-log":
            return Expansion({ZERO: math.log(self.sigma0), LOG: -self.beta, LOGLOG: self.gamma})
        if self.family == "exp-power":
            return Expansion({ZERO: math.log(self.sigma0), (1.0 / self.root, 0, 0, 0): -self.rate})
        raise ValueError("custom schedules have no analytic expansion")


def sigma_at(schedule: ScaleSchedule, n: int) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    return schedule.sigma(n)
