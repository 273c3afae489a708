"""The annealing chain: inverse-Rosenblatt proposals, Metropolis acceptance.

One iteration maps ``(x, u^n)`` to ``y = F^{-1}_{K_n}(x, u_{1:d})`` and moves
to ``y`` iff ``u_{d+1} <= A_n = exp((phi(y) - phi(x)) / T_n) ^ 1``. The tie
case accepts. ``A_n`` is evaluated once in floating point and the comparison
is made against that same number, so the recorded ``A_n`` and ``accepted``
columns agree exactly; when ``A_n`` underflows to 0 only ``u_{d+1} = 0``
accepts.
"""
from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple

import numpy as np

from . import _backend
from .cooling import CoolingSchedule, check_cooling, temperature_at
from .kernels.conditions import FAIL, check_conditions
from .kernels.proposals import STUDENT, KernelSpec
from .objectives import Objective
from .sequences import DriverPoint, SequenceDriver

__all__ = [
    "CoolingSchedule", "check_cooling", "temperature_at", "HypothesisWarning",
    "ChainState", "StepRecord", "ChainTrace", "accept_prob", "step", "run",
]


class HypothesisWarning(UserWarning):
    """A sufficient condition of the convergence theory is not met."""


@dataclass(frozen=True)
class ChainState:
    n: int
    x: Tuple[float, ...]
    value: float
    best_value: float
    best_x: Tuple[float, ...]
    accept_count: int = 0

    @classmethod
    def initial(cls, x0, objective: Objective) -> "ChainState":
        x = _check_point(x0, objective.d)
        v = objective(np.array(x))
        if not math.isfinite(v):
            raise ValueError("objective is not finite at x0")
        return cls(0, x, v, v, x, 0)


@dataclass(frozen=True)
class StepRecord:
    n: int
    proposal: Tuple[float, ...]
    A_n: float
    accepted: bool
    T_n: float
    kernel_index: int
    value: float
    best_value: float
    u_accept: float
    sigma: Tuple[float, ...]


def _check_point(x, d) -> Tuple[float, ...]:
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if x.shape != (d,):
        raise ValueError("x0 must have %d coordinates" % d)
    if not np.all(np.isfinite(x)) or np.any((x < 0.0) | (x > 1.0)):
        raise ValueError("x0 must lie in [0,1]^%d" % d)
    return tuple(float(v) for v in x)


def accept_prob(phi_y: float, phi_x: float, T: float) -> float:
    """exp((phi_y - phi_x) / T) ^ 1."""
    if not (math.isfinite(phi_y) and math.isfinite(phi_x)):
        raise ValueError("objective values must be finite")
    if not T > 0:
        raise ValueError("temperature must be positive")
    delta = phi_y - phi_x
    if delta >= 0.0:
        return 1.0
    return math.exp(delta / T)


def _family_code(kernel: KernelSpec) -> int:
    return 0 if kernel.family == STUDENT else 1


@dataclass
class ChainTrace:
    """Row 0 is the initial state; row n >= 1 is iteration n.

    Columns without a meaning at n = 0 (A_n, T_n, sigma, u_accept) hold NaN
    there, ``accepted`` holds 0 and ``kernel_index`` holds 0.
    """

    x: np.ndarray          # (N+1, d) current state after each iteration
    proposal: np.ndarray   # (N+1, d)
    value: np.ndarray
    best_value: np.ndarray
    accepted: np.ndarray
    A_n: np.ndarray
    T_n: np.ndarray
    sigma: np.ndarray      # (N+1, d)
    kernel_index: np.ndarray
    u_accept: np.ndarray
    best_x: Tuple[float, ...]
    start_index: int = 1
    warnings: List[str] = field(default_factory=list)

    @property
    def N(self) -> int:
        return len(self.value) - 1

    @property
    def n(self) -> np.ndarray:
        return np.arange(self.N + 1, dtype=np.int64)

    @property
    def sigma_eff(self) -> np.ndarray:
        """Smallest per-coordinate scale in force at each step."""
        return self.sigma.min(axis=1)

    @property
    def final_state(self) -> ChainState:
        return ChainState(self.N, tuple(self.x[-1].tolist()), float(self.value[-1]),
                          float(self.best_value[-1]), self.best_x, int(self.accepted.sum()))

    def records(self) -> Iterator[StepRecord]:
        for k in range(1, self.N + 1):
            yield StepRecord(k, tuple(self.proposal[k].tolist()), float(self.A_n[k]), bool(self.accepted[k]),
                             float(self.T_n[k]), int(self.kernel_index[k]), float(self.value[k]),
                             float(self.best_value[k]), float(self.u_accept[k]), tuple(self.sigma[k].tolist()))


@functools.lru_cache(maxsize=64)
def _hypothesis_warnings(kernel: KernelSpec, cooling: CoolingSchedule, R: float, d: int) -> Tuple[str, ...]:
    out = []
    if not check_cooling(cooling):
        out.append("cooling schedule fails sum T_n log n < inf")
    if math.isinf(R) and d > 1:
        out.append("R = inf with d = %d: the deterministic convergence result assumes d = 1" % d)
    mode = "thm1" if R == 0 else ("thm3" if math.isinf(R) else "thm2")
    report = check_conditions(kernel, cooling, mode, horizon=10**3)
    for r in report.results:
        if r.verdict == FAIL and r.id != "cooling":
            out.append("%s fails: %s" % (r.id, r.detail))
    return tuple(out)


def _chain(backend, x, phi, prop, acc, sig, temps, kernel, objective):
    core = _backend.get(backend)
    return core.run_chain(np.asarray(x, dtype=np.float64), float(phi), prop, acc, sig, temps,
                          _family_code(kernel), float(kernel.nu), objective)


def step(state: ChainState, u: DriverPoint, kernel: KernelSpec, cooling: CoolingSchedule,
         objective: Objective, backend: Optional[str] = None) -> Tuple[ChainState, StepRecord]:
    """Advance the chain by one iteration using driver point ``u``."""
    n = state.n + 1
    prop = np.array([u.proposal], dtype=np.float64)
    if np.any((prop < 0.0) | (prop >= 1.0)) or not 0.0 <= u.accept < 1.0:
        raise ValueError("driver coordinates must lie in [0,1)")
    idx, sig = kernel.sigma_table(n, 1)
    temps = np.array([cooling.temperature(float(n))])
    xs, ys, values, best, accepted, probs, _ = _chain(
        backend, state.x, state.value, prop, np.array([u.accept]), sig, temps, kernel, objective)
    acc = bool(accepted[0])
    x_new = tuple(xs[0].tolist())
    best_v, best_x = state.best_value, state.best_x
    if values[0] > best_v:
        best_v, best_x = float(values[0]), x_new
    new = ChainState(n, x_new, float(values[0]), best_v, best_x, state.accept_count + acc)
    rec = StepRecord(n, tuple(ys[0].tolist()), float(probs[0]), acc, float(temps[0]), int(idx[0]),
                     new.value, best_v, float(u.accept), tuple(sig[0].tolist()))
    return new, rec


def run(x0, N: int, driver: SequenceDriver, kernel: KernelSpec, cooling: CoolingSchedule,
        objective: Objective, backend: Optional[str] = None, warn: bool = True) -> ChainTrace:
    """Run ``N`` iterations from ``x0``, consuming the driver's next ``N`` points.

    Failed hypotheses are recorded on the trace (and issued as
    :class:`HypothesisWarning` when ``warn``); the run always proceeds.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    d = objective.d
    if driver.d != d or kernel.d != d:
        raise ValueError("driver (d=%d), kernel (d=%d) and objective (d=%d) disagree"
                         % (driver.d, kernel.d, d))
    init = ChainState.initial(x0, objective)
    notes = list(_hypothesis_warnings(kernel, cooling, float(driver.R), d))
    if kernel.adaptation == "blocks":
        b, kd, kR, kt = kernel.block
        if (b, kd, kR, kt) != (driver.config.b, d, driver.R, driver.t):
            notes.append("kernel block grid %r does not match the driver's (b, d, R, t)" % (kernel.block,))
    if warn:
        for msg in notes:
            warnings.warn(msg, HypothesisWarning, stacklevel=2)

    start = driver.index
    prop, acc = driver.take(N)
    idx, sig = kernel.sigma_table(start, N)
    temps = np.asarray(cooling.temperature(np.arange(start, start + N, dtype=np.float64)),
                       dtype=np.float64).reshape(N)
    xs, ys, values, best, accepted, probs, best_x = _chain(
        backend, init.x, init.value, prop, acc, sig, temps, kernel, objective)

    nan1 = np.array([np.nan])
    nand = np.full((1, d), np.nan)
    x_start = np.array([init.x])
    if N == 0 or not np.max(values, initial=-np.inf) > init.value:
        best_x = init.x
    return ChainTrace(
        x=np.concatenate([x_start, xs]),
        proposal=np.concatenate([nand, ys]),
        value=np.concatenate([[init.value], values]),
        best_value=np.concatenate([[init.value], best]),
        accepted=np.concatenate([[0], accepted]).astype(np.uint8),
        A_n=np.concatenate([nan1, probs]),
        T_n=np.concatenate([nan1, temps]),
        sigma=np.concatenate([nand, sig]),
        kernel_index=np.concatenate([[0], idx]).astype(np.int64),
        u_accept=np.concatenate([nan1, acc]),
        best_x=tuple(float(v) for v in best_x),
        start_index=start,
        warnings=notes,
    )
