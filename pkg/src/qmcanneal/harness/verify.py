"""Verification suites exposed by ``qmcanneal verify``.

Every suite returns a list of :class:`Check`; a suite passes iff all do.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from ..cooling import CoolingSchedule
from ..kernels import KernelSpec, ScaleSchedule, tilde_K_lower
from ..kernels.conditions import check_conditions
from ..kernels.proposals import (
    ASA,
    STUDENT,
    asa_density,
    lipschitz_constant,
    student_density,
)
from .. import _backend
from ..sequences import (
    DigitTable,
    DriverConfig,
    NetParams,
    SequenceDriver,
    lemma1_check,
    ts_points,
    verify_net,
)
from .config import ExperimentConfig


@dataclass
class Check:
    id: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return "check=%s result=%s %s" % (self.id, "pass" if self.passed else "fail", self.detail)


# -- nets -------------------------------------------------------------------------

def nets_suite(max_s: int = 5, max_m: int = 8, prefix_points: int = 10**4, lemma_n: int = 10**5) -> List[Check]:
    out = []
    for s in range(1, max_s + 1):
        table = DigitTable.shipped(s)
        for m in range(table.t, max_m + 1):
            res = verify_net(ts_points(table, 0, 2**m), NetParams(2, table.t, m, s))
            out.append(Check("net[s=%d,t=%d,m=%d]" % (s, table.t, m), res.passed,
                             "" if res.passed else "box=%s count=%s" % (res.box, res.count)))
    for R in (1, 2, 3):
        drv = SequenceDriver(DriverConfig(2, R, seed=R))
        prop, acc = drv.points(1, prefix_points)
        prop_inf, acc_inf = SequenceDriver(DriverConfig(2)).points(1, prefix_points)
        got = np.floor(np.column_stack([prop, acc]) * 2**R)
        want = np.floor(np.column_stack([prop_inf, acc_inf]) * 2**R)
        bad = int(np.count_nonzero(got != want))
        out.append(Check("digit-prefix[R=%d]" % R, bad == 0, "mismatches=%d points=%d" % (bad, prefix_points)))
    res = lemma1_check(2, math.inf, lemma_n, alpha=1.0)
    out.append(Check("lemma1[R=inf,N=%d]" % lemma_n, res.passed,
                     "violations=%d first=%s" % (res.violations, res.first_violation)))
    return out


# -- kernels ----------------------------------------------------------------------

def round_trip_error(family: str, nu: float, sigma: float, grid: int = 100) -> float:
    core = _backend.core
    xs = np.linspace(0.0, 1.0, grid)
    us = np.linspace(0.0, 1.0, grid)
    worst = 0.0
    for x in xs:
        for u in us:
            if family == STUDENT:
                y = core.student_inv_cdf(x, nu, sigma, u)
                back = core.student_cdf(x, nu, sigma, y)
            else:
                y = core.asa_inv_cdf(x, sigma, u)
                back = core.asa_cdf(x, sigma, y)
            worst = max(worst, abs(back - u))
    return worst


def density_gap(kernel: KernelSpec, n: int, grid: int = 101) -> float:
    """min over a grid of (conditional density - tilde_K_lower)."""
    bound = tilde_K_lower(kernel, n)
    pts = np.linspace(0.0, 1.0, grid)
    worst = math.inf
    for sig in kernel.sigmas(n):
        for x in pts:
            for y in pts:
                if kernel.family == STUDENT:
                    dens = student_density(y, x, kernel.nu, sig)
                else:
                    dens = asa_density(y, x, sig)
                worst = min(worst, dens - bound)
    return worst


def lipschitz_violations(kernel: KernelSpec, n: int, count: int = 1000, delta0: float = 0.2,
                         delta: float = 0.05, seed: int = 0) -> int:
    """Sample separated quadruples (x~, x', x, y) in one coordinate and count bound violations."""
    rng = np.random.default_rng(seed)
    c_n = lipschitz_constant(kernel, n)
    sig = float(min(kernel.sigmas(n)))
    core = _backend.core
    if kernel.family == STUDENT:
        def cdf(x, y):
            return core.student_cdf(x, kernel.nu, sig, y)
    else:
        def cdf(x, y):
            return core.asa_cdf(x, sig, y)
    bad = 0
    gap = 4.0 * delta0  # B_{2 delta0} balls meet in a null set
    for _ in range(count):
        xt = rng.uniform(0.0, 1.0 - gap)
        xp = rng.uniform(xt + gap, 1.0)
        if rng.random() < 0.5:
            xt, xp = xp, xt
        x = min(max(xt + rng.uniform(-delta, delta), 0.0), 1.0)
        y = min(max(xp + rng.uniform(-delta, delta), 0.0), 1.0)
        if abs(cdf(x, y) - cdf(xt, xp)) > delta * c_n:
            bad += 1
    return bad


def kernels_suite(grid: int = 100) -> List[Check]:
    out = []
    for sigma in (1e-3, 1e-1, 1.0):
        err = round_trip_error(STUDENT, 1.0, sigma, grid)
        out.append(Check("round-trip[cauchy,sigma=%g]" % sigma, err <= 1e-9, "max_err=%.3g" % err))
        err = round_trip_error(ASA, 1.0, sigma, grid)
        out.append(Check("round-trip[asa,sigma=%g]" % sigma, err <= 1e-9, "max_err=%.3g" % err))
        err = round_trip_error(STUDENT, 3.0, sigma, grid)
        out.append(Check("round-trip[t3,sigma=%g]" % sigma, err <= 1e-8, "max_err=%.3g" % err))
    sched = [ScaleSchedule("power", 1.0, 0.5)]
    for kernel, name in ((KernelSpec.student(1, sched), "cauchy"), (KernelSpec.asa(sched), "asa")):
        for n in (1, 10, 1000):
            gap = density_gap(kernel, n)
            out.append(Check("density-lower[%s,n=%d]" % (name, n), gap >= -1e-9, "min_margin=%.3g" % gap))
        for n in (1, 10, 1000):
            bad = lipschitz_violations(kernel, n)
            out.append(Check("lipschitz[%s,n=%d]" % (name, n), bad == 0, "violations=%d of 1000" % bad))
    return out


# -- conditions -----------------------------------------------------------------

def mode_for(R) -> str:
    if R == 0:
        return "thm1"
    return "thm3" if math.isinf(R) else "thm2"


def conditions_suite(config: Optional[ExperimentConfig] = None, mode: Optional[str] = None) -> List[Check]:
    cfg = config or ExperimentConfig()
    kernel = cfg.build_kernel(cfg.table_t())
    cooling: CoolingSchedule = cfg.build_cooling()
    report = check_conditions(kernel, cooling, mode or mode_for(cfg.R))
    out = []
    for r in report.results:
        wit = " ".join("%d:%.6g" % kv for kv in r.witness.items())
        out.append(Check(r.id, r.verdict == "pass", "verdict=%s mode=%s detail=%r witness=[%s]"
                         % (r.verdict, report.mode, r.detail, wit)))
    return out


SUITES = {"nets": nets_suite, "kernels": kernels_suite, "conditions": conditions_suite}
