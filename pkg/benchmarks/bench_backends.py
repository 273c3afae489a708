"""Time the compiled core against the pure-Python fallback.

    python3 benchmarks/bench_backends.py [--steps 100000] [--repeat 3]

Both backends produce bit-identical chains; only the wall time differs.
"""
import argparse
import time

import numpy as np

from qmcanneal import _backend
from qmcanneal.annealer import run
from qmcanneal.cooling import CoolingSchedule
from qmcanneal.kernels import KernelSpec, ScaleSchedule
from qmcanneal.objectives import get_objective
from qmcanneal.sequences import DriverConfig, SequenceDriver


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def chain_case(backend, family, steps):
    d = 2
    sched = [ScaleSchedule("power", 1.0, 0.5)] * d
    k = KernelSpec.student(1, sched) if family == "cauchy" else KernelSpec.asa(sched)
    obj = get_objective("multicos", d)
    cool = CoolingSchedule("power", 1.0, 2.0)
    return lambda: run((0.1, 0.1), steps, SequenceDriver(DriverConfig(d, 0, seed=0)), k, cool, obj,
                       backend=backend, warn=False)


def inverse_case(backend, name, count):
    core = _backend.get(backend)
    xs = np.random.default_rng(0).random((count, 2)).tolist()
    if name == "cauchy":
        return lambda: [core.student_inv_cdf(x, 1.0, 0.01, u) for x, u in xs]
    if name == "student nu=3":
        return lambda: [core.student_inv_cdf(x, 3.0, 0.01, u) for x, u in xs]
    return lambda: [core.asa_inv_cdf(x, 0.01, u) for x, u in xs]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _backend.NAME != "cython":
        print("compiled core not built; only the fallback is available")
        return 1
    rows = []
    for family in ("cauchy", "asa"):
        rows.append(("run_chain %s, %d steps" % (family, args.steps),
                     *(best_of(chain_case(b, family, args.steps), args.repeat) for b in ("cython", "python"))))
    for name in ("cauchy", "student nu=3", "asa"):
        rows.append(("inverse cdf %s, %d calls" % (name, args.steps),
                     *(best_of(inverse_case(b, name, args.steps), args.repeat) for b in ("cython", "python"))))
    print("%-40s %10s %10s %8s" % ("case", "cython[s]", "python[s]", "speedup"))
    for label, cy, py in rows:
        print("%-40s %10.3f %10.3f %7.1fx" % (label, cy, py, py / cy))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
