import math
import warnings

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from qmcanneal import annealer
from qmcanneal.annealer import ChainState, HypothesisWarning, accept_prob, run, step
from qmcanneal.cooling import CoolingSchedule
from qmcanneal.kernels import KernelSpec, ScaleSchedule
from qmcanneal.objectives import custom_objective, get_objective
from qmcanneal.sequences import INF, DriverConfig, DriverPoint, SequenceDriver, kRm_boundaries

COOL = CoolingSchedule("power", 1.0, 2.0)


def cauchy(d, beta=0.5, **kw):
    return KernelSpec.student(1, [ScaleSchedule("power", 1.0, beta)] * d, **kw)


def quiet_run(*args, **kw):
    kw.setdefault("warn", False)
    return run(*args, **kw)


# -- acceptance probability ------------------------------------------------------------

def test_accept_prob_examples():
    assert accept_prob(1.0, 0.5, 0.1) == 1.0
    assert accept_prob(0.3, 0.3, 0.1) == 1.0
    assert accept_prob(0.0, 0.7, 0.7) == pytest.approx(math.exp(-1), rel=1e-15)


@pytest.mark.parametrize("args", [(math.nan, 0.0, 1.0), (0.0, math.inf, 1.0), (0.0, 0.0, 0.0)])
def test_accept_prob_errors(args):
    with pytest.raises(ValueError):
        accept_prob(*args)


@given(st.floats(-10, 10), st.floats(-10, 10), st.floats(1e-6, 10))
def test_accept_prob_range(a, b, T):
    p = accept_prob(a, b, T)
    assert 0.0 <= p <= 1.0
    if a >= b:
        assert p == 1.0


# -- single steps -------------------------------------------------------------------

def test_step_accepts_with_zero_uniform():
    obj = get_objective("sphere", 1)
    s0 = ChainState.initial((0.5,), obj)
    s1, rec = step(s0, DriverPoint((0.9,), 0.0), cauchy(1), COOL, obj)
    assert rec.accepted and s1.x == rec.proposal and s1.n == 1
    assert rec.A_n < 1.0  # a downhill move, accepted anyway


def test_step_rejection_branch():
    obj = get_objective("sphere", 1)
    s0 = ChainState.initial((0.5,), obj)
    s1, rec = step(s0, DriverPoint((0.99,), 1 - 1e-12), cauchy(1), COOL, obj)
    assert not rec.accepted
    assert s1.x == s0.x and s1.value == s0.value and s1.n == 1
    assert s1.best_value == s0.best_value


def test_step_rejects_bad_driver_point():
    obj = get_objective("sphere", 1)
    with pytest.raises(ValueError):
        step(ChainState.initial((0.5,), obj), DriverPoint((1.0,), 0.2), cauchy(1), COOL, obj)


def test_objective_evaluated_once_per_step():
    calls = []

    def f(x):
        calls.append(1)
        return -float(np.sum((x - 0.3) ** 2))

    obj = custom_objective(f, 2, 0.0, ((0.3, 0.3),))
    quiet_run((0.5, 0.5), 200, SequenceDriver(DriverConfig(2, 0, seed=1)), cauchy(2), COOL, obj)
    assert len(calls) == 1 + 200


def test_non_finite_objective_raises():
    obj = custom_objective(lambda x: math.nan if x[0] > 0.9 else 0.0, 1, 0.0, ((0.5,),))
    with pytest.raises(ValueError):
        quiet_run((0.5,), 500, SequenceDriver(DriverConfig(1, 0, seed=2)), cauchy(1, 0.0), COOL, obj)


# -- whole runs ---------------------------------------------------------------------

def test_zero_iterations():
    obj = get_objective("multicos", 2)
    tr = quiet_run((0.2, 0.3), 0, SequenceDriver(DriverConfig(2)), cauchy(2), COOL, obj)
    assert tr.N == 0 and len(tr.value) == 1
    assert tr.best_value[0] == tr.value[0] == obj((0.2, 0.3))


def check_chain_laws(tr, obj):
    np.testing.assert_array_equal(tr.best_value, np.maximum.accumulate(tr.value))
    assert np.all(tr.value <= tr.best_value)
    assert np.all(tr.best_value <= obj.phi_star + 1e-12)
    np.testing.assert_array_equal(tr.accepted[1:] == 1, tr.u_accept[1:] <= tr.A_n[1:])
    moved = np.any(tr.x[1:] != tr.x[:-1], axis=1)
    assert not np.any(moved & (tr.accepted[1:] == 0))


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.sampled_from(["sphere", "multicos", "step-near-max"]), st.integers(1, 3),
       st.sampled_from([0, 1, 3, INF]), st.integers(0, 2**32), st.sampled_from(["student", "asa"]))
def test_chain_laws_hold_on_every_run(name, d, R, seed, family):
    obj = get_objective(name, d)
    sched = [ScaleSchedule("power", 0.5, 0.4)] * d
    k = KernelSpec.student(1, sched) if family == "student" else KernelSpec.asa(sched)
    x0 = np.random.default_rng(seed).random(d)
    tr = quiet_run(x0, 300, SequenceDriver(DriverConfig(d, R, seed=seed)), k, COOL, obj)
    check_chain_laws(tr, obj)


def test_deterministic_rerun_is_identical():
    obj = get_objective("multicos", 1)
    a = quiet_run((0.1,), 2000, SequenceDriver(DriverConfig(1, INF)), cauchy(1), COOL, obj)
    b = quiet_run((0.1,), 2000, SequenceDriver(DriverConfig(1, INF)), cauchy(1), COOL, obj)
    for f in ("x", "value", "best_value", "accepted", "A_n", "u_accept"):
        assert getattr(a, f).tobytes() == getattr(b, f).tobytes()


def test_run_equals_run_then_step():
    obj = get_objective("multicos", 2)
    k = cauchy(2)
    full = quiet_run((0.2, 0.8), 300, SequenceDriver(DriverConfig(2, 2, seed=4)), k, COOL, obj)
    drv = SequenceDriver(DriverConfig(2, 2, seed=4))
    part = quiet_run((0.2, 0.8), 299, drv, k, COOL, obj)
    state, rec = step(part.final_state, drv.next_driver_point(), k, COOL, obj)
    assert state == full.final_state
    assert rec.A_n == full.A_n[-1] and rec.proposal == tuple(full.proposal[-1])


def test_records_roundtrip():
    obj = get_objective("sphere", 1)
    tr = quiet_run((0.1,), 20, SequenceDriver(DriverConfig(1, 1, seed=0)), cauchy(1), COOL, obj)
    recs = list(tr.records())
    assert [r.n for r in recs] == list(range(1, 21))
    assert all(r.accepted == (r.u_accept <= r.A_n) for r in recs)


def test_kernel_index_changes_only_at_boundaries():
    obj = get_objective("sphere", 2)
    drv = SequenceDriver(DriverConfig(2, 1, seed=0))
    k = cauchy(2, adaptation="blocks", block=(2, 2, 1, drv.t))
    tr = quiet_run((0.3, 0.3), 3000, drv, k, COOL, obj)
    bounds = set(kRm_boundaries(2, 2, 1, drv.t, 4096))
    idx = tr.kernel_index[1:]
    assert set(idx.tolist()) <= bounds
    last_of_block = np.flatnonzero(np.diff(idx)) + 1  # n of the last step in each finished block
    assert set(last_of_block.tolist()) <= bounds


def test_hypothesis_warnings():
    obj = get_objective("sphere", 2)
    with pytest.warns(HypothesisWarning) as caught:
        run((0.5, 0.5), 5, SequenceDriver(DriverConfig(2, INF)), cauchy(2), COOL, obj)
    assert any("d = 2" in str(w.message) for w in caught)
    bad = CoolingSchedule("power", a=0.5)
    with pytest.warns(HypothesisWarning, match="cooling"):
        tr = run((0.5,), 5, SequenceDriver(DriverConfig(1, 0)), cauchy(1), bad, get_objective("sphere", 1))
    assert tr.N == 5
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        run((0.5,), 5, SequenceDriver(DriverConfig(1, 0)), cauchy(1), COOL, get_objective("sphere", 1))


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        quiet_run((0.5,), 5, SequenceDriver(DriverConfig(2)), cauchy(1), COOL, get_objective("sphere", 1))
    with pytest.raises(ValueError):
        quiet_run((1.5,), 5, SequenceDriver(DriverConfig(1)), cauchy(1), COOL, get_objective("sphere", 1))


def test_chain_improves_on_average():
    obj = get_objective("sphere", 2)
    tr = quiet_run((0.05, 0.95), 5000, SequenceDriver(DriverConfig(2, 0, seed=9)), cauchy(2), COOL, obj)
    assert obj.phi_star - tr.best_value[-1] < 1e-4 < obj.phi_star - tr.best_value[0]


def test_module_reexports_cooling():
    assert annealer.CoolingSchedule is CoolingSchedule
