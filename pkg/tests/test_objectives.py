import math

import numpy as np
import pytest
from scipy import optimize

from qmcanneal.objectives import (
    D1_GLOBAL,
    THM1_LOCAL,
    custom_objective,
    eval_objective,
    get_objective,
    list_objectives,
)

NAMES = [o["name"] for o in list_objectives()]


def test_registry_contents():
    assert NAMES == ["sphere", "multicos", "step-near-max"]
    tags = {o["name"]: o["tag"] for o in list_objectives()}
    assert tags["step-near-max"] == THM1_LOCAL
    assert tags["sphere"] == tags["multicos"] == D1_GLOBAL
    with pytest.raises(KeyError):
        get_objective("rosenbrock", 2)


def test_examples():
    assert get_objective("sphere", 3)((0.5, 0.5, 0.5)) == 0.0
    assert get_objective("sphere", 1)((0.0,)) == pytest.approx(-0.25)
    assert get_objective("step-near-max", 2)((0.55, 0.47)) == pytest.approx(-0.05)
    assert get_objective("step-near-max", 1)((0.8,)) == pytest.approx(-0.3)  # y > 0.75 adds 0.1


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("d", [1, 2, 5])
def test_argmax_attains_phi_star_and_sample_never_exceeds(name, d):
    obj = get_objective(name, d)
    for x in obj.argmax:
        assert abs(obj(x) - obj.phi_star) <= 1e-12
    pts = np.random.default_rng(d).random((10**5, d))
    assert obj.batch(pts).max() <= obj.phi_star + 1e-12


def test_multicos_global_max_by_brute_force():
    """1-d grid oracle with 10^6 points, refined by a bounded local search."""
    g = np.linspace(0, 1, 10**6 + 1)
    z = g - 0.5
    vals = -(z * z - 0.1 * np.cos(6 * math.pi * z) + 0.1)
    i = int(np.argmax(vals))
    assert abs(g[i] - 0.5) < 1e-5
    assert vals[i] == pytest.approx(0.0, abs=1e-12)
    # the two side modes sit strictly below
    obj = get_objective("multicos", 1)
    side = optimize.minimize_scalar(lambda x: -obj((x,)), bounds=(0.7, 0.95), method="bounded")
    assert -side.fun < -0.05


@pytest.mark.parametrize("name", ["sphere", "multicos"])
def test_d1_objectives_are_continuous(name):
    obj = get_objective(name, 1)
    g = np.linspace(0, 1, 10**5 + 1)[:, None]
    jumps = np.abs(np.diff(obj.batch(g)))
    assert jumps.max() < 1e-4


def test_step_near_max_is_discontinuous_outside_ball():
    obj = get_objective("step-near-max", 1)
    g = np.linspace(0, 1, 10**5 + 1)[:, None]
    v = obj.batch(g)
    inside = np.abs(g[:, 0] - 0.5) <= 0.1
    assert np.abs(np.diff(v[inside])).max() < 1e-4
    assert np.abs(np.diff(v)).max() >= 0.05


@pytest.mark.parametrize("name", ["sphere", "multicos"])
def test_level_sets_are_finite_in_one_dimension(name):
    """Root-count oracle: phi - l changes sign finitely often on a fine grid."""
    obj = get_objective(name, 1)
    g = np.linspace(0, 1, 2 * 10**5 + 1)[:, None]
    v = obj.batch(g)
    for level in np.linspace(v.min(), obj.phi_star, 12)[1:-1]:
        crossings = np.count_nonzero(np.diff(np.sign(v - level)))
        assert 0 < crossings <= 12


def test_out_of_domain_rejected():
    obj = get_objective("sphere", 2)
    for bad in [(1.5, 0.2), (-0.1, 0.2), (math.nan, 0.2), (0.1, 0.2, 0.3)]:
        with pytest.raises(ValueError):
            eval_objective(obj, bad)
    with pytest.raises(ValueError):
        obj.batch(np.array([[0.1, 2.0]]))


def test_custom_objective_wrapper():
    obj = custom_objective(lambda x: -abs(x[0] - 0.25), 1, 0.0, ((0.25,),))
    assert obj((0.25,)) == 0.0
    assert obj.code == -1
