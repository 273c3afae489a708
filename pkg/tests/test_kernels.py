import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from qmcanneal import _backend
from qmcanneal.kernels import (
    SIGMA_MIN,
    KernelSpec,
    ScaleSchedule,
    asa_density,
    asa_generator,
    asa_inv_cdf,
    density,
    effective_index,
    inv_rosenblatt,
    lipschitz_constant,
    rosenblatt,
    sigma_at,
    student_density,
    student_inv_cdf,
    tilde_K_lower,
)
from qmcanneal.kernels.proposals import asa_cdf, asa_mass, mass_lower_bound, student_cdf

unit = st.floats(0.0, 1.0)
scales = st.sampled_from([1e-3, 1e-2, 0.1, 0.5, 1.0, 3.0])


# -- schedules ------------------------------------------------------------------

def test_sigma_examples():
    assert sigma_at(ScaleSchedule("power", 1.0, 0.0), 10**6) == 1.0
    assert sigma_at(ScaleSchedule("power", 1.0, 0.5), 4) == pytest.approx(0.5, rel=1e-15)
    assert sigma_at(ScaleSchedule("exp-power", 1.0, rate=1.0, root=1), 4) == pytest.approx(math.exp(-4), rel=1e-14)
    s = ScaleSchedule("power-log", 2.0, 1.0, 0.5)
    assert sigma_at(s, 9) == pytest.approx(2.0 / 9 * math.log(9 + math.e) ** 0.5, rel=1e-14)


def test_sigma_floor_and_reporting():
    s = ScaleSchedule("exp-power", 1.0, rate=1.0)
    assert sigma_at(s, 100) == SIGMA_MIN
    assert s.floor_binds_from(1000) == math.ceil(-math.log(SIGMA_MIN))
    assert ScaleSchedule("power", 1.0, 0.5).floor_binds_from(10**6) is None


@pytest.mark.parametrize("kw", [dict(family="nope"), dict(sigma0=0.0), dict(beta=-1.0),
                                dict(family="power-log", beta=0.1, gamma=1.0),
                                dict(family="custom")])
def test_schedule_validation(kw):
    with pytest.raises(ValueError):
        ScaleSchedule(**kw)


@given(st.floats(0.0, 2.0), st.floats(-2.0, 3.0), st.integers(1, 10**6))
def test_parametric_schedules_non_increasing(beta, gamma, n):
    if gamma > 3 * beta:
        return
    s = ScaleSchedule("power-log", 1.0, beta, gamma)
    assert s.log_sigma(n + 1) <= s.log_sigma(n) + 1e-12


def test_effective_index_examples():
    assert effective_index(7, 2, 1, 0, 0) == 7
    assert effective_index(3, 2, 1, 1, 0) == 4
    k = KernelSpec.student(1, [ScaleSchedule("power", 1.0, 1.0)], adaptation="blocks", block=(2, 1, 1, 0))
    assert [k.effective_index(n) for n in range(1, 9)] == [1, 2, 4, 4, 6, 6, 8, 8]
    np.testing.assert_array_equal(k.effective_indices(1, 8), [1, 2, 4, 4, 6, 6, 8, 8])
    assert k.sigmas(3)[0] == pytest.approx(0.25)
    assert KernelSpec.student(1, [ScaleSchedule()]).effective_index(5) == 5


def test_kernel_validation():
    with pytest.raises(ValueError):
        KernelSpec.student(1.5, [ScaleSchedule()])
    with pytest.raises(ValueError):
        KernelSpec.student(1, [ScaleSchedule()], adaptation="blocks", block=(2, 1, "inf", 0))
    with pytest.raises(ValueError):
        KernelSpec.student(1, [ScaleSchedule()], adaptation="blocks")
    with pytest.raises(ValueError):
        KernelSpec("gauss", (ScaleSchedule(),))


# -- Student t ------------------------------------------------------------------

def test_student_density_examples():
    assert student_density(0.0, 0.0, 1, 1.0) == pytest.approx(4 / math.pi, rel=1e-14)
    assert student_density(0.0, 0.5, 1, 1.0) == pytest.approx(student_density(1.0, 0.5, 1, 1.0), rel=1e-14)


def test_student_inv_cdf_examples():
    assert student_inv_cdf(0.0, 1, 1.0, 0.5) == pytest.approx(math.sqrt(2) - 1, abs=1e-15)
    assert student_inv_cdf(0.5, 1, 0.3, 0.5) == pytest.approx(0.5, abs=1e-15)
    assert student_inv_cdf(0.0, 1, 1.0, 1.0) == 1.0
    assert student_inv_cdf(0.3, 1, 1.0, 0.0) == 0.0


@pytest.mark.parametrize("nu", [1.0, 2.0, 5.0, math.inf])
@pytest.mark.parametrize("sigma", [1e-3, 0.1, 1.0])
def test_student_density_integrates_to_one(nu, sigma):
    for x in (0.0, 0.3, 1.0):
        total = integrate.quad(lambda y: student_density(y, x, nu, sigma), 0, 1, points=[x], limit=200,
                               epsabs=1e-12, epsrel=1e-12)[0]
        assert total == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("nu", [1.0, 3.0, math.inf])
def test_student_cdf_matches_scipy_truncated(nu):
    """Oracle: scipy's untruncated law, renormalised on [0,1]."""
    law = stats.norm if math.isinf(nu) else stats.t(nu)
    for x, s in [(0.2, 0.1), (0.9, 1.0), (0.5, 0.01)]:
        lo, hi = law.cdf(-x / s), law.cdf((1 - x) / s)
        for y in np.linspace(0, 1, 11):
            want = (law.cdf((y - x) / s) - lo) / (hi - lo)
            assert student_cdf(y, x, nu, s) == pytest.approx(want, abs=1e-12)


@settings(max_examples=200)
@given(unit, scales, unit, st.sampled_from([1.0, 2.0, 7.0, math.inf]))
def test_student_round_trip(x, sigma, u, nu):
    y = student_inv_cdf(x, nu, sigma, u)
    assert 0.0 <= y <= 1.0
    tol = 1e-9 if nu == 1.0 else 1e-8
    assert abs(student_cdf(y, x, nu, sigma) - u) <= tol


@given(unit, scales, unit, unit)
def test_student_inverse_is_monotone(x, sigma, u1, u2):
    lo, hi = sorted((u1, u2))
    assert student_inv_cdf(x, 1, sigma, lo) <= student_inv_cdf(x, 1, sigma, hi)


# -- ASA --------------------------------------------------------------------------

def test_asa_examples():
    assert asa_density(0.0, 0.0, 1.0) == pytest.approx(1 / math.log(2), rel=1e-14)
    assert asa_mass(0.0, 1.0) == pytest.approx(0.5, rel=1e-15)
    assert asa_inv_cdf(0.0, 1.0, 1.0) == 1.0
    assert asa_generator(0.5, 0.3) == 0.0
    assert asa_generator(1.0, 1.0) == pytest.approx(1.0)
    # u hitting argument 1/2 of G returns the centre
    x, s = 0.3, 0.2
    u_mid = (0.5 - _tilde(0.0, x, s)) / asa_mass(x, s)
    assert asa_inv_cdf(x, s, u_mid) == pytest.approx(x, abs=1e-12)


def _tilde(y, x, s):
    z = y - x
    return 0.5 + math.copysign(0.5, z) * math.log1p(abs(z) / s) / math.log1p(1 / s)


@pytest.mark.parametrize("sigma", [1e-3, 0.1, 1.0])
def test_asa_density_integrates_to_one(sigma):
    for x in (0.0, 0.6, 1.0):
        total = integrate.quad(lambda y: asa_density(y, x, sigma), 0, 1, points=[x], limit=200,
                               epsabs=1e-12, epsrel=1e-12)[0]
        assert total == pytest.approx(1.0, abs=1e-8)


@given(unit, scales, st.floats(0.0, 0.5))
def test_asa_symmetric_before_normalisation(x, sigma, dlt):
    if 0.0 <= x - dlt and x + dlt <= 1.0:
        assert asa_density(x + dlt, x, sigma) == pytest.approx(asa_density(x - dlt, x, sigma), rel=1e-12)


@settings(max_examples=200)
@given(unit, scales, unit)
def test_asa_round_trip(x, sigma, u):
    y = asa_inv_cdf(x, sigma, u)
    assert 0.0 <= y <= 1.0
    assert abs(asa_cdf(y, x, sigma) - u) <= 1e-9


def test_asa_inverse_matches_quadrature_cdf():
    x, s = 0.25, 0.05
    for u in (0.1, 0.5, 0.93):
        y = asa_inv_cdf(x, s, u)
        area = integrate.quad(lambda t: asa_density(t, x, s), 0, y, points=[x] if x < y else None,
                              epsabs=1e-12, epsrel=1e-12, limit=200)[0]
        assert area == pytest.approx(u, abs=1e-9)


# -- product kernel ------------------------------------------------------------

def test_inv_rosenblatt_product_structure():
    k = KernelSpec.student(1, [ScaleSchedule("power", 1.0, 0.5)] * 2)
    np.testing.assert_allclose(inv_rosenblatt(k, 4, (0.5, 0.5), (0.5, 0.5)), [0.5, 0.5], atol=1e-15)
    a = inv_rosenblatt(k, 4, (0.2, 0.7), (0.3, 0.9))
    b = inv_rosenblatt(k, 4, (0.2, 0.1), (0.3, 0.2))
    assert a[0] == b[0]
    np.testing.assert_allclose(rosenblatt(k, 4, (0.2, 0.7), a), (0.3, 0.9), atol=1e-12)


def test_density_is_product():
    k2 = KernelSpec.asa([ScaleSchedule("power", 1.0, 0.5)] * 2)
    k1 = KernelSpec.asa([ScaleSchedule("power", 1.0, 0.5)])
    x, y = (0.2, 0.9), (0.4, 0.1)
    want = density(k1, 9, x[:1], y[:1]) * density(k1, 9, x[1:], y[1:])
    assert density(k2, 9, x, y) == pytest.approx(want, rel=1e-14)


def test_tilde_k_examples():
    assert tilde_K_lower(KernelSpec.student(1, [ScaleSchedule()]), 1) == pytest.approx(1 / (2 * math.pi), rel=1e-14)
    assert tilde_K_lower(KernelSpec.asa([ScaleSchedule()]), 1) == pytest.approx(1 / (4 * math.log(2)), rel=1e-14)


@pytest.mark.parametrize("family", ["student", "asa"])
@pytest.mark.parametrize("n", [1, 10, 1000])
def test_density_lower_bound_on_grid(family, n):
    sched = [ScaleSchedule("power", 1.0, 0.5)]
    k = KernelSpec.student(1, sched) if family == "student" else KernelSpec.asa(sched)
    bound = tilde_K_lower(k, n)
    g = np.linspace(0, 1, 101)
    worst = min(density(k, n, (x,), (y,)) for x in g for y in g)
    assert worst >= bound - 1e-9


def test_mass_lower_bound_is_an_infimum():
    # the truncation mass is smallest at the edges of the cube
    p = mass_lower_bound("student", 1.0, 1.0)
    assert p == pytest.approx(math.atan(1.0) / math.pi, rel=1e-9)


def test_lipschitz_constant_cauchy_formula():
    k = KernelSpec.student(1, [ScaleSchedule("power", 1.0, 0.5)])
    p1 = mass_lower_bound("student", 1.0, 1.0)
    assert lipschitz_constant(k, 100) == pytest.approx(8 / (p1 * math.pi * 0.1), rel=1e-12)


def test_backend_in_use_is_reported():
    assert _backend.NAME in ("python", "cython")
