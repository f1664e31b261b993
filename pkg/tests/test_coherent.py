import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import rotwell.coherent as gk
from rotwell.errors import DomainError
from rotwell.hamiltonian import apply, evolution
from rotwell.rotation import CoefficientVector, RotatedBasisFunction, inner_phi, norm_phi
from rotwell.well import DEFAULT_WELL, WellConfig, log_rho, shifted_energy

WELLS = [WellConfig(1.0), DEFAULT_WELL, WellConfig(2 * math.pi)]


def random_vector(rng, size, frame):
    return CoefficientVector(frame, rng.normal(size=size) + 1j * rng.normal(size=size))


def mp_series(J, cfg, terms=200):
    """sum_n J^n / rho_n at 50 digits."""
    mpmath.mp.dps = 50
    c = mpmath.mpf(math.pi) ** 2 / mpmath.mpf(cfg.L) ** 2
    total, term = mpmath.mpf(1), mpmath.mpf(1)
    for n in range(1, terms):
        term *= mpmath.mpf(J) / (c * n * (n + 2))
        total += term
    return total


# ------------------------------------------------------------------ normalization


def test_normalization_series_examples():
    assert gk.normalization_series(0.0) == 1.0
    direct = 1 + 1 / 3 + 1 / 24 + 1 / (24 * 15) + 1 / (24 * 15 * 24) + 1 / (24 * 15 * 24 * 35)
    assert gk.normalization_series(1.0) == pytest.approx(direct ** -0.5, rel=1e-6)
    assert gk.normalization_series(1.0) == pytest.approx(float(mp_series(1.0, DEFAULT_WELL) ** -0.5), rel=1e-15)


@pytest.mark.parametrize("cfg", WELLS)
@pytest.mark.parametrize("J", [1e-3, 0.5, 1.0, 7.0, 100.0, 1e3])
def test_series_against_high_precision(cfg, J):
    ref = float(mpmath.log(mp_series(J, cfg)))
    assert gk.log_series_sum(J, cfg) == pytest.approx(ref, rel=1e-13, abs=1e-15)


@pytest.mark.parametrize("cfg", WELLS)
def test_closed_form_matches_series(cfg):
    for J in np.logspace(-3, 3, 31):
        assert gk.normalization_closed(J, cfg) == pytest.approx(gk.normalization_series(J, cfg), rel=1e-10)


def test_closed_form_examples():
    for J in (1.0, 100.0):
        assert gk.normalization_closed(J) == pytest.approx(gk.normalization_series(J), rel=1e-10)
    assert gk.normalization_closed(1e-12) == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(DomainError):
        gk.normalization_closed(0.0)


def test_printed_normalization_is_off_by_powers_of_four():
    # the printed form sums J^n / (4^n rho_n), i.e. the series at J / 4
    for J in (0.1, 1.0, 10.0):
        assert gk.log_series_closed(J, printed=True) == pytest.approx(gk.log_series_sum(J / 4), rel=1e-10)
        assert abs(gk.log_series_closed(J, printed=True) - gk.log_series_sum(J)) > 1e-2


# ------------------------------------------------------------------ states


def test_ground_state_at_zero_action():
    c = gk.gk_coefficients(gk.GKState(0.0, 1.1, 0.3))
    np.testing.assert_array_equal(c.coeffs, [1.0])
    x = np.linspace(-1.5, 1.5, 7)
    v = gk.evaluate_state(gk.GKState(0.0, 2.0, 0.0), x).value
    np.testing.assert_allclose(v, RotatedBasisFunction(1, 0.0)(x), rtol=1e-15)


@settings(max_examples=40, deadline=None)
@given(J=st.sampled_from([0.0, 0.5, 1.0, 4.0, 10.0, 100.0]), gamma=st.floats(-10, 10), frame=st.floats(-1, 1))
def test_state_is_normalised(J, gamma, frame):
    assert norm_phi(gk.gk_coefficients(gk.GKState(J, gamma, frame))) == pytest.approx(1.0, abs=1e-12)


def test_truncation_tail_is_negligible():
    for J in (0.5, 10.0, 1e3):
        st_ = gk.GKState(J)
        n = st_.size
        log_next = 0.5 * (n * math.log(J) - log_rho(n)) + math.log(gk.normalization_series(J))
        assert log_next < math.log(1e-15)


def test_evaluate_state_brute_force():
    J, gamma, frame, x = 2.0, 0.7, 0.3, 0.1
    mpmath.mp.dps = 40
    total = mpmath.mpc(0)
    rho = mpmath.mpf(1)
    z = mpmath.expj(frame) * x
    for n in range(200):
        if n:
            rho *= n * (n + 2)
        j = n + 1
        basis = mpmath.sqrt(2 / mpmath.pi) * (mpmath.sin(j * z) if j % 2 == 0 else mpmath.cos(j * z))
        total += mpmath.mpf(J) ** (mpmath.mpf(n) / 2) / mpmath.sqrt(rho) * mpmath.expj(-n * (n + 2) * gamma) * basis
    total *= mp_series(J, DEFAULT_WELL) ** mpmath.mpf(-0.5)
    res = gk.evaluate_state(gk.GKState(J, gamma, frame), x)
    assert abs(res.value - complex(total)) < 1e-10
    assert res.tail_bound < 1e-10


def test_evaluate_state_outside_well():
    with pytest.raises(DomainError):
        gk.evaluate_state(gk.GKState(1.0), 2.0)


def test_bad_action():
    for J in (-1.0, math.inf, math.nan):
        with pytest.raises(DomainError):
            gk.GKState(J)


# ------------------------------------------------------------------ measure and moments


def test_density_moment_examples():
    assert gk.density_moment(0).value == pytest.approx(1.0, rel=1e-6)
    assert gk.density_moment(1).value == pytest.approx(3.0, rel=1e-6)
    assert gk.density_moment(5).value == pytest.approx(302400.0, rel=1e-6)
    with pytest.raises(DomainError):
        gk.measure_density(0.0)


def test_density_against_scipy():
    import scipy.special as sp

    for L in (1.0, math.pi, 5.0):
        cfg = WellConfig(L)
        for J in (1e-3, 0.3, 4.0, 90.0):
            ref = (L / math.pi) ** 4 * J * sp.kv(2, 2 * L * math.sqrt(J) / math.pi)
            assert gk.measure_density(J, cfg) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("cfg", WELLS)
def test_verify_moments(cfg):
    reps = gk.verify_moments(10, cfg)
    assert [r.n for r in reps] == list(range(11))
    for r in reps:
        assert r.error is None
        assert r.relative_error == pytest.approx(abs(r.quadrature_value - r.target) / r.target)
        assert r.passed(1e-6)


def test_printed_density_grows_like_four_to_the_n():
    reps = gk.verify_moments(10, printed=True)
    for r in reps:
        assert r.quadrature_value / r.target == pytest.approx(4.0**r.n, rel=1e-6)
    assert not any(r.passed(1e-6) for r in reps[1:])


def test_mellin_closed_form():
    for cfg in WELLS:
        for n in range(12):
            assert gk.log_density_moment_closed(n, cfg) == pytest.approx(log_rho(n, cfg), abs=1e-12)


# ------------------------------------------------------------------ resolution of identity


def test_resolution_examples():
    e1 = CoefficientVector.basis(1, 1, 0.3)
    assert abs(gk.resolution_check(e1, e1) - 1) < 1e-6
    e2 = CoefficientVector.basis(2, 3, 0.3)
    assert abs(gk.resolution_check(e1, e2)) < 1e-6


def test_resolution_random_pairs():
    rng = np.random.default_rng(21)
    for _ in range(20):
        f, g = random_vector(rng, 6, 0.3), random_vector(rng, 6, 0.3)
        assert abs(gk.resolution_check(f, g) - inner_phi(f, g)) < 1e-6 * norm_phi(f) * norm_phi(g)


def test_bohr_mean_numerically():
    # the long-time gamma average of e^{i (eps_n - eps_m) gamma} is the Kronecker delta
    gam = np.linspace(-2000.0, 2000.0, 400_001)
    for n, m in [(0, 0), (1, 1), (0, 1), (2, 3)]:
        avg = np.mean(np.exp(1j * (shifted_energy(n) - shifted_energy(m)) * gam))
        assert abs(avg - (1.0 if n == m else 0.0)) < 1e-3
        assert abs(gk.bohr_phase(n, m, 0.4) - cmath.exp(1j * (shifted_energy(n) - shifted_energy(m)) * 0.4)) < 1e-14


# ------------------------------------------------------------------ ladder operators and dynamics


def test_lowering_examples():
    g = 0.7
    assert np.all(gk.lowering_apply(CoefficientVector.basis(1, 1, 0.3), g).coeffs == 0)
    low = gk.lowering_apply(CoefficientVector.basis(2, 2, 0.3), g)
    assert low.coeffs[0] == pytest.approx(math.sqrt(3) * cmath.exp(3j * g), rel=1e-15)
    up = gk.raising_apply(CoefficientVector.basis(1, 1, 0.3), g)
    assert up.coeffs[1] == pytest.approx(math.sqrt(3) * cmath.exp(-3j * g), rel=1e-15)
    assert up.coeffs[0] == 0


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), gamma=st.floats(-5, 5))
def test_ladder_adjointness(seed, gamma):
    rng = np.random.default_rng(seed)
    f, g = random_vector(rng, 7, 0.2), random_vector(rng, 8, 0.2)
    lhs = inner_phi(gk.lowering_apply(g, gamma), f)
    rhs = inner_phi(g, gk.raising_apply(f, gamma))
    assert abs(lhs - rhs) < 1e-10 * norm_phi(f) * norm_phi(g)


def test_commutator():
    assert gk.commutator_diagonal(0) == pytest.approx(3.0, rel=1e-15)
    assert gk.commutator_diagonal(1) == pytest.approx(5.0, rel=1e-15)
    for cfg in WELLS:
        for n in range(11):
            assert gk.commutator_diagonal(n, cfg) == cfg.unit_energy * (2 * n + 3)
            assert gk.commutator_diagonal(n, cfg) == pytest.approx(
                shifted_energy(n + 1, cfg) - shifted_energy(n, cfg), rel=1e-13)
            assert abs(gk.commutator_expectation(n, 0.4, cfg) - gk.commutator_diagonal(n, cfg)) < 1e-12 * cfg.unit_energy * (2 * n + 3)
    assert all(gk.commutator_diagonal(n) != 1 for n in range(11))


@pytest.mark.parametrize("J", [0.5, 2.5, 10.0])
def test_action_identity(J):
    assert gk.action_expectation(gk.GKState(J, 0.9, 0.3)) == pytest.approx(J, rel=1e-8)


def test_action_at_zero():
    assert gk.action_expectation(gk.GKState(0.0)) == 0.0


def test_stability():
    st_ = gk.GKState(3.0, 0.2, 0.3)
    assert gk.stability_check(st_, 0.0) == 0.0
    assert gk.stability_check(st_, 1.7) < 1e-13


def test_stability_full_period_of_first_level():
    st_ = gk.GKState(3.0, 0.2, 0.0)
    t = 2 * math.pi / shifted_energy(1)
    c0 = gk.gk_coefficients(st_)
    ct = apply(evolution(t, shifted=True), c0)
    assert ct.coeffs[1] == pytest.approx(c0.coeffs[1], rel=1e-13)
    # eps_2 t = 16 pi / 3 is not a multiple of 2 pi
    assert abs(ct.coeffs[2] - c0.coeffs[2]) > 1e-3 * abs(c0.coeffs[2])


@pytest.mark.parametrize("J", [0.5, 2.0, 10.0])
def test_lowering_eigenstate(J):
    assert gk.lowering_residual(gk.GKState(J, 0.4, 0.3)) < 1e-8
