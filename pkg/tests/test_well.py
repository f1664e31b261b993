import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotwell.errors import DomainError
from rotwell.rotation import inner_h0
from rotwell.well import (
    DEFAULT_WELL,
    WellConfig,
    energy,
    log_rho,
    log_rho_closed,
    log_rhos,
    phi,
    phi_second_derivative,
    physical_index,
    shifted_energies,
    shifted_energy,
    shifted_index,
)

WELLS = [WellConfig(1.0), DEFAULT_WELL, WellConfig(2 * math.pi)]


def test_phi_examples():
    assert phi(1, 0.0) == pytest.approx(math.sqrt(2 / math.pi), rel=1e-15)
    assert phi(2, 0.0) == 0.0


@pytest.mark.parametrize("cfg", WELLS)
@pytest.mark.parametrize("j", range(1, 13))
def test_phi_vanishes_at_walls(cfg, j):
    h = cfg.half_width
    assert abs(phi(j, h, cfg)) < 1e-14
    assert abs(phi(j, -h, cfg)) < 1e-14


def test_phi_parity():
    x = np.linspace(-1.2, 1.2, 9)
    for j in range(1, 9):
        sign = 1 if j % 2 else -1
        np.testing.assert_allclose(phi(j, -x), sign * phi(j, x), atol=1e-15)


def test_phi_outside_well():
    with pytest.raises(DomainError):
        phi(1, 1.6)
    with pytest.raises(DomainError):
        phi(1, np.array([0.0, -2.0]))
    with pytest.raises(DomainError):
        phi(0, 0.0)


@pytest.mark.parametrize("j, L, expected", [(1, math.pi, 1.0), (2, math.pi, 4.0), (3, 2 * math.pi, 2.25)])
def test_energy_examples(j, L, expected):
    assert energy(j, WellConfig(L)) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("cfg", WELLS)
def test_eigen_relation_by_finite_differences(cfg):
    # central second difference as an independent oracle for -phi'' = E phi
    h = 1e-4
    x = np.linspace(-0.45 * cfg.L, 0.45 * cfg.L, 13)
    for j in range(1, 7):
        fd = (phi(j, x + h, cfg) - 2 * phi(j, x, cfg) + phi(j, x - h, cfg)) / h**2
        scale = energy(j, cfg) * math.sqrt(2 / cfg.L)
        np.testing.assert_allclose(-fd, energy(j, cfg) * phi(j, x, cfg), atol=1e-5 * scale)
        np.testing.assert_allclose(-phi_second_derivative(j, x, cfg), energy(j, cfg) * phi(j, x, cfg),
                                   atol=1e-12 * scale)


@pytest.mark.parametrize("cfg", WELLS)
def test_orthonormality(cfg):
    n = 12
    gram = np.array([[inner_h0(lambda x: phi(j, x, cfg), lambda x: phi(k, x, cfg), cfg) for k in range(1, n + 1)]
                     for j in range(1, n + 1)])
    np.testing.assert_allclose(gram, np.eye(n), atol=1e-12)


def test_shifted_energy_examples():
    assert shifted_energy(0) == 0.0
    assert shifted_energy(1) == pytest.approx(3.0, rel=1e-15)
    assert shifted_energy(2) == pytest.approx(8.0, rel=1e-15)
    with pytest.raises(DomainError):
        shifted_energy(-1)


@pytest.mark.parametrize("cfg", WELLS)
def test_shifted_energy_is_energy_difference(cfg):
    for k in range(30):
        assert shifted_energy(k, cfg) == pytest.approx(energy(k + 1, cfg) - energy(1, cfg), rel=1e-13, abs=1e-13)
    e = shifted_energies(30, cfg)
    assert np.all(np.diff(e) > 0) and e[0] == 0.0


def test_index_conversions():
    assert shifted_index(1) == 0 and physical_index(0) == 1
    for j in range(1, 50):
        assert physical_index(shifted_index(j)) == j
    with pytest.raises(DomainError):
        shifted_index(0)
    with pytest.raises(DomainError):
        physical_index(-1)


def test_log_rho_examples():
    assert log_rho(0) == 0.0
    assert log_rho(1) == pytest.approx(math.log(3), rel=1e-15)
    assert log_rho(2) == pytest.approx(math.log(24), rel=1e-15)
    with pytest.raises(DomainError):
        log_rho(-1)


@settings(max_examples=50, deadline=None)
@given(n=st.integers(0, 300), L=st.floats(0.1, 50.0))
def test_log_rho_closed_form(n, L):
    cfg = WellConfig(L)
    assert log_rho(n, cfg) == pytest.approx(log_rho_closed(n, cfg), rel=1e-12, abs=1e-12)


def test_log_rho_past_overflow():
    # rho_n itself overflows near n = 85 at L = pi
    assert math.isfinite(log_rho(200))
    assert log_rho(200) > math.log(np.finfo(float).max)
    np.testing.assert_allclose(log_rhos(50), [log_rho(n) for n in range(50)], rtol=1e-13, atol=1e-13)


def test_well_config_validation():
    for bad in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(ValueError):
            WellConfig(bad)
    with pytest.raises(ValueError):
        WellConfig(1.0, tol=0.0)
