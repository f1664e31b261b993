import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import polynomial as P

from rotwell.errors import QuadratureError, TailBoundError
from rotwell.quadrature import (
    SemiInfinitePolicy,
    integrate_finite,
    integrate_semiinfinite_moment,
    make_rule,
)
from rotwell.well import phi


def test_two_point_rule():
    r = make_rule(2)
    np.testing.assert_allclose(np.sort(r.nodes), [-1 / math.sqrt(3), 1 / math.sqrt(3)], rtol=1e-15)
    np.testing.assert_allclose(r.weights, [1.0, 1.0], rtol=1e-15)
    assert r.apply(lambda x: x**2, -1.0, 1.0) == pytest.approx(2.0 / 3.0, abs=1e-15)


def test_sine_composite():
    r = make_rule(16, 4)
    assert r.apply(np.sin, 0.0, math.pi) == pytest.approx(2.0, abs=1e-12)


def test_rule_is_immutable():
    r = make_rule(5)
    with pytest.raises(Exception):
        r.nodes[0] = 0.0
    with pytest.raises(Exception):
        r.order = 3


@settings(max_examples=100, deadline=None)
@given(m=st.integers(1, 20), seed=st.integers(0, 2**32 - 1))
def test_gauss_exactness(m, seed):
    # degree 2m - 1 polynomials are integrated exactly by an m-point rule
    rng = np.random.default_rng(seed)
    c = rng.normal(size=2 * m)
    a, b = -0.7, 1.3
    anti = P.polyint(c)
    exact = P.polyval(b, anti) - P.polyval(a, anti)
    got = make_rule(max(m, 2)).apply(lambda x: P.polyval(x, c), a, b)
    scale = max(abs(exact), np.sum(np.abs(c)) * 2.0 ** (2 * m))
    assert abs(got - exact) <= 1e-12 * scale


def test_integrate_finite_examples():
    assert integrate_finite(lambda x: np.ones_like(x), 0.0, 1.0) == pytest.approx(1.0, abs=1e-15)
    h = math.pi / 2
    assert integrate_finite(lambda x: phi(1, x) ** 2, -h, h).real == pytest.approx(1.0, abs=1e-12)
    val = integrate_finite(lambda x: np.exp(1j * x), 0.0, 1.0)
    assert abs(val - (math.sin(1) + 1j * (1 - math.cos(1)))) < 1e-12


def test_integrate_finite_nonconvergence():
    # a jump never passes the doubling test at tight tolerance
    with pytest.raises(QuadratureError):
        integrate_finite(lambda x: np.where(x < 1 / math.pi, 0.0, 1.0), 0.0, 1.0, tol=1e-14, max_panels=64)


def test_integrate_finite_bad_interval():
    with pytest.raises(ValueError):
        integrate_finite(np.sin, 1.0, 0.0)


@pytest.mark.parametrize("power, expected", [(0, 1.0), (1, 1.0), (4, 24.0)])
def test_semiinfinite_gamma_moments(power, expected):
    res = integrate_semiinfinite_moment(lambda J: J**power * np.exp(-J), SemiInfinitePolicy(rate=1.0, power=power))
    assert res.value == pytest.approx(expected, rel=1e-10)
    assert 0 <= res.tail_bound <= 1e-12 * res.value


def test_semiinfinite_tail_bound_exceeded():
    # decay rate claimed is far too fast for the cap to help
    slow = lambda J: np.exp(-1e-3 * np.sqrt(J))  # noqa: E731
    with pytest.raises(TailBoundError):
        integrate_semiinfinite_moment(slow, SemiInfinitePolicy(rate=1e-3, exponent_cap=5.0))
