"""Composite Gauss-Legendre quadrature on finite and semi-infinite intervals.

Integrands are called once per panel sweep with a whole array of nodes, so
they must accept (and return) numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

from .errors import QuadratureError, TailBoundError

DEFAULT_ORDER = 20
DEFAULT_TOL = 1e-10
MAX_PANELS = 1 << 14
EXPONENT_CAP = 700.0


@lru_cache(maxsize=64)
def _legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre nodes/weights on [-1, 1], applied on ``panels`` equal panels."""

    order: int
    panels: int = 1
    nodes: np.ndarray = field(repr=False, compare=False, default=None)
    weights: np.ndarray = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        if self.order < 2:
            raise ValueError(f"quadrature order must be >= 2, got {self.order}")
        if self.panels < 1:
            raise ValueError(f"panel count must be >= 1, got {self.panels}")
        if self.nodes is None:
            x, w = _legendre(self.order)
            object.__setattr__(self, "nodes", x)
            object.__setattr__(self, "weights", w)

    def with_panels(self, panels: int) -> "QuadratureRule":
        return QuadratureRule(self.order, panels, self.nodes, self.weights)

    def points(self, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
        """Flattened abscissae and weights of the composite rule on [a, b]."""
        edges = np.linspace(a, b, self.panels + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        x = (mid[:, None] + half[:, None] * self.nodes[None, :]).ravel()
        w = (half[:, None] * self.weights[None, :]).ravel()
        return x, w

    def apply(self, f: Callable, a: float, b: float):
        """One pass of the composite rule, no acceptance test."""
        x, w = self.points(a, b)
        return np.sum(w * f(x))


def make_rule(order: int = DEFAULT_ORDER, panels: int = 1) -> QuadratureRule:
    return QuadratureRule(order, panels)


def _doubling(f, a, b, rule, tol, max_panels):
    prev = None
    panels = rule.panels
    while True:
        x, w = rule.with_panels(panels).points(a, b)
        fx = f(x)
        val = np.sum(w * fx)
        scale = np.sum(w * np.abs(fx))
        if prev is not None and abs(val - prev) <= tol * max(abs(val), scale):
            return val
        if panels >= max_panels:
            raise QuadratureError(
                f"no convergence on [{a}, {b}] with {panels} panels: "
                f"last change {abs(val - prev) if prev is not None else float('nan'):.3e}"
            )
        prev = val
        panels *= 2


def integrate_finite(
    f: Callable,
    a: float,
    b: float,
    rule: QuadratureRule | None = None,
    tol: float = DEFAULT_TOL,
    max_panels: int = MAX_PANELS,
) -> complex:
    """Integrate ``f`` over ``[a, b]`` with panel doubling.

    The result is accepted once doubling the panel count moves it by less than
    ``tol`` relative to ``max(|I|, integral of |f|)``; the second term keeps
    the test meaningful for integrals that cancel to zero.

    Raises
    ------
    QuadratureError
        If the doubling test still fails at ``max_panels``.
    """
    if not a < b:
        raise ValueError(f"integrate_finite requires a < b, got [{a}, {b}]")
    rule = rule or make_rule(DEFAULT_ORDER, 2)
    val = _doubling(f, a, b, rule, tol, max_panels)
    return complex(val)


@dataclass(frozen=True)
class SemiInfinitePolicy:
    """Cutoff policy for integrals over ``[0, inf)`` after the substitution J = u**2.

    The transformed integrand ``h(u) = 2 u g(u**2)`` must be bounded by
    ``C u**power exp(-rate u)``. Then for ``rate * u_max > power`` the tail
    beyond ``u_max`` is at most ``h(u_max) / (rate - power / u_max)``.
    """

    rate: float
    power: float = 0.0
    tol: float = 1e-12
    quad_tol: float = DEFAULT_TOL
    order: int = DEFAULT_ORDER
    panels: int = 8
    exponent_cap: float = EXPONENT_CAP

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError("decay rate must be positive")


class SemiInfiniteResult(NamedTuple):
    value: float
    tail_bound: float
    u_max: float


def integrate_semiinfinite_moment(g: Callable, policy: SemiInfinitePolicy) -> SemiInfiniteResult:
    """``int_0^inf g(J) dJ`` via ``J = u**2`` on ``[0, u_max]`` plus a tail bound.

    ``u_max`` starts where the exponential factor has decayed by ``e^-40`` past
    the polynomial peak and grows until ``tail_bound <= tol * |value|``.

    Raises
    ------
    TailBoundError
        If ``rate * u_max`` would have to exceed ``policy.exponent_cap``.
    """
    b, p = policy.rate, policy.power

    def h(u):
        return 2.0 * u * g(u * u)

    rule = make_rule(policy.order, policy.panels)
    exponent = max(40.0, 2.0 * p + 40.0)
    while True:
        exponent = min(exponent, policy.exponent_cap)
        u_max = exponent / b
        value = float(np.real(_doubling(h, 0.0, u_max, rule, policy.quad_tol, MAX_PANELS)))
        h_end = abs(float(np.real(h(np.array([u_max]))[0])))
        tail = h_end / (b - p / u_max) if b * u_max > p else np.inf
        if tail <= policy.tol * abs(value):
            return SemiInfiniteResult(value, tail, u_max)
        if exponent >= policy.exponent_cap:
            raise TailBoundError(
                f"tail bound {tail:.3e} exceeds {policy.tol:.1e} * |value| at rate*u_max = {exponent}"
            )
        exponent *= 1.5
