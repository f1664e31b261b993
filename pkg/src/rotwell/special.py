r"""Special functions: log-gamma and modified Bessel functions of integer order.

Bessel functions accept scalars or arrays and come in two flavours: the plain
value and its natural logarithm. The log variants never overflow and are what
the coherent-state code uses for large arguments.

* :math:`I_n(x)`: power series for ``x < 30``, Hankel asymptotic expansion
  above.
* :math:`K_n(x)`: logarithmic power series for :math:`K_0, K_1` when ``x < 2``,
  Steed's continued fraction (Temme's variant as in Numerical Recipes
  ``bessik``) for ``x >= 2``, then the upward recurrence
  :math:`K_{n+1} = K_{n-1} + (2n/x) K_n`, which is stable for K.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

EULER_GAMMA = 0.57721566490153286061
MAX_ORDER = 10

I_SERIES_SWITCH = 30.0
K_SERIES_SWITCH = 2.0

_EPS = 1e-17
_MAXIT = 10_000


def ln_gamma(x: float) -> float:
    """Natural log of the Euler gamma function for ``x > 0``."""
    if not x > 0:
        raise DomainError(f"ln_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def _check_order(order: int) -> None:
    if int(order) != order or order < 0 or order > MAX_ORDER:
        raise DomainError(f"Bessel order must be an integer in [0, {MAX_ORDER}], got {order!r}")


def _wrap(x_in, out):
    return float(out) if np.ndim(x_in) == 0 else out


# ---------------------------------------------------------------- I_n

def _log_i_series(n: int, x: np.ndarray) -> np.ndarray:
    # sum_k (x/2)^{2k+n} / (k! (k+n)!), factored as t0 * sum_k r_k
    q = 0.25 * x * x
    term = np.ones_like(x)
    total = np.ones_like(x)
    k = 0
    while True:
        k += 1
        term = term * q / (k * (k + n))
        total = total + term
        if np.all(term <= _EPS * total) or k > _MAXIT:
            break
    if n == 0:
        return np.log(total)
    with np.errstate(divide="ignore"):
        return n * np.log(0.5 * x) - math.lgamma(n + 1) + np.log(total)


def _log_i_asymptotic(n: int, x: np.ndarray) -> np.ndarray:
    mu = 4.0 * n * n
    term = np.ones_like(x)
    total = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    # terms may grow while (2k-1)^2 < mu; past that, stop at the smallest term
    k_turn = 0.5 * (math.sqrt(mu) + 1.0)
    for k in range(1, 400):
        new = -term * (mu - (2 * k - 1) ** 2) / (8.0 * k * x)
        if k > k_turn:
            active &= np.abs(new) < np.abs(term)
        term = np.where(active, new, 0.0)
        total = total + term
        active &= np.abs(term) > _EPS * np.abs(total)
        if not np.any(active):
            break
    return x - 0.5 * np.log(2.0 * np.pi * x) + np.log(total)


def log_bessel_i(order: int, x):
    """``ln I_order(x)`` for ``x >= 0``; ``-inf`` where ``I_order(x) = 0``."""
    _check_order(order)
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0) or np.any(np.isnan(xa)):
        raise DomainError("bessel_i requires x >= 0")
    xa = np.atleast_1d(xa)
    out = np.empty_like(xa)
    small = xa < I_SERIES_SWITCH
    if np.any(small):
        out[small] = _log_i_series(order, xa[small])
    if np.any(~small):
        out[~small] = _log_i_asymptotic(order, xa[~small])
    return _wrap(x, out.reshape(np.shape(x)))


def bessel_i(order: int, x):
    """Modified Bessel function of the first kind, ``I_order(x)``, ``x >= 0``."""
    return _wrap(x, np.exp(log_bessel_i(order, x)))


def bessel_i_series(order: int, x: float) -> float:
    """Power-series branch only; exposed for branch-agreement checks."""
    _check_order(order)
    return float(np.exp(_log_i_series(order, np.atleast_1d(float(x))))[0])


def bessel_i_asymptotic(order: int, x: float) -> float:
    """Large-argument branch only; exposed for branch-agreement checks."""
    _check_order(order)
    return float(np.exp(_log_i_asymptotic(order, np.atleast_1d(float(x))))[0])


# ---------------------------------------------------------------- K_n

def _k01_series(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """K_0 and K_1 from their logarithmic power series; accurate for x <= 2."""
    q = 0.25 * x * x
    lg = np.log(0.5 * x)
    # K_0 = -(ln(x/2) + gamma) I_0 + sum_{k>=1} H_k q^k / (k!)^2
    # K_1 = 1/x + ln(x/2) I_1 - (x/4) sum_{k>=0} (psi(k+1) + psi(k+2)) q^k / (k!(k+1)!)
    t0 = np.ones_like(x)        # q^k/(k!)^2
    t1 = np.ones_like(x)        # q^k/(k!(k+1)!)
    i0 = np.ones_like(x)
    i1 = np.ones_like(x)
    s0 = np.zeros_like(x)
    harm = 0.0
    s1 = (-2.0 * EULER_GAMMA + 1.0) * t1
    k = 0
    while True:
        k += 1
        t0 = t0 * q / (k * k)
        t1 = t1 * q / (k * (k + 1))
        harm += 1.0 / k
        harm_next = harm + 1.0 / (k + 1)
        i0 = i0 + t0
        i1 = i1 + t1
        s0 = s0 + harm * t0
        s1 = s1 + (-2.0 * EULER_GAMMA + harm + harm_next) * t1
        if np.all(harm_next * t1 <= _EPS * np.abs(s1)) and np.all(t0 <= _EPS * i0) or k > _MAXIT:
            break
    i1 = 0.5 * x * i1
    k0 = -(lg + EULER_GAMMA) * i0 + s0
    k1 = 1.0 / x + lg * i1 - 0.25 * x * s1
    return k0, k1


def _k01_scaled_cf2(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """e^x K_0(x) and e^x K_1(x) by Steed's continued fraction; for x >= 2."""
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = d.copy()
    delh = d.copy()
    q1 = np.zeros_like(x)
    q2 = np.ones_like(x)
    a1 = 0.25
    q = np.full_like(x, a1)
    c = np.full_like(x, a1)
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, _MAXIT):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q = q + c * qnew
        b = b + 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h = h + delh
        dels = q * delh
        s = s + dels
        if np.all(np.abs(dels) < _EPS * np.abs(s)):
            break
    h = a1 * h
    k0 = np.sqrt(np.pi / (2.0 * x)) / s
    k1 = k0 * (x + 0.5 - h) / x
    return k0, k1


def _log_k(order: int, x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    small = x < K_SERIES_SWITCH
    for mask, branch, shift in (
        (small, _k01_series, np.zeros_like(x)),
        (~small, _k01_scaled_cf2, x),
    ):
        if not np.any(mask):
            continue
        xs = x[mask]
        km, k = branch(xs)
        if order == 0:
            val = km
        else:
            for n in range(1, order):
                km, k = k, km + (2.0 * n / xs) * k
            val = k
        out[mask] = np.log(val) - shift[mask]
    return out


def log_bessel_k(order: int, x):
    """``ln K_order(x)`` for ``x > 0``; finite far beyond the underflow of K."""
    _check_order(order)
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa > 0)):
        raise DomainError("bessel_k requires x > 0")
    out = _log_k(order, np.atleast_1d(xa))
    return _wrap(x, out.reshape(np.shape(x)))


def bessel_k(order: int, x):
    """Modified Bessel function of the second kind, ``K_order(x)``, ``x > 0``."""
    return _wrap(x, np.exp(log_bessel_k(order, x)))


def bessel_k_series(order: int, x: float) -> float:
    """Small-argument branch (series plus recurrence) evaluated at any x."""
    _check_order(order)
    km, k = _k01_series(np.atleast_1d(float(x)))
    if order == 0:
        return float(km[0])
    for n in range(1, order):
        km, k = k, km + (2.0 * n / x) * k
    return float(k[0])


def bessel_k_cf2(order: int, x: float) -> float:
    """Continued-fraction branch (plus recurrence) evaluated at any x >= ~1."""
    _check_order(order)
    km, k = _k01_scaled_cf2(np.atleast_1d(float(x)))
    if order == 0:
        return float(km[0] * math.exp(-x))
    for n in range(1, order):
        km, k = k, km + (2.0 * n / x) * k
    return float(k[0] * math.exp(-x))
