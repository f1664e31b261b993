"""Gazeau-Klauder coherent states over the rotated well.

The states live on the shifted spectrum ``eps_n = (pi/L)^2 n (n + 2)`` with
``psi_n = phi_{n+1}^(phi)``::

    Psi(J, gamma) = N(J) sum_n J^{n/2} exp(-i eps_n gamma) / sqrt(rho_n) psi_n

All magnitudes are assembled in log space; ``rho_n`` grows like ``(n!)^2``.

Two closed forms ride along with the series and are checked against it:

* ``sum_n J^n / rho_n = 2 pi^2 / (J L^2) * I_2(2 L sqrt(J) / pi)``
* ``rho(J) = (L / pi)^4 J K_2(2 L sqrt(J) / pi)``, whose moments are ``rho_n``.

The ``printed=True`` variants use argument ``L sqrt(J) / pi`` with prefactors
``8 pi^2 / (J L^2)`` and ``(L / 2 pi)^4``. Those differ from the series by a
factor ``4^n`` per term and are kept as negative controls.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import DomainError, QuadratureError
from .hamiltonian import apply, evolution, shifted_hamiltonian
from .quadrature import SemiInfinitePolicy, integrate_semiinfinite_moment
from .rotation import CoefficientVector, RotatedBasisFunction, _same_frame, inner_phi, reconstruct
from .special import ln_gamma, log_bessel_i, log_bessel_k
from .well import DEFAULT_WELL, WellConfig, log_rho, log_rhos, shifted_energies, shifted_energy

SERIES_EPS = 1e-16
MAX_TERMS = 400


def _log_terms(J: float, n: int, cfg: WellConfig) -> np.ndarray:
    """``ln(J^k / rho_k)`` for ``k = 0..n-1``."""
    k = np.arange(n, dtype=float)
    lj = math.log(J) if J > 0 else -math.inf
    with np.errstate(invalid="ignore"):
        out = k * lj - log_rhos(n, cfg)
    out[0] = 0.0
    return out


def _logsumexp(a: np.ndarray) -> float:
    m = float(np.max(a))
    return m + math.log(float(np.sum(np.exp(a - m))))


def truncation_order(J: float, cfg: WellConfig = DEFAULT_WELL, cap: int = MAX_TERMS) -> int:
    """Number of retained states: the first ``N`` whose amplitude falls below
    ``1e-16`` times the running norm, capped at ``cap``."""
    if J < 0:
        raise DomainError(f"action variable must be >= 0, got {J}")
    if J == 0:
        return 1
    lj = math.log(J)
    log_sq_norm = 0.0
    lr = 0.0
    for n in range(1, cap):
        lr += math.log(shifted_energy(n, cfg))
        log_amp = 0.5 * (n * lj - lr)
        if log_amp < math.log(SERIES_EPS) + 0.5 * log_sq_norm:
            return n
        log_sq_norm = float(np.logaddexp(log_sq_norm, 2 * log_amp))
    return cap


def log_series_sum(J: float, cfg: WellConfig = DEFAULT_WELL, N: int | None = None) -> float:
    """``ln sum_{n<N} J^n / rho_n``; ``N`` is extended automatically when omitted.

    Auto-extension stops once the last term is below ``1e-16`` of the partial sum.
    """
    if J < 0:
        raise DomainError(f"action variable must be >= 0, got {J}")
    if J == 0:
        return 0.0
    if N is not None:
        return _logsumexp(_log_terms(J, N, cfg))
    lj = math.log(J)
    total, lr = 0.0, 0.0
    for n in range(1, 10 * MAX_TERMS):
        lr += math.log(shifted_energy(n, cfg))
        term = n * lj - lr
        total = float(np.logaddexp(total, term))
        if term < total + math.log(SERIES_EPS):
            break
    return total


def normalization_series(J: float, cfg: WellConfig = DEFAULT_WELL, N: int | None = None) -> float:
    """``N(J) = (sum_n J^n / rho_n)^{-1/2}`` by direct summation."""
    return math.exp(-0.5 * log_series_sum(J, cfg, N))


def log_series_closed(J: float, cfg: WellConfig = DEFAULT_WELL, printed: bool = False) -> float:
    """``ln sum_n J^n / rho_n`` through the Bessel ``I_2`` closed form."""
    if not J > 0:
        raise DomainError("closed form needs J > 0; N(0) = 1 from the series")
    L = cfg.L
    if printed:
        return math.log(8 * math.pi**2 / (J * L * L)) + log_bessel_i(2, L * math.sqrt(J) / math.pi)
    return math.log(2 * math.pi**2 / (J * L * L)) + log_bessel_i(2, 2 * L * math.sqrt(J) / math.pi)


def normalization_closed(J: float, cfg: WellConfig = DEFAULT_WELL, printed: bool = False) -> float:
    return math.exp(-0.5 * log_series_closed(J, cfg, printed))


@dataclass(frozen=True)
class GKState:
    """Coherent-state parameters: action ``J >= 0``, angle ``gamma``, rotated frame.

    ``N`` is the number of retained levels ``psi_0 .. psi_{N-1}``; by default it
    comes from :func:`truncation_order`.
    """

    J: float
    gamma: float = 0.0
    frame: float = 0.0
    N: int | None = None
    cfg: WellConfig = field(default=DEFAULT_WELL, repr=False)

    def __post_init__(self):
        if not (self.J >= 0 and math.isfinite(self.J)):
            raise DomainError(f"action variable must be finite and >= 0, got {self.J!r}")
        if self.N is not None and self.N < 1:
            raise DomainError(f"truncation must keep at least one level, got {self.N}")

    @property
    def size(self) -> int:
        return self.N if self.N is not None else truncation_order(self.J, self.cfg)

    def at(self, gamma: float) -> "GKState":
        return GKState(self.J, gamma, self.frame, self.N, self.cfg)


def gk_coefficients(state: GKState) -> CoefficientVector:
    n = state.size
    logs = _log_terms(state.J, n, state.cfg)
    # normalising over the retained terms keeps ||c|| = 1 exactly
    mags = np.exp(0.5 * (logs - _logsumexp(logs)))
    phases = np.exp(-1j * shifted_energies(n, state.cfg) * state.gamma)
    return CoefficientVector(state.frame, mags * phases)


class StateValue(NamedTuple):
    value: complex
    tail_bound: float


def evaluate_state(state: GKState, x) -> StateValue:
    """``Psi(J, gamma; x)`` with a bound on the truncation error.

    The bound is the sum of dropped amplitudes times
    ``sqrt(2/L) exp(j pi |sin phi| / 2)``, the largest modulus of
    ``phi_j^(phi)`` on the well.
    """
    c = gk_coefficients(state)
    value = reconstruct(c, x, state.cfg)
    n = len(c)
    # dropped amplitudes decay faster than geometrically; sum a generous block
    logs = _log_terms(state.J, n + 40, state.cfg)[n:] - log_series_sum(state.J, state.cfg)
    j = np.arange(n + 1, n + 41, dtype=float)
    growth = 0.5 * j * math.pi * abs(math.sin(state.frame))
    tail = float(np.sum(np.exp(0.5 * logs + growth))) * math.sqrt(2.0 / state.cfg.L)
    return StateValue(value, tail)


# ------------------------------------------------------------------ measure and moments

def log_measure_density(J, cfg: WellConfig = DEFAULT_WELL, printed: bool = False):
    """``ln rho(J)``; assembled in log space so large ``J`` never underflows."""
    Ja = np.asarray(J, dtype=float)
    if np.any(~(Ja > 0)):
        raise DomainError("measure density needs J > 0")
    L = cfg.L
    if printed:
        pref, arg = 4 * math.log(L / (2 * math.pi)), L / math.pi
    else:
        pref, arg = 4 * math.log(L / math.pi), 2 * L / math.pi
    out = pref + np.log(Ja) + log_bessel_k(2, arg * np.sqrt(Ja))
    return float(out) if np.ndim(J) == 0 else out


def measure_density(J, cfg: WellConfig = DEFAULT_WELL, printed: bool = False):
    """``rho(J) = (L/pi)^4 J K_2(2 L sqrt(J) / pi)``, the weight solving the moment problem."""
    out = np.exp(log_measure_density(J, cfg, printed))
    return float(out) if np.ndim(J) == 0 else out


def log_density_moment_closed(n: int, cfg: WellConfig = DEFAULT_WELL, printed: bool = False) -> float:
    """``ln int_0^inf J^n rho(J) dJ`` from the Mellin transform of ``K_nu``.

    With ``J = t^2``, ``int_0^inf t^(mu-1) K_nu(a t) dt =
    2^(mu-2) a^(-mu) Gamma((mu+nu)/2) Gamma((mu-nu)/2)`` applies with
    ``mu = 2n + 4`` and ``nu = 2``.
    """
    L = cfg.L
    if printed:
        log_pref, a = 4 * math.log(L / (2 * math.pi)), L / math.pi
    else:
        log_pref, a = 4 * math.log(L / math.pi), 2 * L / math.pi
    mu = 2 * n + 4
    return (
        log_pref + math.log(2.0) + (mu - 2) * math.log(2.0) - mu * math.log(a)
        + ln_gamma(0.5 * (mu + 2)) + ln_gamma(0.5 * (mu - 2))
    )


def moment_policy(n: int, cfg: WellConfig = DEFAULT_WELL, printed: bool = False, tol: float = 1e-12) -> SemiInfinitePolicy:
    # after J = u^2 the integrand is 2 u^(2n+3) K_2(a u) times a constant
    a = (1.0 if printed else 2.0) * cfg.L / math.pi
    return SemiInfinitePolicy(rate=a, power=2 * n + 3, tol=tol, quad_tol=1e-12)


def density_moment(n: int, cfg: WellConfig = DEFAULT_WELL, printed: bool = False, tol: float = 1e-12):
    """``int_0^inf J^n rho(J) dJ`` by quadrature; returns a ``SemiInfiniteResult``."""
    if n < 0:
        raise DomainError(f"moment index must be >= 0, got {n}")

    def g(J):
        return np.exp(n * np.log(J) + log_measure_density(J, cfg, printed))

    return integrate_semiinfinite_moment(g, moment_policy(n, cfg, printed, tol))


@dataclass(frozen=True)
class MomentReport:
    n: int
    quadrature_value: float
    target: float
    relative_error: float
    tail_bound: float
    error: str | None = None

    def passed(self, tol: float = 1e-6) -> bool:
        return self.error is None and self.relative_error < tol


def verify_moments(n_max: int, cfg: WellConfig = DEFAULT_WELL, printed: bool = False, tol: float = 1e-12) -> list[MomentReport]:
    """Compare quadrature moments of ``rho(J)`` with ``rho_n`` for ``n = 0..n_max``.

    Failures of the tail bound are recorded in the report, not raised.
    """
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    out = []
    for n in range(n_max + 1):
        target = math.exp(log_rho(n, cfg))
        try:
            res = density_moment(n, cfg, printed, tol)
        except QuadratureError as exc:
            out.append(MomentReport(n, math.nan, target, math.inf, math.inf, str(exc)))
            continue
        # compare in log space; the values themselves are representable here
        rel = abs(math.expm1(math.log(res.value) - log_rho(n, cfg)))
        out.append(MomentReport(n, res.value, target, rel, res.tail_bound))
    return out


@lru_cache(maxsize=32)
def _normalised_moments(cfg: WellConfig, n: int) -> tuple[float, ...]:
    return tuple(
        math.exp(math.log(density_moment(k, cfg).value) - log_rho(k, cfg)) for k in range(n)
    )


def resolution_check(f: CoefficientVector, g: CoefficientVector, cfg: WellConfig = DEFAULT_WELL) -> complex:
    """Left side of the resolution of identity for the pair ``f, g``.

    The angle average over ``gamma`` is a Bohr mean; it kills every cross term
    ``exp(i (eps_n - eps_m) gamma)`` with ``n != m`` because the shifted levels
    are distinct. The ``N(J)^2`` of the states cancels against the measure,
    which leaves ``sum_n conj(f_n) g_n int J^n rho(J) dJ / rho_n``. The
    remaining J integrals are done by quadrature.
    """
    _same_frame(f, g)
    n = min(len(f), len(g))
    weights = np.array(_normalised_moments(cfg, n))
    return complex(np.sum(np.conj(f.coeffs[:n]) * g.coeffs[:n] * weights))


# ------------------------------------------------------------------ ladder operators

def lowering_apply(f: CoefficientVector, gamma: float, cfg: WellConfig = DEFAULT_WELL) -> CoefficientVector:
    """``a_gamma psi_n = sqrt(eps_n) exp(i (eps_n - eps_{n-1}) gamma) psi_{n-1}``; ``a psi_0 = 0``."""
    n = len(f)
    eps = shifted_energies(n, cfg)
    out = np.zeros(n, dtype=complex)
    if n > 1:
        factor = np.sqrt(eps[1:]) * np.exp(1j * (eps[1:] - eps[:-1]) * gamma)
        out[:-1] = factor * f.coeffs[1:]
    return CoefficientVector(f.frame, out)


def raising_apply(f: CoefficientVector, gamma: float, cfg: WellConfig = DEFAULT_WELL) -> CoefficientVector:
    """Frame adjoint of :func:`lowering_apply`:
    ``psi_n -> sqrt(eps_{n+1}) exp(-i (eps_{n+1} - eps_n) gamma) psi_{n+1}``.

    The result is one level longer than the input.
    """
    n = len(f)
    eps = shifted_energies(n + 1, cfg)
    out = np.zeros(n + 1, dtype=complex)
    out[1:] = np.sqrt(eps[1:]) * np.exp(-1j * (eps[1:] - eps[:-1]) * gamma) * f.coeffs
    return CoefficientVector(f.frame, out)


def commutator_diagonal(n: int, cfg: WellConfig = DEFAULT_WELL) -> float:
    """``<psi_n, [a, a^dagger] psi_n> = eps_{n+1} - eps_n = (pi/L)^2 (2n + 3)``."""
    if n < 0:
        raise DomainError(f"level must be >= 0, got {n}")
    return cfg.unit_energy * (2 * n + 3)


def commutator_expectation(n: int, gamma: float = 0.0, cfg: WellConfig = DEFAULT_WELL, frame: float = 0.0) -> complex:
    """Same matrix element as :func:`commutator_diagonal`, computed by applying the ladder operators."""
    psi = CoefficientVector.basis(n + 1, n + 2, frame)
    up_down = lowering_apply(raising_apply(psi, gamma, cfg), gamma, cfg)
    down_up = raising_apply(lowering_apply(psi, gamma, cfg), gamma, cfg)
    return inner_phi(psi, up_down) - inner_phi(psi, down_up)


def action_expectation(state: GKState) -> float:
    """``<Psi, h_phi Psi>_phi``, which equals ``J`` up to truncation."""
    c = gk_coefficients(state)
    return float(np.real(inner_phi(c, apply(shifted_hamiltonian(state.cfg), c))))


def stability_check(state: GKState, t: float) -> float:
    """Max coefficient deviation between ``exp(-i h_phi t) Psi(J, gamma)`` and ``Psi(J, gamma + t)``."""
    evolved = apply(evolution(t, state.cfg, shifted=True), gk_coefficients(state))
    shifted = gk_coefficients(state.at(state.gamma + t))
    return float(np.max(np.abs(evolved.coeffs - shifted.coeffs)))


def lowering_residual(state: GKState) -> float:
    """``||a_gamma Psi - sqrt(J) Psi|| / sqrt(J)``; zero for ``J = 0`` by convention."""
    if state.J == 0:
        return float(np.linalg.norm(lowering_apply(gk_coefficients(state), state.gamma, state.cfg).coeffs))
    c = gk_coefficients(state)
    lowered = lowering_apply(c, state.gamma, state.cfg)
    return float(np.linalg.norm(lowered.coeffs - math.sqrt(state.J) * c.coeffs)) / math.sqrt(state.J)


def ground_state(frame: float = 0.0, cfg: WellConfig = DEFAULT_WELL) -> RotatedBasisFunction:
    """``psi_0^(frame) = phi_1^(frame)``, the ``J = 0`` coherent state."""
    return RotatedBasisFunction(1, frame, cfg)


def bohr_phase(n: int, m: int, gamma: float, cfg: WellConfig = DEFAULT_WELL) -> complex:
    """``exp(i (eps_n - eps_m) gamma)``: the cross-term phase removed by the gamma average."""
    return cmath.exp(1j * (shifted_energy(n, cfg) - shifted_energy(m, cfg)) * gamma)
