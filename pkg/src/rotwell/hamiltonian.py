"""The rotated Hamiltonian ``H_phi = T_phi H_0 T_{-phi}``, acting spectrally.

On a finite expansion over the rotated basis, ``H_phi`` just multiplies the
coefficient of ``phi_j^(phi)`` by ``E_j``. The differential form
``-e^{-2 i phi} d^2/dx^2`` shows up only in the residual checks.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .rotation import CoefficientVector, RotatedBasisFunction, _same_frame, as_function, inner_h0, inner_phi
from .well import DEFAULT_WELL, WellConfig, check_in_well, energy, shifted_energies

KINDS = ("H", "h_shifted", "evolution", "shifted_evolution")


@dataclass(frozen=True)
class SpectralOperator:
    """A diagonal operator on the rotated basis.

    ``H`` multiplies by ``E_j``; ``h_shifted`` by ``eps_{j-1} = E_j - E_1``; the two
    evolution kinds by ``exp(-i t E_j)`` and ``exp(-i t (E_j - E_1))``.
    """

    kind: str
    cfg: WellConfig = DEFAULT_WELL
    t: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown operator kind {self.kind!r}; expected one of {KINDS}")

    def multipliers(self, n: int) -> np.ndarray:
        """Multipliers for ``j = 1..n``."""
        if self.kind in ("h_shifted", "shifted_evolution"):
            e = shifted_energies(n, self.cfg)
        else:
            e = (np.arange(1, n + 1, dtype=float) * math.pi / self.cfg.L) ** 2
        if self.kind in ("H", "h_shifted"):
            return e
        return np.exp(-1j * self.t * e)


def hamiltonian(cfg: WellConfig = DEFAULT_WELL) -> SpectralOperator:
    return SpectralOperator("H", cfg)


def shifted_hamiltonian(cfg: WellConfig = DEFAULT_WELL) -> SpectralOperator:
    return SpectralOperator("h_shifted", cfg)


def evolution(t: float, cfg: WellConfig = DEFAULT_WELL, shifted: bool = False) -> SpectralOperator:
    """``exp(-i t H_phi)``, or ``exp(-i t h_phi)`` with ``shifted=True``."""
    return SpectralOperator("shifted_evolution" if shifted else "evolution", cfg, t)


def apply(op, f: CoefficientVector) -> CoefficientVector:
    """Multiply coefficients by ``op.multipliers``; the frame is unchanged.

    ``op`` is anything with a ``multipliers(n)`` method.
    """
    return CoefficientVector(f.frame, f.coeffs * op.multipliers(len(f)))


def in_domain(f, cfg: WellConfig = DEFAULT_WELL, cutoff: int = 1000, tol: float = 1e-6) -> bool:
    """Truncated test for ``sum_j |c_j E_j|^2 < inf``.

    ``f`` is either a ``CoefficientVector`` (finite, always in the domain) or a
    callable ``j -> c_j`` describing an infinite tail. For a tail, the partial
    sums must satisfy the Cauchy test ``S_cutoff - S_{cutoff/2} <= tol``.
    Membership cannot be decided from finitely many terms; this is a heuristic
    meant for tails with known analytic behaviour.
    """
    if isinstance(f, CoefficientVector):
        return True
    j = np.arange(1, cutoff + 1)
    c = np.array([f(int(k)) for k in j], dtype=complex)
    terms = np.abs(c * cfg.unit_energy * j.astype(float) ** 2) ** 2
    partial = np.cumsum(terms)
    return bool(partial[-1] - partial[cutoff // 2 - 1] <= tol)


def kinetic_residual(j: int, phi: float, x, cfg: WellConfig = DEFAULT_WELL, phase_sign: int = -1):
    """``K_phi phi_j^(phi)(x) - E_j phi_j^(phi)(x)`` with ``K_phi = -e^{-2 i phi} d^2/dx^2``.

    ``phase_sign=+1`` swaps in ``e^{+2 i phi}`` as a negative control.
    Requires ``|x| < L/2``.
    """
    check_in_well(x, cfg, closed=False)
    b = RotatedBasisFunction(j, phi, cfg)
    kin = -cmath.exp(phase_sign * 2j * phi) * b.second_derivative(x)
    return kin - energy(j, cfg) * b(x)


def symmetry_gap(f: CoefficientVector, g: CoefficientVector, op=None) -> complex:
    """``<A f, g>_phi - <f, A g>_phi`` for ``A = H_phi`` unless ``op`` is given."""
    _same_frame(f, g)
    op = op or hamiltonian()
    return inner_phi(apply(op, f), g) - inner_phi(f, apply(op, g))


def _second_derivative_fn(f: CoefficientVector, cfg: WellConfig) -> Callable:
    # frame-0 expansion: f'' = -sum c_j E_j phi_j
    return as_function(CoefficientVector(0.0, -f.coeffs * hamiltonian(cfg).multipliers(len(f))), cfg)


def kinetic_adjoint_gap(f: CoefficientVector, g: CoefficientVector, phi: float, cfg: WellConfig = DEFAULT_WELL) -> complex:
    """``<K_{-phi} f, g> - <f, K_phi g>`` in ``L^2(-L/2, L/2)``, by quadrature.

    ``f`` and ``g`` must be frame-0 expansions, so both vanish at the walls.
    """
    if f.frame != 0.0 or g.frame != 0.0:
        raise ValueError("kinetic_adjoint_gap needs frame-0 expansions")
    fdd = _second_derivative_fn(f, cfg)
    gdd = _second_derivative_fn(g, cfg)
    k_minus_f = lambda x: -cmath.exp(2j * phi) * fdd(x)  # noqa: E731
    k_plus_g = lambda x: -cmath.exp(-2j * phi) * gdd(x)  # noqa: E731
    return inner_h0(k_minus_f, as_function(g, cfg), cfg) - inner_h0(as_function(f, cfg), k_plus_g, cfg)
