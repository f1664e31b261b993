"""The unrotated infinite square well on [-L/2, L/2].

Two index conventions are in use and conversions are always explicit:

* ``j >= 1`` labels the eigenfunctions ``phi_j`` and energies ``E_j = (j pi / L)^2``;
* ``k >= 0`` labels the shifted levels ``eps_k = E_{k+1} - E_1``, the ones the
  coherent states are built from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class WellConfig:
    """Well width ``L`` plus the quadrature settings used by the integral oracles.

    ``tol`` is the relative acceptance tolerance of the panel-doubling test;
    ``quad_order`` and ``quad_panels`` set the starting composite rule.
    """

    L: float = math.pi
    tol: float = 1e-10
    quad_order: int = 20
    quad_panels: int = 2

    def __post_init__(self):
        if not (self.L > 0 and math.isfinite(self.L)):
            raise ValueError(f"well width must be positive and finite, got {self.L!r}")
        if not self.tol > 0:
            raise ValueError(f"tolerance must be positive, got {self.tol!r}")
        if self.quad_order < 2 or self.quad_panels < 1:
            raise ValueError("quadrature needs order >= 2 and at least one panel")

    @property
    def half_width(self) -> float:
        return 0.5 * self.L

    @property
    def unit_energy(self) -> float:
        """``(pi / L)^2``, which is also the ground energy ``E_1``."""
        return (math.pi / self.L) ** 2


DEFAULT_WELL = WellConfig()


def shifted_index(j: int) -> int:
    """Map the physical index ``j >= 1`` to the shifted index ``k = j - 1``."""
    _check_j(j)
    return j - 1


def physical_index(k: int) -> int:
    """Map the shifted index ``k >= 0`` back to ``j = k + 1``."""
    if k < 0:
        raise DomainError(f"shifted index must be >= 0, got {k}")
    return k + 1


def _check_j(j: int) -> None:
    if int(j) != j or j < 1:
        raise DomainError(f"basis index must be an integer >= 1, got {j!r}")


def check_in_well(x, cfg: WellConfig, closed: bool = True) -> None:
    xa = np.abs(np.asarray(x, dtype=float))
    bad = xa > cfg.half_width * (1 + 1e-15) if closed else xa >= cfg.half_width
    if np.any(bad) or np.any(np.isnan(xa)):
        raise DomainError(f"point(s) outside the well [-{cfg.half_width}, {cfg.half_width}]")


def wavenumber(j: int, cfg: WellConfig = DEFAULT_WELL) -> float:
    return j * math.pi / cfg.L


def phi_at(j: int, z, cfg: WellConfig = DEFAULT_WELL):
    """Eigenfunction ``phi_j`` continued analytically to (possibly complex) ``z``.

    No domain check: this is the entire function behind both the real
    eigenfunctions and their rotated versions.
    """
    _check_j(j)
    amp = math.sqrt(2.0 / cfg.L)
    arg = wavenumber(j, cfg) * np.asarray(z)
    if j % 2 == 0:
        return amp * np.sin(arg)
    return amp * np.cos(arg)


def phi(j: int, x, cfg: WellConfig = DEFAULT_WELL):
    """Real eigenfunction ``phi_j(x)`` for ``|x| <= L/2``.

    ``sqrt(2/L) sin(2 k pi x / L)`` for ``j = 2k`` and
    ``sqrt(2/L) cos((2k - 1) pi x / L)`` for ``j = 2k - 1``.
    """
    check_in_well(x, cfg)
    out = phi_at(j, np.asarray(x, dtype=float), cfg)
    return float(out) if np.ndim(x) == 0 else out


def phi_second_derivative(j: int, x, cfg: WellConfig = DEFAULT_WELL):
    """``phi_j''(x)`` from differentiating the sine/cosine explicitly."""
    check_in_well(x, cfg)
    kw = wavenumber(j, cfg)
    amp = math.sqrt(2.0 / cfg.L)
    xa = np.asarray(x, dtype=float)
    out = -kw * kw * amp * (np.sin(kw * xa) if j % 2 == 0 else np.cos(kw * xa))
    return float(out) if np.ndim(x) == 0 else out


def energy(j: int, cfg: WellConfig = DEFAULT_WELL) -> float:
    """``E_j = (j pi / L)^2``."""
    _check_j(j)
    return wavenumber(j, cfg) ** 2


def shifted_energy(k: int, cfg: WellConfig = DEFAULT_WELL) -> float:
    """``eps_k = E_{k+1} - E_1 = (pi/L)^2 k (k + 2)``; ``eps_0 = 0``."""
    if k < 0:
        raise DomainError(f"shifted index must be >= 0, got {k}")
    return cfg.unit_energy * (k * (k + 2))


def shifted_energies(n: int, cfg: WellConfig = DEFAULT_WELL) -> np.ndarray:
    """``eps_0 .. eps_{n-1}`` as an array."""
    k = np.arange(n, dtype=float)
    return cfg.unit_energy * (k * (k + 2.0))


def log_rho(n: int, cfg: WellConfig = DEFAULT_WELL) -> float:
    """``ln rho_n`` with ``rho_0 = 1`` and ``rho_n = eps_1 eps_2 ... eps_n``.

    Summed term by term: ``rho_n`` itself overflows near n = 85.
    """
    if n < 0:
        raise DomainError(f"moment index must be >= 0, got {n}")
    return float(sum(math.log(shifted_energy(k, cfg)) for k in range(1, n + 1)))


def log_rhos(n: int, cfg: WellConfig = DEFAULT_WELL) -> np.ndarray:
    """``ln rho_0 .. ln rho_{n-1}``, built with the running-sum recurrence."""
    out = np.zeros(n)
    if n > 1:
        out[1:] = np.cumsum(np.log(shifted_energies(n, cfg)[1:]))
    return out


def log_rho_closed(n: int, cfg: WellConfig = DEFAULT_WELL) -> float:
    """``ln rho_n`` from ``rho_n = (pi/L)^{2n} n! (n+2)! / 2``."""
    if n < 0:
        raise DomainError(f"moment index must be >= 0, got {n}")
    return n * math.log(cfg.unit_energy) + math.lgamma(n + 1) + math.lgamma(n + 3) - math.log(2.0)
