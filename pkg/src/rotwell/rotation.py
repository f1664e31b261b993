"""Rotated eigenfunctions ``phi_j(e^{i phi} x)`` and the frame-phi Hilbert spaces.

A state is a finite expansion over the rotated basis of one frame. Its
coefficients are the same in every frame (only the basis functions move), so
rotating a state just relabels the frame. The frame-phi inner product is the
plain l2 product of coefficients, because the rotated basis is orthonormal
there by construction.

``coeffs[i]`` always multiplies the basis function with physical index
``j = i + 1``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, FrameMismatchError
from .quadrature import integrate_finite, make_rule
from .well import DEFAULT_WELL, WellConfig, check_in_well, phi_at, wavenumber

FRAME_ATOL = 1e-15


@dataclass(frozen=True)
class RotatedBasisFunction:
    """``phi_j^(phi)(x) = phi_j(e^{i phi} x)``."""

    j: int
    phi: float
    cfg: WellConfig = DEFAULT_WELL

    def __post_init__(self):
        if int(self.j) != self.j or self.j < 1:
            raise DomainError(f"basis index must be an integer >= 1, got {self.j!r}")

    def __call__(self, x):
        return eval_rotated(self, x)

    def continued(self, z):
        """Value at an arbitrary complex point ``z``, i.e. ``phi_j(e^{i phi} z)``."""
        return phi_at(self.j, cmath.exp(1j * self.phi) * np.asarray(z), self.cfg)

    def second_derivative(self, x):
        """``d^2/dx^2 phi_j(e^{i phi} x)``, differentiated term by term.

        The chain rule gives ``e^{2 i phi}`` times ``-(j pi / L)^2`` times the
        same sine or cosine.
        """
        check_in_well(x, self.cfg)
        kw = wavenumber(self.j, self.cfg)
        rot = cmath.exp(1j * self.phi)
        arg = kw * rot * np.asarray(x, dtype=float)
        trig = np.sin(arg) if self.j % 2 == 0 else np.cos(arg)
        out = -(kw * rot) ** 2 * math.sqrt(2.0 / self.cfg.L) * trig
        return complex(out) if np.ndim(x) == 0 else out


def eval_rotated(b: RotatedBasisFunction, x):
    """Evaluate a rotated basis function at real ``x`` inside the well."""
    check_in_well(x, b.cfg)
    out = b.continued(np.asarray(x, dtype=float))
    return complex(out) if np.ndim(x) == 0 else out


def rotated_parts(j: int, phi: float, x, cfg: WellConfig = DEFAULT_WELL):
    """Real and imaginary parts of ``phi_j^(phi)(x)`` from trig x hyperbolic products.

    With ``u = a x cos(phi)`` and ``v = a x sin(phi)``::

        sin(u + iv) = sin u cosh v + i cos u sinh v
        cos(u + iv) = cos u cosh v - i sin u sinh v
    """
    check_in_well(x, cfg)
    a = wavenumber(j, cfg)
    xa = np.asarray(x, dtype=float)
    u = a * xa * math.cos(phi)
    v = a * xa * math.sin(phi)
    amp = math.sqrt(2.0 / cfg.L)
    if j % 2 == 0:
        return amp * np.sin(u) * np.cosh(v), amp * np.cos(u) * np.sinh(v)
    return amp * np.cos(u) * np.cosh(v), -amp * np.sin(u) * np.sinh(v)


# ------------------------------------------------------------------ norms

def _sinhc(z: float) -> float:
    if abs(z) < 1e-4:
        return 1.0 + z * z / 6.0 + z**4 / 120.0
    return math.sinh(z) / z


def _sinc(z: float) -> float:
    if abs(z) < 1e-4:
        return 1.0 - z * z / 6.0 + z**4 / 120.0
    return math.sin(z) / z


def norm_sq_h0(j: int, phi: float, cfg: WellConfig = DEFAULT_WELL) -> float:
    """Closed form of ``||phi_j^(phi)||^2`` in ``L^2(-L/2, L/2)``.

    Integrating ``|sin w|^2 = (cosh 2 Im w - cos 2 Re w) / 2`` (and the cosine
    analogue with a plus sign) across the well gives, for every ``j``,

        sinh(j pi sin phi) / (j pi sin phi) + (-1)^(j+1) sin(j pi cos phi) / (j pi cos phi)

    which is independent of ``L`` and tends to 1 as ``phi -> 0``. Written
    with sinhc/sinc it needs no small-angle or right-angle special case.
    """
    if int(j) != j or j < 1:
        raise DomainError(f"basis index must be an integer >= 1, got {j!r}")
    m = j * math.pi
    sign = 1.0 if j % 2 else -1.0
    try:
        return _sinhc(m * math.sin(phi)) + sign * _sinc(m * math.cos(phi))
    except OverflowError:
        return math.inf


def log_norm_h0(j: int, phi: float, cfg: WellConfig = DEFAULT_WELL) -> float:
    """``ln ||phi_j^(phi)||`` without overflow for large ``j |sin phi|``."""
    z = abs(j * math.pi * math.sin(phi))
    if z < 30.0:
        return 0.5 * math.log(norm_sq_h0(j, phi, cfg))
    sign = 1.0 if j % 2 else -1.0
    # ln sinhc(z) = z - ln 2 + log1p(-e^{-2z}) - ln z
    log_sinhc = z - math.log(2.0) + math.log1p(-math.exp(-2.0 * z)) - math.log(z)
    ratio = sign * _sinc(j * math.pi * math.cos(phi)) * math.exp(-log_sinhc)
    return 0.5 * (log_sinhc + math.log1p(ratio))


def unboundedness_slope(phi: float, j_max: int, cfg: WellConfig = DEFAULT_WELL, j_min: int = 2) -> float:
    """Least-squares slope of ``ln ||phi_j^(phi)||`` against ``j`` for ``j_min <= j <= j_max``.

    The norm grows like ``exp(j pi |sin phi| / 2) / sqrt(j)``, so the slope
    approaches ``pi |sin phi| / 2`` from below as the window moves out; the
    ``-ln(j) / 2`` part biases short windows that start at small ``j``.
    """
    if math.sin(phi) == 0.0:
        raise DomainError("rotation angle must not be a multiple of pi")
    if j_max < 10 or j_min < 1 or j_min >= j_max:
        raise DomainError(f"need 1 <= j_min < j_max and j_max >= 10, got {j_min}..{j_max}")
    js = np.arange(j_min, j_max + 1, dtype=float)
    y = np.array([log_norm_h0(int(j), phi, cfg) for j in js])
    return float(np.polyfit(js, y, 1)[0])


def growth_rate(phi: float) -> float:
    """Asymptotic exponential growth rate ``pi |sin phi| / 2`` of ``||phi_j^(phi)||`` in ``j``."""
    return 0.5 * math.pi * abs(math.sin(phi))


# ------------------------------------------------------------------ H_0 inner products

def inner_h0(f: Callable, g: Callable, cfg: WellConfig = DEFAULT_WELL, tol: float | None = None) -> complex:
    """``<f, g> = int_{-L/2}^{L/2} conj(f) g dx`` by composite Gauss-Legendre.

    ``f`` and ``g`` must accept arrays of points inside the well.
    """
    h = cfg.half_width
    return integrate_finite(
        lambda x: np.conj(f(x)) * g(x),
        -h,
        h,
        make_rule(cfg.quad_order, cfg.quad_panels),
        tol=cfg.tol if tol is None else tol,
    )


def cross_overlap(k: int, j: int, phi: float, cfg: WellConfig = DEFAULT_WELL) -> complex:
    """``<phi_k^(phi), phi_j^(-phi)>`` in ``L^2(-L/2, L/2)``, by quadrature."""
    return inner_h0(RotatedBasisFunction(k, phi, cfg), RotatedBasisFunction(j, -phi, cfg), cfg)


def overlap_2_4_closed(phi: float) -> complex:
    """Closed form ``(4 e^{i phi} / 3 pi) sin^3(e^{-i phi} pi)`` of ``<phi_2^(phi), phi_4^(-phi)>``."""
    return 4.0 * cmath.exp(1j * phi) / (3.0 * math.pi) * cmath.sin(cmath.exp(-1j * phi) * math.pi) ** 3


# ------------------------------------------------------------------ coefficient vectors

@dataclass(frozen=True, eq=False)
class CoefficientVector:
    """A finite expansion ``sum_i coeffs[i] phi_{i+1}^(frame)``.

    Immutable: the coefficient array is copied and locked on construction.
    """

    frame: float
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "frame", float(self.frame))

    @classmethod
    def basis(cls, j: int, size: int | None = None, frame: float = 0.0) -> "CoefficientVector":
        """Unit vector on ``phi_j^(frame)`` (physical index ``j >= 1``)."""
        if j < 1:
            raise DomainError(f"basis index must be >= 1, got {j}")
        size = j if size is None else max(size, j)
        c = np.zeros(size, dtype=complex)
        c[j - 1] = 1.0
        return cls(frame, c)

    def __len__(self) -> int:
        return self.coeffs.size

    def padded(self, size: int) -> np.ndarray:
        out = np.zeros(max(size, len(self)), dtype=complex)
        out[: len(self)] = self.coeffs
        return out

    def _combine(self, other: "CoefficientVector", op):
        _same_frame(self, other)
        n = max(len(self), len(other))
        return CoefficientVector(self.frame, op(self.padded(n), other.padded(n)))

    def __add__(self, other):
        return self._combine(other, np.add)

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __mul__(self, scalar):
        return CoefficientVector(self.frame, self.coeffs * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self):
        return CoefficientVector(self.frame, -self.coeffs)

    def __repr__(self):
        return f"CoefficientVector(frame={self.frame!r}, coeffs={self.coeffs!r})"


def _same_frame(f: CoefficientVector, g: CoefficientVector) -> None:
    if abs(f.frame - g.frame) > FRAME_ATOL:
        raise FrameMismatchError(f"frames differ: {f.frame!r} vs {g.frame!r}")


def inner_phi(f: CoefficientVector, g: CoefficientVector) -> complex:
    """Frame inner product ``<f, g>_phi = <T_{-phi} f, T_{-phi} g> = sum conj(f_k) g_k``."""
    _same_frame(f, g)
    n = min(len(f), len(g))
    return complex(np.vdot(f.coeffs[:n], g.coeffs[:n]))


def norm_phi(f: CoefficientVector) -> float:
    return float(np.linalg.norm(f.coeffs))


def rotate_frame(f: CoefficientVector, delta: float) -> CoefficientVector:
    """Apply ``T_delta``: same coefficients, frame moved by ``delta``."""
    if delta == 0:
        return f
    return CoefficientVector(f.frame + delta, f.coeffs)


def reconstruct(f: CoefficientVector, x, cfg: WellConfig = DEFAULT_WELL):
    """Pointwise value ``sum_k c_k phi_k^(frame)(x)`` for ``|x| <= L/2``."""
    check_in_well(x, cfg)
    xa = np.asarray(x, dtype=float)
    out = np.zeros(xa.shape, dtype=complex)
    for i, c in enumerate(f.coeffs):
        if c != 0:
            out = out + c * RotatedBasisFunction(i + 1, f.frame, cfg).continued(xa)
    return complex(out) if np.ndim(x) == 0 else out


def as_function(f: CoefficientVector, cfg: WellConfig = DEFAULT_WELL) -> Callable:
    """``reconstruct`` curried into a callable of ``x``."""
    return lambda x: reconstruct(f, x, cfg)


def project_h0(func: Callable, size: int, cfg: WellConfig = DEFAULT_WELL) -> CoefficientVector:
    """Frame-0 coefficients ``c_k = <phi_k, func>`` for ``k = 1..size``, by quadrature."""
    c = [inner_h0(RotatedBasisFunction(k, 0.0, cfg), func, cfg) for k in range(1, size + 1)]
    return CoefficientVector(0.0, c)


def inner_phi_quadrature(f: CoefficientVector, g: CoefficientVector, cfg: WellConfig = DEFAULT_WELL) -> complex:
    """``<T_{-phi} f, T_{-phi} g>`` evaluated as an integral over the well.

    Independent of ``inner_phi``: undoes the rotation pointwise and integrates.
    """
    _same_frame(f, g)
    return inner_h0(as_function(rotate_frame(f, -f.frame), cfg), as_function(rotate_frame(g, -g.frame), cfg), cfg)

