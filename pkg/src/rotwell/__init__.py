"""Rotated infinite square well: rotated eigenbases, frame inner products,
spectral Hamiltonians and Gazeau-Klauder coherent states."""

from .coherent import (
    GKState,
    MomentReport,
    action_expectation,
    commutator_diagonal,
    evaluate_state,
    gk_coefficients,
    lowering_apply,
    measure_density,
    normalization_closed,
    normalization_series,
    raising_apply,
    resolution_check,
    stability_check,
    verify_moments,
)
from .errors import DomainError, FrameMismatchError, QuadratureError, TailBoundError
from .hamiltonian import SpectralOperator, apply, evolution, hamiltonian, shifted_hamiltonian
from .rotation import (
    CoefficientVector,
    RotatedBasisFunction,
    cross_overlap,
    eval_rotated,
    inner_h0,
    inner_phi,
    norm_sq_h0,
    reconstruct,
    rotate_frame,
    unboundedness_slope,
)
from .well import WellConfig, energy, log_rho, phi, shifted_energy

__version__ = "0.1.0"
