"""Verification suites and deterministic JSON/CSV serialisation for the CLI."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import coherent as gk
from .hamiltonian import (
    apply,
    evolution,
    hamiltonian,
    in_domain,
    kinetic_adjoint_gap,
    kinetic_residual,
    symmetry_gap,
)
from .rotation import (
    CoefficientVector,
    RotatedBasisFunction,
    cross_overlap,
    growth_rate,
    inner_h0,
    inner_phi,
    inner_phi_quadrature,
    norm_phi,
    norm_sq_h0,
    overlap_2_4_closed,
    reconstruct,
    rotate_frame,
    rotated_parts,
    unboundedness_slope,
)
from .well import WellConfig, energy, log_rho, log_rho_closed, phi, phi_second_derivative, shifted_energies

SUITES = ("basis", "rotation", "hamiltonian", "coherent", "moments")
SEED = 20240611


@dataclass(frozen=True)
class RunConfig:
    L: float = math.pi
    phi: float = 0.3
    nmax: int = 10
    tol: float = 1e-8
    quad_order: int = 20
    quad_panels: int = 2
    output_format: str = "json"

    def __post_init__(self):
        for name in ("L", "phi", "tol"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not self.L > 0:
            raise ValueError("L must be positive")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.nmax < 0:
            raise ValueError("nmax must be >= 0")
        if self.output_format not in ("json", "csv"):
            raise ValueError("format must be json or csv")

    @property
    def well(self) -> WellConfig:
        return WellConfig(self.L, 1e-10, self.quad_order, self.quad_panels)


@dataclass
class Check:
    id: str
    anchor: str
    value: float
    target: float
    tol: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "anchor": self.anchor,
            "value": _num(self.value),
            "target": _num(self.target),
            "tol": _num(self.tol),
            "pass": bool(self.passed),
        }


def within(id, anchor, value, target, tol, relative=False) -> Check:
    value, target = float(value), float(target)
    gap = abs(value - target)
    if relative and target != 0:
        gap /= abs(target)
    return Check(id, anchor, value, target, tol, bool(gap <= tol))


def exceeds(id, anchor, value, threshold) -> Check:
    """Negative-control style check: passes when ``value > threshold``."""
    return Check(id, anchor, float(value), float(threshold), float(threshold), bool(value > threshold))


@dataclass
class SuiteResult:
    name: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


@dataclass
class VerificationReport:
    config: RunConfig
    suites: list[SuiteResult]

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)

    def summary(self) -> dict:
        checks = [c for s in self.suites for c in s.checks]
        n_pass = sum(c.passed for c in checks)
        return {"total": len(checks), "passed": n_pass, "failed": len(checks) - n_pass, "pass": self.passed}

    def as_dict(self) -> dict:
        return {
            "config": config_dict(self.config),
            "suites": [{"name": s.name, "checks": [c.as_dict() for c in s.checks]} for s in self.suites],
            "summary": self.summary(),
        }


def _num(x):
    x = float(x)
    if math.isfinite(x):
        return x
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


def config_dict(cfg: RunConfig) -> dict:
    return {k: (_num(v) if isinstance(v, float) else v) for k, v in asdict(cfg).items()}


def to_json(obj: dict) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()


def report_rows(report: VerificationReport) -> list[dict]:
    return [{"suite": s.name, **c.as_dict()} for s in report.suites for c in s.checks]


def _random_vectors(rng, n, frame, size):
    return [CoefficientVector(frame, rng.normal(size=size) + 1j * rng.normal(size=size)) for _ in range(n)]


# ------------------------------------------------------------------ suites

def suite_basis(rc: RunConfig) -> SuiteResult:
    cfg = rc.well
    out = SuiteResult("basis")
    basis = [RotatedBasisFunction(j, 0.0, cfg) for j in range(1, 13)]
    gram = np.array([[inner_h0(f, g, cfg) for g in basis] for f in basis])
    out.checks.append(within("orthonormality_gram", "orthonormality of the well eigenfunctions",
                             np.max(np.abs(gram - np.eye(12))), 0.0, 1e-10))
    xs = np.linspace(-0.5 * cfg.L, 0.5 * cfg.L, 22)[1:-1]
    worst = 0.0
    for j in range(1, 9):
        lhs = -phi_second_derivative(j, xs, cfg)
        rhs = energy(j, cfg) * phi(j, xs, cfg)
        worst = max(worst, float(np.max(np.abs(lhs - rhs)) / (energy(j, cfg) * math.sqrt(2 / cfg.L))))
    out.checks.append(within("eigen_relation", "-phi_j'' = E_j phi_j inside the well", worst, 0.0, 1e-9))
    walls = max(abs(phi(j, s * 0.5 * cfg.L, cfg)) for j in range(1, 13) for s in (-1, 1))
    out.checks.append(within("wall_vanishing", "eigenfunctions vanish at the walls", walls, 0.0, 1e-14))
    gap = max(abs(math.expm1(log_rho(n, cfg) - log_rho_closed(n, cfg))) for n in range(31))
    out.checks.append(within("rho_closed_form", "rho_n = (pi/L)^2n n! (n+2)! / 2", gap, 0.0, 1e-12))
    eps = shifted_energies(40, cfg)
    out.checks.append(exceeds("shifted_spectrum_increasing", "0 = eps_0 < eps_1 < eps_2 < ...",
                              float(np.min(np.diff(eps))), 0.0))
    return out


def suite_rotation(rc: RunConfig) -> SuiteResult:
    cfg = rc.well
    out = SuiteResult("rotation")
    rng = np.random.default_rng(SEED)
    phi_ = rc.phi

    gram = np.array([[inner_phi(CoefficientVector.basis(k, 12, phi_), CoefficientVector.basis(j, 12, phi_))
                      for j in range(1, 13)] for k in range(1, 13)])
    out.checks.append(within("frame_orthonormality", "rotated basis is orthonormal in its own frame",
                             np.max(np.abs(gram - np.eye(12))), 0.0, 1e-10))
    worst = 0.0
    for _ in range(5):
        size = int(rng.integers(1, 7))
        f, g = _random_vectors(rng, 2, phi_, size)
        worst = max(worst, abs(inner_phi_quadrature(f, g, cfg) - inner_phi(f, g)) / (norm_phi(f) * norm_phi(g)))
    out.checks.append(within("frame_product_quadrature", "<f,g>_phi = <T_-phi f, T_-phi g>", worst, 0.0, 1e-9))

    worst = 0.0
    for j in range(1, 11):
        quad = inner_h0(RotatedBasisFunction(j, phi_, cfg), RotatedBasisFunction(j, phi_, cfg), cfg).real
        worst = max(worst, abs(norm_sq_h0(j, phi_, cfg) - quad) / quad)
    out.checks.append(within("norm_closed_vs_quadrature", "closed-form norms of rotated eigenfunctions", worst, 0.0, 1e-9))
    lim = max(abs(norm_sq_h0(j, 1e-9, cfg) - 1) for j in range(1, 11))
    out.checks.append(within("norm_small_angle_limit", "norms tend to 1 as phi -> 0", lim, 0.0, 1e-6))
    if math.sin(phi_) != 0:
        slope = unboundedness_slope(phi_, 400, cfg, j_min=200)
        out.checks.append(within("growth_rate_far_window", "norms diverge exponentially in j (j = 200..400)",
                                 slope, growth_rate(phi_), 0.05, relative=True))

    worst = 0.0
    for _ in range(50):
        a, b = rng.uniform(-1, 1, 2)
        j = int(rng.integers(1, 13))
        x = float(rng.uniform(-0.5, 0.5) * cfg.L)
        inner = RotatedBasisFunction(j, b, cfg)
        composed = inner.continued(np.exp(1j * a) * x)
        direct = RotatedBasisFunction(j, a + b, cfg)(x)
        worst = max(worst, abs(composed - direct) / max(1.0, abs(direct)))
    out.checks.append(within("composition_law", "T_alpha T_beta = T_(alpha+beta) pointwise", worst, 0.0, 1e-12))

    xs = np.linspace(-0.5 * cfg.L, 0.5 * cfg.L, 41)
    worst = 0.0
    for j in range(1, 9):
        re, im = rotated_parts(j, phi_, xs, cfg)
        z = RotatedBasisFunction(j, phi_, cfg)(xs)
        worst = max(worst, float(np.max(np.abs(z - (re + 1j * im)) / np.maximum(1.0, np.abs(z)))))
    out.checks.append(within("trig_hyperbolic_parts", "real/imaginary parts as trig x hyperbolic products", worst, 0.0, 1e-12))

    ov = cross_overlap(2, 4, 0.4, cfg)
    out.checks.append(within("cross_overlap_closed_form", "<phi_2^(phi), phi_4^(-phi)> closed form at phi = 0.4",
                             abs(ov - overlap_2_4_closed(0.4)), 0.0, 1e-9))
    out.checks.append(exceeds("non_biorthogonality", "rotated families at +-phi are not biorthogonal", abs(ov), 1e-3))
    out.checks.append(within("cross_overlap_unrotated", "overlap vanishes for phi = 0",
                             abs(cross_overlap(2, 4, 0.0, cfg)), 0.0, 1e-12))

    worst = 0.0
    for f in _random_vectors(rng, 10, 0.0, 8):
        worst = max(worst, abs(norm_phi(rotate_frame(f, phi_)) - norm_phi(f)))
    out.checks.append(within("rotation_unitary_between_frames", "T_phi is unitary from frame 0 to frame phi", worst, 0.0, 0.0))
    if math.sin(phi_) != 0:
        prods = [norm_sq_h0(j, phi_, cfg) for j in range(5, 26)]
        out.checks.append(exceeds("divergent_pairing", "||phi_j^(-phi)|| ||phi_j^(phi)|| grows without bound",
                                  float(np.min(np.diff(prods))), 0.0))
    return out


def suite_hamiltonian(rc: RunConfig) -> SuiteResult:
    cfg = rc.well
    out = SuiteResult("hamiltonian")
    rng = np.random.default_rng(SEED + 1)
    angles = sorted({0.0, 0.3, -0.3, 0.7, rc.phi})
    xs = np.linspace(-0.5 * cfg.L, 0.5 * cfg.L, 22)[1:-1]
    worst = 0.0
    for a in angles:
        for j in range(1, 7):
            res = kinetic_residual(j, a, xs, cfg)
            scale = energy(j, cfg) * np.abs(RotatedBasisFunction(j, a, cfg)(xs))
            worst = max(worst, float(np.max(np.abs(res) / np.maximum(scale, 1e-300))))
    out.checks.append(within("kinetic_eigen_relation", "K_phi phi_j^(phi) = E_j phi_j^(phi)", worst, 0.0, 1e-9))
    bad = kinetic_residual(1, 0.3, 0.2, cfg, phase_sign=+1)
    scale = energy(1, cfg) * abs(RotatedBasisFunction(1, 0.3, cfg)(0.2))
    out.checks.append(exceeds("kinetic_sign_control", "wrong rotation phase breaks the eigen-relation",
                              abs(bad) / scale, 1e-3))

    gaps = [abs(symmetry_gap(f, g)) for f, g in zip(_random_vectors(rng, 20, rc.phi, 8), _random_vectors(rng, 20, rc.phi, 8))]
    out.checks.append(within("symmetry_gap", "<H f, g>_phi = <f, H g>_phi", max(gaps), 0.0, 1e-12))
    worst = 0.0
    for a in (0.0, 0.4):
        for j in range(1, 5):
            for k in range(1, 5):
                gap = kinetic_adjoint_gap(CoefficientVector.basis(j), CoefficientVector.basis(k), a, cfg)
                worst = max(worst, abs(gap))
    out.checks.append(within("kinetic_adjoint_gap", "<K_-phi f, g> = <f, K_phi g>", worst, 0.0, 1e-9))

    mult = hamiltonian(cfg).multipliers(12)
    iso = max(abs(m - energy(j, cfg)) for j, m in enumerate(mult, start=1))
    out.checks.append(within("isospectrality", "H_phi has the eigenvalues E_j of H_0", iso, 0.0, 0.0))
    f = _random_vectors(rng, 1, rc.phi, 10)[0]
    drift = max(abs(norm_phi(apply(evolution(t, cfg), f)) - norm_phi(f)) for t in (0.1, 1.0, 17.3))
    out.checks.append(within("evolution_unitary", "time evolution preserves the frame norm", drift, 0.0, 1e-13))
    two = apply(evolution(0.4, cfg), apply(evolution(1.1, cfg), f))
    one = apply(evolution(1.5, cfg), f)
    out.checks.append(within("evolution_group", "U(t) U(s) = U(t + s)", np.max(np.abs(two.coeffs - one.coeffs)), 0.0, 1e-13))
    in_dom = in_domain(lambda j: 1.0 / energy(j, cfg) ** 2, cfg) and not in_domain(lambda j: 1.0 / energy(j, cfg), cfg)
    out.checks.append(Check("domain_test", "sum |c_j E_j|^2 < inf", float(in_dom), 1.0, 0.0, in_dom))
    return out


def suite_coherent(rc: RunConfig) -> SuiteResult:
    cfg = rc.well
    out = SuiteResult("coherent")
    rng = np.random.default_rng(SEED + 2)
    phi_ = rc.phi

    worst = max(abs(norm_phi(gk.gk_coefficients(gk.GKState(J, 1.3, phi_, cfg=cfg))) - 1) for J in (0, 0.5, 1, 10, 100))
    out.checks.append(within("state_normalised", "||Psi||_phi = 1", worst, 0.0, 1e-12))
    grid = np.logspace(-3, 3, 61)
    gap = max(abs(math.expm1(gk.log_series_closed(J, cfg) - gk.log_series_sum(J, cfg))) for J in grid)
    out.checks.append(within("normalization_closed_vs_series", "sum J^n/rho_n = (2 pi^2 / J L^2) I_2(2 L sqrt(J)/pi)",
                             gap, 0.0, 1e-10))
    printed = max(abs(math.expm1(gk.log_series_closed(J, cfg, printed=True) - gk.log_series_sum(J, cfg))) for J in grid)
    out.checks.append(exceeds("normalization_printed_form_rejected",
                              "printed form 8 pi^2/(J L^2) I_2(L sqrt(J)/pi) disagrees with the series", printed, 1e-6))
    worst = max(abs(gk.action_expectation(gk.GKState(J, 0.9, phi_, cfg=cfg)) - J) / J for J in (0.5, 2.5, 10))
    out.checks.append(within("action_identity", "<Psi, h_phi Psi>_phi = J", worst, 0.0, 1e-8))
    worst = max(gk.stability_check(gk.GKState(3.0, 0.2, phi_, cfg=cfg), t) for t in (0.0, 1.7, 11.0))
    out.checks.append(within("temporal_stability", "exp(-i h_phi t) Psi(J, gamma) = Psi(J, gamma + t)", worst, 0.0, 1e-13))
    worst = max(gk.lowering_residual(gk.GKState(J, 0.4, phi_, cfg=cfg)) for J in (0.5, 2, 10))
    out.checks.append(within("lowering_eigenstate", "a_gamma Psi = sqrt(J) Psi", worst, 0.0, 1e-8))
    worst = max(abs(gk.commutator_diagonal(n, cfg) - cfg.unit_energy * (2 * n + 3)) for n in range(11))
    worst_ops = max(abs(gk.commutator_expectation(n, 0.7, cfg, phi_) - gk.commutator_diagonal(n, cfg)) for n in range(11))
    out.checks.append(within("commutator_diagonal", "[a, a^dagger] psi_n has diagonal eps_(n+1) - eps_n", worst, 0.0, 0.0))
    out.checks.append(within("commutator_via_ladder", "ladder operators reproduce the commutator diagonal",
                             worst_ops / cfg.unit_energy, 0.0, 1e-12))
    off_one = max(abs(gk.commutator_diagonal(n, cfg) - 1) for n in range(11))
    out.checks.append(exceeds("non_canonical", "[a, a^dagger] != 1", off_one, 0.0))
    worst = 0.0
    for f, g in zip(_random_vectors(rng, 20, phi_, 6), _random_vectors(rng, 20, phi_, 6)):
        worst = max(worst, abs(gk.resolution_check(f, g, cfg) - inner_phi(f, g)) / (norm_phi(f) * norm_phi(g)))
    out.checks.append(within("resolution_of_identity", "coherent states resolve the identity", worst, 0.0, 1e-6))

    state = gk.GKState(2.0, 0.0, 0.0, cfg=cfg)
    xs = np.linspace(-0.5 * cfg.L, 0.5 * cfg.L, 33)
    imag = float(np.max(np.abs(gk.evaluate_state(state, xs).value.imag)))
    out.checks.append(within("unrotated_real_at_gamma0", "unrotated state with gamma = 0 is real", imag, 0.0, 1e-12))
    c = gk.gk_coefficients(gk.GKState(2.0, 0.7, 0.0, cfg=cfg))
    h0_norm = inner_h0(lambda x: reconstruct(c, x, cfg), lambda x: reconstruct(c, x, cfg), cfg).real
    out.checks.append(within("unrotated_h0_norm", "||Psi|| = 1 in L^2 when phi = 0", h0_norm, 1.0, rc.tol))
    return out


def suite_moments(rc: RunConfig) -> SuiteResult:
    cfg = rc.well
    out = SuiteResult("moments")
    for rep in gk.verify_moments(rc.nmax, cfg):
        out.checks.append(Check(f"moment_{rep.n}", "int_0^inf J^n rho(J) dJ = rho_n", rep.quadrature_value,
                                rep.target, 1e-6, rep.passed(1e-6)))
    gap = max(abs(math.expm1(gk.log_density_moment_closed(n, cfg) - log_rho(n, cfg))) for n in range(rc.nmax + 1))
    out.checks.append(within("moment_mellin_closed_form", "Mellin transform of K_2 gives rho_n", gap, 0.0, 1e-12))
    reps = gk.verify_moments(rc.nmax, cfg, printed=True)
    dev = max(abs(r.quadrature_value / (r.target * 4.0**r.n) - 1) for r in reps)
    out.checks.append(within("printed_density_grows_4n", "printed density moments are 4^n rho_n", dev, 0.0, 1e-6))
    return out


SUITE_FUNCS = {
    "basis": suite_basis,
    "rotation": suite_rotation,
    "hamiltonian": suite_hamiltonian,
    "coherent": suite_coherent,
    "moments": suite_moments,
}


def run_verify(rc: RunConfig, suites=SUITES) -> VerificationReport:
    return VerificationReport(rc, [SUITE_FUNCS[name](rc) for name in suites])
