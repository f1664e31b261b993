"""Command-line front end.

Subcommands: ``verify``, ``norms``, ``spectrum``, ``overlap``, ``cs-eval`` and
``cs-moments``. Exit status is 0 on success, 1 when ``verify`` finds a failing
check, 2 on bad flags or out-of-domain inputs.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
import time

import numpy as np

from . import coherent as gk
from .errors import DomainError
from .hamiltonian import apply, evolution
from .report import SUITES, RunConfig, config_dict, report_rows, run_verify, to_csv, to_json
from .rotation import RotatedBasisFunction, cross_overlap, inner_h0, log_norm_h0, norm_sq_h0, overlap_2_4_closed, reconstruct
from .well import energy, log_rho, shifted_energy

log = logging.getLogger("rotwell")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--L", type=float, default=math.pi, help="well width (default: pi)")
    p.add_argument("--phi", type=float, default=0.3, help="rotation angle in radians (default: 0.3)")
    p.add_argument("--nmax", type=int, default=10, help="highest moment / level index (default: 10)")
    p.add_argument("--tol", type=float, default=1e-8, help="tolerance for checks without a fixed one (default: 1e-8)")
    p.add_argument("--quad-order", type=int, default=20, help="Gauss-Legendre nodes per panel")
    p.add_argument("--quad-panels", type=int, default=2, help="starting panel count")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="rotwell", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("--suites", default=",".join(SUITES), help=f"comma-separated subset of {','.join(SUITES)}")

    p = sub.add_parser("norms", parents=[common], help="closed-form and quadrature norms of rotated eigenfunctions")
    p.add_argument("--jmax", type=int, default=10)

    p = sub.add_parser("spectrum", parents=[common], help="energies, shifted energies and ln rho_n")
    p.add_argument("--jmax", type=int, default=10)

    p = sub.add_parser("overlap", parents=[common], help="cross overlap <phi_k^(phi), phi_j^(-phi)>")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--j", type=int, default=4)

    p = sub.add_parser("cs-eval", parents=[common], help="coherent state on a spatial grid")
    p.add_argument("--J", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--t", type=float, default=0.0, help="evolve by exp(-i h t) before evaluating")
    p.add_argument("--points", type=int, default=101, help="grid points across [-L/2, L/2]")
    p.add_argument("--xmin", type=float, help="grid start (default -L/2)")
    p.add_argument("--xmax", type=float, help="grid end (default L/2)")

    sub.add_parser("cs-moments", parents=[common], help="moment problem report for n = 0..nmax")
    return parser


def _run_config(args) -> RunConfig:
    return RunConfig(args.L, args.phi, args.nmax, args.tol, args.quad_order, args.quad_panels, args.format)


def _table(command: str, rc: RunConfig, rows: list[dict], fmt: str) -> str:
    if fmt == "csv":
        return to_csv(rows)
    return to_json({"config": config_dict(rc), "command": command, "rows": rows})


def cmd_verify(rc: RunConfig, suites) -> tuple[str, int]:
    report = run_verify(rc, suites)
    s = report.summary()
    log.info("verify: %d/%d checks passed", s["passed"], s["total"])
    text = to_csv(report_rows(report)) if rc.output_format == "csv" else to_json(report.as_dict())
    return text, 0 if report.passed else 1


def cmd_norms(rc: RunConfig, jmax: int) -> list[dict]:
    if jmax < 1:
        raise DomainError("--jmax must be >= 1")
    cfg = rc.well
    rows = []
    for j in range(1, jmax + 1):
        closed = norm_sq_h0(j, rc.phi, cfg)
        b = RotatedBasisFunction(j, rc.phi, cfg)
        quad = inner_h0(b, b, cfg).real
        rows.append({"j": j, "closed": closed, "quadrature": quad,
                     "rel_gap": abs(closed - quad) / quad, "ln_norm": log_norm_h0(j, rc.phi, cfg)})
    return rows


def cmd_spectrum(rc: RunConfig, jmax: int) -> list[dict]:
    if jmax < 1:
        raise DomainError("--jmax must be >= 1")
    cfg = rc.well
    return [{"j": j, "E_j": energy(j, cfg), "k": j - 1, "eps_k": shifted_energy(j - 1, cfg),
             "ln_rho_k": log_rho(j - 1, cfg)} for j in range(1, jmax + 1)]


def cmd_overlap(rc: RunConfig, k: int, j: int) -> list[dict]:
    if k < 1 or j < 1:
        raise DomainError("--k and --j must be >= 1")
    ov = cross_overlap(k, j, rc.phi, rc.well)
    row = {"k": k, "j": j, "phi": rc.phi, "re": ov.real, "im": ov.imag, "abs": abs(ov)}
    if (k, j) == (2, 4):
        closed = overlap_2_4_closed(rc.phi)
        row.update(closed_re=closed.real, closed_im=closed.imag, gap=abs(closed - ov))
    return [row]


def cmd_cs_eval(rc: RunConfig, J: float, gamma: float, t: float, points: int, xmin=None, xmax=None) -> list[dict]:
    cfg = rc.well
    h = 0.5 * cfg.L
    xmin = -h if xmin is None else xmin
    xmax = h if xmax is None else xmax
    if points < 2:
        raise DomainError("--points must be >= 2")
    if xmin < -h or xmax > h or xmin >= xmax:
        raise DomainError(f"grid [{xmin}, {xmax}] must lie inside [-{h}, {h}]")
    xs = np.linspace(xmin, xmax, points)
    state = gk.GKState(J, gamma, rc.phi, cfg=cfg)
    c = apply(evolution(t, cfg, shifted=True), gk.gk_coefficients(state))
    vals = reconstruct(c, xs, cfg)
    return [{"x": float(x), "re": float(v.real), "im": float(v.imag), "abs2": float(abs(v) ** 2)}
            for x, v in zip(xs, vals)]


def cmd_cs_moments(rc: RunConfig) -> list[dict]:
    return [{"n": r.n, "quadrature": r.quadrature_value, "target": r.target,
             "relative_error": r.relative_error, "tail_bound": r.tail_bound, "pass": r.passed(1e-6)}
            for r in gk.verify_moments(rc.nmax, rc.well)]


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rc = _run_config(args)
    except ValueError as exc:
        parser.error(str(exc))

    start = time.perf_counter()
    status = 0
    try:
        if args.command == "verify":
            suites = [s.strip() for s in args.suites.split(",") if s.strip()]
            unknown = sorted(set(suites) - set(SUITES))
            if unknown or not suites:
                parser.error(f"unknown suites {unknown}; choose from {','.join(SUITES)}")
            text, status = cmd_verify(rc, suites)
        else:
            if args.command == "norms":
                rows = cmd_norms(rc, args.jmax)
            elif args.command == "spectrum":
                rows = cmd_spectrum(rc, args.jmax)
            elif args.command == "overlap":
                rows = cmd_overlap(rc, args.k, args.j)
            elif args.command == "cs-eval":
                rows = cmd_cs_eval(rc, args.J, args.gamma, args.t, args.points, args.xmin, args.xmax)
            else:
                rows = cmd_cs_moments(rc)
            text = _table(args.command, rc, rows, rc.output_format)
    except DomainError as exc:
        print(f"rotwell {args.command}: error: {exc}", file=sys.stderr)
        return 2
    _emit(text, args.out)
    log.info("%s finished in %.2f s", args.command, time.perf_counter() - start)
    return status


if __name__ == "__main__":
    sys.exit(main())
