"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or parameter error,
3 numerical warning (possible missed root, unconverged oracle grid).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from typing import Any, Optional, Sequence

import numpy as np

from . import moldb
from .errors import (BracketError, ConvergenceError, DomainError, LevelIndexError,
                     MissedRootWarning, MoleculeParseError, RegimeError, SingularityError)
from .model import (PotentialParams, RegimeKind, classify_regime, fit_centrifugal_approx,
                    potential_eval)
from .oracle import NumerovConfig, level_shift, numerov_levels, refined
from .spectra import RootScanConfig, levels_for
from .wavefn import evaluate, make_wavefunction

DATA_ENV = "TIETZ_SPECTRA_DATA"

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_WARN = 0, 1, 2, 3

# default pass/fail tolerances for `verify`
TOLERANCES = {
    RegimeKind.CASE1_MR: 1e-6,
    RegimeKind.CASE2_HALFSPACE_MR: 1e-5,
    RegimeKind.CASE3_RM: 1e-5,
    RegimeKind.MORSE: 1e-6,
}


class UsageError(Exception):
    pass


def fmt(x: Any) -> Any:
    """Round floats to 12 significant digits; leave everything else alone."""
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return x
        return float(f"{x:.12g}")
    return x


# ------------------------------------------------------------ parameters

def _file_records(args) -> list[moldb.MoleculeRecord]:
    path = args.file or os.environ.get(DATA_ENV)
    if not path:
        return []
    try:
        return moldb.load_molecules(path)
    except OSError as exc:
        raise UsageError(f"cannot read molecule file {path}: {exc.strerror}") from None


def _records(args) -> list[moldb.MoleculeRecord]:
    return moldb.builtin_molecules() + _file_records(args)


def resolve_params(args) -> PotentialParams:
    b_h, r_e, c_h, D, mu = args.b_h, args.r_e, args.c_h, args.D, args.mu
    units = args.units
    if args.molecule:
        try:
            rec = moldb.find_molecule(args.molecule, _records(args))
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
        b_h = rec.b_h if b_h is None else b_h
        r_e = rec.r_e if r_e is None else r_e
        c_h = rec.c_h if c_h is None else c_h
        D = rec.D if D is None else D
        mu = rec.mu if mu is None else mu
        units = units or "molecular"
    units = units or "natural"
    missing = [flag for flag, v in (("--b-h", b_h), ("--r-e", r_e), ("--c-h", c_h), ("--D", D))
               if v is None]
    if units == "molecular" and mu is None:
        missing.append("--mu")
    if missing:
        raise UsageError(f"{units} units need {', '.join(missing)}")
    if not abs(c_h) < 1:
        raise UsageError("|c_h| must be < 1")
    if units == "molecular":
        return PotentialParams.molecular(D, r_e, b_h, c_h, mu)
    return PotentialParams.natural(D, r_e, b_h, c_h, hbar2_over_2mu=args.hbar2_over_2mu)


def _params_dict(p: PotentialParams) -> dict:
    return {"units": p.units, "D": fmt(p.D), "r_e": fmt(p.r_e), "b_h": fmt(p.b_h), "c_h": fmt(p.c_h),
            "mu": fmt(p.mu), "hbar2_over_2mu": fmt(p.hbar2_over_2mu)}


def _regime_dict(p: PotentialParams) -> dict:
    reg = classify_regime(p)
    return {"kind": reg.kind.value, "c_h_min": fmt(reg.c_h_min), "r0": fmt(reg.r0),
            "xi0": fmt(reg.xi0), "x0": fmt(reg.x0)}


# ------------------------------------------------------------ output

def emit(args, columns: Sequence[str], rows: Sequence[Sequence[Any]],
         params: Optional[dict] = None, regime: Optional[dict] = None) -> None:
    rows = [[fmt(v) for v in row] for row in rows]
    if args.format == "json":
        doc = {"params": params or {}, "regime": regime or {},
               "results": [dict(zip(columns, row)) for row in rows]}
        text = json.dumps(doc, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow(["" if v is None else (f"{v:.12g}" if isinstance(v, float) else v)
                             for v in row])
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def notice(msg: str) -> None:
    print(f"note: {msg}", file=sys.stderr)


# ------------------------------------------------------------ commands

def cmd_classify(args) -> int:
    p = resolve_params(args)
    reg = _regime_dict(p)
    emit(args, ["regime", "c_h_min", "r0", "xi0", "x0"],
         [[reg["kind"], reg["c_h_min"], reg["r0"], reg["xi0"], reg["x0"]]],
         _params_dict(p), reg)
    return EXIT_OK


def _scan_config(args, bisect_tol: Optional[float] = None) -> RootScanConfig:
    return RootScanConfig(grid_points=args.scan_points,
                          bisect_rel_tol=bisect_tol if bisect_tol is not None else 1e-12)


def cmd_levels(args) -> int:
    p = resolve_params(args)
    kind = classify_regime(p).kind
    l = args.l
    if kind is not RegimeKind.CASE1_MR and l != 0:
        notice(f"{kind.value} is solved for s-waves only; using l = 0")
        l = 0
    levels = levels_for(p, l, scan=_scan_config(args, args.tol))
    if args.n_r is not None:
        if not 0 <= args.n_r < len(levels):
            raise LevelIndexError(f"n_r = {args.n_r} unavailable: n_r,max = {len(levels) - 1}")
        levels = [levels[args.n_r]]
    emit(args, ["n_r", "l", "energy", "method", "residual"],
         [[lv.n_r, lv.l, lv.energy, lv.method.value, lv.residual] for lv in levels],
         _params_dict(p), _regime_dict(p))
    return EXIT_OK


def cmd_potential(args) -> int:
    p = resolve_params(args)
    reg = classify_regime(p)
    start = reg.domain_start
    r_start = args.r_start if args.r_start is not None else start + 0.01 * p.r_e
    r_stop = args.r_stop if args.r_stop is not None else p.r_e + 10.0 / p.b_h
    if not r_start < r_stop:
        raise UsageError("--r-start must be below --r-stop")
    if r_start <= 0:
        raise UsageError("--r-start must be > 0")
    if reg.kind is RegimeKind.CASE1_MR and r_start <= reg.r0:
        raise UsageError(f"--r-start must exceed r0 = {reg.r0:.12g} in Case1")
    if args.samples < 2:
        raise UsageError("--samples must be >= 2")
    r = np.linspace(r_start, r_stop, args.samples)
    v = potential_eval(p, r)
    emit(args, ["r", "V"], list(zip(r.tolist(), v.tolist())), _params_dict(p), _regime_dict(p))
    return EXIT_OK


def cmd_wavefunction(args) -> int:
    p = resolve_params(args)
    kind = classify_regime(p).kind
    l = args.l
    if kind is not RegimeKind.CASE1_MR and l != 0:
        notice(f"{kind.value} is solved for s-waves only; using l = 0")
        l = 0
    levels = levels_for(p, l, scan=_scan_config(args, args.tol))
    n_r = args.n_r or 0
    if not 0 <= n_r < len(levels):
        raise LevelIndexError(f"n_r = {n_r} unavailable: n_r,max = {len(levels) - 1}")
    spec = make_wavefunction(p, levels[n_r])
    if args.grid < 3:
        raise UsageError("--grid must be >= 3")
    r_stop = args.r_stop if args.r_stop is not None else spec.r_end
    r = np.linspace(spec.r_start, r_stop, args.grid)
    chi = evaluate(spec, r)
    emit(args, ["r", "chi"], list(zip(r.tolist(), chi.tolist())), _params_dict(p), _regime_dict(p))
    return EXIT_OK


def cmd_verify(args) -> int:
    p = resolve_params(args)
    kind = classify_regime(p).kind
    l = args.l
    if kind is not RegimeKind.CASE1_MR and l != 0:
        notice(f"{kind.value} is solved for s-waves only; using l = 0")
        l = 0
    mode = args.centrifugal
    informational = kind is RegimeKind.CASE1_MR and l > 0 and mode == "exact"
    tol = args.tol if args.tol is not None else TOLERANCES[kind]
    analytic = levels_for(p, l, scan=_scan_config(args))
    approx = fit_centrifugal_approx(p) if kind is RegimeKind.CASE1_MR else None
    cfg = NumerovConfig(n_points=args.grid, centrifugal_mode=mode if l > 0 else "none",
                        r_max=args.r_max)
    oracle = numerov_levels(p, l, cfg, approx=approx)
    fine = numerov_levels(p, l, refined(cfg), approx=approx)
    rows, failed = [], False
    for n in range(max(len(analytic), len(oracle))):
        ea = analytic[n].energy if n < len(analytic) else None
        eo = oracle[n].energy if n < len(oracle) else None
        dev = abs(ea - eo) / abs(eo) if ea is not None and eo is not None else None
        if informational:
            status = "info"
        elif dev is None or dev > tol:
            status, failed = "fail", True
        else:
            status = "pass"
        rows.append([n, l, ea, eo, dev, None if informational else tol, status])
    emit(args, ["n_r", "l", "analytic", "oracle", "rel_dev", "tol", "status"], rows,
         _params_dict(p), _regime_dict(p))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        level_shift(oracle, fine, cfg.e_tol_rel, cfg.n_points)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if caught:
        return EXIT_WARN
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_molecules(args) -> int:
    printed = moldb.printed_c_h_min()
    rows = [[m.name, m.b_h, m.r_e, m.c_h_min, printed.get(m.name), m.D, m.mu]
            for m in moldb.builtin_molecules()]
    rows += [[m.name, m.b_h, m.r_e, m.c_h_min, None, m.D, m.mu] for m in _file_records(args)]
    emit(args, ["name", "b_h", "r_e", "c_h_min", "c_h_min_printed", "D", "mu"], rows)
    return EXIT_OK


# ------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("potential")
    g.add_argument("--units", choices=["natural", "molecular"],
                   help="natural (default) or molecular: D in eV, lengths in Angstrom, mu in amu")
    g.add_argument("--D", type=float, help="well depth")
    g.add_argument("--mu", type=float, help="reduced mass (amu, molecular units)")
    g.add_argument("--b-h", dest="b_h", type=float, help="range parameter b_h")
    g.add_argument("--r-e", dest="r_e", type=float, help="equilibrium bond length")
    g.add_argument("--c-h", dest="c_h", type=float, help="deformation parameter c_h")
    g.add_argument("--hbar2-over-2mu", dest="hbar2_over_2mu", type=float, default=1.0,
                   help="kinetic scale in natural units (default 1)")
    g.add_argument("--molecule", help="take b_h and r_e from a named molecule")
    g.add_argument("--file", help=f"molecule file (default: ${DATA_ENV})")
    o = common.add_argument_group("output")
    o.add_argument("--format", choices=["csv", "json"], default="csv")
    o.add_argument("--out", help="write to this path instead of stdout")

    parser = argparse.ArgumentParser(prog="tietz-spectra",
                                     description="Bound states of the Tietz-Wei potential.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="report the c_h regime")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("levels", parents=[common], help="bound-state energies")
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--n-r", dest="n_r", type=int)
    p.add_argument("--scan-points", dest="scan_points", type=int, default=2000)
    p.add_argument("--tol", type=float, help="relative bisection tolerance of root scans")
    p.set_defaults(func=cmd_levels)

    p = sub.add_parser("potential", parents=[common], help="sample V(r)")
    p.add_argument("--r-start", dest="r_start", type=float)
    p.add_argument("--r-stop", dest="r_stop", type=float)
    p.add_argument("--samples", type=int, default=200)
    p.set_defaults(func=cmd_potential)

    p = sub.add_parser("wavefunction", parents=[common], help="sample a normalized chi(r)")
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--n-r", dest="n_r", type=int, default=0)
    p.add_argument("--grid", type=int, default=400, help="number of samples")
    p.add_argument("--r-stop", dest="r_stop", type=float)
    p.add_argument("--scan-points", dest="scan_points", type=int, default=2000)
    p.add_argument("--tol", type=float, help="relative bisection tolerance of root scans")
    p.set_defaults(func=cmd_wavefunction)

    p = sub.add_parser("verify", parents=[common], help="compare analytic levels with Numerov")
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--grid", type=int, default=20001, help="Numerov grid points")
    p.add_argument("--r-max", dest="r_max", type=float, help="right wall of the Numerov box")
    p.add_argument("--centrifugal", choices=["exact", "approximated"], default="approximated",
                   help="centrifugal term seen by the oracle for l > 0")
    p.add_argument("--scan-points", dest="scan_points", type=int, default=2000)
    p.add_argument("--tol", type=float, help="pass/fail relative tolerance")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("molecules", parents=[common], help="list molecule records")
    p.set_defaults(func=cmd_molecules)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", MissedRootWarning)
            code = args.func(args)
        missed = [w for w in caught if issubclass(w.category, MissedRootWarning)]
        for w in missed:
            print(f"warning: {w.message}", file=sys.stderr)
        if missed and code == EXIT_OK:
            return EXIT_WARN
        return code
    except (UsageError, DomainError, RegimeError, LevelIndexError, BracketError,
            MoleculeParseError, SingularityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_WARN


if __name__ == "__main__":
    sys.exit(main())
