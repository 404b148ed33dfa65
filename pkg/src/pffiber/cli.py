"""Command-line driver: single-point runs, P sweeps, and verification.

Subcommands
-----------
spectrum     per-momentum JSON reports plus an aggregate CSV
sweep        CSV with bound-check columns, plus a summary of min-over-P margins
bounds       explicit constants and sandwich margins along the ladder
convergence  E(P) along the truncation refinement ladder
verify       full check suite; exit code 0 iff all hard checks pass
print-config dump the effective configuration (defaults merged with --config)

Common flags: --config PATH, --out DIR, --threads N, --seed N, --cache PATH.
Exit codes: 0 pass, 1 assertion failure, 2 usage or config error.

Outputs render floats with 17 significant digits so files round-trip
losslessly; sweep workers run in parallel but rows are aggregated in ladder
order, making reruns byte-identical at a fixed configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, replace

import numpy as np

from . import bounds as bnd
from .config import ConfigError, RunConfig, default_config, dump_config, load_config
from .fock import hermiticity_defect
from .hamiltonian import build_H, build_model
from .kramers import check_theta_commutes, kramers_certificate
from .spectral import (
    EnergyCache,
    EigensolverError,
    SpectrumReport,
    convergence_study,
    delta_gap,
    ground_data,
    low_spectrum,
)
from .verify import run_verify

CSV_HEADER = "P_x,P_y,P_z,E,E1,mult,delta,sigma_minus,count_below"
SWEEP_EXTRA = (
    "sandwich_lower,sandwich_upper,delta_margin,chain_margin,direct_margin,"
    "envelope_ok"
)


def _fmt(x) -> str:
    if x is None:
        return "nan"
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def compute_report(P, model, consts, cache, cluster_tol) -> SpectrumReport:
    """Assemble the per-momentum spectral summary."""
    e0, e1, mult = ground_data(P, model, cluster_tol=cluster_tol, cache=cache)
    delta = delta_gap(P, model, cache=cache)
    h = build_H(P, model)
    sigma = consts.sigma_minus(P)
    vals, vecs = low_spectrum(h, min(h.shape[0], 4))
    eig_res = float(
        np.max(np.linalg.norm(h @ vecs - vecs * vals[None, :], axis=0))
    )
    return SpectrumReport(
        P=tuple(float(x) for x in P),
        E=e0,
        E1=e1,
        ground_multiplicity=mult,
        delta=delta,
        sigma_minus=sigma,
        eigencount_below_sigma=bnd.count_below(h, sigma),
        residuals={
            "eigenpair": eig_res,
            "hermiticity": hermiticity_defect(h),
            "theta_commutation": check_theta_commutes(h),
        },
    )


def _pool(cfg: RunConfig):
    workers = cfg.threads if cfg.threads > 0 else (os.cpu_count() or 1)
    return ThreadPoolExecutor(max_workers=workers)


def run_spectrum(cfg: RunConfig, out_dir: str, cache: EnergyCache) -> int:
    os.makedirs(out_dir, exist_ok=True)
    model = build_model(cfg.params)
    consts = bnd.bound_constants(model)
    momenta = cfg.momenta()

    def work(P):
        try:
            return compute_report(P, model, consts, cache, cfg.tolerances.cluster_rel)
        except EigensolverError as exc:
            return (tuple(float(x) for x in P), str(exc))

    with _pool(cfg) as pool:
        rows = list(pool.map(work, momenta))

    csv_path = os.path.join(out_dir, "spectrum.csv")
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(CSV_HEADER + "\n")
        for i, rep in enumerate(rows):
            if isinstance(rep, tuple):  # eigensolver failure: record, keep going
                P, msg = rep
                with open(
                    os.path.join(out_dir, f"P_{i:03d}.json"), "w", encoding="utf-8"
                ) as jf:
                    json.dump({"P": list(P), "error": msg}, jf, indent=2)
                continue
            vals = (
                *rep.P, rep.E, rep.E1, rep.ground_multiplicity, rep.delta,
                rep.sigma_minus, rep.eigencount_below_sigma,
            )
            fh.write(",".join(_fmt(v) for v in vals) + "\n")
            with open(
                os.path.join(out_dir, f"P_{i:03d}.json"), "w", encoding="utf-8"
            ) as jf:
                jf.write(rep.to_json())
    return 0


def run_sweep(cfg: RunConfig, out_dir: str, cache: EnergyCache) -> int:
    os.makedirs(out_dir, exist_ok=True)
    model = build_model(cfg.params)
    consts = bnd.bound_constants(model)
    momenta = cfg.momenta()

    def work(P):
        try:
            rep = compute_report(P, model, consts, cache, cfg.tolerances.cluster_rel)
            lower, upper, scale = bnd.sandwich_margins(P, model, consts)
            gap = bnd.theorem_gap_report(P, model, consts, cache=cache)
            return rep, (lower / scale, upper / scale), gap
        except EigensolverError as exc:
            return (tuple(float(x) for x in P), str(exc))

    with _pool(cfg) as pool:
        rows = list(pool.map(work, momenta))

    failures = [r for r in rows if len(r) == 2]
    rows = [r for r in rows if len(r) == 3]
    csv_path = os.path.join(out_dir, "sweep.csv")
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(CSV_HEADER + "," + SWEEP_EXTRA + "\n")
        for rep, (lo, hi), gap in rows:
            vals = (
                *rep.P, rep.E, rep.E1, rep.ground_multiplicity, rep.delta,
                rep.sigma_minus, rep.eigencount_below_sigma,
                lo, hi, gap.delta_margin, gap.chain_margin, gap.direct_margin,
                gap.envelope_ok,
            )
            fh.write(",".join(_fmt(v) for v in vals) + "\n")

    gaps = [r[2] for r in rows]
    summary = {
        "constants": asdict(consts),
        "min_E1_minus_E": min(
            (g.E1 - g.E) for g in gaps if g.E1 is not None
        ),
        "min_delta": min(g.delta for g in gaps),
        "min_sandwich_lower": min(r[1][0] for r in rows),
        "min_sandwich_upper": min(r[1][1] for r in rows),
        "min_delta_margin": min(g.delta_margin for g in gaps),
        "min_chain_margin": min(g.chain_margin for g in gaps),
        "min_direct_margin": min(g.direct_margin for g in gaps),
        "all_envelope_ok": all(g.envelope_ok for g in gaps),
        "all_count_two": all(g.count_below_sigma == 2 for g in gaps),
    }
    with open(
        os.path.join(out_dir, "sweep_summary.json"), "w", encoding="utf-8"
    ) as fh:
        json.dump(summary, fh, indent=2, sort_keys=True, default=float)
    return 0


def run_bounds(cfg: RunConfig, out_dir: str, cache: EnergyCache) -> int:
    os.makedirs(out_dir, exist_ok=True)
    model = build_model(cfg.params)
    consts = bnd.bound_constants(model)
    with open(
        os.path.join(out_dir, "bound_constants.json"), "w", encoding="utf-8"
    ) as fh:
        json.dump(asdict(consts), fh, indent=2, sort_keys=True, default=float)
    path = os.path.join(out_dir, "bounds.csv")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(
            "P_x,P_y,P_z,sigma_minus,lower_envelope,upper_envelope,"
            "sandwich_lower,sandwich_upper,count_below\n"
        )
        for P in cfg.momenta():
            lower, upper, scale = bnd.sandwich_margins(P, model, consts)
            h = build_H(P, model)
            vals = (
                *P,
                consts.sigma_minus(P),
                consts.lower_envelope(P),
                consts.upper_envelope(P),
                lower / scale,
                upper / scale,
                bnd.count_below(h, consts.sigma_minus(P)),
            )
            fh.write(",".join(_fmt(v) for v in vals) + "\n")
    return 0


def run_convergence(cfg: RunConfig, out_dir: str) -> int:
    os.makedirs(out_dir, exist_ok=True)
    momenta = cfg.momenta()
    P = momenta[len(momenta) // 2]
    rows = convergence_study(P, cfg.small_params, cfg.convergence_ladder)
    with open(
        os.path.join(out_dir, "convergence.csv"), "w", encoding="utf-8"
    ) as fh:
        fh.write("N_max,n_shells,dim,E,diff_prev\n")
        for r in rows:
            fh.write(
                ",".join(
                    _fmt(r[c]) for c in ("N_max", "n_shells", "dim", "E", "diff_prev")
                )
                + "\n"
            )
    return 0


def run_verify_cmd(cfg: RunConfig, out_dir: str, cache: EnergyCache) -> int:
    os.makedirs(out_dir, exist_ok=True)
    code, results = run_verify(cfg, cache=cache, printer=print)
    report = {
        "exit_code": code,
        "checks": [asdict(r) for r in results],
        "kramers_certificates": [],
    }
    model = build_model(cfg.params)
    consts = bnd.bound_constants(model)
    for P in cfg.momenta():
        cert = kramers_certificate(
            P, model, consts, e_star=cfg.verify.e_star, cache=cache
        )
        report["kramers_certificates"].append(asdict(cert))
    with open(
        os.path.join(out_dir, "verify_report.json"), "w", encoding="utf-8"
    ) as fh:
        json.dump(report, fh, indent=2, sort_keys=True, default=float)
    print(f"verify: exit code {code}")
    return code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pffiber",
        description="Spectral toolkit for the truncated fiber Hamiltonian "
        "of a semi-relativistic charge coupled to the quantized Maxwell field",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("spectrum", "sweep", "verify", "bounds", "convergence", "print-config"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", metavar="PATH", default=None)
        sp.add_argument("--out", metavar="DIR", default=None)
        sp.add_argument("--threads", metavar="N", type=int, default=None)
        sp.add_argument("--seed", metavar="N", type=int, default=None)
        sp.add_argument("--cache", metavar="PATH", default=None)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else default_config()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.threads is not None:
        cfg = replace(cfg, threads=args.threads)
    if args.seed is not None:
        cfg = replace(cfg, verify=replace(cfg.verify, seed=args.seed))
    out_dir = args.out or cfg.out_dir
    cache_path = args.cache or cfg.cache_path
    cache = EnergyCache(path=cache_path)

    if args.command == "print-config":
        print(dump_config(cfg))
        return 0
    try:
        if args.command == "spectrum":
            code = run_spectrum(cfg, out_dir, cache)
        elif args.command == "sweep":
            code = run_sweep(cfg, out_dir, cache)
        elif args.command == "bounds":
            code = run_bounds(cfg, out_dir, cache)
        elif args.command == "convergence":
            code = run_convergence(cfg, out_dir)
        elif args.command == "verify":
            code = run_verify_cmd(cfg, out_dir, cache)
        else:  # pragma: no cover - argparse guards
            return 2
    finally:
        cache.save()
    return code


if __name__ == "__main__":
    raise SystemExit(main())
