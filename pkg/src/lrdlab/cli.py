"""Config-driven command line: classify, limit-cov, convergence, hermite-process, contraction-decay."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from .hermite_algebra import HermiteExpansion
from .lrd_gaussian import Geometric, PowerLaw, Tabulated
from .scaling_laws import (
    ComponentSpec,
    Regime,
    b_const,
    build_limit_model,
    classify,
    d_memory_of_sum,
)
from .hermite_process import (
    HermiteProcessSpec,
    Representation,
    joint_simulate,
    representation_equivalence,
)
from .chaos_contractions import asymptotic_independence_decay
from .montecarlo_harness import (
    convergence_sweep,
    lemma_cov_sweep,
    test_marginal_normality,
)

DEFAULT_SAMPLE_N = (1024, 8192, 65536)


def load_config(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def parse_model(block):
    kind = block["type"].lower()
    if kind == "powerlaw":
        return PowerLaw(d=float(block["d"]))
    if kind == "geometric":
        return Geometric(rho=float(block["rho"]))
    if kind == "tabulated":
        return Tabulated(values=tuple(float(v) for v in block["values"]))
    raise ValueError(f"unknown covariance model type: {block['type']}")


def parse_component(block):
    label = block.get("label", "")
    if "hermite" in block:
        m = int(block["hermite"])
        exp = HermiteExpansion.single(m, scale=float(block.get("scale", 1.0)))
        return ComponentSpec(expansion=exp, label=label or f"H{m}")
    if "coefficients" in block:
        exp = HermiteExpansion.from_coefficients(block["coefficients"])
        return ComponentSpec(expansion=exp, label=label)
    raise ValueError("component needs 'hermite' or 'coefficients'")


def parse_components(cfg):
    return tuple(parse_component(b) for b in cfg["components"])


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, Regime):
        return o.value
    raise TypeError(f"not JSON serializable: {type(o)}")


def write_bundle(out_dir, name, payload, fmt, csv_rows=None, csv_header=None):
    """JSON report (always, deterministic byte layout) plus optional CSV table."""
    os.makedirs(out_dir, exist_ok=True)
    jpath = os.path.join(out_dir, f"{name}.json")
    with open(jpath, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2, default=_json_default)
        fh.write("\n")
    if fmt == "csv" and csv_rows is not None:
        cpath = os.path.join(out_dir, f"{name}.csv")
        with open(cpath, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(csv_header)
            w.writerows(csv_rows)
    return jpath


def _validate_d(cfg):
    d = float(cfg["model"]["d"])
    if not 0.0 < d < 0.5:
        raise SystemExit(f"config error: d = {d} outside (0, 1/2)")
    return d


def cmd_classify(cfg, args):
    model = parse_model(cfg["model"])
    if not isinstance(model, PowerLaw):
        raise SystemExit("classify needs a PowerLaw model with memory parameter d")
    _validate_d(cfg)
    specs = parse_components(cfg)
    limit = build_limit_model(specs, model)
    sample_N = [int(n) for n in cfg.get("N_grid", DEFAULT_SAMPLE_N)]
    rows = []
    for j, spec in enumerate(specs):
        k = spec.rank
        regime = limit.regimes[j]
        row = {
            "component": spec.label or f"component_{j}",
            "rank": k,
            "regime": regime.value,
            "sigma": limit.sigmas[j],
            "d_G": d_memory_of_sum(model.d, k) if regime is not Regime.SRD else None,
            "b_const": limit.b_consts[j],
            "A_N": {
                str(n): float(limit.normalizations(n)[j]) for n in sample_N
            },
        }
        if regime is Regime.BOUNDARY:
            row["note"] = "boundary case: A(N) grows like (N ln N)^{1/2}"
        rows.append(row)
    payload = {"config": cfg, "subcommand": "classify", "table": rows}
    csv_rows = [
        [r["component"], r["rank"], r["regime"], r["sigma"], r["d_G"], r["b_const"]]
        + [r["A_N"][str(n)] for n in sample_N]
        for r in rows
    ]
    header = ["component", "rank", "regime", "sigma", "d_G", "b_const"] + [
        f"A({n})" for n in sample_N
    ]
    write_bundle(args.out, "classify", payload, args.format, csv_rows, header)
    return 0


def cmd_limit_cov(cfg, args):
    model = parse_model(cfg["model"])
    _validate_d(cfg)
    specs = parse_components(cfg)
    limit = build_limit_model(specs, model)
    t_pairs = [tuple(map(float, p)) for p in cfg.get("t_pairs", [[1.0, 1.0]])]
    idx, mats = limit.srd_cov_matrix(t_pairs)
    min_eig = min(float(np.linalg.eigvalsh(m).min()) for m in mats) if idx else 0.0
    payload = {
        "config": cfg,
        "subcommand": "limit-cov",
        "srd_components": [specs[j].label or f"component_{j}" for j in idx],
        "t_pairs": t_pairs,
        "matrices": [m.tolist() for m in mats],
        "min_eigenvalue": min_eig,
        "psd": bool(min_eig >= -1e-10),
    }
    csv_rows = []
    for p, (t1, t2) in enumerate(t_pairs):
        for a, ja in enumerate(idx):
            for b, jb in enumerate(idx):
                csv_rows.append([t1, t2, specs[ja].label or f"component_{ja}",
                                 specs[jb].label or f"component_{jb}", mats[p][a, b]])
    write_bundle(args.out, "limit_cov", payload, args.format, csv_rows,
                 ["t1", "t2", "component_1", "component_2", "covariance"])
    return 0 if payload["psd"] else 1


def cmd_convergence(cfg, args, seed):
    model = parse_model(cfg["model"])
    _validate_d(cfg)
    specs = parse_components(cfg)
    N_grid = [int(n) for n in cfg.get("N_grid", [cfg.get("N", 4096)])]
    t_grid = [float(t) for t in cfg.get("t_grid", [0.5, 1.0])]
    R = int(cfg.get("R", 200))
    t_pairs = [tuple(map(float, p)) for p in cfg.get("t_pairs", [[1.0, 1.0]])]
    sweep = convergence_sweep(specs, model, N_grid, t_grid, R, seed,
                              t_pairs=t_pairs, n_jobs=args.threads)
    reports = []
    all_pass = True
    for entry in sweep:
        rep = entry["report"]
        reports.append({"N": entry["N"], "max_abs_error": entry["max_abs_error"],
                        **rep.to_dict()})
        all_pass = all_pass and rep.verdict == "pass"
    lemma = None
    if "lemma" in cfg:
        lc = cfg["lemma"]
        lemma = lemma_cov_sweep(model, int(lc["m"]), float(lc["t1"]),
                                float(lc["t2"]), [int(n) for n in lc["N_grid"]])
    payload = {
        "config": cfg,
        "subcommand": "convergence",
        "seed": seed,
        "reports": reports,
        "lemma_sweep": lemma,
        "all_pass": all_pass,
        "failing": [r["name"] for r in reports if r["verdict"] != "pass"],
    }
    csv_rows = [[r["N"], r["name"], r["verdict"], r["statistic"], r["max_abs_error"]]
                for r in reports]
    write_bundle(args.out, "convergence", payload, args.format, csv_rows,
                 ["N", "test", "verdict", "worst_z", "max_abs_error"])
    return 0 if all_pass else 1


def cmd_hermite_process(cfg, args, seed):
    d = _validate_d(cfg)
    k = int(cfg.get("k", 2))
    rep_name = cfg.get("representation", "FINITE_INTERVAL")
    rep = Representation[rep_name]
    M = int(cfg.get("M", 128))
    t_grid = np.asarray(cfg.get("t_grid", [0.25, 0.5, 0.75, 1.0]), dtype=float)
    R = int(cfg.get("R", 200))
    spec = HermiteProcessSpec(k=k, d=d, representation=rep, M=M)
    paths = joint_simulate([k], d, t_grid, seed, R=R, representation=rep, M=M)[:, 0, :]

    equiv = None
    if "compare_to" in cfg:
        other = Representation[cfg["compare_to"]]
        equiv = representation_equivalence(k, rep, other, d, t_grid, R, seed, M=M)
        equiv = {key: (v.tolist() if isinstance(v, np.ndarray) else v)
                 for key, v in equiv.items()}
    var1 = float(np.mean(paths[:, -1] ** 2)) if abs(t_grid[-1] - 1.0) < 1e-12 else None
    payload = {
        "config": cfg,
        "subcommand": "hermite-process",
        "seed": seed,
        "hurst": spec.self_similarity,
        "t_grid": t_grid.tolist(),
        "empirical_cov": np.cov(paths.T, bias=True).tolist() if R > 1 else None,
        "var_at_1": var1,
        "equivalence": equiv,
    }
    csv_rows = [[r] + paths[r].tolist() for r in range(R)]
    write_bundle(args.out, "hermite_process", payload, args.format, csv_rows,
                 ["replication"] + [f"t={t:g}" for t in t_grid])
    ok = equiv is None or equiv["max_sigma"] <= 3.0
    return 0 if ok else 1


def cmd_contraction_decay(cfg, args):
    model = parse_model(cfg["model"])
    _validate_d(cfg)
    p = int(cfg.get("p", 2))
    q = int(cfg.get("q", 3))
    N_grid = [int(n) for n in cfg.get("N_grid", [64, 128, 256, 512, 1024])]
    t = float(cfg.get("t", 1.0))
    rows = asymptotic_independence_decay(p, q, model, N_grid, t)
    by_r = {}
    for row in rows:
        by_r.setdefault(row["r"], []).append(row["norm"])
    decays = {str(r): {"initial": v[0], "final": v[-1],
                       "monotone": bool(all(b <= a * (1 + 1e-12) for a, b in zip(v, v[1:])))}
              for r, v in sorted(by_r.items())}
    payload = {
        "config": cfg,
        "subcommand": "contraction-decay",
        "N_grid": N_grid,
        "rows": rows,
        "summary": decays,
    }
    csv_rows = [[row["N"], row["r"], row["norm"]] for row in rows]
    write_bundle(args.out, "contraction_decay", payload, args.format, csv_rows,
                 ["N", "r", "contraction_norm"])
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="lrdlab",
        description="Limit theorems for nonlinear functions of long-range dependent Gaussian series",
    )
    p.add_argument("--config", required=True, help="JSON experiment configuration")
    p.add_argument("--seed", type=int, default=None, help="master seed (overrides config)")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                   help="parallel replications (results identical for any value)")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("subcommand", choices=(
        "classify", "limit-cov", "convergence", "hermite-process", "contraction-decay"))
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    cfg = load_config(args.config)
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    cfg = dict(cfg)
    cfg["seed"] = seed
    if args.subcommand == "classify":
        return cmd_classify(cfg, args)
    if args.subcommand == "limit-cov":
        return cmd_limit_cov(cfg, args)
    if args.subcommand == "convergence":
        return cmd_convergence(cfg, args, seed)
    if args.subcommand == "hermite-process":
        return cmd_hermite_process(cfg, args, seed)
    return cmd_contraction_decay(cfg, args)


if __name__ == "__main__":
    sys.exit(main())
