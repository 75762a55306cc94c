"""Command-line entry points.

Subcommands: simulate, pde, rates-table, check-invariance, hydro-compare,
validate.  Shared options may come from a config file of KEY = VALUE lines
(``--config``); explicit flags override file values.  Outputs are CSV and
JSON with the layouts documented in the README.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .exactgen import ProductMeasure, check_stationarity
from .harness import (ConvergenceReport, ExperimentConfig, figure1_export,
                      hydro_compare, parse_profile, run_manifest, validate_all)
from .kernels import RateKernel
from .kmc import default_ell, init, run
from .pde import solve


def _add_config_flag(p):
    p.add_argument("--config", type=Path, help="KEY = VALUE file with defaults")


def _file_defaults(args, keys):
    if not getattr(args, "config", None):
        return {}
    out = {}
    for raw in args.config.read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if key in keys:
            out[key] = value.strip()
    return out


def _merge(args, keys):
    """File values fill in flags the user left at None."""
    defaults = _file_defaults(args, keys)
    for key, raw in defaults.items():
        if getattr(args, key, None) is None:
            setattr(args, key, raw)


def cmd_simulate(args) -> int:
    _merge(args, {"n", "m", "ell", "t_final", "samples", "eps", "profile",
                  "replicas", "seed"})
    n = int(args.n)
    m = float(args.m)
    ell = int(args.ell) if args.ell is not None else default_ell(n)
    t_final = float(args.t_final)
    samples = int(args.samples)
    eps = float(args.eps)
    replicas = int(args.replicas)
    seed = int(args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    times = np.linspace(0.0, t_final, samples + 1)[1:] if samples else [t_final]
    kernel = RateKernel(m, ell)
    profile = parse_profile(args.profile)
    seeds = np.random.SeedSequence(seed).generate_state(replicas, np.uint32)
    for r, s in enumerate(seeds):
        state = init(profile, n, kernel, int(s))
        measures = run(state, times, eps)
        with (out / f"replica_{r:03d}.csv").open("w") as fh:
            fh.write("t,box_index,density\n")
            for em in measures:
                for j, v in enumerate(em.values):
                    fh.write(f"{em.t!r},{j},{float(v)!r}\n")
    manifest = run_manifest({
        "experiment": "simulate", "n": n, "m": m, "ell": ell,
        "t_final": t_final, "samples": samples, "eps": eps,
        "profile": args.profile, "replicas": replicas, "seed": seed,
        "replica_seeds": [int(s) for s in seeds],
    })
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2))
    print(f"wrote {replicas} replica file(s) to {out}")
    return 0


def cmd_pde(args) -> int:
    _merge(args, {"m", "mode", "profile", "t_final", "grid"})
    m = float(args.m)
    mode = args.mode
    if mode != "exact" and not mode.startswith("truncated:"):
        print(f"mode must be 'exact' or 'truncated:<ell>', got {mode!r}",
              file=sys.stderr)
        return 2
    solver_mode = "power" if mode == "exact" else ("series", int(mode.split(":")[1]))
    t_final = float(args.t_final)
    cells = int(args.grid)
    times = np.linspace(0.0, t_final, 11)
    grids = solve(parse_profile(args.profile), m, solver_mode, t_final, cells,
                  snap_times=times)
    with Path(args.out).open("w") as fh:
        fh.write("t,u,rho\n")
        for grid in grids:
            for u, r in zip(grid.u, grid.rho):
                fh.write(f"{grid.t!r},{float(u)!r},{float(r)!r}\n")
    print(f"wrote {Path(args.out)}")
    return 0


def cmd_rates_table(args) -> int:
    ms = [float(s) for s in args.m.split(",")]
    paths = figure1_export(ms, int(args.ell), args.out, size=int(args.size))
    print("\n".join(str(p) for p in paths))
    return 0


def cmd_check_invariance(args) -> int:
    n, m, ell, rho = int(args.n), float(args.m), int(args.ell), float(args.rho)
    residual = check_stationarity(ProductMeasure(rho, n), RateKernel(m, ell),
                                  n_random=20, seed=int(args.seed))
    report = run_manifest({
        "experiment": "check-invariance", "n": n, "m": m, "ell": ell,
        "rho": rho, "seed": int(args.seed), "max_residual": residual,
        "tolerance": 1e-12, "passed": bool(residual <= 1e-12),
    })
    text = json.dumps(report, indent=2)
    if args.out:
        Path(args.out).write_text(text)
    print(text)
    return 0 if residual <= 1e-12 else 1


def cmd_hydro_compare(args) -> int:
    overrides = {}
    for key in ("m", "n_list", "profile", "times", "eps", "replicas", "seed",
                "pde_cells", "workers", "threshold", "ell_rule"):
        val = getattr(args, key, None)
        if val is not None:
            overrides[key] = val
    if args.config:
        config = ExperimentConfig.from_file(args.config, overrides)
    else:
        if "m" not in overrides:
            print("--m is required without a config file", file=sys.stderr)
            return 2
        config = _config_from_overrides(overrides)
    report = hydro_compare(config)
    text = report.to_json(args.out)
    if not args.out:
        print(text)
    else:
        print(f"wrote {args.out}; passed={report.passed}")
    return 0 if report.passed else 1


def _config_from_overrides(overrides: dict) -> ExperimentConfig:
    kwargs = dict(overrides)
    if "n_list" in kwargs:
        kwargs["n_list"] = [int(s) for s in str(kwargs["n_list"]).split(",")]
    if "times" in kwargs:
        kwargs["times"] = [float(s) for s in str(kwargs["times"]).split(",")]
    for key in ("replicas", "seed", "pde_cells", "workers"):
        if key in kwargs:
            kwargs[key] = int(kwargs[key])
    for key in ("m", "eps", "threshold"):
        if key in kwargs:
            kwargs[key] = float(kwargs[key])
    return ExperimentConfig(**kwargs)


def cmd_validate(args) -> int:
    report = validate_all(seed=int(args.seed), mutation_check=not args.no_mutation)
    text = json.dumps(report, indent=2)
    if args.out:
        Path(args.out).write_text(text)
    print(text)
    return 0 if report["all_passed"] else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="powergas",
        description="Constrained lattice gas interpolating slow and fast diffusion")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run replica trajectories, write box densities")
    _add_config_flag(p)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=float)
    p.add_argument("--ell", type=int, default=None)
    p.add_argument("--t-final", dest="t_final", type=float)
    p.add_argument("--samples", type=int, default=1)
    p.add_argument("--eps", type=float, default=1 / 32)
    p.add_argument("--profile", default="cosine")
    p.add_argument("--replicas", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("pde", help="solve the reference equation, write t,u,rho CSV")
    _add_config_flag(p)
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--mode", default="exact", help="exact or truncated:<ell>")
    p.add_argument("--profile", default="cosine")
    p.add_argument("--t-final", dest="t_final", type=float, required=True)
    p.add_argument("--grid", type=int, default=512)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_pde)

    p = sub.add_parser("rates-table", help="export gap-rate tables as CSV, one per m")
    p.add_argument("--m", default="0.25,0.5,0.75,1,1.25,1.5,1.75,2")
    p.add_argument("--ell", type=int, default=40)
    p.add_argument("--size", type=int, default=40)
    p.add_argument("--out", default="rates")
    p.set_defaults(func=cmd_rates_table)

    p = sub.add_parser("check-invariance", help="exact stationarity residual on a small torus")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--ell", type=int, default=4)
    p.add_argument("--rho", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_check_invariance)

    p = sub.add_parser("hydro-compare", help="convergence study against the PDE reference")
    _add_config_flag(p)
    p.add_argument("--m", type=float, default=None)
    p.add_argument("--n-list", dest="n_list", default=None)
    p.add_argument("--times", default=None)
    p.add_argument("--profile", default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--replicas", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--pde-cells", dest="pde_cells", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--ell-rule", dest="ell_rule", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_hydro_compare)

    p = sub.add_parser("validate", help="run every stated bound and invariance check")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-mutation", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_validate)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
