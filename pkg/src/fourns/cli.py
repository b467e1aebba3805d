"""Experiment harness: simulate / sweep-n / lab / calc subcommands.

Exit codes: 0 success, 1 runtime failure (partial artifacts are kept),
2 configuration error. The effective (fully defaulted) config is echoed into
the output directory before anything runs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import diagnostics, dynamics, gwp, inequality_lab, storage
from .config import (
    ConfigError,
    build_grid,
    build_initial_field,
    build_sim_config,
    sweep_requirements,
    validate_config,
)
from .multipliers import IMultiplier

OUT_ENV = "FOURNS_OUT"


def _load_effective(path: str) -> dict:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError("<config>", f"file not found: {path}")
    except json.JSONDecodeError as e:
        raise ConfigError("<config>", f"invalid JSON: {e}")
    return validate_config(raw, out_dir_override=os.environ.get(OUT_ENV))


def _prepare_outdir(cfg: dict) -> Path:
    outdir = Path(cfg["output"]["directory"])
    outdir.mkdir(parents=True, exist_ok=True)
    storage.atomic_write_text(
        outdir / "config.json", json.dumps(cfg, indent=2, sort_keys=True) + "\n"
    )
    return outdir


def _mod_energy_columns(i_cutoffs) -> list[str]:
    return [f"mod_energy_N{int(n) if float(n).is_integer() else n}" for n in i_cutoffs]


def _record_row(rec: diagnostics.DiagnosticsRecord, i_cutoffs) -> list:
    row = [rec.t, rec.mass, rec.energy, rec.h_s, rec.h2, rec.linf]
    row += [rec.mod_energy[n] for n in i_cutoffs]
    return row


def cmd_simulate(cfg: dict) -> int:
    outdir = _prepare_outdir(cfg)
    grid = build_grid(cfg)
    sim = build_sim_config(cfg)
    u0 = build_initial_field(cfg, grid)
    header = ["t", "mass", "energy", "h_s", "h2", "linf"] + _mod_energy_columns(sim.i_cutoffs)
    rows: list[list] = []
    status = 0
    final = None
    try:
        for rec in dynamics.run(sim, u0):
            rows.append(_record_row(rec, sim.i_cutoffs))
            final = rec
    except dynamics.BlowUpError as e:
        print(f"solver aborted: {e}", file=sys.stderr)
        status = 1
    storage.atomic_write_text(outdir / "diagnostics.csv", storage.csv_text(header, rows))
    if status == 0 and cfg["output"]["checkpoint_final"]:
        end = dynamics.final_state(sim, u0)
        storage.write_checkpoint(outdir / "final.ckpt", end.u, end.t)
    if final is not None:
        print(f"simulate: t = {final.t:.6g}, mass = {final.mass:.12g}, energy = {final.energy:.12g}")
    return status


def cmd_sweep_n(cfg: dict) -> int:
    plan = sweep_requirements(cfg)
    outdir = _prepare_outdir(cfg)
    grid = build_grid(cfg)
    sim = build_sim_config(cfg)
    u0 = build_initial_field(cfg, grid)
    try:
        result = diagnostics.almost_conservation_sweep(u0, sim, plan.n_list)
    except dynamics.BlowUpError as e:
        print(f"sweep aborted: {e}", file=sys.stderr)
        return 1
    header = ["N", "delta_E_I", "sign", "fitted_slope"]
    rows = [[r.n_cut, r.delta_e, r.sign, result.slope] for r in result.rows]
    footer = [f"# fitted_slope,{storage.fmt(result.slope)}", f"# t_star,{storage.fmt(result.t_star)}"]
    storage.atomic_write_text(outdir / "sweep.csv", storage.csv_text(header, rows, footer))
    print(f"sweep-n: t* = {result.t_star:.6g}, fitted slope = {result.slope:.6g}")
    return 0


def cmd_lab(cfg: dict, seed_override: int | None = None) -> int:
    outdir = _prepare_outdir(cfg)
    lab = cfg["lab"]
    seed = lab["seed"] if seed_override is None else seed_override
    rng = np.random.default_rng(seed)
    k = cfg["sim"]["k"]
    im = IMultiplier(cfg["multiplier"]["s"], cfg["multiplier"]["n"], cfg["multiplier"]["variant"])
    cap = lab["radius_cap"]
    header = ["case", "k", "s", "N", "samples", "max_ratio", "constant"]
    rows: list[list] = []
    if lab["samples"] > 0:
        hyper = inequality_lab.hyperplane_stats(k, im, lab["samples"], rng, r_hi=cap)
        rows.append(["hyperplane", k, im.s, im.n_cut, hyper.samples, hyper.max_ratio, hyper.max_ratio])
        for case in lab["cases"]:
            stats = inequality_lab.case_bound_stats(case, k, im, lab["samples"], rng, r_hi=cap)
            rows.append([case, k, im.s, im.n_cut, stats.samples, stats.max_ratio, stats.constant])
    storage.atomic_write_text(outdir / "lab.csv", storage.csv_text(header, rows))
    print(f"lab: {len(rows)} rows, seed = {seed}")
    return 0


def _calc_s_samples(k: int, cfg_calc: dict) -> list[Fraction]:
    if cfg_calc["s_samples"] is not None:
        return [Fraction(str(s)) for s in cfg_calc["s_samples"]]
    return [gwp.gwp_threshold(k), gwp.case_split_point(k), Fraction(15, 8)]


def cmd_calc(cfg: dict) -> int:
    outdir = _prepare_outdir(cfg)
    calc = cfg["calc"]
    eps = Fraction(str(calc["eps"])) if calc["eps"] else Fraction(0)
    header = [
        "k", "s", "threshold", "threshold_dec", "split_point", "split_point_dec",
        "second_threshold", "e1", "e2", "e1_positive", "e2_positive",
        "growth_exponent", "growth_exponent_dec",
    ]
    rows: list[list] = []
    for k in range(1, calc["k_max"] + 1):
        for s in _calc_s_samples(k, calc):
            rep = gwp.exponent_report(k, s)
            if rep.e1_positive and s < 2:
                gb = gwp.growth_bound(k, s, eps)
                growth, growth_dec = str(gb), repr(float(gb))
            else:
                growth, growth_dec = "", ""
            rows.append([
                k, str(s), str(rep.threshold), repr(float(rep.threshold)),
                str(rep.split_point), repr(float(rep.split_point)),
                str(rep.second_threshold), str(rep.e1), str(rep.e2),
                rep.e1_positive, rep.e2_positive, growth, growth_dec,
            ])
    storage.atomic_write_text(outdir / "calc.csv", storage.csv_text(header, rows))
    print(f"calc: k = 1..{calc['k_max']}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="fourns", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("simulate", "sweep-n", "lab", "calc"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to the JSON experiment config")
        if name == "lab":
            p.add_argument("--seed", type=int, default=None, help="override lab.seed")
    args = parser.parse_args(argv)
    try:
        cfg = _load_effective(args.config)
        if args.command == "simulate":
            return cmd_simulate(cfg)
        if args.command == "sweep-n":
            return cmd_sweep_n(cfg)
        if args.command == "lab":
            return cmd_lab(cfg, args.seed)
        return cmd_calc(cfg)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, OSError) as e:
        print(f"runtime error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
