"""Experiment configuration: JSON schema, strict validation, and default
materialization.

Every block is optional except output.directory (which FOURNS_OUT may
supply); unknown keys are rejected with their full path; the echoed
effective config carries every default so any run is reproducible from it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dynamics import IFRK4, STRANG, SimConfig, _is_dyadic
from .inequality_lab import CASES
from .multipliers import SHARP, SMOOTH
from .spectral import PADDED, TWO_THIRDS, Grid2D


class ConfigError(ValueError):
    """Schema violation carrying the offending field path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


_GRID_DEFAULTS = {"nx": 256, "ny": 256, "lx": 32.0 * math.pi, "ly": 32.0 * math.pi}
_SIM_DEFAULTS = {
    "k": 1,
    "dt": 1e-3,
    "t_end": 0.1,
    "integrator": STRANG,
    "dealias": PADDED,
    "diag_every": 10,
    "i_cutoffs": [1.0, 2.0, 4.0],
    "linear_only": False,
    "blowup_threshold": 1e6,
}
_MULTIPLIER_DEFAULTS = {"s": 1.5, "variant": SHARP, "n": 16.0, "n_list": None}
_INITIAL_DEFAULTS = {
    "family": "gaussian",
    "amplitude": 1.0,
    "width": 2.0,
    "center": [0.0, 0.0],
    "modulation": [0.0, 0.0],
    "bumps": None,
}
_LAB_DEFAULTS = {
    "seed": 12345,
    "samples": 100000,
    "cases": list(CASES),
    "radius_cap": 512.0,
}
_CALC_DEFAULTS = {"k_max": 10, "s_samples": None, "eps": 0.0}
_OUTPUT_DEFAULTS = {"directory": None, "checkpoint_final": True}


def _merge_block(name: str, raw: dict, defaults: dict) -> dict:
    block = raw.get(name, {})
    if not isinstance(block, dict):
        raise ConfigError(name, f"expected an object, got {type(block).__name__}")
    unknown = set(block) - set(defaults)
    if unknown:
        raise ConfigError(f"{name}.{sorted(unknown)[0]}", "unknown key")
    out = dict(defaults)
    out.update(block)
    return out


def _require(cond: bool, path: str, message: str) -> None:
    if not cond:
        raise ConfigError(path, message)


def _num(block, name, path, lo=None, integer=False, strict=True):
    v = block[name]
    _require(isinstance(v, (int, float)) and not isinstance(v, bool), f"{path}.{name}", "expected a number")
    if integer:
        _require(float(v).is_integer(), f"{path}.{name}", "expected an integer")
        v = int(v)
    if lo is not None:
        _require(v > lo if strict else v >= lo, f"{path}.{name}",
                 f"must be {'>' if strict else '>='} {lo}, got {v}")
    return v


def validate_config(raw: dict, out_dir_override: str | None = None) -> dict:
    """Validate a raw JSON document and materialize every default."""
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    unknown = set(raw) - {"grid", "sim", "multiplier", "initial_data", "lab", "calc", "output"}
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown block")

    grid = _merge_block("grid", raw, _GRID_DEFAULTS)
    for n in ("nx", "ny"):
        v = _num(grid, n, "grid", integer=True, lo=0)
        _require(v >= 8 and (v & (v - 1)) == 0, f"grid.{n}", f"must be a power of two >= 8, got {v}")
        grid[n] = v
    for n in ("lx", "ly"):
        grid[n] = float(_num(grid, n, "grid", lo=0.0))

    sim = _merge_block("sim", raw, _SIM_DEFAULTS)
    sim["k"] = _num(sim, "k", "sim", integer=True, lo=0)
    sim["dt"] = float(_num(sim, "dt", "sim", lo=0.0))
    sim["t_end"] = float(_num(sim, "t_end", "sim", lo=0.0, strict=False))
    _require(sim["integrator"] in (STRANG, IFRK4), "sim.integrator",
             f"must be one of {STRANG!r}, {IFRK4!r}")
    _require(sim["dealias"] in (PADDED, TWO_THIRDS), "sim.dealias",
             f"must be one of {PADDED!r}, {TWO_THIRDS!r}")
    sim["diag_every"] = _num(sim, "diag_every", "sim", integer=True, lo=0)
    _require(isinstance(sim["linear_only"], bool), "sim.linear_only", "expected a boolean")
    sim["blowup_threshold"] = float(_num(sim, "blowup_threshold", "sim", lo=0.0))
    cuts = sim["i_cutoffs"]
    _require(isinstance(cuts, list) and cuts, "sim.i_cutoffs", "expected a nonempty list")
    cuts = [float(n) for n in cuts]
    nyquist = min(math.pi * grid["nx"] / grid["lx"], math.pi * grid["ny"] / grid["ly"])
    for n in cuts:
        _require(_is_dyadic(n), "sim.i_cutoffs", f"{n} is not a dyadic number >= 1")
        _require(n < nyquist, "sim.i_cutoffs", f"{n} is not below the grid Nyquist {nyquist:.6g}")
    sim["i_cutoffs"] = cuts

    mult = _merge_block("multiplier", raw, _MULTIPLIER_DEFAULTS)
    mult["s"] = float(_num(mult, "s", "multiplier", lo=0.0))
    _require(mult["s"] < 2.0, "multiplier.s", f"must lie in (0, 2), got {mult['s']}")
    _require(mult["variant"] in (SHARP, SMOOTH), "multiplier.variant",
             f"must be one of {SHARP!r}, {SMOOTH!r}")
    mult["n"] = float(_num(mult, "n", "multiplier", lo=0.0))
    _require(mult["n"] >= 1.0, "multiplier.n", "must be >= 1")
    if mult["n_list"] is not None:
        _require(isinstance(mult["n_list"], list), "multiplier.n_list", "expected a list")
        mult["n_list"] = [float(n) for n in mult["n_list"]]

    init = _merge_block("initial_data", raw, _INITIAL_DEFAULTS)
    _require(init["family"] in ("gaussian", "multi_bump"), "initial_data.family",
             "must be 'gaussian' or 'multi_bump'")
    init["amplitude"] = float(_num(init, "amplitude", "initial_data", lo=None))
    init["width"] = float(_num(init, "width", "initial_data", lo=0.0))
    for key in ("center", "modulation"):
        v = init[key]
        _require(isinstance(v, list) and len(v) == 2, f"initial_data.{key}",
                 "expected a pair [x, y]")
        init[key] = [float(v[0]), float(v[1])]
    if init["family"] == "multi_bump":
        _require(isinstance(init["bumps"], list) and init["bumps"],
                 "initial_data.bumps", "multi_bump requires a nonempty bump list")

    lab = _merge_block("lab", raw, _LAB_DEFAULTS)
    lab["seed"] = _num(lab, "seed", "lab", integer=True, lo=0, strict=False)
    lab["samples"] = _num(lab, "samples", "lab", integer=True, lo=0, strict=False)
    lab["radius_cap"] = float(_num(lab, "radius_cap", "lab", lo=1.0))
    _require(isinstance(lab["cases"], list), "lab.cases", "expected a list of case names")
    for c in lab["cases"]:
        _require(c in CASES, "lab.cases", f"unknown case {c!r}; valid cases: {', '.join(CASES)}")

    calc = _merge_block("calc", raw, _CALC_DEFAULTS)
    calc["k_max"] = _num(calc, "k_max", "calc", integer=True, lo=0)
    calc["eps"] = float(_num(calc, "eps", "calc", lo=0.0, strict=False))
    _require(calc["eps"] < 1.0, "calc.eps", "must lie in [0, 1)")
    if calc["s_samples"] is not None:
        _require(isinstance(calc["s_samples"], list) and calc["s_samples"],
                 "calc.s_samples", "expected a nonempty list")

    out = _merge_block("output", raw, _OUTPUT_DEFAULTS)
    if out_dir_override is not None:
        out["directory"] = out_dir_override
    _require(isinstance(out["directory"], str) and out["directory"],
             "output.directory", "required (set it in the config or via FOURNS_OUT)")
    _require(isinstance(out["checkpoint_final"], bool), "output.checkpoint_final",
             "expected a boolean")

    return {
        "grid": grid,
        "sim": sim,
        "multiplier": mult,
        "initial_data": init,
        "lab": lab,
        "calc": calc,
        "output": out,
    }


def build_grid(cfg: dict) -> Grid2D:
    g = cfg["grid"]
    return Grid2D(g["nx"], g["ny"], g["lx"], g["ly"])


def build_sim_config(cfg: dict) -> SimConfig:
    s = cfg["sim"]
    return SimConfig(
        k=s["k"],
        dt=s["dt"],
        t_end=s["t_end"],
        integrator=s["integrator"],
        dealias=s["dealias"],
        diag_every=s["diag_every"],
        i_cutoffs=tuple(s["i_cutoffs"]),
        s=cfg["multiplier"]["s"],
        variant=cfg["multiplier"]["variant"],
        linear_only=s["linear_only"],
        blowup_threshold=s["blowup_threshold"],
    )


def build_initial_field(cfg: dict, grid: Grid2D):
    from .initial_data import gaussian, multi_bump

    init = cfg["initial_data"]
    if init["family"] == "gaussian":
        return gaussian(
            grid,
            amplitude=init["amplitude"],
            width=init["width"],
            center=tuple(init["center"]),
            modulation=tuple(init["modulation"]),
        )
    return multi_bump(grid, init["bumps"])


@dataclass(frozen=True)
class SweepPlan:
    n_list: list


def sweep_requirements(cfg: dict) -> SweepPlan:
    """Checks specific to the cutoff sweep: an explicit dyadic ascending
    n_list of at least 4 entries below the grid Nyquist."""
    n_list = cfg["multiplier"]["n_list"]
    _require(n_list is not None, "multiplier.n_list", "required for sweep-n")
    _require(len(n_list) >= 4, "multiplier.n_list",
             f"need at least 4 entries for a slope fit, got {len(n_list)}")
    _require(sorted(n_list) == n_list and len(set(n_list)) == len(n_list),
             "multiplier.n_list", "must be strictly ascending")
    g = cfg["grid"]
    nyquist = min(math.pi * g["nx"] / g["lx"], math.pi * g["ny"] / g["ly"])
    for n in n_list:
        _require(_is_dyadic(n), "multiplier.n_list", f"{n} is not a dyadic number >= 1")
        _require(n < nyquist, "multiplier.n_list",
                 f"{n} is not below the grid Nyquist {nyquist:.6g}")
    return SweepPlan(n_list)
