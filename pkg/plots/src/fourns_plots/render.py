"""Render figures from harness CSVs: cutoff-decay fits, conserved-quantity
drift, Sobolev-norm growth envelopes, and measured inequality constants.

Figures are pure functions of the CSV inputs. Slope annotations are
recomputed from the data and cross-checked against the CSV footer; a
mismatch is an error, never silently redrawn.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

ACL_DECAY = "acl_decay"
DRIFT = "drift"
GROWTH = "growth"
LAB_CONSTANTS = "lab_constants"
KINDS = (ACL_DECAY, DRIFT, GROWTH, LAB_CONSTANTS)

SWEEP_COLUMNS = ["N", "delta_E_I", "sign", "fitted_slope"]
DIAGNOSTICS_PREFIX = ["t", "mass", "energy", "h_s", "h2", "linf"]
LAB_COLUMNS = ["case", "k", "s", "N", "samples", "max_ratio", "constant"]

SLOPE_TOLERANCE = 1e-9


class SchemaError(ValueError):
    """Input CSV does not match the harness schema."""


class CrossCheckError(ValueError):
    """Recomputed annotation disagrees with the harness-reported value."""


@dataclass(frozen=True)
class PlotSpec:
    kind: str
    inputs: dict
    output: str
    overlays: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; valid: {', '.join(KINDS)}")


@dataclass(frozen=True)
class RenderResult:
    output: Path
    annotations: dict


def read_csv(path) -> tuple[list[str], list[list[str]], dict]:
    """Header, data rows, and '# key,value' footer entries."""
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"input CSV not found: {path}")
    lines = path.read_text(encoding="utf-8").strip().splitlines()
    if not lines:
        raise SchemaError(f"{path}: empty file")
    header = lines[0].split(",")
    rows, footers = [], {}
    for line in lines[1:]:
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(",")
            footers[key.strip()] = value.strip()
        elif line:
            rows.append(line.split(","))
    return header, rows, footers


def _require_columns(path, header, wanted) -> dict:
    missing = [c for c in wanted if c not in header]
    if missing:
        raise SchemaError(f"{path}: missing column(s) {', '.join(missing)}")
    return {c: header.index(c) for c in header}


def _column(rows, idx) -> np.ndarray:
    return np.array([float(r[idx]) for r in rows])


def top_half_slope(ns: np.ndarray, deltas: np.ndarray) -> float:
    """The harness' fit rule: least squares on the upper half of the cutoffs."""
    order = np.argsort(ns)
    ns, deltas = ns[order], deltas[order]
    half = len(ns) // 2
    top_n, top_d = ns[half:], np.maximum(deltas[half:], 1e-300)
    if np.all(top_d == top_d[0]):
        return 0.0
    return float(np.polyfit(np.log(top_n), np.log(top_d), 1)[0])


def _render_acl_decay(spec: PlotSpec) -> RenderResult:
    path = spec.inputs["sweep"]
    header, rows, footers = read_csv(path)
    cols = _require_columns(path, header, SWEEP_COLUMNS)
    if len(rows) < 2:
        raise SchemaError(f"{path}: need at least 2 sweep rows, got {len(rows)}")
    ns = _column(rows, cols["N"])
    deltas = _column(rows, cols["delta_E_I"])

    slope = top_half_slope(ns, deltas)
    reported = float(footers.get("fitted_slope", rows[0][cols["fitted_slope"]]))
    if abs(slope - reported) > SLOPE_TOLERANCE:
        raise CrossCheckError(
            f"recomputed slope {slope!r} differs from reported {reported!r} "
            f"by more than {SLOPE_TOLERANCE}"
        )
    ref_exp = float(spec.overlays.get("reference_exponent", -3.0))

    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.loglog(ns, np.maximum(deltas, 1e-300), "o", label="measured increment")
    half = len(ns) // 2
    anchor_n, anchor_d = ns[half], max(deltas[half], 1e-300)
    fit_line = anchor_d * (ns / anchor_n) ** slope
    ax.loglog(ns, fit_line, "-", label=f"fit: slope {slope:.2f}")
    ref_line = anchor_d * (ns / anchor_n) ** ref_exp
    ax.loglog(ns, ref_line, "--", label=f"reference: slope {ref_exp:g}")
    ax.set_xlabel("cutoff N")
    ax.set_ylabel("|delta E(Iu)|")
    ax.set_title("Modified-energy increment vs cutoff")
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.output, dpi=150)
    plt.close(fig)
    return RenderResult(Path(spec.output), {"fitted_slope": slope, "reference_exponent": ref_exp})


def _render_drift(spec: PlotSpec) -> RenderResult:
    path = spec.inputs["diagnostics"]
    header, rows, _ = read_csv(path)
    cols = _require_columns(path, header, DIAGNOSTICS_PREFIX)
    if not rows:
        raise SchemaError(f"{path}: no diagnostics rows")
    t = _column(rows, cols["t"])
    floor = 1e-18
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for name in ("mass", "energy"):
        vals = _column(rows, cols[name])
        rel = np.abs(vals - vals[0]) / max(abs(vals[0]), floor)
        ax.semilogy(t, np.maximum(rel, floor), label=f"|{name}(t) - {name}(0)| / {name}(0)")
    ax.set_xlabel("t")
    ax.set_ylabel("relative drift")
    ax.set_title("Conserved-quantity drift")
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.output, dpi=150)
    plt.close(fig)
    return RenderResult(Path(spec.output), {"rows": len(rows)})


def _parse_rational(text: str) -> Fraction:
    return Fraction(text)


def _render_growth(spec: PlotSpec) -> RenderResult:
    diag_path = spec.inputs["diagnostics"]
    calc_path = spec.inputs["calc"]
    k = int(spec.params["k"])
    s = _parse_rational(str(spec.params["s"]))

    header, rows, _ = read_csv(diag_path)
    cols = _require_columns(diag_path, header, DIAGNOSTICS_PREFIX)
    if not rows:
        raise SchemaError(f"{diag_path}: no diagnostics rows")
    t = _column(rows, cols["t"])
    hs = _column(rows, cols["h_s"])

    calc_header, calc_rows, _ = read_csv(calc_path)
    calc_cols = _require_columns(
        calc_path, calc_header, ["k", "s", "growth_exponent", "growth_exponent_dec"]
    )
    exponent = None
    for row in calc_rows:
        if int(row[calc_cols["k"]]) == k and _parse_rational(row[calc_cols["s"]]) == s:
            text = row[calc_cols["growth_exponent_dec"]]
            if not text:
                raise SchemaError(
                    f"{calc_path}: no growth exponent for (k, s) = ({k}, {s}) "
                    "(below the well-posedness threshold)"
                )
            exponent = float(text)
            break
    if exponent is None:
        raise SchemaError(f"{calc_path}: no row for (k, s) = ({k}, {s})")

    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.plot(t, hs, "-", label="H^s norm")
    envelope = hs[0] * (1.0 + t) ** exponent
    ax.plot(t, envelope, "--", label=f"envelope (1+t)^{exponent:g}")
    ax.set_xlabel("t")
    ax.set_ylabel("H^s norm")
    ax.set_title(f"Norm growth vs polynomial envelope (k={k}, s={s})")
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.output, dpi=150)
    plt.close(fig)
    return RenderResult(Path(spec.output), {"envelope_exponent": exponent})


def _render_lab_constants(spec: PlotSpec) -> RenderResult:
    path = spec.inputs["lab"]
    header, rows, _ = read_csv(path)
    cols = _require_columns(path, header, LAB_COLUMNS)
    if not rows:
        raise SchemaError(f"{path}: no lab rows")
    cases = [r[cols["case"]] for r in rows]
    constants = _column(rows, cols["constant"])
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.bar(range(len(cases)), constants)
    ax.set_xticks(range(len(cases)))
    ax.set_xticklabels(cases, rotation=45, ha="right")
    ax.set_ylabel("measured constant")
    ax.set_title("Inequality constants by interaction case")
    fig.tight_layout()
    fig.savefig(spec.output, dpi=150)
    plt.close(fig)
    return RenderResult(Path(spec.output), {"cases": len(cases)})


_RENDERERS = {
    ACL_DECAY: _render_acl_decay,
    DRIFT: _render_drift,
    GROWTH: _render_growth,
    LAB_CONSTANTS: _render_lab_constants,
}


def render(spec: PlotSpec) -> RenderResult:
    """Validate the inputs, draw the figure, and return the annotations."""
    Path(spec.output).parent.mkdir(parents=True, exist_ok=True)
    return _RENDERERS[spec.kind](spec)
