"""Checkpoint wire format and atomic artifact writing.

A checkpoint is one UTF-8 JSON header line (nx, ny, lx, ly, repr, time)
followed by nx*ny little-endian float64 (re, im) pairs in row-major order.
All artifact files are written to a temporary sibling and renamed into place.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .spectral import Field, Grid2D


def atomic_write_bytes(path: Path, payload: bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path: Path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def fmt(value) -> str:
    """Deterministic CSV cell rendering (repr for floats)."""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def csv_text(header: list[str], rows: list[list], footer: list[str] | None = None) -> str:
    lines = [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    if footer:
        lines += footer
    return "\n".join(lines) + "\n"


def write_checkpoint(path: Path, f: Field, time: float) -> None:
    header = {
        "nx": f.grid.nx,
        "ny": f.grid.ny,
        "lx": f.grid.lx,
        "ly": f.grid.ly,
        "repr": f.rep,
        "time": time,
    }
    payload = json.dumps(header, sort_keys=True).encode("utf-8") + b"\n"
    payload += np.ascontiguousarray(f.data, dtype="<c16").tobytes()
    atomic_write_bytes(path, payload)


def read_checkpoint(path: Path) -> tuple[Field, float]:
    raw = Path(path).read_bytes()
    nl = raw.index(b"\n")
    header = json.loads(raw[:nl].decode("utf-8"))
    grid = Grid2D(header["nx"], header["ny"], header["lx"], header["ly"])
    count = grid.nx * grid.ny
    payload = raw[nl + 1 :]
    if len(payload) != 16 * count:
        raise ValueError(
            f"checkpoint payload truncated: {len(payload)} bytes for {count} values"
        )
    data = np.frombuffer(payload, dtype="<c16", count=count)
    field = Field(grid, data.reshape(grid.nx, grid.ny).copy(), header["repr"])
    return field, float(header["time"])
