"""JSON/CSV serialization for grids, states and reports.

CSV grids: the first row is the header ``x\\y`` followed by the y axis; each
following row starts with its x value, then the values in row-major order.
Complex grids use paired columns headed ``re:<y>`` and ``im:<y>``. Numbers
are written with 17 significant digits, which round-trips IEEE doubles.
JSON encodes complex numbers as {"re": ..., "im": ...}.
"""
from __future__ import annotations

import csv
import json
from dataclasses import asdict, is_dataclass
from pathlib import Path

import numpy as np

from .hilbert import ModeSpace, ProductSpace, SpinSpace, StateVector

FMT = ".17g"


def _num(v) -> str:
    return format(float(v), FMT)


def to_jsonable(obj):
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if not np.isfinite(v):
            raise ValueError("non-finite value in output")
        return v
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, StateVector):
        return state_to_json(obj)
    if isinstance(obj, (ModeSpace, SpinSpace, ProductSpace)):
        return basis_to_json(obj)
    if is_dataclass(obj):
        return to_jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def from_json_complex(obj):
    if isinstance(obj, dict) and set(obj) == {"re", "im"}:
        return complex(obj["re"], obj["im"])
    return obj


def basis_to_json(b):
    if isinstance(b, ModeSpace):
        return {"type": "fock", "cutoff": b.cutoff}
    if isinstance(b, SpinSpace):
        return {"type": "dicke", "two_S": b.two_S}
    return {"type": "product", "factors": [basis_to_json(f) for f in b.factors]}


def basis_from_json(d):
    if d["type"] == "fock":
        return ModeSpace(d["cutoff"])
    if d["type"] == "dicke":
        return SpinSpace(d["two_S"])
    return ProductSpace(tuple(basis_from_json(f) for f in d["factors"]))


def state_to_json(s: StateVector) -> dict:
    return {
        "basis": basis_to_json(s.basis),
        "captured_norm": float(s.captured_norm),
        "amplitudes": [{"re": float(a.real), "im": float(a.imag)} for a in s.amplitudes],
    }


def state_from_json(d) -> StateVector:
    amps = [complex(a["re"], a["im"]) for a in d["amplitudes"]]
    return StateVector(basis_from_json(d["basis"]), amps, d.get("captured_norm", 1.0))


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(obj, path) -> None:
    Path(path).write_text(dumps(obj))


def _check_grid(grid, x, y):
    grid = np.asarray(grid)
    if grid.ndim != 2 or grid.shape != (len(x), len(y)):
        raise ValueError(f"grid shape {grid.shape} does not match axes ({len(x)}, {len(y)})")
    if not (np.all(np.isfinite(grid)) and np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("grid contains NaN or Inf")
    return grid


def write_grid_csv(stream, grid, x, y) -> None:
    """Write row by row; no copy of the grid is built."""
    grid = _check_grid(grid, x, y)
    cplx = np.iscomplexobj(grid)
    w = csv.writer(stream, lineterminator="\r\n")
    if cplx:
        head = [h for yv in y for h in (f"re:{_num(yv)}", f"im:{_num(yv)}")]
    else:
        head = [_num(yv) for yv in y]
    w.writerow(["x\\y"] + head)
    for xv, row in zip(x, grid):
        if cplx:
            cells = [c for v in row for c in (_num(v.real), _num(v.imag))]
        else:
            cells = [_num(v) for v in row]
        w.writerow([_num(xv)] + cells)


def grid_to_json(grid, x, y) -> dict:
    grid = _check_grid(grid, x, y)
    return {
        "shape": list(grid.shape),
        "axes": {"x": [float(v) for v in x], "y": [float(v) for v in y]},
        "complex": bool(np.iscomplexobj(grid)),
        "values": to_jsonable(grid.reshape(-1)),
    }


def serialize_grid(grid, axes, path, fmt: str = "csv") -> None:
    """Write a rectangular grid with its axis vectors (axes = (x, y))."""
    x, y = axes
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            write_grid_csv(fh, grid, x, y)
    elif fmt == "json":
        write_json(grid_to_json(grid, x, y), path)
    else:
        raise ValueError(f"unknown format {fmt!r}")


def read_grid(path):
    """Inverse of serialize_grid; returns (grid, x, y)."""
    path = Path(path)
    text = path.read_text()
    if text.lstrip().startswith("{"):
        d = json.loads(text)
        vals = [from_json_complex(v) for v in d["values"]]
        grid = np.array(vals, dtype=complex if d["complex"] else float).reshape(d["shape"])
        return grid, np.array(d["axes"]["x"]), np.array(d["axes"]["y"])
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    head = rows[0][1:]
    cplx = bool(head) and head[0].startswith("re:")
    if cplx:
        y = np.array([float(h[3:]) for h in head[::2]])
    else:
        y = np.array([float(h) for h in head])
    x = np.array([float(r[0]) for r in rows[1:]])
    body = np.array([[float(c) for c in r[1:]] for r in rows[1:]])
    grid = body[:, ::2] + 1j * body[:, 1::2] if cplx else body
    return grid, x, y


def write_table_csv(path_or_stream, columns: dict) -> None:
    """Columns of equal length as a CSV table (complex columns split re/im)."""
    names, cols = [], []
    for k, v in columns.items():
        v = np.asarray(v)
        if not np.all(np.isfinite(v)):
            raise ValueError(f"column {k} contains NaN or Inf")
        if np.iscomplexobj(v):
            names += [f"re:{k}", f"im:{k}"]
            cols += [v.real, v.imag]
        else:
            names.append(k)
            cols.append(v)

    def emit(fh):
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(names)
        for row in zip(*cols):
            w.writerow([_num(c) for c in row])

    if hasattr(path_or_stream, "write"):
        emit(path_or_stream)
    else:
        with open(path_or_stream, "w", newline="") as fh:
            emit(fh)
