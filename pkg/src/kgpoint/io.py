"""CSV and JSON writers with full-precision floats.

All floats are printed with 17 significant digits so every emitted value
round-trips exactly through text, making runs reproducible across tools.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .simulator import FieldState, Grid, ObserverSeries
from .spectral import SpectrumEstimate

__all__ = [
    "fmt",
    "write_csv",
    "write_json",
    "series_to_csv",
    "state_to_csv",
    "spectrum_to_csv",
    "read_trace_csv",
    "read_state_csv",
]


def fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def write_csv(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def write_json(path, obj):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def series_to_csv(series: ObserverSeries, path):
    radii = sorted(series.seminorms)
    n_osc = series.traces_psi.shape[1] if series.traces_psi.size else 0
    header = ["t", "H", "Q"]
    header += [f"seminorm_R{r:g}" for r in radii]
    for j in range(n_osc):
        header += [f"psi{j + 1}_re", f"psi{j + 1}_im", f"pi{j + 1}_re", f"pi{j + 1}_im"]

    def rows():
        for i in range(len(series.times)):
            row = [series.times[i], series.energy[i], series.charge[i]]
            row += [series.seminorms[r][i] for r in radii]
            for j in range(n_osc):
                zp, zq = series.traces_psi[i, j], series.traces_pi[i, j]
                row += [zp.real, zp.imag, zq.real, zq.imag]
            yield row

    write_csv(path, header, rows())


def state_to_csv(grid: Grid, state: FieldState, path):
    x = grid.x
    rows = (
        (x[i], state.psi[i].real, state.psi[i].imag, state.pi[i].real, state.pi[i].imag)
        for i in range(grid.count)
    )
    write_csv(path, ["x", "psi_re", "psi_im", "pi_re", "pi_im"], rows)


def spectrum_to_csv(estimate: SpectrumEstimate, path):
    rows = zip(estimate.freqs, estimate.magnitudes)
    write_csv(path, ["freq", "magnitude"], rows)


def _read_columns(path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        cols: list[list[float]] = [[] for _ in header]
        for row in reader:
            for c, v in zip(cols, row):
                c.append(float(v))
    return {name: np.array(col) for name, col in zip(header, cols)}


def read_trace_csv(path, re_col: str = "psi1_re", im_col: str = "psi1_im"):
    """(times, complex trace) from a CSV with a time column named 't'."""
    cols = _read_columns(path)
    if "t" not in cols or re_col not in cols or im_col not in cols:
        raise ValueError(f"trace CSV must have columns 't', '{re_col}', '{im_col}'")
    return cols["t"], cols[re_col] + 1j * cols[im_col]


def read_state_csv(path):
    """(x, psi, pi) arrays from a field snapshot CSV."""
    cols = _read_columns(path)
    for name in ("x", "psi_re", "psi_im", "pi_re", "pi_im"):
        if name not in cols:
            raise ValueError(f"state CSV missing column '{name}'")
    return cols["x"], cols["psi_re"] + 1j * cols["psi_im"], cols["pi_re"] + 1j * cols["pi_im"]
