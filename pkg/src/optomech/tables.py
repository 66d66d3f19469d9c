"""CSV emission with deterministic, shortest round-trip number formatting."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np


def fmt(x) -> str:
    """Shortest decimal that round-trips the float exactly."""
    return repr(float(x))


def write_rows(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([cell if isinstance(cell, str) else fmt(cell)
                             for cell in row])


def write_trajectory_csv(path: Path, t, q, p, a, c) -> None:
    header = ["t", "q", "p", "re_a", "im_a", "re_c", "im_c"]
    rows = zip(t, q, p, np.real(a), np.imag(a), np.real(c), np.imag(c))
    write_rows(path, header, rows)


def cm_header() -> list[str]:
    cols = ["t"]
    for i in range(1, 7):
        for j in range(i, 7):
            cols.append(f"v{i}{j}")
    return cols


def write_cm_csv(path: Path, t, vs) -> None:
    """Row-major upper triangle, 21 value columns plus t."""
    rows = []
    iu = np.triu_indices(6)
    for ti, vi in zip(t, vs):
        rows.append([ti, *vi[iu]])
    write_rows(path, cm_header(), rows)


def write_measures_csv(path: Path, t, en, v11, v22, neff, r_db) -> None:
    header = ["t", "EN", "v11", "v22", "neff", "r_db"]
    write_rows(path, header, zip(t, en, v11, v22, neff, r_db))


def write_wigner_csv(path: Path, grid) -> None:
    x_ax, y_ax = grid.axes
    rows = []
    for i, x in enumerate(x_ax):
        for j, y in enumerate(y_ax):
            rows.append([x, y, grid.values[i, j]])
    write_rows(path, ["x", "y", "w"], rows)
