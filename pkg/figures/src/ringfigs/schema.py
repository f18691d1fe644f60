"""Parsers for the simulator's CSV/JSON output files.

Each parser accounts for every data row it consumes so round-trip tests
can assert that nothing is silently dropped.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class SchemaError(ValueError):
    """Input file does not match the expected column layout."""


@dataclass
class GridData:
    """theta,phi,omega_f samples reshaped onto the regular grid."""

    thetas: np.ndarray
    phis: np.ndarray
    values: np.ndarray
    rows_consumed: int
    metadata: dict = field(default_factory=dict)


@dataclass
class SpectrumData:
    rates: np.ndarray
    shifts: np.ndarray
    weights: np.ndarray
    rows_consumed: int


@dataclass
class TraceData:
    times: np.ndarray
    intensity: np.ndarray
    reference: np.ndarray | None
    rows_consumed: int


def _read_rows(path: Path, expected_header: list[str], optional: int = 0):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file")
        required = expected_header[:len(expected_header) - optional]
        if header[:len(required)] != required or \
                any(h not in expected_header for h in header):
            raise SchemaError(f"{path}: header {header} does not match "
                              f"{expected_header}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise SchemaError(f"{path}:{lineno}: expected {len(header)} "
                                  f"columns, got {len(row)}")
            try:
                rows.append([float(x) for x in row])
            except ValueError as exc:
                raise SchemaError(f"{path}:{lineno}: {exc}") from exc
    return header, rows


def parse_grid_csv(path) -> GridData:
    path = Path(path)
    _, rows = _read_rows(path, ["theta", "phi", "omega_f"])
    if not rows:
        raise SchemaError(f"{path}: no samples")
    data = np.asarray(rows)
    thetas = np.unique(data[:, 0])
    phis = np.unique(data[:, 1])
    if thetas.size * phis.size != data.shape[0]:
        raise SchemaError(f"{path}: {data.shape[0]} rows do not form a "
                          f"{thetas.size}x{phis.size} grid")
    values = np.full((thetas.size, phis.size), np.nan)
    ti = np.searchsorted(thetas, data[:, 0])
    pi = np.searchsorted(phis, data[:, 1])
    values[ti, pi] = data[:, 2]
    if np.any(np.isnan(values)):
        raise SchemaError(f"{path}: grid has missing cells")
    return GridData(thetas, phis, values, data.shape[0])


def parse_grid_json(path) -> GridData:
    path = Path(path)
    d = json.loads(path.read_text())
    for key in ("thetas", "phis", "values"):
        if key not in d:
            raise SchemaError(f"{path}: missing key {key!r}")
    values = np.asarray(d["values"], dtype=float)
    thetas = np.asarray(d["thetas"], dtype=float)
    phis = np.asarray(d["phis"], dtype=float)
    if values.shape != (thetas.size, phis.size):
        raise SchemaError(f"{path}: values shape {values.shape} does not "
                          f"match axes")
    return GridData(thetas, phis, values, values.size,
                    d.get("metadata", {}))


def parse_spectrum_csv(path) -> SpectrumData:
    path = Path(path)
    _, rows = _read_rows(path, ["index", "rate_over_half_gamma",
                                "shift_over_half_gamma", "weight"])
    if not rows:
        raise SchemaError(f"{path}: no eigenvalues")
    data = np.asarray(rows)
    return SpectrumData(data[:, 1], data[:, 2], data[:, 3], data.shape[0])


def parse_trace_csv(path) -> TraceData:
    path = Path(path)
    header, rows = _read_rows(path, ["gamma_t", "intensity", "reference"],
                              optional=1)
    if not rows:
        raise SchemaError(f"{path}: no samples")
    data = np.asarray(rows)
    ref = data[:, 2] if len(header) == 3 else None
    return TraceData(data[:, 0], data[:, 1], ref, data.shape[0])
