"""Connectivity generation and matrix file IO.

Matrix file format: CSV, row-major, N lines of N comma-separated
weights; zero means no connection. Random generation uses numpy's
default_rng (PCG64 seeded through SeedSequence), so a fixed seed
reproduces the same matrix everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import NumericDomainError, ParseError
from .model import ConnectivityMatrix

DEFAULT_WEIGHT = 0.04


@dataclass(frozen=True)
class ConnectivityGeneratorSpec:
    kind: str  # "all_to_all" | "fixed_density" | "from_file"
    p: float = 1.0
    seed: int = 0
    weight: float = DEFAULT_WEIGHT
    path: str | None = None

    def __post_init__(self):
        if self.kind not in ("all_to_all", "fixed_density", "from_file"):
            raise NumericDomainError(f"unknown connectivity kind {self.kind!r}")
        if not 0.0 <= self.p <= 1.0:
            raise NumericDomainError(f"connection probability must be in [0, 1], got {self.p}")
        if self.kind == "from_file" and self.path is None:
            raise NumericDomainError("from_file connectivity needs a path")


def generate_connectivity(spec: ConnectivityGeneratorSpec, n: int) -> ConnectivityMatrix:
    if spec.kind == "all_to_all":
        return ConnectivityMatrix.from_weights(np.full((n, n), spec.weight))
    if spec.kind == "fixed_density":
        rng = np.random.default_rng(spec.seed)
        mask = rng.random((n, n)) < spec.p
        return ConnectivityMatrix.from_weights(np.where(mask, spec.weight, 0.0))
    return load_matrix(spec.path, expected_n=n)


def load_matrix(path: str | Path, expected_n: int | None = None) -> ConnectivityMatrix:
    rows = []
    with open(path) as fh:
        for r, line in enumerate(fh):
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            row = []
            for c, cell in enumerate(cells):
                try:
                    row.append(float(cell))
                except ValueError:
                    raise ParseError(f"bad weight {cell!r}", row=r, col=c) from None
            rows.append(row)
    if not rows:
        raise ParseError("empty matrix file", row=0)
    n = len(rows)
    for r, row in enumerate(rows):
        if len(row) != n:
            raise ParseError(f"expected {n} columns, got {len(row)}", row=r)
    if expected_n is not None and n != expected_n:
        raise ParseError(f"matrix is {n}x{n}, expected {expected_n}x{expected_n}", row=0)
    return ConnectivityMatrix.from_weights(np.array(rows))


def save_matrix(matrix: ConnectivityMatrix, path: str | Path) -> None:
    from .io import atomic_write_text
    lines = (",".join(repr(float(w)) for w in row) for row in matrix.weights)
    atomic_write_text(path, "\n".join(lines) + "\n")
