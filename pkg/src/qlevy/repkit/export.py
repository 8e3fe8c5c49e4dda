"""Matrix export.

CSV: header ``row,col,re,im`` followed by every entry in row-major order.

Binary: little-endian; two ``uint64`` (rows, cols) followed by rows*cols
pairs of ``float64`` (real, imaginary) in row-major order.
"""

from __future__ import annotations

import csv
import struct
from pathlib import Path

import numpy as np


def _dense(A) -> np.ndarray:
    return np.asarray(A.toarray() if hasattr(A, "toarray") else A, dtype=complex)


def write_csv(A, path) -> Path:
    A = _dense(A)
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["row", "col", "re", "im"])
        for (i, j), z in np.ndenumerate(A):
            w.writerow([i, j, repr(float(z.real)), repr(float(z.imag))])
    return path


def read_csv(path) -> np.ndarray:
    rows = []
    with Path(path).open() as fh:
        r = csv.reader(fh)
        next(r)
        for i, j, re, im in r:
            rows.append((int(i), int(j), complex(float(re), float(im))))
    n = max(i for i, _, _ in rows) + 1 if rows else 0
    m = max(j for _, j, _ in rows) + 1 if rows else 0
    A = np.zeros((n, m), dtype=complex)
    for i, j, z in rows:
        A[i, j] = z
    return A


def write_binary(A, path) -> Path:
    A = _dense(A)
    path = Path(path)
    with path.open("wb") as fh:
        fh.write(struct.pack("<QQ", *A.shape))
        fh.write(np.ascontiguousarray(A).astype("<c16").tobytes())
    return path


def read_binary(path) -> np.ndarray:
    data = Path(path).read_bytes()
    rows, cols = struct.unpack("<QQ", data[:16])
    return np.frombuffer(data[16:], dtype="<c16").reshape(rows, cols).copy()


__all__ = ["write_csv", "read_csv", "write_binary", "read_binary"]
