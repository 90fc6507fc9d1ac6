"""GF(2) and exact integer matrix helpers."""

from __future__ import annotations

import numpy as np
import sympy

from core.errors import MatrixError


def _as_matrix(matrix) -> np.ndarray:
    array = np.asarray(matrix)
    if array.ndim != 2:
        raise MatrixError(f"Expected a 2-D matrix, got shape {array.shape}.")
    return array


def gf2_rank(matrix) -> int:
    """Rank over the two-element field by Gaussian elimination on a ``uint8`` copy."""
    work = (np.asarray(_as_matrix(matrix), dtype=np.int64) % 2).astype(np.uint8)
    n_rows, n_cols = work.shape
    rank = 0
    for col in range(n_cols):
        if rank == n_rows:
            break
        candidates = np.flatnonzero(work[rank:, col])
        if candidates.size == 0:
            continue
        pivot = rank + int(candidates[0])
        if pivot != rank:
            work[[rank, pivot]] = work[[pivot, rank]]
        mask = work[:, col].astype(bool)
        mask[rank] = False
        work[mask] ^= work[rank]
        rank += 1
    return rank


def int_det(matrix) -> int:
    """Exact determinant of a square integer matrix (fraction-free Bareiss elimination)."""
    array = _as_matrix(matrix)
    rows, cols = array.shape
    if rows != cols:
        raise MatrixError(f"Determinant needs a square matrix, got {rows}x{cols}.")
    if rows == 0:
        return 1
    return int(sympy.Matrix(array.tolist()).det(method="bareiss"))


def ones_off_diagonal(n: int) -> np.ndarray:
    """The n x n matrix with zero diagonal and ones elsewhere."""
    if n < 1:
        raise MatrixError(f"Matrix size must be at least 1, got {n}.")
    return np.ones((n, n), dtype=np.int64) - np.eye(n, dtype=np.int64)
