"""Dense linear-algebra helpers: canonical orthonormal bases, kernels, ranks.

Subspace bases are stored as 2-d arrays whose *rows* are the basis vectors.
All bases returned here are orthonormalized and sign-canonicalized so that
repeated runs produce identical output.
"""

from __future__ import annotations

import numpy as np

RANK_TOL = 1e-9


def canonical_signs(rows: np.ndarray) -> np.ndarray:
    """Flip each row so its largest-magnitude entry is positive."""
    rows = np.array(rows, dtype=float)
    for row in rows:
        if row.size and row[np.argmax(np.abs(row))] < 0:
            row *= -1.0
    return rows


def orthonormal_rows(vectors: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis for the row span of ``vectors``.

    Rank is decided by singular values relative to the largest one.
    """
    vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
    if vectors.size == 0:
        return np.zeros((0, vectors.shape[-1]))
    _, s, vh = np.linalg.svd(vectors, full_matrices=False)
    if s.size == 0 or s[0] <= 0.0:
        return np.zeros((0, vectors.shape[1]))
    rank = int(np.sum(s > tol * s[0]))
    return canonical_signs(vh[:rank])


def rank(matrix: np.ndarray, tol: float = RANK_TOL) -> int:
    """Numerical rank with a relative singular-value threshold."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    if matrix.size == 0:
        return 0
    s = np.linalg.svd(matrix, compute_uv=False)
    if s.size == 0 or s[0] <= 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def nullspace_rows(matrix: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis (rows) of ``{x : matrix @ x = 0}``.

    Directions with singular value <= tol * (largest singular value) count as
    null; rows come out ordered by ascending singular value.
    """
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    ncols = matrix.shape[1]
    if matrix.shape[0] == 0 or not np.any(matrix):
        return canonical_signs(np.eye(ncols))
    # full_matrices so the kernel of a wide matrix is complete
    _, s, vh = np.linalg.svd(matrix, full_matrices=True)
    smax = s[0] if s.size else 0.0
    keep = []
    for idx in range(ncols - 1, -1, -1):
        sigma = s[idx] if idx < s.size else 0.0
        if sigma > tol * smax:
            break
        keep.append(idx)
    return canonical_signs(vh[keep]) if keep else np.zeros((0, ncols))
