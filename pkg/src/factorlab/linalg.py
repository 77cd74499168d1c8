"""Dense least-squares kernel.

The solver runs a Householder QR factorization (LAPACK, via ``numpy``) rather
than forming the normal equations, which would square the condition number.
The R factor is part of the result so callers can obtain diag((X'X)^-1) for
standard errors without ever inverting X'X.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, DomainError, RankDeficient

#: |R_kk| below this fraction of the largest diagonal declares rank deficiency.
RANK_TOLERANCE = 1e-10


def as_matrix(data, name: str = "matrix") -> np.ndarray:
    """Validate and return a finite float64 2-D array."""
    x = np.asarray(data, dtype=float)
    if x.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise DomainError(f"{name} contains NaN or Inf")
    return x


def as_vector(data, name: str = "vector") -> np.ndarray:
    """Validate and return a finite float64 1-D array."""
    v = np.asarray(data, dtype=float)
    if v.ndim != 1:
        raise DimensionMismatch(f"{name} must be 1-D, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise DomainError(f"{name} contains NaN or Inf")
    return v


class LeastSquaresResult(NamedTuple):
    """Solution of min ||y - X beta|| plus the pieces inference needs."""

    beta: np.ndarray
    r_factor: np.ndarray  # p x p upper triangular R from X = QR
    leverage: np.ndarray  # diag of the hat matrix, row norms of Q squared


def solve_upper_triangular(r: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Back substitution for an upper-triangular system R x = b."""
    p = r.shape[0]
    x = np.zeros(p)
    for i in range(p - 1, -1, -1):
        x[i] = (b[i] - r[i, i + 1 :] @ x[i + 1 :]) / r[i, i]
    return x


def qr_least_squares(x, y) -> LeastSquaresResult:
    """Least-squares fit of ``y`` on the columns of ``x`` via Householder QR.

    Raises ``RankDeficient`` (carrying the offending column index) when the
    smallest R diagonal falls below ``RANK_TOLERANCE`` times the largest, and
    ``DimensionMismatch`` when shapes disagree.
    """
    xm = as_matrix(x, "design matrix")
    yv = as_vector(y, "response")
    n, p = xm.shape
    if yv.shape[0] != n:
        raise DimensionMismatch(
            f"response length {yv.shape[0]} != design row count {n}"
        )
    if p < 1 or n < p:
        raise DimensionMismatch(f"need n >= p >= 1, got n={n}, p={p}")

    q, r = np.linalg.qr(xm, mode="reduced")
    diag = np.abs(np.diag(r))
    tol = RANK_TOLERANCE * diag.max()
    deficient = np.nonzero(diag < tol)[0]
    if deficient.size or diag.max() == 0.0:
        bad = int(deficient[0]) if deficient.size else 0
        raise RankDeficient(bad)

    beta = solve_upper_triangular(r, q.T @ yv)
    leverage = np.einsum("ij,ij->i", q, q)
    return LeastSquaresResult(beta=beta, r_factor=r, leverage=leverage)


def xtx_inverse_diagonal(r_factor: np.ndarray) -> np.ndarray:
    """diag((X'X)^-1) from the R factor of X = QR.

    X'X = R'R, so (X'X)^-1 = R^-1 R^-T and its diagonal is the squared row
    norms of R^-1. Only the triangular inverse is formed.
    """
    p = r_factor.shape[0]
    r_inv = np.zeros((p, p))
    eye = np.eye(p)
    for j in range(p):
        r_inv[:, j] = solve_upper_triangular(r_factor, eye[:, j])
    return np.einsum("ij,ij->i", r_inv, r_inv)
