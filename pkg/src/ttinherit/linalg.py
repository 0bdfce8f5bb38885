"""Thin wrappers around LAPACK factorizations with explicit rank handling.

Everything here works on plain float64 ``numpy.ndarray`` matrices.  The
wrappers add what the raw factorizations do not give us: finite-input
checks, a single numerical-rank convention (singular values above
``rank_tol`` times the largest), compact truncation, and typed errors for
the zero-matrix / rank-deficient cases that the rest of the package needs
to tell apart.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DomainError, NumericError, RankZeroError, SingularityError

__all__ = [
    "DEFAULT_RANK_TOL",
    "ORTHONORMALITY_TOL",
    "ThinSVD",
    "thin_qr",
    "thin_svd",
    "numerical_rank",
    "pinv_spectral_norm",
    "row_two_inf_norm",
    "condition_number",
]

DEFAULT_RANK_TOL = 1e-9

# max elementwise deviation of W^T W from the identity tolerated by ThinSVD;
# LAPACK factors of 1e6-row matrices stay below ~1e-14
ORTHONORMALITY_TOL = 1e-12


def _require_matrix(M, name="matrix") -> np.ndarray:
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2:
        raise DomainError(f"{name} must be 2-d, got ndim={M.ndim}")
    if M.shape[0] == 0 or M.shape[1] == 0:
        raise DomainError(f"{name} must be non-empty, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NumericError(f"{name} contains non-finite entries")
    return M


@dataclass(frozen=True, eq=False)
class ThinSVD:
    """Compact SVD ``M = W @ diag(sigma) @ V.T`` truncated to numerical rank.

    ``W`` is (m, r) and ``V`` is (n, r), both with orthonormal columns to
    within :data:`ORTHONORMALITY_TOL`; ``sigma`` is strictly positive and
    non-increasing.  Instances validate on construction.
    """

    W: np.ndarray
    sigma: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        W = np.ascontiguousarray(self.W, dtype=np.float64)
        V = np.ascontiguousarray(self.V, dtype=np.float64)
        sigma = np.asarray(self.sigma, dtype=np.float64).reshape(-1)
        if W.ndim != 2 or V.ndim != 2:
            raise DomainError("ThinSVD factors must be 2-d")
        r = sigma.size
        if r == 0:
            raise RankZeroError("ThinSVD cannot hold an empty spectrum")
        if W.shape[1] != r or V.shape[1] != r:
            raise DomainError(
                f"factor widths ({W.shape[1]}, {V.shape[1]}) do not match rank {r}"
            )
        if not np.all(np.isfinite(W)) or not np.all(np.isfinite(V)) or not np.all(
            np.isfinite(sigma)
        ):
            raise NumericError("ThinSVD factors contain non-finite entries")
        if sigma[-1] <= 0.0:
            raise DomainError("singular values must be strictly positive")
        if np.any(np.diff(sigma) > 0):
            raise DomainError("singular values must be non-increasing")
        for name, F in (("W", W), ("V", V)):
            dev = np.abs(F.T @ F - np.eye(r)).max()
            if dev > ORTHONORMALITY_TOL:
                raise DomainError(
                    f"{name} columns deviate from orthonormality by {dev:.3e}"
                )
        for arr in (W, sigma, V):
            arr.setflags(write=False)
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "V", V)

    @property
    def rank(self) -> int:
        return int(self.sigma.size)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.W.shape[0], self.V.shape[0])

    def reconstruct(self) -> np.ndarray:
        """Dense ``W @ diag(sigma) @ V.T`` (for small matrices / tests)."""
        return (self.W * self.sigma) @ self.V.T


def thin_qr(M) -> tuple[np.ndarray, np.ndarray]:
    """Reduced QR of a tall-or-square matrix: ``M = Q @ R``, Q (m, n), R (n, n)."""
    M = _require_matrix(M)
    m, n = M.shape
    if m < n:
        raise DomainError(f"thin_qr needs rows >= cols, got {m} x {n}")
    return np.linalg.qr(M, mode="reduced")


def numerical_rank(sigma, rank_tol: float = DEFAULT_RANK_TOL) -> int:
    """Number of singular values above ``rank_tol * sigma[0]``.

    ``sigma`` must be non-negative and non-increasing.  An empty spectrum or
    a zero leading value has rank 0.
    """
    sigma = np.asarray(sigma, dtype=np.float64).reshape(-1)
    if sigma.size == 0:
        return 0
    if not np.all(np.isfinite(sigma)):
        raise NumericError("singular values contain non-finite entries")
    if np.any(sigma < 0):
        raise DomainError("singular values must be non-negative")
    if np.any(np.diff(sigma) > 0):
        raise DomainError("singular values must be non-increasing")
    if rank_tol < 0:
        raise DomainError(f"rank_tol must be >= 0, got {rank_tol}")
    s0 = sigma[0]
    if s0 == 0.0:
        return 0
    return int(np.count_nonzero(sigma > rank_tol * s0))


def thin_svd(M, rank_tol: float = DEFAULT_RANK_TOL) -> ThinSVD:
    """Compact SVD truncated to numerical rank; zero matrix raises.

    Singular values at or below ``rank_tol`` times the largest are dropped
    together with their vectors.
    """
    M = _require_matrix(M)
    U, s, Vt = np.linalg.svd(M, full_matrices=False)
    r = numerical_rank(s, rank_tol)
    if r == 0:
        raise RankZeroError("matrix is numerically zero; no compact SVD exists")
    return ThinSVD(U[:, :r], s[:r], Vt[:r].T)


def pinv_spectral_norm(M, rank_tol: float = DEFAULT_RANK_TOL) -> float:
    """Spectral norm of the pseudoinverse of a full-column-rank matrix.

    Computed as ``1 / sigma_min`` from singular values only (the
    pseudoinverse is never formed).  Raises :class:`SingularityError` if the
    matrix is not numerically full column rank.
    """
    M = _require_matrix(M)
    m, n = M.shape
    if m < n:
        raise SingularityError(f"matrix {m} x {n} cannot have full column rank")
    s = scipy.linalg.svdvals(M)
    if s[0] == 0.0 or s[-1] <= rank_tol * s[0]:
        raise SingularityError(
            f"column rank deficient: sigma_min/sigma_max = "
            f"{0.0 if s[0] == 0.0 else s[-1] / s[0]:.3e} <= rank_tol {rank_tol:.1e}"
        )
    return float(1.0 / s[-1])


def row_two_inf_norm(M) -> float:
    """Largest Euclidean row norm, ``max_i ||M[i, :]||_2``."""
    M = _require_matrix(M)
    return float(np.sqrt(np.einsum("ij,ij->i", M, M).max()))


def condition_number(svd: ThinSVD) -> float:
    """Ratio of extreme retained singular values, ``sigma[0] / sigma[-1]``."""
    return float(svd.sigma[0] / svd.sigma[-1])
