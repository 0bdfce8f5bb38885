"""Tensor trains, interface matrices, and structured unfolding SVDs.

A tensor train (TT) stores a d-mode tensor as a chain of order-3 cores
``G_1, ..., G_d`` with ``G_k`` of shape ``(r_{k-1}, n_k, r_k)`` and boundary
ranks ``r_0 = r_d = 1``; an entry is the chained matrix product

    T[j_1, ..., j_d] = G_1[:, j_1, :] @ G_2[:, j_2, :] @ ... @ G_d[:, j_d, :].

The i-th unfolding T_<i> (first i modes as rows, rest as columns, first
index fastest on both sides) factors as ``L_i @ R_i.T`` where the "interface"
matrices L_i (prod(n_1..n_i) x r_i) and R_i (prod(n_{i+1}..n_d) x r_i) come
from contracting the chain up to / after position i.  Everything here that
looks like it touches an unfolding really touches only L_i and R_i, so a
100^4 tensor costs megabytes, not gigabytes.
"""

from __future__ import annotations

import numpy as np

from .errors import CapacityError, DomainError, NumericError, RankZeroError, StructuralError
from .linalg import DEFAULT_RANK_TOL, ThinSVD, numerical_rank
from .multiindex import IndexSet, Shape

__all__ = [
    "DENSE_CAP",
    "DEFAULT_BLOCK_ROWS",
    "INTERFACE_ELEM_CAP",
    "TTTensor",
    "validate",
    "entry",
    "to_dense",
    "left_interface",
    "right_interface",
    "unfolding_svd",
    "submatrix_svd",
    "tt_rank_numerical",
    "row_restrict",
    "column_submatrix",
    "tt_svd_from_dense",
]

DENSE_CAP = 10**7  # default cap on dense materialization, in entries
DEFAULT_BLOCK_ROWS = 1 << 16  # row-block size for the interface recurrences
INTERFACE_ELEM_CAP = 1 << 27  # ~1 GiB of float64 per interface matrix


def _validate_cores(cores) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Check the chain structure; return (shape, ranks)."""
    if len(cores) < 2:
        raise StructuralError("a tensor train needs at least 2 cores")
    for k, core in enumerate(cores, start=1):
        if core.ndim != 3:
            raise StructuralError(f"core {k} must be 3-d, got ndim={core.ndim}")
        if min(core.shape) < 1:
            raise StructuralError(f"core {k} has a zero dimension {core.shape}")
        if not np.all(np.isfinite(core)):
            raise NumericError(f"core {k} contains non-finite entries")
    if cores[0].shape[0] != 1:
        raise StructuralError(f"boundary rank r_0 must be 1, core 1 has left rank {cores[0].shape[0]}")
    if cores[-1].shape[2] != 1:
        raise StructuralError(
            f"boundary rank r_d must be 1, core {len(cores)} has right rank {cores[-1].shape[2]}"
        )
    for k in range(len(cores) - 1):
        if cores[k].shape[2] != cores[k + 1].shape[0]:
            raise StructuralError(
                f"rank mismatch at junction {k + 1}: core {k + 1} has right rank "
                f"{cores[k].shape[2]} but core {k + 2} has left rank {cores[k + 1].shape[0]}"
            )
    shape = tuple(int(c.shape[1]) for c in cores)
    ranks = tuple(int(c.shape[2]) for c in cores[:-1])
    return shape, ranks


class TTTensor:
    """Immutable chain of TT cores.

    ``cores[k]`` has shape ``(r_k, n_{k+1}, r_{k+1})`` (0-based k); the
    constructor copies its inputs to read-only float64 arrays and validates
    the chain.  ``ranks`` are the *declared* ranks (core widths); see
    :func:`tt_rank_numerical` for the numerical ones.
    """

    __slots__ = ("cores", "shape", "ranks")

    def __init__(self, cores):
        cores = tuple(np.array(c, dtype=np.float64, order="C", copy=True) for c in cores)
        shape, ranks = _validate_cores(cores)
        for c in cores:
            c.setflags(write=False)
        object.__setattr__(self, "cores", cores)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "ranks", ranks)

    def __setattr__(self, name, value):
        raise AttributeError("TTTensor is immutable")

    @property
    def d(self) -> int:
        return len(self.cores)

    @property
    def size(self) -> int:
        return Shape(self.shape).size

    def __repr__(self) -> str:
        return f"TTTensor(shape={self.shape}, ranks={self.ranks})"


def validate(t) -> tuple[int, ...]:
    """Validate a TTTensor or a raw core sequence; return the declared ranks."""
    if isinstance(t, TTTensor):
        _, ranks = _validate_cores(t.cores)
        return ranks
    cores = tuple(np.asarray(c, dtype=np.float64) for c in t)
    _, ranks = _validate_cores(cores)
    return ranks


def entry(t: TTTensor, multi) -> float:
    """Single tensor entry at a 1-based multi-index (chained 1x1 product)."""
    if len(multi) != t.d:
        raise DomainError(f"multi-index length {len(multi)} != d={t.d}")
    v = None
    for k, (j, core) in enumerate(zip(multi, t.cores), start=1):
        j = int(j)
        if not 1 <= j <= core.shape[1]:
            raise DomainError(f"index {j} out of range [1, {core.shape[1]}] at mode {k}")
        slab = core[:, j - 1, :]
        v = slab if v is None else v @ slab
    return float(v[0, 0])


def _left_chain(cores, upto: int, block_rows: int, max_elems: int) -> np.ndarray:
    """Contract cores[0:upto] into the (prod n_j) x r_upto interface matrix.

    The recurrence L_k[p + P*j, :] = L_{k-1}[p, :] @ cores[k][:, j, :] is run
    on an F-ordered (P, n, r) buffer in row blocks, so the final reshape to
    (P*n, r) is a view and peak memory stays at one buffer.
    """
    L = cores[0][0]  # (n_1, r_1)
    for k in range(1, upto):
        core = cores[k]
        P = L.shape[0]
        n, r_out = core.shape[1], core.shape[2]
        if P * n * r_out > max_elems:
            raise CapacityError(
                f"interface matrix would hold {P * n * r_out} elements (cap {max_elems})"
            )
        out = np.empty((P, n, r_out), order="F")
        for p0 in range(0, P, block_rows):
            p1 = min(p0 + block_rows, P)
            np.einsum("pa,ajb->pjb", L[p0:p1], core, out=out[p0:p1])
        L = out.reshape(P * n, r_out, order="F")
    return L


def left_interface(
    t: TTTensor,
    i: int,
    block_rows: int = DEFAULT_BLOCK_ROWS,
    max_elems: int = INTERFACE_ELEM_CAP,
) -> np.ndarray:
    """L_i: rows are the first i modes linearized (first index fastest), cols r_i."""
    if not 1 <= i <= t.d - 1:
        raise DomainError(f"unfolding position must be in [1, {t.d - 1}], got {i}")
    return _left_chain(t.cores, i, block_rows, max_elems)


def right_interface(
    t: TTTensor,
    i: int,
    block_rows: int = DEFAULT_BLOCK_ROWS,
    max_elems: int = INTERFACE_ELEM_CAP,
) -> np.ndarray:
    """R_i: rows are modes i+1..d linearized (index i+1 fastest), cols r_i."""
    if not 1 <= i <= t.d - 1:
        raise DomainError(f"unfolding position must be in [1, {t.d - 1}], got {i}")
    cores = t.cores
    R = cores[-1][:, :, 0].T  # (n_d, r_{d-1})
    for k in range(t.d - 2, i - 1, -1):
        core = cores[k]
        Q = R.shape[0]
        r_in, n = core.shape[0], core.shape[1]
        if n * Q * r_in > max_elems:
            raise CapacityError(
                f"interface matrix would hold {n * Q * r_in} elements (cap {max_elems})"
            )
        out = np.empty((n, Q, r_in), order="F")
        for q0 in range(0, Q, block_rows):
            q1 = min(q0 + block_rows, Q)
            # out[j, q, a] = sum_b core[a, j, b] * R[q, b]
            np.einsum("ajb,qb->jqa", core, R[q0:q1], out=out[:, q0:q1, :])
        R = out.reshape(n * Q, r_in, order="F")
    return R


def _factor_pair_svd(L: np.ndarray, R: np.ndarray, rank_tol: float) -> ThinSVD:
    """Compact SVD of L @ R.T from thin QRs of the two factors.

    Only the small (width x width) core matrix is ever decomposed densely;
    the product L @ R.T is never formed.
    """
    QL, SL = np.linalg.qr(L, mode="reduced")
    QR, SR = np.linalg.qr(R, mode="reduced")
    M = SL @ SR.T
    U, s, Vt = np.linalg.svd(M, full_matrices=False)
    r = numerical_rank(s, rank_tol)
    if r == 0:
        raise RankZeroError("matrix product is numerically zero")
    return ThinSVD(QL @ U[:, :r], s[:r], QR @ Vt[:r].T)


def unfolding_svd(t: TTTensor, i: int, rank_tol: float = DEFAULT_RANK_TOL) -> ThinSVD:
    """Compact SVD of the i-th unfolding, computed from the interface factors."""
    return _factor_pair_svd(left_interface(t, i), right_interface(t, i), rank_tol)


def tt_rank_numerical(t: TTTensor, rank_tol: float = DEFAULT_RANK_TOL) -> tuple[int, ...]:
    """Numerical rank of every unfolding, i = 1..d-1."""
    return tuple(unfolding_svd(t, i, rank_tol).rank for i in range(1, t.d))


def row_restrict(t: TTTensor, i: int, I: IndexSet) -> TTTensor:
    """Subtensor keeping rows I of the i-th unfolding: shape (|I|, n_{i+1}, ..., n_d).

    The selected rows of L_i become the new first core; the trailing cores
    are shared unchanged, so the result is again a TT of d - i + 1 modes.
    """
    if not 1 <= i <= t.d - 1:
        raise DomainError(f"unfolding position must be in [1, {t.d - 1}], got {i}")
    P = Shape(t.shape).prefix_size(i)
    if I.domain != P:
        raise DomainError(f"index-set domain {I.domain} != prod of first {i} mode sizes {P}")
    if len(I) == 0:
        raise DomainError("row index set must be nonempty")
    L = left_interface(t, i)
    G = L[I.zero_based(), :][None, :, :]
    return TTTensor((G,) + t.cores[i:])


def column_submatrix(
    t: TTTensor, i: int, rows: IndexSet, J: IndexSet, cap: int = DENSE_CAP
) -> np.ndarray:
    """Dense |rows| x |J| submatrix of the i-th unfolding, T_<i>(rows, J).

    Built as L_i(rows, :) @ R_i(J, :).T; the full unfolding never exists.
    The *result* is dense, so its size is capped.
    """
    if not 1 <= i <= t.d - 1:
        raise DomainError(f"unfolding position must be in [1, {t.d - 1}], got {i}")
    shp = Shape(t.shape)
    if rows.domain != shp.prefix_size(i):
        raise DomainError(
            f"row domain {rows.domain} != prod of first {i} mode sizes {shp.prefix_size(i)}"
        )
    if J.domain != shp.suffix_size(i):
        raise DomainError(
            f"column domain {J.domain} != prod of trailing mode sizes {shp.suffix_size(i)}"
        )
    if len(rows) == 0 or len(J) == 0:
        raise DomainError("row and column index sets must be nonempty")
    if len(rows) * len(J) > cap:
        raise CapacityError(f"submatrix would hold {len(rows) * len(J)} entries (cap {cap})")
    L = left_interface(t, i)[rows.zero_based(), :]
    R = right_interface(t, i)[J.zero_based(), :]
    return L @ R.T


def submatrix_svd(
    t: TTTensor, i: int, rows: IndexSet, J: IndexSet, rank_tol: float = DEFAULT_RANK_TOL
) -> ThinSVD:
    """Compact SVD of :func:`column_submatrix` without materializing it.

    Identical result (up to roundoff) to ``thin_svd(column_submatrix(...))``
    but costs 2 thin QRs of (selected rows of) the interface factors plus a
    width x width SVD, so it works at scales where the dense block would not
    fit in memory.
    """
    if not 1 <= i <= t.d - 1:
        raise DomainError(f"unfolding position must be in [1, {t.d - 1}], got {i}")
    shp = Shape(t.shape)
    if rows.domain != shp.prefix_size(i) or J.domain != shp.suffix_size(i):
        raise DomainError("index-set domains do not match the unfolding")
    if len(rows) == 0 or len(J) == 0:
        raise DomainError("row and column index sets must be nonempty")
    L = left_interface(t, i)[rows.zero_based(), :]
    R = right_interface(t, i)[J.zero_based(), :]
    return _factor_pair_svd(L, R, rank_tol)


def to_dense(t: TTTensor, cap: int = DENSE_CAP) -> np.ndarray:
    """Materialize the full tensor (F-ordered reshape of the left chain)."""
    size = t.size
    if size > cap:
        raise CapacityError(f"dense tensor would hold {size} entries (cap {cap})")
    full = _left_chain(t.cores, t.d, DEFAULT_BLOCK_ROWS, INTERFACE_ELEM_CAP)
    return full.reshape(t.shape, order="F")


def tt_svd_from_dense(
    dense, rank_tol: float = DEFAULT_RANK_TOL, cap: int = DENSE_CAP
) -> TTTensor:
    """Build a TT from a dense array by sequential compact SVDs.

    The declared ranks of the result equal the numerical unfolding ranks of
    the input at ``rank_tol``; reconstruction matches the input to roundoff.
    """
    X = np.asarray(dense, dtype=np.float64)
    if X.ndim < 2:
        raise DomainError(f"need at least 2 modes, got ndim={X.ndim}")
    if min(X.shape) < 1:
        raise DomainError(f"empty mode in shape {X.shape}")
    if X.size > cap:
        raise CapacityError(f"dense tensor holds {X.size} entries (cap {cap})")
    if not np.all(np.isfinite(X)):
        raise NumericError("dense tensor contains non-finite entries")
    shape = X.shape
    d = X.ndim
    cores = []
    r_prev = 1
    cur = X
    for k in range(d - 1):
        M = cur.reshape(r_prev * shape[k], -1, order="F")
        U, s, Vt = np.linalg.svd(M, full_matrices=False)
        r = numerical_rank(s, rank_tol)
        if r == 0:
            raise RankZeroError("tensor is numerically zero")
        cores.append(U[:, :r].reshape(r_prev, shape[k], r, order="F"))
        cur = s[:r, None] * Vt[:r]
        r_prev = r
    cores.append(cur.reshape(r_prev, shape[-1], 1, order="F"))
    return TTTensor(cores)
