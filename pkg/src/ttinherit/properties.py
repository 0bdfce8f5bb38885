"""Incoherence, conditioning, and their inheritance under fiber-wise sampling.

For an m x n rank-r matrix with compact SVD ``W diag(sigma) V^T`` we use the
tightest incoherence constants

    mu1 = (m / r) * max_row ||W||^2,      mu2 = (n / r) * max_row ||V||^2,

both in [1, m/r] resp. [1, n/r], and the condition number
``kappa = sigma_max / sigma_min`` of the retained spectrum.

When rows of an unfolding are kept (a fiber-wise subtensor) or columns of an
unfolding are kept (a column submatrix), these quantities degrade in a
controlled way.  The controlling factors are

    alpha_it  — row-sampling factor of the k-th unfolding (k = i + t - 1),
                sqrt(|I_i| / prod(n_1..n_i)) * ||W_k(rows, :)^+||_2 with
                rows = I_i extended by the full modes i+1..k,
    alpha_i   — the t = 2 flavor used for column submatrices (alpha_1 = 1
                by convention),
    beta_i    — the column-side analogue from V_i(J_i, :).

``check_row_sampling_bounds`` / ``check_column_sampling_bounds`` evaluate
both sides of every inheritance inequality these factors enter and report
them as :class:`InheritanceRecord` rows; with exact arithmetic every
inequality is a proven fact, so a violation (beyond a tiny multiplicative
slack) means a bug, not bad luck.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import DomainError, RankZeroError, SingularityError
from .linalg import (
    DEFAULT_RANK_TOL,
    ThinSVD,
    condition_number,
    numerical_rank,
    pinv_spectral_norm,
    row_two_inf_norm,
)
from .multiindex import IndexSet, Shape, kron_extend
from .tt import (
    TTTensor,
    left_interface,
    row_restrict,
    submatrix_svd,
    tt_rank_numerical,
    unfolding_svd,
)

__all__ = [
    "ALPHA_1",
    "BOUND_SLACK",
    "IncoherencePair",
    "UnfoldingReport",
    "BoundCheck",
    "InheritanceRecord",
    "RankPreservationReport",
    "incoherence",
    "unfolding_report",
    "tt_incoherence",
    "alpha_it",
    "alpha_i",
    "beta_i",
    "check_rank_preservation",
    "check_row_sampling_bounds",
    "check_column_sampling_bounds",
]

ALPHA_1 = 1.0  # convention: the i=1 column-submatrix bound needs no row factor

# multiplicative slack for inequality checks; both sides pass through SVDs
# with ~1e-10 relative error
BOUND_SLACK = 1e-8


@dataclass(frozen=True)
class IncoherencePair:
    """Tightest row/column incoherence constants of a matrix."""

    mu1: float
    mu2: float

    def __post_init__(self):
        if not (np.isfinite(self.mu1) and np.isfinite(self.mu2)):
            raise DomainError("incoherence constants must be finite")
        # tight constants are >= 1 up to roundoff
        if self.mu1 < 1.0 - 1e-9 or self.mu2 < 1.0 - 1e-9:
            raise DomainError(f"incoherence constants below 1: {self.mu1}, {self.mu2}")


@dataclass(frozen=True)
class UnfoldingReport:
    """Rank, incoherence, conditioning, and spectrum of one unfolding."""

    i: int
    rank: int
    mu: IncoherencePair
    kappa: float
    sigma: np.ndarray

    def __post_init__(self):
        if self.rank < 1:
            raise DomainError("unfolding rank must be >= 1")
        if not np.isfinite(self.kappa) or self.kappa < 1.0 - 1e-12:
            raise DomainError(f"condition number must be finite and >= 1, got {self.kappa}")
        sigma = np.asarray(self.sigma, dtype=np.float64)
        sigma.setflags(write=False)
        object.__setattr__(self, "sigma", sigma)

    @property
    def mu1(self) -> float:
        return self.mu.mu1

    @property
    def mu2(self) -> float:
        return self.mu.mu2


@dataclass(frozen=True)
class BoundCheck:
    """One verified inequality: lhs <= rhs up to multiplicative slack."""

    name: str
    lhs: float
    rhs: float
    slack: float
    satisfied: bool


@dataclass(frozen=True)
class InheritanceRecord:
    """A sampling factor plus the inequalities it certifies.

    ``kind`` is "alpha_it", "alpha_i", or "beta_i"; ``t`` is None except for
    alpha_it.  ``kappa``/``mu1``/``mu2``/``rank`` are the parent-unfolding
    quantities the right-hand sides are built from.  ``rank_hypothesis_ok``
    records whether the sampled block kept full rank; when it is False the
    checks tuple is empty and ``value`` may be NaN.
    """

    kind: str
    i: int
    t: int | None
    value: float
    kappa: float
    mu1: float
    mu2: float
    rank: int
    checks: tuple[BoundCheck, ...]
    rank_hypothesis_ok: bool

    @property
    def satisfied(self) -> bool:
        return self.rank_hypothesis_ok and all(c.satisfied for c in self.checks)

    @property
    def label(self) -> str:
        if self.kind == "alpha_it":
            return f"alpha_{self.i}_{self.t}"
        if self.kind == "alpha_i":
            return f"alpha_{self.i}"
        return f"beta_{self.i}"


def incoherence(svd: ThinSVD, m: int, n: int) -> IncoherencePair:
    """Tightest incoherence constants from a compact SVD of an m x n matrix."""
    if svd.W.shape[0] != m or svd.V.shape[0] != n:
        raise DomainError(
            f"SVD is of a {svd.W.shape[0]} x {svd.V.shape[0]} matrix, not {m} x {n}"
        )
    r = svd.rank
    mu1 = (m / r) * row_two_inf_norm(svd.W) ** 2
    mu2 = (n / r) * row_two_inf_norm(svd.V) ** 2
    return IncoherencePair(mu1, mu2)


def unfolding_report(i: int, svd: ThinSVD) -> UnfoldingReport:
    """Package rank/incoherence/conditioning of one unfolding SVD."""
    m, n = svd.shape
    return UnfoldingReport(
        i=i,
        rank=svd.rank,
        mu=incoherence(svd, m, n),
        kappa=condition_number(svd),
        sigma=svd.sigma,
    )


def tt_incoherence(t: TTTensor, rank_tol: float = DEFAULT_RANK_TOL) -> list[UnfoldingReport]:
    """Reports for every unfolding i = 1..d-1 via the structured SVD path."""
    return [unfolding_report(i, unfolding_svd(t, i, rank_tol)) for i in range(1, t.d)]


def _extended_rows(t: TTTensor, I_i: IndexSet, i: int, k: int) -> IndexSet:
    """Row set of unfolding k induced by I_i: extend by full modes i+1..k."""
    rows = I_i
    for j in range(i + 1, k + 1):
        rows = kron_extend(rows, t.shape[j - 1])
    return rows


def alpha_it(
    t: TTTensor,
    I_i: IndexSet,
    i: int,
    t_off: int,
    rank_tol: float = DEFAULT_RANK_TOL,
    svd: ThinSVD | None = None,
) -> float:
    """Row-sampling factor of unfolding k = i + t_off - 1 for level-i rows I_i.

    Equals sqrt(|I_i| / prod(n_1..n_i)) times the spectral norm of the
    pseudoinverse of W_k restricted to the rows induced by I_i.  It is 1
    under full sampling and >= sqrt(|I_i| / prod(n_1..n_i)) always.  An
    ``svd`` of unfolding k may be passed to avoid recomputation.
    """
    shp = Shape(t.shape)
    if not 1 <= i <= t.d - 1:
        raise DomainError(f"level i must be in [1, {t.d - 1}], got {i}")
    if not 1 <= t_off <= t.d - i:
        raise DomainError(f"offset t must be in [1, {t.d - i}], got {t_off}")
    P_i = shp.prefix_size(i)
    if I_i.domain != P_i:
        raise DomainError(f"I_i domain {I_i.domain} != prod of first {i} mode sizes {P_i}")
    if len(I_i) == 0:
        raise DomainError("I_i must be nonempty")
    k = i + t_off - 1
    if svd is None:
        svd = unfolding_svd(t, k, rank_tol)
    rows = _extended_rows(t, I_i, i, k)
    sub = svd.W[rows.zero_based(), :]
    return float(np.sqrt(len(I_i) / P_i) * pinv_spectral_norm(sub, rank_tol))


def alpha_i(
    t: TTTensor,
    I_prev: IndexSet | None,
    i: int,
    rank_tol: float = DEFAULT_RANK_TOL,
    svd: ThinSVD | None = None,
) -> float:
    """Row factor entering the column-submatrix bounds at level i.

    For i >= 2 this is sqrt(|I_{i-1}| / prod(n_1..n_{i-1})) times the
    pseudoinverse norm of W_i restricted to rows I_{i-1} extended by the
    full mode n_i; for i = 1 it is the constant :data:`ALPHA_1` = 1 (the
    level-1 bound has no row factor) and ``I_prev`` is ignored.
    """
    if i == 1:
        return ALPHA_1
    if not 2 <= i <= t.d - 1:
        raise DomainError(f"level i must be in [1, {t.d - 1}], got {i}")
    if I_prev is None:
        raise DomainError("I_prev is required for i >= 2")
    shp = Shape(t.shape)
    P_prev = shp.prefix_size(i - 1)
    if I_prev.domain != P_prev:
        raise DomainError(
            f"I_prev domain {I_prev.domain} != prod of first {i - 1} mode sizes {P_prev}"
        )
    if len(I_prev) == 0:
        raise DomainError("I_prev must be nonempty")
    if svd is None:
        svd = unfolding_svd(t, i, rank_tol)
    rows = kron_extend(I_prev, t.shape[i - 1])
    sub = svd.W[rows.zero_based(), :]
    return float(np.sqrt(len(I_prev) / P_prev) * pinv_spectral_norm(sub, rank_tol))


def beta_i(
    t: TTTensor,
    J_i: IndexSet,
    i: int,
    rank_tol: float = DEFAULT_RANK_TOL,
    svd: ThinSVD | None = None,
) -> float:
    """Column-sampling factor at level i.

    sqrt(|J_i| / prod(n_{i+1}..n_d)) times the pseudoinverse norm of the
    right singular factor V_i restricted to rows J_i; 1 under full sampling.
    """
    shp = Shape(t.shape)
    if not 1 <= i <= t.d - 1:
        raise DomainError(f"level i must be in [1, {t.d - 1}], got {i}")
    Q_i = shp.suffix_size(i)
    if J_i.domain != Q_i:
        raise DomainError(f"J_i domain {J_i.domain} != prod of trailing mode sizes {Q_i}")
    if len(J_i) == 0:
        raise DomainError("J_i must be nonempty")
    if svd is None:
        svd = unfolding_svd(t, i, rank_tol)
    sub = svd.V[J_i.zero_based(), :]
    return float(np.sqrt(len(J_i) / Q_i) * pinv_spectral_norm(sub, rank_tol))


@dataclass(frozen=True)
class RankPreservationReport:
    """Outcome of the first-mode rank-preservation check."""

    hypothesis_ok: bool
    expected: tuple[int, ...]
    observed: tuple[int, ...] | None
    passed: bool


def check_rank_preservation(
    t: TTTensor, I: IndexSet, rank_tol: float = DEFAULT_RANK_TOL
) -> RankPreservationReport:
    """Keep rows I of the first unfolding; check the whole rank tuple survives.

    Hypothesis: the kept rows span the full column space of unfolding 1
    (numerical rank r_1).  When it holds, the subtensor's numerical rank
    tuple must equal the original's; when it fails, the report says so and
    ``passed`` is False without raising.
    """
    expected = tt_rank_numerical(t, rank_tol)
    svd1 = unfolding_svd(t, 1, rank_tol)
    sub = svd1.W[I.zero_based(), :]
    s = scipy.linalg.svdvals(sub)
    hypothesis_ok = numerical_rank(s, rank_tol) == expected[0]
    if not hypothesis_ok:
        return RankPreservationReport(False, expected, None, False)
    observed = tt_rank_numerical(row_restrict(t, 1, I), rank_tol)
    return RankPreservationReport(True, expected, observed, observed == expected)


def _check(name: str, lhs: float, rhs: float, slack: float) -> BoundCheck:
    return BoundCheck(name, float(lhs), float(rhs), slack, bool(lhs <= rhs * (1.0 + slack)))


def validate_nested(t: TTTensor, nested: Sequence[IndexSet]) -> None:
    """Require I_i to refine I_{i-1}: each I_i inside I_{i-1} extended by mode i."""
    if len(nested) != t.d - 1:
        raise DomainError(f"need {t.d - 1} row index sets, got {len(nested)}")
    shp = Shape(t.shape)
    pool = IndexSet.full(1)  # I_0 = {1}
    for i, I_i in enumerate(nested, start=1):
        P_i = shp.prefix_size(i)
        if I_i.domain != P_i:
            raise DomainError(
                f"I_{i} domain {I_i.domain} != prod of first {i} mode sizes {P_i}"
            )
        if len(I_i) == 0:
            raise DomainError(f"I_{i} is empty")
        allowed = kron_extend(pool, t.shape[i - 1])
        if not I_i.is_subset_of(allowed):
            raise DomainError(f"I_{i} is not contained in I_{i - 1} extended by mode {i}")
        pool = I_i


def check_row_sampling_bounds(
    t: TTTensor,
    nested: Sequence[IndexSet],
    rank_tol: float = DEFAULT_RANK_TOL,
    slack: float = BOUND_SLACK,
    svds: Sequence[ThinSVD] | None = None,
) -> list[InheritanceRecord]:
    """Verify the inheritance inequalities for every row-sampled subtensor.

    For each level i, the subtensor keeping rows I_i of unfolding i is formed
    and each of its unfoldings t is compared against the parent unfolding
    k = i + t - 1 of the full tensor:

        mu1(sub) <= alpha_it^2 * kappa^2 * mu1
        mu2(sub) <= mu2                      (no amplification, exact)
        kappa(sub) <= alpha_it * sqrt(mu1 * r_k) * kappa

    Records are ordered by (i, t).  A failed rank hypothesis flags the
    record and skips its checks instead of raising.
    """
    validate_nested(t, nested)
    if svds is None:
        svds = [unfolding_svd(t, k, rank_tol) for k in range(1, t.d)]
    parents = [unfolding_report(k, svds[k - 1]) for k in range(1, t.d)]
    records = []
    for i in range(1, t.d):
        I_i = nested[i - 1]
        sub = row_restrict(t, i, I_i)
        for t_off in range(1, t.d - i + 1):
            k = i + t_off - 1
            parent = parents[k - 1]
            try:
                a = alpha_it(t, I_i, i, t_off, rank_tol, svd=svds[k - 1])
                ssvd = unfolding_svd(sub, t_off, rank_tol)
                rank_ok = ssvd.rank == parent.rank
            except (SingularityError, RankZeroError):
                records.append(
                    InheritanceRecord(
                        kind="alpha_it",
                        i=i,
                        t=t_off,
                        value=float("nan"),
                        kappa=parent.kappa,
                        mu1=parent.mu1,
                        mu2=parent.mu2,
                        rank=parent.rank,
                        checks=(),
                        rank_hypothesis_ok=False,
                    )
                )
                continue
            if not rank_ok:
                records.append(
                    InheritanceRecord(
                        kind="alpha_it",
                        i=i,
                        t=t_off,
                        value=a,
                        kappa=parent.kappa,
                        mu1=parent.mu1,
                        mu2=parent.mu2,
                        rank=parent.rank,
                        checks=(),
                        rank_hypothesis_ok=False,
                    )
                )
                continue
            m_sub, n_sub = ssvd.shape
            mu_sub = incoherence(ssvd, m_sub, n_sub)
            kappa_sub = condition_number(ssvd)
            checks = (
                _check("mu1", mu_sub.mu1, a**2 * parent.kappa**2 * parent.mu1, slack),
                _check("mu2", mu_sub.mu2, parent.mu2, slack),
                _check(
                    "kappa",
                    kappa_sub,
                    a * np.sqrt(parent.mu1 * parent.rank) * parent.kappa,
                    slack,
                ),
            )
            records.append(
                InheritanceRecord(
                    kind="alpha_it",
                    i=i,
                    t=t_off,
                    value=a,
                    kappa=parent.kappa,
                    mu1=parent.mu1,
                    mu2=parent.mu2,
                    rank=parent.rank,
                    checks=checks,
                    rank_hypothesis_ok=True,
                )
            )
    return records


def check_column_sampling_bounds(
    t: TTTensor,
    nested: Sequence[IndexSet],
    J_sets: Sequence[IndexSet],
    rank_tol: float = DEFAULT_RANK_TOL,
    slack: float = BOUND_SLACK,
    svds: Sequence[ThinSVD] | None = None,
) -> list[InheritanceRecord]:
    """Verify the inheritance inequalities for every column submatrix.

    At each level i the block keeps rows I_{i-1} (extended by the full mode
    n_i) and columns J_i of unfolding i; its SVD is computed structurally
    (the block itself is never materialized).  Level 1 has no row factor:

        i = 1:  mu1(C) <= mu1 (exact),  mu2(C) <= beta^2 kappa^2 mu2,
                kappa(C) <= beta sqrt(mu2 r) kappa
        i >= 2: mu1(C) <= alpha^2 beta^2 kappa^2 r mu1 mu2,
                mu2(C) <= beta^2 kappa^2 mu2,
                kappa(C) <= alpha beta sqrt(mu1 mu2) r kappa

    Returns, per level, an "alpha_i" record (i >= 2, carrying the row
    factor, no checks of its own) followed by a "beta_i" record carrying
    the three inequalities.
    """
    validate_nested(t, nested)
    shp = Shape(t.shape)
    if len(J_sets) != t.d - 1:
        raise DomainError(f"need {t.d - 1} column index sets, got {len(J_sets)}")
    for i, J in enumerate(J_sets, start=1):
        if J.domain != shp.suffix_size(i):
            raise DomainError(
                f"J_{i} domain {J.domain} != prod of trailing mode sizes {shp.suffix_size(i)}"
            )
        if len(J) == 0:
            raise DomainError(f"J_{i} is empty")
    if svds is None:
        svds = [unfolding_svd(t, k, rank_tol) for k in range(1, t.d)]
    parents = [unfolding_report(k, svds[k - 1]) for k in range(1, t.d)]
    records = []
    for i in range(1, t.d):
        parent = parents[i - 1]
        J = J_sets[i - 1]
        I_prev = nested[i - 2] if i >= 2 else IndexSet.full(1)
        rows = kron_extend(I_prev, t.shape[i - 1])
        hypothesis_ok = True
        a = ALPHA_1
        b = float("nan")
        csvd = None
        try:
            if i >= 2:
                a = alpha_i(t, I_prev, i, rank_tol, svd=svds[i - 1])
            b = beta_i(t, J, i, rank_tol, svd=svds[i - 1])
            csvd = submatrix_svd(t, i, rows, J, rank_tol)
            if csvd.rank != parent.rank:
                hypothesis_ok = False
        except (SingularityError, RankZeroError):
            hypothesis_ok = False
        if i >= 2:
            records.append(
                InheritanceRecord(
                    kind="alpha_i",
                    i=i,
                    t=None,
                    value=a,
                    kappa=parent.kappa,
                    mu1=parent.mu1,
                    mu2=parent.mu2,
                    rank=parent.rank,
                    checks=(),
                    rank_hypothesis_ok=hypothesis_ok,
                )
            )
        if not hypothesis_ok:
            records.append(
                InheritanceRecord(
                    kind="beta_i",
                    i=i,
                    t=None,
                    value=b,
                    kappa=parent.kappa,
                    mu1=parent.mu1,
                    mu2=parent.mu2,
                    rank=parent.rank,
                    checks=(),
                    rank_hypothesis_ok=False,
                )
            )
            continue
        mu_c = incoherence(csvd, len(rows), len(J))
        kappa_c = condition_number(csvd)
        kap, mu1, mu2, r = parent.kappa, parent.mu1, parent.mu2, parent.rank
        if i == 1:
            checks = (
                _check("mu1", mu_c.mu1, mu1, slack),
                _check("mu2", mu_c.mu2, b**2 * kap**2 * mu2, slack),
                _check("kappa", kappa_c, b * np.sqrt(mu2 * r) * kap, slack),
            )
        else:
            checks = (
                _check("mu1", mu_c.mu1, a**2 * b**2 * kap**2 * r * mu1 * mu2, slack),
                _check("mu2", mu_c.mu2, b**2 * kap**2 * mu2, slack),
                _check("kappa", kappa_c, a * b * np.sqrt(mu1 * mu2) * r * kap, slack),
            )
        records.append(
            InheritanceRecord(
                kind="beta_i",
                i=i,
                t=None,
                value=b,
                kappa=kap,
                mu1=mu1,
                mu2=mu2,
                rank=r,
                checks=checks,
                rank_hypothesis_ok=True,
            )
        )
    return records
