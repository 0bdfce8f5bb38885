"""Tensor-train structure: cores, entries, interfaces, structured SVDs."""

import itertools

import numpy as np
import pytest
import scipy.linalg

from ttinherit import (
    CapacityError,
    DomainError,
    IndexSet,
    NumericError,
    RankZeroError,
    StructuralError,
    TTTensor,
    column_submatrix,
    entry,
    left_interface,
    linearize,
    right_interface,
    row_restrict,
    submatrix_svd,
    thin_svd,
    to_dense,
    tt_rank_numerical,
    tt_svd_from_dense,
    unfolding_svd,
    validate,
)
from ttinherit.oracle import dense_unfolding

from conftest import make_tt, rel_err

# ---------------------------------------------------------------- validation


def test_validate_accepts_matching_chain():
    cores = [np.ones((1, 2, 3)), np.ones((3, 4, 1))]
    assert validate(cores) == (3,)
    t = TTTensor(cores)
    assert t.shape == (2, 4) and t.ranks == (3,) and t.d == 2 and t.size == 8


def test_validate_rejects_junction_mismatch():
    with pytest.raises(StructuralError):
        validate([np.ones((1, 2, 3)), np.ones((2, 4, 1))])


def test_validate_rejects_single_core():
    with pytest.raises(StructuralError):
        validate([np.ones((1, 2, 1))])


def test_validate_rejects_malformed_cores():
    with pytest.raises(StructuralError):
        validate([np.ones((2, 2, 3)), np.ones((3, 4, 1))])  # r_0 != 1
    with pytest.raises(StructuralError):
        validate([np.ones((1, 2, 3)), np.ones((3, 4, 2))])  # r_d != 1
    with pytest.raises(StructuralError):
        validate([np.ones((1, 2)), np.ones((2, 4, 1))])  # not 3-d
    with pytest.raises(StructuralError):
        validate([np.ones((1, 0, 3)), np.ones((3, 4, 1))])  # empty mode
    bad = np.ones((1, 2, 3))
    bad[0, 0, 0] = np.nan
    with pytest.raises(NumericError):
        validate([bad, np.ones((3, 4, 1))])


def test_tensor_is_immutable_and_copies_input():
    src = [np.ones((1, 2, 2)), np.ones((2, 2, 1))]
    t = TTTensor(src)
    src[0][0, 0, 0] = 99.0
    assert t.cores[0][0, 0, 0] == 1.0
    with pytest.raises(AttributeError):
        t.shape = (3, 3)
    with pytest.raises(ValueError):
        t.cores[0][0, 0, 0] = 5.0
    assert "shape" in repr(t)


# ---------------------------------------------------------------- entry / to_dense


def test_entry_hand_product(hand_tt):
    assert entry(hand_tt, (2, 1)) == 6.0
    assert entry(hand_tt, (1, 1)) == 3.0
    assert entry(hand_tt, (2, 2)) == 8.0


def test_entry_all_ones(ones_tt):
    for multi in itertools.product((1, 2), repeat=4):
        assert entry(ones_tt, multi) == 1.0


def test_entry_rejects_bad_multi(hand_tt):
    with pytest.raises(DomainError):
        entry(hand_tt, (1,))
    with pytest.raises(DomainError):
        entry(hand_tt, (3, 1))
    with pytest.raises(DomainError):
        entry(hand_tt, (1, 0))


def test_entry_matches_dense_everywhere():
    t = make_tt("gaussian", (2, 3, 2), (2, 2), seed=10)
    X = to_dense(t)
    for multi in itertools.product(*(range(1, n + 1) for n in t.shape)):
        zero = tuple(j - 1 for j in multi)
        assert np.isclose(entry(t, multi), X[zero], rtol=1e-12)


def test_to_dense_hand_values(hand_tt, ones_tt):
    assert np.allclose(to_dense(hand_tt), [[3.0, 4.0], [6.0, 8.0]])
    assert np.allclose(to_dense(ones_tt), np.ones((2, 2, 2, 2)))


def test_to_dense_respects_capacity_cap():
    t = make_tt("gaussian", (10, 10, 10), (2, 2), seed=1)
    with pytest.raises(CapacityError):
        to_dense(t, cap=999)


# ---------------------------------------------------------------- interfaces


def test_left_interface_hand_values(hand_tt):
    assert np.allclose(left_interface(hand_tt, 1), [[1.0], [2.0]])


def test_left_interface_all_ones_chain():
    core = np.ones((1, 2, 1))
    t = TTTensor([core, core, core])
    assert np.allclose(left_interface(t, 2), np.ones((4, 1)))


def test_right_interface_hand_values(hand_tt):
    assert np.allclose(right_interface(hand_tt, 1), [[3.0], [4.0]])


def test_right_interface_all_ones_chain():
    core = np.ones((1, 2, 1))
    t = TTTensor([core, core, core])
    assert np.allclose(right_interface(t, 1), np.ones((4, 1)))


def test_interfaces_factor_every_unfolding():
    t = make_tt("gaussian", (4, 3, 5, 2), (2, 3, 2), seed=5)
    X = to_dense(t)
    for i in range(1, t.d):
        L = left_interface(t, i)
        R = right_interface(t, i)
        M = dense_unfolding(X, i)
        assert L.shape == (M.shape[0], t.ranks[i - 1])
        assert R.shape == (M.shape[1], t.ranks[i - 1])
        assert rel_err(L @ R.T, M) <= 1e-10


def test_interfaces_reject_out_of_range_position(hand_tt):
    for bad in (0, 2):
        with pytest.raises(DomainError):
            left_interface(hand_tt, bad)
        with pytest.raises(DomainError):
            right_interface(hand_tt, bad)


def test_interface_row_blocking_is_transparent():
    t = make_tt("uniform", (6, 5, 4), (3, 2), seed=8)
    assert np.allclose(
        left_interface(t, 2, block_rows=4), left_interface(t, 2), atol=0, rtol=0
    )
    assert np.allclose(
        right_interface(t, 1, block_rows=4), right_interface(t, 1), atol=0, rtol=0
    )


def test_interface_capacity_cap():
    t = make_tt("gaussian", (10, 10, 10), (2, 2), seed=1)
    with pytest.raises(CapacityError):
        left_interface(t, 2, max_elems=50)


# ---------------------------------------------------------------- unfolding_svd


def test_unfolding_svd_rank_one_spectrum(hand_tt):
    svd = unfolding_svd(hand_tt, 1)
    assert svd.rank == 1
    assert np.isclose(svd.sigma[0], 5.0 * np.sqrt(5.0), rtol=1e-14)
    assert np.isclose(svd.sigma[0], 11.1803, atol=5e-5)


def test_unfolding_svd_orthogonality_at_scale():
    t = make_tt("gaussian", (20, 20, 20, 20), (2, 3, 2), seed=3)
    for i in range(1, 4):
        svd = unfolding_svd(t, i)
        r = svd.rank
        assert np.abs(svd.W.T @ svd.W - np.eye(r)).max() <= 1e-10
        assert np.abs(svd.V.T @ svd.V - np.eye(r)).max() <= 1e-10


def test_unfolding_svd_matches_dense_svd():
    t = make_tt("gaussian", (6, 6, 6, 6), (2, 3, 2), seed=4)
    X = to_dense(t)
    for i in range(1, 4):
        s_struct = unfolding_svd(t, i)
        s_dense = thin_svd(dense_unfolding(X, i))
        assert s_struct.rank == s_dense.rank
        assert rel_err(s_struct.sigma, s_dense.sigma) <= 1e-10
        # the spanned subspaces agree even if the bases differ by signs/rotations
        assert scipy.linalg.subspace_angles(s_struct.W, s_dense.W).max() <= 1e-8
        assert scipy.linalg.subspace_angles(s_struct.V, s_dense.V).max() <= 1e-8


# ---------------------------------------------------------------- tt_rank_numerical


def test_tt_rank_numerical_of_random_draw():
    t = make_tt("gaussian", (10, 10, 10, 10), (2, 3, 2), seed=6)
    assert tt_rank_numerical(t) == (2, 3, 2)


def test_tt_rank_numerical_all_ones(ones_tt):
    assert tt_rank_numerical(ones_tt) == (1, 1, 1)


def test_tt_rank_numerical_zero_core_raises():
    t = TTTensor([np.zeros((1, 2, 2)), np.ones((2, 2, 1))])
    with pytest.raises(RankZeroError):
        tt_rank_numerical(t)


def test_declared_ranks_can_exceed_numerical():
    # a rank-1 matrix stored with inflated core width 3
    t = TTTensor([np.ones((1, 4, 3)), np.ones((3, 5, 1))])
    assert t.ranks == (3,)
    assert tt_rank_numerical(t) == (1,)


# ---------------------------------------------------------------- row_restrict


def test_row_restrict_full_is_identity():
    t = make_tt("uniform", (4, 3, 5), (2, 2), seed=9)
    sub = row_restrict(t, 1, IndexSet.full(4))
    assert np.allclose(to_dense(sub), to_dense(t), rtol=1e-12, atol=1e-14)


def test_row_restrict_single_row_is_a_slice():
    t = make_tt("gaussian", (4, 3, 5), (2, 2), seed=9)
    sub = row_restrict(t, 1, IndexSet([2], 4))
    assert sub.shape == (1, 3, 5)
    assert np.allclose(to_dense(sub)[0], to_dense(t)[1], rtol=1e-12)


def test_row_restrict_matches_dense_rows():
    t = make_tt("gaussian", (4, 3, 5, 2), (2, 3, 2), seed=12)
    X = to_dense(t)
    I = IndexSet([1, 4, 7, 11], 12)
    sub = row_restrict(t, 2, I)
    assert sub.shape == (4, 5, 2)
    got = dense_unfolding(to_dense(sub), 1)
    want = dense_unfolding(X, 2)[I.zero_based(), :]
    assert rel_err(got, want) <= 1e-12


def test_row_restrict_preserves_entries():
    t = make_tt("gaussian", (4, 3, 5), (2, 2), seed=13)
    I = IndexSet([3, 7, 10], 12)  # rows of the 2nd unfolding
    sub = row_restrict(t, 2, I)
    for a, q in enumerate(I, start=1):
        j1 = (q - 1) % 4 + 1
        j2 = (q - 1) // 4 + 1
        assert linearize((j1, j2), (4, 3)) == q
        for j3 in range(1, 6):
            assert np.isclose(entry(sub, (a, j3)), entry(t, (j1, j2, j3)), rtol=1e-12)


def test_row_restrict_rejects_bad_sets():
    t = make_tt("gaussian", (4, 3, 5), (2, 2), seed=13)
    with pytest.raises(DomainError):
        row_restrict(t, 1, IndexSet([1], 5))  # wrong domain
    with pytest.raises(DomainError):
        row_restrict(t, 1, IndexSet([], 4))  # empty
    with pytest.raises(DomainError):
        row_restrict(t, 3, IndexSet([1], 60))  # position out of range


# ---------------------------------------------------------------- column_submatrix


def test_column_submatrix_full_equals_unfolding():
    t = make_tt("gaussian", (4, 3, 5), (2, 2), seed=14)
    X = to_dense(t)
    for i in (1, 2):
        rows = IndexSet.full(dense_unfolding(X, i).shape[0])
        cols = IndexSet.full(dense_unfolding(X, i).shape[1])
        got = column_submatrix(t, i, rows, cols)
        assert rel_err(got, dense_unfolding(X, i)) <= 1e-12


def test_column_submatrix_hand_value(hand_tt):
    got = column_submatrix(hand_tt, 1, IndexSet([2], 2), IndexSet([1], 2))
    assert np.allclose(got, [[6.0]])


def test_column_submatrix_shape_and_errors():
    t = make_tt("gaussian", (4, 3, 5), (2, 2), seed=15)
    got = column_submatrix(t, 2, IndexSet([1, 5, 9], 12), IndexSet([2, 4], 5))
    assert got.shape == (3, 2)
    with pytest.raises(DomainError):
        column_submatrix(t, 2, IndexSet([1], 11), IndexSet([2], 5))
    with pytest.raises(DomainError):
        column_submatrix(t, 2, IndexSet([1], 12), IndexSet([2], 6))
    with pytest.raises(DomainError):
        column_submatrix(t, 2, IndexSet([], 12), IndexSet([2], 5))
    with pytest.raises(CapacityError):
        column_submatrix(t, 2, IndexSet([1, 5, 9], 12), IndexSet([2, 4], 5), cap=5)


def test_submatrix_svd_matches_dense_block_svd():
    t = make_tt("gaussian", (4, 3, 5, 2), (2, 3, 2), seed=16)
    rows = IndexSet([1, 2, 7, 9, 11], 12)
    cols = IndexSet([1, 3, 4, 8], 10)
    block = column_submatrix(t, 2, rows, cols)
    s_struct = submatrix_svd(t, 2, rows, cols)
    s_dense = thin_svd(block)
    assert s_struct.rank == s_dense.rank
    assert rel_err(s_struct.sigma, s_dense.sigma) <= 1e-10
    assert rel_err(s_struct.reconstruct(), block) <= 1e-10


def test_submatrix_svd_rejects_bad_sets():
    t = make_tt("gaussian", (4, 3, 5), (2, 2), seed=16)
    with pytest.raises(DomainError):
        submatrix_svd(t, 2, IndexSet([1], 11), IndexSet([1], 5))
    with pytest.raises(DomainError):
        submatrix_svd(t, 2, IndexSet([1], 12), IndexSet([], 5))


# ---------------------------------------------------------------- tt_svd_from_dense


def test_tt_svd_from_dense_rank_one_matrix():
    t = tt_svd_from_dense(np.array([[3.0, 4.0], [6.0, 8.0]]))
    assert t.ranks == (1,)
    assert rel_err(to_dense(t), [[3.0, 4.0], [6.0, 8.0]]) <= 1e-12


def test_tt_svd_from_dense_full_rank_matrix():
    t = tt_svd_from_dense(np.eye(2))
    assert t.ranks == (2,)
    assert rel_err(to_dense(t), np.eye(2)) <= 1e-12


def test_tt_svd_from_dense_round_trip():
    t = make_tt("gaussian", (5, 4, 3, 4), (2, 3, 2), seed=17)
    X = to_dense(t)
    t2 = tt_svd_from_dense(X)
    assert t2.ranks == (2, 3, 2)
    assert tt_rank_numerical(t2) == (2, 3, 2)
    assert rel_err(to_dense(t2), X) <= 1e-10


def test_tt_svd_from_dense_rejects_bad_input():
    with pytest.raises(RankZeroError):
        tt_svd_from_dense(np.zeros((2, 2)))
    with pytest.raises(DomainError):
        tt_svd_from_dense(np.ones(4))
    with pytest.raises(NumericError):
        tt_svd_from_dense(np.array([[1.0, np.inf], [0.0, 1.0]]))
    with pytest.raises(CapacityError):
        tt_svd_from_dense(np.ones((40, 40)), cap=100)
