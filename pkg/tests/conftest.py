"""Shared fixtures and helpers for the test suite.

The random-tensor helpers all run through the package's own seeded
generation, so every test is reproducible from the literal seeds below.
"""

from __future__ import annotations

import numpy as np
import pytest
import scipy.linalg
from hypothesis import HealthCheck, settings

from ttinherit import (
    GeneratorSpec,
    IndexSet,
    TTTensor,
    generate,
    kron_extend,
    numerical_rank,
    sample_without_replacement,
    unfolding_svd,
)
from ttinherit.multiindex import Shape, derived_rng

# deterministic hypothesis runs: example generation is derived from the test
# body, not from a per-run random seed
settings.register_profile(
    "deterministic",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("deterministic")


def make_tt(kind: str, shape, ranks, seed: int, rank_tol: float = 1e-9) -> TTTensor:
    """A random TT tensor with verified numerical ranks."""
    return generate(GeneratorSpec(kind, Shape(tuple(shape)), tuple(ranks), seed=seed), rank_tol)


def rel_err(got, want) -> float:
    """Max entrywise deviation relative to the magnitude of the reference."""
    got = np.asarray(got, dtype=np.float64)
    want = np.asarray(want, dtype=np.float64)
    scale = max(float(np.abs(want).max()), 1e-300)
    return float(np.abs(got - want).max() / scale)


def sample_valid_sets(
    t: TTTensor,
    sizes_I,
    sizes_J,
    seed: int,
    rank_tol: float = 1e-9,
    max_tries: int = 50,
):
    """Nested row sets and independent column sets whose factor rows keep rank.

    Mirrors the experiment driver's sampling discipline: level-i row sets are
    drawn inside the previous level's refinement and redrawn until the
    corresponding rows of the left singular factor have full column rank
    (same for column sets against the right factor).
    """
    shp = Shape(t.shape)
    svds = [unfolding_svd(t, i, rank_tol) for i in range(1, t.d)]

    def draw(pool, size, factor, rank, stream, level):
        for tries in range(max_tries):
            rng = derived_rng(seed, stream, level, tries)
            cand = sample_without_replacement(pool, size, rng)
            block = factor[cand.zero_based(), :]
            if numerical_rank(scipy.linalg.svdvals(block), rank_tol) == rank:
                return cand
        raise AssertionError(f"no rank-preserving sample at level {level} in {max_tries} tries")

    I_sets = []
    prev = IndexSet.full(1)
    for i in range(1, t.d):
        pool = kron_extend(prev, t.shape[i - 1])
        cand = draw(pool, sizes_I[i - 1], svds[i - 1].W, svds[i - 1].rank, "rows", i)
        I_sets.append(cand)
        prev = cand

    J_sets = []
    for i in range(1, t.d):
        pool = IndexSet.full(shp.suffix_size(i))
        cand = draw(pool, sizes_J[i - 1], svds[i - 1].V, svds[i - 1].rank, "cols", i)
        J_sets.append(cand)

    return I_sets, J_sets, svds


@pytest.fixture
def hand_tt() -> TTTensor:
    """The 2x2 worked example: cores [[1,2]] and [[3,4]], dense [[3,4],[6,8]]."""
    c1 = np.array([1.0, 2.0]).reshape(1, 2, 1)
    c2 = np.array([3.0, 4.0]).reshape(1, 2, 1)
    return TTTensor([c1, c2])


@pytest.fixture
def ones_tt() -> TTTensor:
    """All-ones rank-(1,1,1) tensor of shape (2,2,2,2)."""
    core = np.ones((1, 2, 1))
    return TTTensor([core, core, core, core])
