"""Multi-index bookkeeping: linearization, Kronecker-extended pools, sampling.

Conventions used throughout the package:

* all externally visible indices are 1-based;
* a multi-index ``(j_1, ..., j_d)`` over dims ``(n_1, ..., n_d)`` linearizes
  with the FIRST index varying fastest (column-major / Fortran order):

      linear = 1 + sum_k (j_k - 1) * n_1 * ... * n_{k-1}

  so ``np.reshape(..., order="F")`` on a dense array agrees with it;
* index sets are kept sorted ascending with distinct entries.

Randomness is handled through ``numpy.random.Generator`` objects derived from
a 64-bit master seed plus a list of tags (strings or non-negative ints), so
every sampling decision in an experiment has its own named, reproducible
stream.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DomainError, SamplingError

__all__ = [
    "Shape",
    "IndexSet",
    "linearize",
    "delinearize",
    "kron_extend",
    "sample_without_replacement",
    "derived_rng",
    "derived_seed",
]


@dataclass(frozen=True)
class Shape:
    """Mode sizes ``(n_1, ..., n_d)`` of a tensor, all >= 1."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        if len(dims) == 0:
            raise DomainError("shape must have at least one mode")
        if any(n < 1 for n in dims):
            raise DomainError(f"mode sizes must be >= 1, got {dims}")
        object.__setattr__(self, "dims", dims)

    def __len__(self) -> int:
        return len(self.dims)

    def __iter__(self) -> Iterator[int]:
        return iter(self.dims)

    def __getitem__(self, k):
        return self.dims[k]

    @property
    def size(self) -> int:
        """Total number of entries (exact int, no overflow)."""
        out = 1
        for n in self.dims:
            out *= n
        return out

    def prefix_size(self, i: int) -> int:
        """Product of the first ``i`` mode sizes (``i = 0`` gives 1)."""
        if not 0 <= i <= len(self.dims):
            raise DomainError(f"prefix length {i} out of range for d={len(self.dims)}")
        out = 1
        for n in self.dims[:i]:
            out *= n
        return out

    def suffix_size(self, i: int) -> int:
        """Product of mode sizes after position ``i`` (``i = d`` gives 1)."""
        if not 0 <= i <= len(self.dims):
            raise DomainError(f"suffix start {i} out of range for d={len(self.dims)}")
        out = 1
        for n in self.dims[i:]:
            out *= n
        return out


def _as_shape(shape) -> Shape:
    return shape if isinstance(shape, Shape) else Shape(tuple(shape))


@dataclass(frozen=True, eq=False)
class IndexSet:
    """A sorted set of distinct 1-based indices inside ``[1, domain]``.

    Stored as a read-only int64 array; may be empty.  Construction sorts the
    input and rejects duplicates and out-of-domain entries.
    """

    indices: np.ndarray
    domain: int

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64).reshape(-1).copy()
        dom = int(self.domain)
        if dom < 1:
            raise DomainError(f"index-set domain must be >= 1, got {dom}")
        idx.sort()
        if idx.size:
            if idx[0] < 1 or idx[-1] > dom:
                raise DomainError(
                    f"indices must lie in [1, {dom}], got range [{idx[0]}, {idx[-1]}]"
                )
            if np.any(np.diff(idx) == 0):
                raise DomainError("indices must be distinct")
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "domain", dom)

    @classmethod
    def full(cls, domain: int) -> "IndexSet":
        """The exhaustive set ``{1, ..., domain}``."""
        return cls(np.arange(1, int(domain) + 1, dtype=np.int64), domain)

    @property
    def size(self) -> int:
        return int(self.indices.size)

    def __len__(self) -> int:
        return int(self.indices.size)

    def __iter__(self) -> Iterator[int]:
        return (int(q) for q in self.indices)

    def __contains__(self, q) -> bool:
        pos = int(np.searchsorted(self.indices, int(q)))
        return pos < self.indices.size and int(self.indices[pos]) == int(q)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IndexSet):
            return NotImplemented
        return self.domain == other.domain and np.array_equal(self.indices, other.indices)

    def __repr__(self) -> str:
        if self.size <= 8:
            body = ", ".join(str(int(q)) for q in self.indices)
        else:
            head = ", ".join(str(int(q)) for q in self.indices[:4])
            body = f"{head}, ... ({self.size} total)"
        return f"IndexSet([{body}], domain={self.domain})"

    def zero_based(self) -> np.ndarray:
        """0-based copy for numpy fancy indexing."""
        return self.indices - 1

    def is_subset_of(self, other: "IndexSet") -> bool:
        if self.domain != other.domain:
            return False
        return bool(np.all(np.isin(self.indices, other.indices, assume_unique=True)))


def linearize(multi: Sequence[int], shape) -> int:
    """Map a 1-based multi-index to its 1-based linear index, first index fastest.

    >>> linearize((2, 3), (2, 3))
    6
    """
    shp = _as_shape(shape)
    if len(multi) != len(shp):
        raise DomainError(f"multi-index length {len(multi)} != number of modes {len(shp)}")
    linear = 0
    stride = 1
    for j, n in zip(multi, shp):
        j = int(j)
        if not 1 <= j <= n:
            raise DomainError(f"index {j} out of range [1, {n}]")
        linear += (j - 1) * stride
        stride *= n
    return linear + 1


def delinearize(linear: int, shape) -> tuple[int, ...]:
    """Inverse of :func:`linearize`.

    >>> delinearize(6, (2, 3))
    (2, 3)
    """
    shp = _as_shape(shape)
    lin = int(linear)
    if not 1 <= lin <= shp.size:
        raise DomainError(f"linear index {lin} out of range [1, {shp.size}]")
    rem = lin - 1
    multi = []
    for n in shp:
        rem, j = divmod(rem, n)
        multi.append(j + 1)
    return tuple(multi)


def kron_extend(prefix: IndexSet, n: int) -> IndexSet:
    """Extend a row-index set by a full extra mode of size ``n``.

    If ``prefix`` selects rows of a block with ``P = prefix.domain`` rows,
    the result selects, inside the ``P * n``-row refinement, every row whose
    leading part is in ``prefix`` and whose new mode index is anything in
    ``[1, n]``:  ``{ q + (j - 1) * P : q in prefix, j in [1, n] }``, sorted.
    """
    n = int(n)
    if n < 1:
        raise DomainError(f"mode size must be >= 1, got {n}")
    P = prefix.domain
    blocks = prefix.indices[None, :] + P * np.arange(n, dtype=np.int64)[:, None]
    # row j of `blocks` is already sorted and each row starts above the last,
    # so the C-order ravel is globally sorted
    return IndexSet(blocks.ravel(), P * n)


def sample_without_replacement(pool: IndexSet, m: int, rng: np.random.Generator) -> IndexSet:
    """Draw ``m`` distinct elements of ``pool`` uniformly, sorted ascending.

    Uses a partial Fisher–Yates shuffle with all offsets drawn up front from
    ``rng``, so a given generator state yields one fixed sample.  ``m`` equal
    to the pool size returns the whole pool (and draws nothing).
    """
    m = int(m)
    if m < 0 or m > len(pool):
        raise SamplingError(f"cannot sample {m} from pool of {len(pool)}")
    if m == len(pool):
        return IndexSet(pool.indices, pool.domain)
    if m == 0:
        return IndexSet(np.empty(0, dtype=np.int64), pool.domain)
    work = pool.indices.copy()
    k = work.size
    offsets = rng.integers(0, k - np.arange(m))
    for a in range(m):
        b = a + int(offsets[a])
        work[a], work[b] = work[b], work[a]
    return IndexSet(np.sort(work[:m]), pool.domain)


def _entropy_words(master_seed: int, tags: Iterable) -> list[int]:
    seed = int(master_seed)
    if seed < 0:
        raise DomainError(f"master seed must be non-negative, got {seed}")
    words = [seed]
    for tag in tags:
        if isinstance(tag, str):
            digest = hashlib.sha256(tag.encode("utf-8")).digest()
            words.append(int.from_bytes(digest[:8], "little"))
        elif isinstance(tag, (int, np.integer)):
            if int(tag) < 0:
                raise DomainError(f"integer tags must be non-negative, got {tag}")
            words.append(int(tag))
        else:
            raise DomainError(f"tags must be str or int, got {type(tag).__name__}")
    return words


def derived_rng(master_seed: int, *tags) -> np.random.Generator:
    """A fresh Generator for the stream named by ``(master_seed, *tags)``.

    String tags are hashed (sha256, first 8 bytes little-endian) into spawn
    words of a ``numpy.random.SeedSequence``; equal tags always give the same
    stream and different tags give statistically independent ones.
    """
    return np.random.default_rng(np.random.SeedSequence(_entropy_words(master_seed, tags)))


def derived_seed(master_seed: int, *tags) -> int:
    """A stable 64-bit sub-seed for the stream named by ``(master_seed, *tags)``."""
    seq = np.random.SeedSequence(_entropy_words(master_seed, tags))
    return int(seq.generate_state(1, np.uint64)[0])
