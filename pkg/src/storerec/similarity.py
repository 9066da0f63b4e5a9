"""Distance and similarity math plus item-item / user-user model builds.

Similarity between two entities is the cosine of the angle between their
score vectors, computed over dense-with-zeros columns: a user who never
rated an item contributes a 0 component. Model builds are full rebuilds
over a read-only snapshot of the rating matrix; a finished model is
immutable and safe to share across concurrent readers.
"""

from __future__ import annotations

import math
import time
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from storerec.errors import InvalidArgument
from storerec.ratings import RatingMatrix

ITEM_ITEM = "item_item"
USER_USER = "user_user"


def _as_vector(x: Sequence[float], name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise InvalidArgument(f"{name} must be a non-empty 1-D vector")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgument(f"{name} has non-finite components")
    return arr


def minkowski_distance(x: Sequence[float], y: Sequence[float], p: float = 2.0) -> float:
    """(sum |x_u - y_u|^p)^(1/p); p=2 is the straight-line (Euclidean) distance.

    The absolute value matters for odd p, where signed differences would
    put a negative under the root.
    """
    xa, ya = _as_vector(x, "x"), _as_vector(y, "y")
    if xa.shape != ya.shape:
        raise InvalidArgument(f"dimension mismatch: {xa.size} vs {ya.size}")
    if not (p >= 1.0):
        raise InvalidArgument("p must be >= 1 for a metric")
    diff = np.abs(xa - ya)
    if math.isinf(p):
        return float(diff.max())
    return float(np.power(np.power(diff, p).sum(), 1.0 / p))


def cosine_similarity(x: Sequence[float], y: Sequence[float]) -> float:
    """dot(x, y) / (|x| * |y|), in [-1, 1].

    An all-zero vector carries no evidence of association, so its
    similarity to anything is defined as 0.0 rather than a division error.
    """
    xa, ya = _as_vector(x, "x"), _as_vector(y, "y")
    if xa.shape != ya.shape:
        raise InvalidArgument(f"dimension mismatch: {xa.size} vs {ya.size}")
    nx = float(np.sqrt(np.dot(xa, xa)))
    ny = float(np.sqrt(np.dot(ya, ya)))
    if nx == 0.0 or ny == 0.0:
        return 0.0
    value = float(np.dot(xa, ya) / (nx * ny))
    return min(1.0, max(-1.0, value))


class SimilarityModel:
    """Immutable similarity snapshot over the entities of one axis.

    Stored pairs are exactly those sharing at least one co-rater; a pair
    whose scores cancel to a 0.0 cosine is still present. The diagonal is
    stored as exactly 1.0 for any entity with a nonzero score vector and
    0.0 for one whose recorded scores are all explicit zeros. ``get``
    returns None for absent pairs.
    """

    def __init__(self, kind: str, ids: list, matrix: sp.csr_matrix,
                 has_norm: np.ndarray, build_duration: float, source_revision: int):
        self.kind = kind
        self.ids = ids
        self._index = {eid: i for i, eid in enumerate(ids)}
        self._csr = matrix  # full symmetric incl. diagonal, explicit zeros kept
        self._has_norm = has_norm
        self.build_duration = build_duration
        self.source_revision = source_revision

    @property
    def entity_count(self) -> int:
        return len(self.ids)

    @property
    def pair_count(self) -> int:
        """Distinct stored off-diagonal pairs (a, b) with a != b."""
        return (self._csr.nnz - self.entity_count) // 2

    def __contains__(self, entity_id) -> bool:
        return entity_id in self._index

    def get(self, a, b) -> float | None:
        ia = self._index.get(a)
        ib = self._index.get(b)
        if ia is None or ib is None:
            return None
        lo, hi = self._csr.indptr[ia], self._csr.indptr[ia + 1]
        pos = np.searchsorted(self._csr.indices[lo:hi], ib)
        if pos < hi - lo and self._csr.indices[lo + pos] == ib:
            return float(self._csr.data[lo + pos])
        return None

    def neighbor_row(self, a) -> tuple[np.ndarray, np.ndarray]:
        """Column indices and values of a's stored pairs, self included."""
        ia = self._index.get(a)
        if ia is None:
            return np.empty(0, dtype=np.int32), np.empty(0)
        return self.row_by_index(ia)

    def row_by_index(self, ia: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self._csr.indptr[ia], self._csr.indptr[ia + 1]
        return self._csr.indices[lo:hi], self._csr.data[lo:hi]

    def index_of(self, entity_id) -> int | None:
        return self._index.get(entity_id)


def _build(kind: str, ratings: RatingMatrix) -> SimilarityModel:
    t0 = time.perf_counter()
    users, items, rows, cols, vals = ratings.to_arrays()
    if kind == ITEM_ITEM:
        ids, axis_idx, other_idx = items, cols, rows
        n, m = len(items), len(users)
    else:
        ids, axis_idx, other_idx = users, rows, cols
        n, m = len(users), len(items)

    if len(vals) == 0:
        empty = sp.csr_matrix((n, n))
        return SimilarityModel(kind, list(ids), empty, np.zeros(n, dtype=bool),
                               time.perf_counter() - t0, ratings.revision)

    # Column j of A is entity j's score vector over the other axis.
    sq = np.zeros(n)
    np.add.at(sq, axis_idx, vals * vals)
    norms = np.sqrt(sq)
    inv = np.zeros(n)
    nz = norms > 0.0
    inv[nz] = 1.0 / norms[nz]

    a_hat = sp.csr_matrix((vals * inv[axis_idx], (other_idx, axis_idx)), shape=(m, n))
    numeric = (a_hat.T @ a_hat).tocsr()
    numeric.sort_indices()

    if np.min(vals) > 0.0:
        # strictly positive scores cannot cancel, so the numeric product
        # already carries the whole co-rating pattern
        full = numeric
    else:
        # scipy prunes entries whose dot cancels to exactly 0.0, but a pair
        # with a co-rater must stay present. Rebuild the co-rating pattern
        # from an all-ones product and align the numeric values onto it.
        ones = sp.csr_matrix((np.ones(len(vals)), (other_idx, axis_idx)), shape=(m, n))
        pattern = (ones.T @ ones).tocsr()
        pattern.sort_indices()
        full = _align_onto_pattern(numeric, pattern)
        del ones, pattern
    del a_hat, numeric
    np.clip(full.data, -1.0, 1.0, out=full.data)

    # Keep one computed value per unordered pair so symmetry is exact, and
    # pin the diagonal to its defined value instead of the ~1.0 float result.
    # Assembled from raw arrays: sparse binops would drop explicit zeros.
    coo = full.tocoo()
    mask = coo.row < coo.col
    ur, uc, ud = coo.row[mask], coo.col[mask], coo.data[mask]
    del coo, full
    eye = np.arange(n)
    rows_out = np.concatenate([ur, uc, eye])
    cols_out = np.concatenate([uc, ur, eye])
    data_out = np.concatenate([ud, ud, np.where(nz, 1.0, 0.0)])
    symmetric = sp.csr_matrix((data_out, (rows_out, cols_out)), shape=(n, n))
    symmetric.sort_indices()

    return SimilarityModel(kind, list(ids), symmetric, nz,
                           time.perf_counter() - t0, ratings.revision)


def _align_onto_pattern(numeric: sp.csr_matrix, pattern: sp.csr_matrix) -> sp.csr_matrix:
    """Values of `numeric` laid onto `pattern`'s sparsity; missing -> 0.0.

    Both inputs must have sorted indices; numeric's pattern is a subset of
    pattern's, so a flat sorted-key lookup recovers every value.
    """
    n = np.int64(pattern.shape[1])
    num_rows = np.repeat(np.arange(numeric.shape[0], dtype=np.int64),
                         np.diff(numeric.indptr))
    num_keys = num_rows * n + numeric.indices
    pat_rows = np.repeat(np.arange(pattern.shape[0], dtype=np.int64),
                         np.diff(pattern.indptr))
    pat_keys = pat_rows * n + pattern.indices
    data = np.zeros(len(pat_keys))
    if len(num_keys):
        pos = np.searchsorted(num_keys, pat_keys)
        pos = np.minimum(pos, len(num_keys) - 1)
        hit = num_keys[pos] == pat_keys
        data[hit] = numeric.data[pos[hit]]
    return sp.csr_matrix((data, pattern.indices.copy(), pattern.indptr.copy()),
                         shape=pattern.shape)


def build_item_model(ratings: RatingMatrix) -> SimilarityModel:
    """Item-item cosine model over user-score columns; empty matrix gives an
    empty map (the cold-start condition)."""
    return _build(ITEM_ITEM, ratings)


def build_user_model(ratings: RatingMatrix) -> SimilarityModel:
    """User-user cosine model over rating rows."""
    return _build(USER_USER, ratings)
