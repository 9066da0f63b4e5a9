"""Sparse user x item score matrix accumulated from feedback events.

An absent entry means "no interaction" and is distinct from an explicitly
recorded 0.0. All stored scores are clamped to [-5.0, +5.0] so no single
item's history can dominate the similarity math.
"""

from __future__ import annotations

from typing import Hashable, Iterator

import numpy as np

SCORE_MIN = -5.0
SCORE_MAX = 5.0


def clamp_score(value: float) -> float:
    return min(SCORE_MAX, max(SCORE_MIN, float(value)))


class RatingMatrix:
    """Row-major sparse map (user_id, item_id) -> score.

    User and item enumerations are stable: ids keep the index they were
    first seen at. ``revision`` increments on every mutation so model
    builds can record which snapshot they came from.
    """

    def __init__(self):
        self._rows: dict[Hashable, dict[Hashable, float]] = {}
        self._user_index: dict[Hashable, int] = {}
        self._item_index: dict[Hashable, int] = {}
        self.revision = 0
        self._arrays_cache = None

    def __len__(self) -> int:
        return sum(len(r) for r in self._rows.values())

    @property
    def n_users(self) -> int:
        return len(self._user_index)

    @property
    def n_items(self) -> int:
        return len(self._item_index)

    def users(self) -> list:
        return list(self._user_index)

    def items(self) -> list:
        return list(self._item_index)

    def get(self, user_id, item_id) -> float | None:
        row = self._rows.get(user_id)
        return None if row is None else row.get(item_id)

    def row(self, user_id) -> dict:
        """Items the user has interacted with (including explicit 0.0 scores)."""
        return dict(self._rows.get(user_id, {}))

    def entries(self) -> Iterator[tuple[Hashable, Hashable, float]]:
        for user_id, row in self._rows.items():
            for item_id, score in row.items():
                yield user_id, item_id, score

    def set(self, user_id, item_id, score: float) -> float:
        """Overwrite the entry, clamped; returns the stored value."""
        value = clamp_score(score)
        self._touch(user_id, item_id)[item_id] = value
        self._bump()
        return value

    def add(self, user_id, item_id, delta: float) -> float:
        """Add a delta on top of the current score (absent treated as 0)."""
        row = self._touch(user_id, item_id)
        value = clamp_score(row.get(item_id, 0.0) + delta)
        row[item_id] = value
        self._bump()
        return value

    def _touch(self, user_id, item_id) -> dict:
        if user_id not in self._user_index:
            self._user_index[user_id] = len(self._user_index)
        if item_id not in self._item_index:
            self._item_index[item_id] = len(self._item_index)
        return self._rows.setdefault(user_id, {})

    def _bump(self) -> None:
        self.revision += 1
        self._arrays_cache = None

    def to_arrays(self):
        """COO view (users, items, row_idx, col_idx, values); cached per revision.

        Explicit 0.0 scores are kept: they are interactions and must count
        toward co-rating patterns.
        """
        if self._arrays_cache is None:
            n = len(self)
            rows = np.empty(n, dtype=np.int64)
            cols = np.empty(n, dtype=np.int64)
            vals = np.empty(n, dtype=np.float64)
            k = 0
            for user_id, row in self._rows.items():
                u = self._user_index[user_id]
                for item_id, score in row.items():
                    rows[k] = u
                    cols[k] = self._item_index[item_id]
                    vals[k] = score
                    k += 1
            self._arrays_cache = (self.users(), self.items(), rows, cols, vals)
        return self._arrays_cache

    def copy(self) -> "RatingMatrix":
        dup = RatingMatrix()
        dup._rows = {u: dict(r) for u, r in self._rows.items()}
        dup._user_index = dict(self._user_index)
        dup._item_index = dict(self._item_index)
        dup.revision = self.revision
        return dup

    def equals(self, other: "RatingMatrix") -> bool:
        return (
            self._user_index == other._user_index
            and self._item_index == other._item_index
            and self._rows == other._rows
        )
