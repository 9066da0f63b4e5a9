"""Deterministic rating corpus shaped like the public 1M movie dataset.

The benchmark harness needs a large rating file with the reference
dataset's statistical shape: 6040 users, movie ids up to 3952, about a
million ratings, long-tailed item popularity (the most-rated title reaches
a bit over half the user base) and moderately skewed per-user activity.
When the real file is not on disk, this generator produces a stand-in
with those properties so the speed orderings still mean something.
Same seed, same bytes.
"""

from __future__ import annotations

import os

import numpy as np

N_USERS = 6040
N_ITEMS = 3952
POPULARITY_EXPONENT = 1.05
POPULARITY_OFFSET = 30.0
ACTIVITY_SIGMA = 0.8
ACTIVITY_MEAN_LOG = 4.75
ACTIVITY_MIN = 20
ACTIVITY_MAX = 1000
RATING_PROBS = (0.06, 0.11, 0.26, 0.35, 0.22)
BASE_TIMESTAMP = 956_700_000


def generate_ratings(seed: int = 0, n_users: int = N_USERS, n_items: int = N_ITEMS):
    """Arrays (user_ids, item_ids, ratings, timestamps), 1-based ids.

    Item popularity follows a truncated power law; each user's basket is a
    weighted draw without replacement so popular items co-occur heavily,
    which is what makes the user-side similarity model expensive to build.
    """
    rng = np.random.default_rng(seed)
    ranks = np.arange(1, n_items + 1, dtype=np.float64)
    weights = ((POPULARITY_OFFSET + 1.0) / (ranks + POPULARITY_OFFSET)) ** POPULARITY_EXPONENT
    log_w = np.log(weights / weights.sum())

    activity = rng.lognormal(mean=ACTIVITY_MEAN_LOG, sigma=ACTIVITY_SIGMA, size=n_users)
    counts = np.clip(activity, ACTIVITY_MIN, min(ACTIVITY_MAX, n_items)).astype(np.int64)

    users = np.empty(counts.sum(), dtype=np.int64)
    items = np.empty(counts.sum(), dtype=np.int64)
    pos = 0
    for u in range(n_users):
        k = counts[u]
        gumbel = rng.gumbel(size=n_items)
        chosen = np.argpartition(log_w + gumbel, -k)[-k:]
        chosen.sort()
        users[pos:pos + k] = u + 1
        items[pos:pos + k] = chosen + 1
        pos += k

    ratings = rng.choice(np.arange(1, 6), size=len(users), p=RATING_PROBS)
    timestamps = BASE_TIMESTAMP + rng.integers(0, 30_000_000, size=len(users))
    return users, items, ratings, timestamps


def write_ratings_file(path, seed: int = 0, n_users: int = N_USERS,
                       n_items: int = N_ITEMS) -> int:
    """Write UserID::MovieID::Rating::Timestamp lines; returns the count."""
    users, items, ratings, timestamps = generate_ratings(seed, n_users, n_items)
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="ascii") as fh:
        for u, i, r, t in zip(users, items, ratings, timestamps):
            fh.write(f"{u}::{i}::{r}::{t}\n")
    return len(users)
