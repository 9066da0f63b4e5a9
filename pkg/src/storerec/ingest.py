"""MovieLens-format loading and basket binarization.

Ratings files are text lines ``UserID::MovieID::Rating::Timestamp`` with
integer ratings 1..5. A single file is split deterministically into train
and test partitions (~80/20) by hashing each record, so the same file and
seed always produce identical membership.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass

from storerec.errors import MalformedData
from storerec.ratings import RatingMatrix

TRAIN_PERCENT = 80


@dataclass(frozen=True)
class MovieLensRecord:
    user_id: int
    movie_id: int
    rating: int
    timestamp: int


def parse_movielens_line(line: str, lineno: int = 0) -> MovieLensRecord:
    parts = line.rstrip("\n").split("::")
    if len(parts) != 4:
        raise MalformedData(f"line {lineno}: expected 4 '::'-separated fields")
    try:
        user_id, movie_id, rating, timestamp = (int(p) for p in parts)
    except ValueError as exc:
        raise MalformedData(f"line {lineno}: non-integer field: {exc}") from exc
    if rating not in (1, 2, 3, 4, 5):
        raise MalformedData(f"line {lineno}: rating {rating} outside 1..5")
    return MovieLensRecord(user_id, movie_id, rating, timestamp)


def format_movielens_line(record: MovieLensRecord) -> str:
    return f"{record.user_id}::{record.movie_id}::{record.rating}::{record.timestamp}"


def record_in_train(record: MovieLensRecord, seed: int = 0) -> bool:
    key = f"{seed}:{record.user_id}:{record.movie_id}:{record.timestamp}"
    return zlib.crc32(key.encode("ascii")) % 100 < TRAIN_PERCENT


def load_movielens(path, split: str = "all", seed: int = 0) -> tuple[RatingMatrix, int]:
    """Load a ratings file into a RatingMatrix; returns (matrix, record count).

    ``split`` selects "train" (~80%), "test" (~20%), or "all". The exact
    published 80/20 partition of the original experiments is not
    reproducible, so membership is by stable record hashing.
    """
    if split not in ("train", "test", "all"):
        raise MalformedData(f"unknown split: {split!r}")
    ratings = RatingMatrix()
    count = 0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            record = parse_movielens_line(line, lineno)
            if split != "all":
                in_train = record_in_train(record, seed)
                if (split == "train") != in_train:
                    continue
            ratings.set(record.user_id, record.movie_id, float(record.rating))
            count += 1
    if count == 0:
        raise MalformedData(f"no records loaded from {path} (split={split})")
    return ratings, count


def binarize_transactions(ratings: RatingMatrix, like_threshold: int = 4) -> list[frozenset]:
    """Per-user itemsets of liked items (score >= threshold); empty baskets
    are dropped. Feeds the Apriori miner from rating data."""
    if like_threshold not in (1, 2, 3, 4, 5):
        raise MalformedData(f"like_threshold {like_threshold} outside 1..5")
    baskets = []
    for user_id in ratings.users():
        basket = frozenset(
            item for item, score in ratings.row(user_id).items() if score >= like_threshold
        )
        if basket:
            baskets.append(basket)
    return baskets
