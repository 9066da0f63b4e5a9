import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from storerec.catalog import sample_layout
from storerec.ratings import RatingMatrix


@pytest.fixture
def layout():
    return sample_layout()


def make_random_matrix(rng, n_users, n_items, density=0.5, low=0.5, high=5.0,
                       user_prefix="u", item_prefix="i"):
    """Random sparse rating matrix with continuous scores in [low, high]."""
    matrix = RatingMatrix()
    rows = {}
    for u in range(n_users):
        uid = f"{user_prefix}{u}"
        for i in range(n_items):
            iid = f"{item_prefix}{i}"
            if rng.random() < density:
                score = low + (high - low) * rng.random()
                matrix.set(uid, iid, score)
                rows.setdefault(uid, {})[iid] = score
    return matrix, rows
