"""Feedback scoring: panel outcomes become rating deltas.

Four outcomes exist, each with a fixed delta:

    buying after the item's info panel        +1.0
    putting the item back after its panel     -1.0
    buying a recommended item                 +1.5
    ignoring a recommended item               -0.5

Deltas accumulate on the (user, item) score and are clamped to [-5, +5].
Items never shown on a panel receive no delta at all; absence of a score
is different from a 0.0 score.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from storerec.errors import InvalidArgument
from storerec.ratings import RatingMatrix

INFO_BUY = "info_buy"
INFO_DECLINE = "info_decline"
REC_BUY = "rec_buy"
REC_DECLINE = "rec_decline"


@dataclass(frozen=True)
class ScoringRule:
    event_kind: str
    delta: float


BUILTIN_RULES = (
    ScoringRule(INFO_BUY, 1.0),
    ScoringRule(INFO_DECLINE, -1.0),
    ScoringRule(REC_BUY, 1.5),
    ScoringRule(REC_DECLINE, -0.5),
)

SCORE_DELTAS = {rule.event_kind: rule.delta for rule in BUILTIN_RULES}


def apply_event(ratings: RatingMatrix, user_id, item_id, event_kind: str) -> float:
    """Apply one panel outcome's delta; returns the delta that was applied.

    The stored score is the clamped running sum; an absent entry counts
    as 0 before the delta.
    """
    delta = SCORE_DELTAS.get(event_kind)
    if delta is None:
        raise InvalidArgument(f"unknown scoring event kind: {event_kind!r}")
    ratings.add(user_id, item_id, delta)
    return delta


def settle_recommendation_panel(ratings: RatingMatrix, user_id,
                                shown: Iterable, purchased: Iterable) -> dict:
    """Settle one recommendation panel exactly once.

    Every purchased item gains +1.5 and every shown-but-unpurchased item
    loses 0.5. Returns the per-item deltas in shown order. The caller owns
    the once-per-panel guarantee; this function only validates the inputs.
    """
    shown_list = list(shown)
    purchased_set = set(purchased)
    if not shown_list:
        raise InvalidArgument("shown must be non-empty")
    if not purchased_set <= set(shown_list):
        raise InvalidArgument("purchased items must be a subset of shown items")

    deltas = {}
    for item in shown_list:
        kind = REC_BUY if item in purchased_set else REC_DECLINE
        deltas[item] = apply_event(ratings, user_id, item, kind)
    return deltas
