"""Ranked recommendation lists: ICF, UCF, Apriori, and the ICF-STR wrapper.

ICF-STR is item-based collaborative filtering with two cold-start
fallbacks layered on top: when the CF model yields nothing, recommend the
items of the shelf the shopper most recently lingered at without buying,
and failing that a seeded random draw from the catalog. With at least one
un-carted catalog item the wrapper never comes back empty.

Every list is sorted by score descending with ties broken by ascending
item id, and never contains an item already in the requesting cart.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable, Sequence

import numpy as np

from storerec.catalog import StoreLayout
from storerec.errors import CatalogExhausted, InvalidArgument
from storerec.ratings import RatingMatrix
from storerec.similarity import SimilarityModel

SOURCE_ICF = "icf"
SOURCE_UCF = "ucf"
SOURCE_APRIORI = "apriori"
SOURCE_STR_RANDOM = "str_random"
SOURCE_STR_SHELF = "str_shelf"

DEFAULT_RANDOM_COUNT = 5
DEFAULT_K_NEIGHBORS = 20


@dataclass(frozen=True)
class Recommendation:
    item_id: Hashable
    score: float
    source: str


@dataclass(frozen=True)
class AprioriRule:
    antecedent: tuple  # sorted item tuple
    consequent: Hashable
    support: float
    confidence: float


@dataclass(frozen=True)
class AprioriRuleSet:
    rules: tuple[AprioriRule, ...]
    min_support: float
    min_confidence: float
    frequent_itemsets: dict  # frozenset -> support


@dataclass(frozen=True)
class StrContext:
    """Cold-start inputs: the session's last qualifying shelf plus the seed
    and size of the random draw."""

    last_qualifying_shelf: str | None = None
    random_seed: int = 0
    random_count: int = DEFAULT_RANDOM_COUNT


def _ranked(scores: dict, exclude: set, top_n: int, source: str) -> list[Recommendation]:
    candidates = [(i, s) for i, s in scores.items() if s > 0.0 and i not in exclude]
    candidates.sort(key=lambda pair: (-pair[1], pair[0]))
    return [Recommendation(i, s, source) for i, s in candidates[:top_n]]


def icf_recommend(model: SimilarityModel, ratings: RatingMatrix, user_id,
                  cart: Sequence, top_n: int) -> list[Recommendation]:
    """Similarity-weighted sum over the user's rated items plus the cart.

    score(i) = sum over j in rated(user) | cart of sim(i, j) * weight(j),
    where weight(j) is the user's score when rated and 1.0 for an unrated
    cart item. Candidates are items the user has neither rated nor carted;
    an empty result is the cold-start signal, not an error.
    """
    if top_n < 1:
        raise InvalidArgument("top_n must be >= 1")
    weights = dict(ratings.row(user_id))
    for item in cart:
        weights.setdefault(item, 1.0)
    if not weights or model.entity_count == 0:
        return []

    n = model.entity_count
    chunks_idx = []
    chunks_val = []
    for j in sorted(weights, key=_sort_key):
        idx, sims = model.neighbor_row(j)
        if len(idx):
            chunks_idx.append(idx)
            chunks_val.append(sims * weights[j])
    if not chunks_idx:
        return []
    acc = np.bincount(np.concatenate(chunks_idx),
                      weights=np.concatenate(chunks_val), minlength=n)

    exclude = set(weights)
    scores = {}
    positive = np.nonzero(acc > 0.0)[0]
    for ix in positive:
        item = model.ids[ix]
        if item not in exclude:
            scores[item] = float(acc[ix])
    return _ranked(scores, exclude, top_n, SOURCE_ICF)


def ucf_recommend(model: SimilarityModel, ratings: RatingMatrix, user_id,
                  top_n: int, k_neighbors: int = DEFAULT_K_NEIGHBORS) -> list[Recommendation]:
    """Score unseen items from the k most similar users (positive similarity
    only, the target excluded); a user with no ratings or no positive
    neighbor gets an empty list."""
    if top_n < 1:
        raise InvalidArgument("top_n must be >= 1")
    if k_neighbors < 1:
        raise InvalidArgument("k_neighbors must be >= 1")

    iu = model.index_of(user_id)
    if iu is None:
        return []
    idx, sims = model.row_by_index(iu)
    neighbors = [(model.ids[iv], float(s)) for iv, s in zip(idx, sims)
                 if s > 0.0 and iv != iu]
    neighbors.sort(key=lambda pair: (-pair[1], _sort_key(pair[0])))
    neighbors = neighbors[:k_neighbors]
    if not neighbors:
        return []

    seen = set(ratings.row(user_id))
    scores: dict = {}
    for v, sim in neighbors:
        for item, score in ratings.row(v).items():
            if item not in seen:
                scores[item] = scores.get(item, 0.0) + sim * score
    return _ranked(scores, seen, top_n, SOURCE_UCF)


def _sort_key(value):
    # ids within one catalog are homogeneous; guard against mixed test data
    return (str(type(value).__name__), value)


def apriori_mine(transactions: Sequence[Iterable], min_support: float,
                 min_confidence: float) -> AprioriRuleSet:
    """Classic level-wise frequent-itemset mining over baskets.

    Produces single-consequent rules meeting both thresholds. High
    thresholds legitimately yield an empty rule set; that is the
    "no strongly correlated data" regime, not an error.
    """
    if not transactions:
        raise InvalidArgument("transactions must be non-empty")
    if not (0.0 <= min_support <= 1.0) or not (0.0 <= min_confidence <= 1.0):
        raise InvalidArgument("thresholds must lie in [0, 1]")

    baskets = [frozenset(t) for t in transactions]
    total = len(baskets)
    frequent: dict[frozenset, float] = {}

    counts: dict = {}
    for basket in baskets:
        for item in basket:
            counts[item] = counts.get(item, 0) + 1
    level = {}
    for item, c in counts.items():
        support = c / total
        if support >= min_support:
            level[frozenset([item])] = support
    frequent.update(level)

    k = 2
    while level:
        candidates = _candidate_itemsets(level.keys(), k)
        if not candidates:
            break
        cand_counts = dict.fromkeys(candidates, 0)
        frequent_items = set().union(*level.keys())
        for basket in baskets:
            present = basket & frequent_items
            if len(present) < k:
                continue
            for combo in combinations(sorted(present, key=_sort_key), k):
                key = frozenset(combo)
                if key in cand_counts:
                    cand_counts[key] += 1
        level = {}
        for key, c in cand_counts.items():
            support = c / total
            if support >= min_support:
                level[key] = support
        frequent.update(level)
        k += 1

    rules = []
    for itemset, support in frequent.items():
        if len(itemset) < 2:
            continue
        for consequent in itemset:
            antecedent = itemset - {consequent}
            conf = support / frequent[antecedent]
            if conf >= min_confidence:
                rules.append(AprioriRule(
                    antecedent=tuple(sorted(antecedent, key=_sort_key)),
                    consequent=consequent,
                    support=support,
                    confidence=conf,
                ))
    rules.sort(key=lambda r: (-r.support, -r.confidence,
                              tuple(_sort_key(a) for a in r.antecedent),
                              _sort_key(r.consequent)))
    return AprioriRuleSet(tuple(rules), min_support, min_confidence, frequent)


def _candidate_itemsets(prior_level, k: int) -> set:
    """Join (k-1)-itemsets sharing a (k-2)-prefix, pruning any candidate
    with an infrequent subset."""
    prior = set(prior_level)
    sorted_sets = sorted(tuple(sorted(s, key=_sort_key)) for s in prior)
    candidates = set()
    for a_idx, a in enumerate(sorted_sets):
        for b in sorted_sets[a_idx + 1:]:
            if a[:-1] != b[:-1]:
                continue
            joined = frozenset(a) | frozenset(b)
            if len(joined) != k:
                continue
            if all(joined - {x} in prior for x in joined):
                candidates.add(joined)
    return candidates


def apriori_recommend(rules: AprioriRuleSet, cart: Iterable, top_n: int) -> list[Recommendation]:
    """Fire every rule whose antecedent is inside the cart; deduplicate
    consequents keeping the highest confidence."""
    if top_n < 1:
        raise InvalidArgument("top_n must be >= 1")
    cart_set = set(cart)
    scores: dict = {}
    for rule in rules.rules:
        if set(rule.antecedent) <= cart_set and rule.consequent not in cart_set:
            prev = scores.get(rule.consequent)
            if prev is None or rule.confidence > prev:
                scores[rule.consequent] = rule.confidence
    return _ranked(scores, cart_set, top_n, SOURCE_APRIORI)


def icf_str_recommend(model: SimilarityModel, ratings: RatingMatrix, user_id,
                      cart: Sequence, top_n: int, ctx: StrContext,
                      layout: StoreLayout) -> list[Recommendation]:
    """ICF with the two cold-start fallbacks.

    Order: (a) plain ICF; (b) if that is empty and a qualifying shelf is
    recorded, that shelf's un-carted items in stocking order; (c) else a
    seeded uniform draw of ctx.random_count distinct un-carted catalog
    items. Raises CatalogExhausted only when the cart holds the whole
    catalog.
    """
    if ctx.random_count < 1:
        raise InvalidArgument("random_count must be >= 1")
    primary = icf_recommend(model, ratings, user_id, cart, top_n)
    if primary:
        return primary

    cart_set = set(cart)
    available = [i for i in layout.item_ids() if i not in cart_set]
    if not available:
        raise CatalogExhausted("every catalog item is already in the cart")

    if ctx.last_qualifying_shelf is not None:
        shelf = layout.shelves.get(ctx.last_qualifying_shelf)
        if shelf is not None:
            picks = [i for i in shelf.item_ids if i not in cart_set][:top_n]
            if picks:
                return _positional(picks, SOURCE_STR_SHELF)
        # shelf gone or fully carted: fall through to the random draw

    rng = random.Random(ctx.random_seed)
    count = min(ctx.random_count, len(available))
    picks = rng.sample(available, count)
    return _positional(picks, SOURCE_STR_RANDOM)


def _positional(picks: list, source: str) -> list[Recommendation]:
    # strictly decreasing scores encode the fallback's own ordering
    n = len(picks)
    return [Recommendation(item, (n - k) / n, source) for k, item in enumerate(picks)]
