"""Independent brute-force oracles the fast implementations are checked
against. Everything here is deliberately naive: dense columns, full pair
enumeration, powerset mining, plain Python floats. No imports from the
package's math paths."""

from __future__ import annotations

import math
from itertools import chain, combinations


def sort_key(value):
    return (str(type(value).__name__), value)


def dense_cosine(xs: list[float], ys: list[float]) -> float:
    dot = 0.0
    nx = 0.0
    ny = 0.0
    for a, b in zip(xs, ys):
        dot += a * b
        nx += a * a
        ny += b * b
    if nx == 0.0 or ny == 0.0:
        return 0.0
    value = dot / (math.sqrt(nx) * math.sqrt(ny))
    return min(1.0, max(-1.0, value))


def dense_minkowski(xs: list[float], ys: list[float], p: float) -> float:
    total = 0.0
    for a, b in zip(xs, ys):
        total += abs(a - b) ** p
    return total ** (1.0 / p)


class DenseSimilarityOracle:
    """All-pairs similarity over dense columns built the slow way.

    rows: dict user -> dict item -> score. axis="item" compares item
    columns over every user; axis="user" compares user rows over every
    item. A pair is present iff the two entities share at least one rater;
    the diagonal is present for every entity, 1.0 unless its vector is
    all zeros.
    """

    def __init__(self, rows: dict, axis: str):
        users = list(rows)
        items = []
        for row in rows.values():
            for item in row:
                if item not in items:
                    items.append(item)
        if axis == "item":
            self.ids = items
            self.vectors = {
                i: [rows[u].get(i) for u in users] for i in items
            }
        else:
            self.ids = users
            self.vectors = {
                u: [rows[u].get(i) for i in items] for u in users
            }
        self.table: dict[tuple, float] = {}
        for a_pos, a in enumerate(self.ids):
            for b in self.ids[a_pos:]:
                va, vb = self.vectors[a], self.vectors[b]
                shared = any(x is not None and y is not None for x, y in zip(va, vb))
                if not shared:
                    continue
                if a == b:
                    nonzero = any(x not in (None, 0.0) for x in va)
                    value = 1.0 if nonzero else 0.0
                else:
                    value = dense_cosine([x or 0.0 for x in va], [y or 0.0 for y in vb])
                self.table[(a, b)] = value
                self.table[(b, a)] = value

    def get(self, a, b):
        return self.table.get((a, b))


def icf_oracle(rows: dict, user, cart: list, top_n: int) -> list[tuple]:
    """Literal scoring: score(i) = sum_j sim(i, j) * weight(j) over the
    user's rated items and cart, j ascending; positive scores only, sorted
    by score desc then id; candidates exclude rated and carted items."""
    sim = DenseSimilarityOracle(rows, axis="item")
    weights = dict(rows.get(user, {}))
    for c in cart:
        weights.setdefault(c, 1.0)
    scored = []
    for i in sim.ids:
        if i in weights:
            continue
        score = 0.0
        for j in sorted(weights, key=sort_key):
            s = sim.get(i, j)
            if s is not None:
                score += s * weights[j]
        if score > 0.0:
            scored.append((i, score))
    scored.sort(key=lambda t: (-t[1], sort_key(t[0])))
    return scored[:top_n]


def ucf_oracle(rows: dict, user, top_n: int, k_neighbors: int) -> list[tuple]:
    sim = DenseSimilarityOracle(rows, axis="user")
    if user not in rows:
        return []
    neighbors = []
    for v in sim.ids:
        if v == user:
            continue
        s = sim.get(user, v)
        if s is not None and s > 0.0:
            neighbors.append((v, s))
    neighbors.sort(key=lambda t: (-t[1], sort_key(t[0])))
    neighbors = neighbors[:k_neighbors]
    seen = set(rows[user])
    scores: dict = {}
    for v, s in neighbors:
        for item, rating in rows[v].items():
            if item not in seen:
                scores[item] = scores.get(item, 0.0) + s * rating
    ranked = [(i, sc) for i, sc in scores.items() if sc > 0.0]
    ranked.sort(key=lambda t: (-t[1], sort_key(t[0])))
    return ranked[:top_n]


def powerset_frequent_itemsets(transactions: list, min_support: float) -> dict:
    """Every subset of the item universe, counted against every basket."""
    baskets = [frozenset(t) for t in transactions]
    universe = sorted(set(chain.from_iterable(baskets)), key=sort_key)
    total = len(baskets)
    frequent = {}
    for size in range(1, len(universe) + 1):
        for combo in combinations(universe, size):
            key = frozenset(combo)
            count = sum(1 for b in baskets if key <= b)
            support = count / total
            if support >= min_support:
                frequent[key] = support
    return frequent


def powerset_rules(transactions: list, min_support: float, min_confidence: float) -> set:
    frequent = powerset_frequent_itemsets(transactions, min_support)
    rules = set()
    for itemset, support in frequent.items():
        if len(itemset) < 2:
            continue
        for consequent in itemset:
            antecedent = itemset - {consequent}
            confidence = support / frequent[antecedent]
            if confidence >= min_confidence:
                rules.add((tuple(sorted(antecedent, key=sort_key)), consequent,
                           round(support, 12), round(confidence, 12)))
    return rules
