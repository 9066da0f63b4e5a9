"""Store catalog and floor layout: items, shelves, and their detection zones.

Coordinates are 2D floor positions in meters with the origin at a store
corner. Every shelf owns a rectangular detection zone; standing inside the
zone means "standing in front of this shelf". Zones of distinct shelves may
not overlap so that the determination is unambiguous.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import yaml

from storerec.errors import MalformedData

LAYOUT_FORMAT = "store-layout/1"


@dataclass(frozen=True)
class ShelfZone:
    """Axis-aligned rectangle; containment is half-open: [min, max)."""

    min_corner: tuple[float, float]
    max_corner: tuple[float, float]

    def contains(self, x: float, y: float) -> bool:
        return (
            self.min_corner[0] <= x < self.max_corner[0]
            and self.min_corner[1] <= y < self.max_corner[1]
        )

    def overlaps(self, other: "ShelfZone") -> bool:
        return (
            self.min_corner[0] < other.max_corner[0]
            and other.min_corner[0] < self.max_corner[0]
            and self.min_corner[1] < other.max_corner[1]
            and other.min_corner[1] < self.max_corner[1]
        )

    def is_well_formed(self) -> bool:
        return (
            self.min_corner[0] < self.max_corner[0]
            and self.min_corner[1] < self.max_corner[1]
        )


@dataclass(frozen=True)
class Item:
    item_id: str
    name: str
    shelf_id: str
    attributes: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Shelf:
    shelf_id: str
    item_ids: tuple[str, ...]  # stocking order
    zone: ShelfZone


@dataclass(frozen=True)
class Violation:
    kind: str
    subject: str
    detail: str


class StoreLayout:
    """Shelves plus the items stocked on them, in catalog order."""

    def __init__(self, shelves: list[Shelf], items: list[Item]):
        self.shelves: dict[str, Shelf] = {s.shelf_id: s for s in shelves}
        self.items: dict[str, Item] = {i.item_id: i for i in items}

    def item_ids(self) -> list[str]:
        return list(self.items)

    def shelf_of(self, item_id: str) -> str | None:
        item = self.items.get(item_id)
        return item.shelf_id if item else None

    def to_dict(self) -> dict:
        return {
            "format": LAYOUT_FORMAT,
            "shelves": [
                {
                    "shelf_id": s.shelf_id,
                    "zone": {
                        "min": list(s.zone.min_corner),
                        "max": list(s.zone.max_corner),
                    },
                    "items": list(s.item_ids),
                }
                for s in self.shelves.values()
            ],
            "items": [
                {
                    "item_id": i.item_id,
                    "name": i.name,
                    "shelf_id": i.shelf_id,
                    "attributes": dict(i.attributes),
                }
                for i in self.items.values()
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "StoreLayout":
        if not isinstance(doc, dict):
            raise MalformedData("layout document must be a mapping")
        fmt = doc.get("format")
        if fmt != LAYOUT_FORMAT:
            raise MalformedData(f"unsupported layout format: {fmt!r}")
        try:
            shelves = [
                Shelf(
                    shelf_id=str(s["shelf_id"]),
                    item_ids=tuple(str(i) for i in s.get("items", [])),
                    zone=ShelfZone(
                        min_corner=(float(s["zone"]["min"][0]), float(s["zone"]["min"][1])),
                        max_corner=(float(s["zone"]["max"][0]), float(s["zone"]["max"][1])),
                    ),
                )
                for s in doc.get("shelves", [])
            ]
            items = [
                Item(
                    item_id=str(i["item_id"]),
                    name=str(i.get("name", i["item_id"])),
                    shelf_id=str(i["shelf_id"]),
                    attributes=dict(i.get("attributes", {})),
                )
                for i in doc.get("items", [])
            ]
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise MalformedData(f"bad layout document: {exc}") from exc
        return cls(shelves, items)


def load_layout(path) -> StoreLayout:
    with open(path, "r", encoding="utf-8") as fh:
        doc = yaml.safe_load(fh)
    return StoreLayout.from_dict(doc)


def save_layout(layout: StoreLayout, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(layout.to_dict(), fh, sort_keys=False)


def validate_layout(layout: StoreLayout) -> list[Violation]:
    """Check every catalog invariant; violations are data, not failures.

    Returns an empty list iff the layout is well formed: zones valid and
    pairwise disjoint, every item on exactly one existing shelf, stocked
    shelves non-empty, and shelf/item placement cross-references agreeing.
    """
    violations: list[Violation] = []

    shelves = list(layout.shelves.values())
    for shelf in shelves:
        if not shelf.zone.is_well_formed():
            violations.append(
                Violation("bad-zone", shelf.shelf_id, "min corner must be strictly below max on both axes")
            )
        if not shelf.item_ids:
            violations.append(Violation("empty-shelf", shelf.shelf_id, "shelf stocks no items"))

    for a_idx, a in enumerate(shelves):
        for b in shelves[a_idx + 1 :]:
            if a.zone.is_well_formed() and b.zone.is_well_formed() and a.zone.overlaps(b.zone):
                violations.append(
                    Violation("zone-overlap", f"{a.shelf_id}/{b.shelf_id}", "detection zones intersect")
                )

    placements: dict[str, list[str]] = {}
    for shelf in shelves:
        for item_id in shelf.item_ids:
            placements.setdefault(item_id, []).append(shelf.shelf_id)
            if item_id not in layout.items:
                violations.append(
                    Violation("unknown-item", item_id, f"stocked on {shelf.shelf_id} but missing from catalog")
                )
    for item_id, where in placements.items():
        if len(where) > 1:
            violations.append(
                Violation("duplicate-placement", item_id, f"stocked on shelves {', '.join(where)}")
            )

    for item in layout.items.values():
        if item.shelf_id not in layout.shelves:
            violations.append(
                Violation("unknown-shelf", item.item_id, f"references shelf {item.shelf_id!r}")
            )
        elif item.item_id not in layout.shelves[item.shelf_id].item_ids:
            violations.append(
                Violation("unstocked-item", item.item_id, f"not listed on its shelf {item.shelf_id!r}")
            )

    return violations


def sample_layout() -> StoreLayout:
    """Small supermarket fixture used by the demo server, benches, and tests.

    Shelves sit along aisles on a 14 x 8 m floor; each zone is the strip a
    shopper stands in when browsing that shelf.
    """
    def shelf(shelf_id, items, zmin, zmax):
        return Shelf(shelf_id, tuple(items), ShelfZone(zmin, zmax))

    shelves = [
        shelf("housewares", ["mug", "band-aid", "disinfectant", "coffee", "slippers"], (0.0, 0.0), (4.0, 1.5)),
        shelf("bath", ["shower-gel", "shampoo", "soap", "toothpaste"], (5.0, 0.0), (9.0, 1.5)),
        shelf("snacks", ["chips", "cookies", "chocolate", "crackers"], (0.0, 4.0), (4.0, 5.5)),
        shelf("drinks", ["cola", "juice", "water", "tea"], (5.0, 4.0), (9.0, 5.5)),
    ]
    names_prices = {
        "mug": ("Ceramic Mug", 3.9),
        "band-aid": ("Band-Aid Box", 2.5),
        "disinfectant": ("Disinfectant Spray", 4.2),
        "coffee": ("Ground Coffee", 6.8),
        "slippers": ("House Slippers", 8.0),
        "shower-gel": ("Shower Gel", 3.5),
        "shampoo": ("Shampoo", 4.8),
        "soap": ("Bar Soap", 1.2),
        "toothpaste": ("Toothpaste", 2.1),
        "chips": ("Potato Chips", 1.8),
        "cookies": ("Butter Cookies", 2.9),
        "chocolate": ("Milk Chocolate", 2.2),
        "crackers": ("Salt Crackers", 1.6),
        "cola": ("Cola 1L", 1.4),
        "juice": ("Orange Juice", 2.3),
        "water": ("Still Water", 0.8),
        "tea": ("Iced Tea", 1.7),
    }
    items = [
        Item(item_id, name, shelf.shelf_id, {"price": price})
        for shelf in shelves
        for item_id in shelf.item_ids
        for name, price in [names_prices[item_id]]
    ]
    return StoreLayout(shelves, items)
