"""One shopper's live session: position trace, dwell tracking, cart, panels.

The dwell rule: a stay at a shelf qualifies when the shopper remains in
its detection zone continuously for at least the threshold (10 s default)
and buys nothing from that shelf during the stay. Qualification is
evaluated when the stay ends, either by leaving the zone or by a purchase
from elsewhere; the most recently ended qualifying stay wins, overwriting
any older one. Dwell resets on exit, so re-entering starts a fresh stay.

Phases follow the shopping flow: browsing -> info_panel -> {browsing,
recommendation_panel} -> browsing -> checked_out. A checked-out session
accepts no further events.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from storerec.catalog import StoreLayout
from storerec.errors import (
    AlreadySettled,
    PhaseConflict,
    StaleTimestamp,
    UnknownItem,
    UnknownPanel,
)

BROWSING = "browsing"
INFO_PANEL = "info_panel"
RECOMMENDATION_PANEL = "recommendation_panel"
CHECKED_OUT = "checked_out"

DEFAULT_DWELL_THRESHOLD = 10.0


def locate(x: float, y: float, layout: StoreLayout) -> str | None:
    """The unique shelf whose zone contains the point, if any.

    Containment is inclusive on the min corner and exclusive on the max
    corner, so a point on a shared boundary belongs to at most one zone.
    """
    for shelf in layout.shelves.values():
        if shelf.zone.contains(x, y):
            return shelf.shelf_id
    return None


@dataclass
class DwellState:
    """The live stay at one shelf."""

    shelf_id: str
    entered_at: float
    continuous_dwell: float = 0.0
    purchased_here_this_stay: bool = False


@dataclass
class PanelRecord:
    """A panel shown to the shopper, info or recommendation."""

    panel_id: str
    kind: str  # "info" | "recommendation"
    items: tuple
    scores: tuple = ()
    sources: tuple = ()
    purchased: set = field(default_factory=set)
    settled: bool = False


@dataclass
class AdvanceResult:
    current_shelf: str | None
    dwell_seconds: float
    last_qualifying_shelf: str | None
    newly_qualified: str | None


@dataclass
class DecisionOutcome:
    bought: bool
    scoring_kind: str  # info_buy | info_decline
    wants_recommendation: bool


class Session:
    def __init__(self, session_id: str, user_id, dwell_threshold: float = DEFAULT_DWELL_THRESHOLD):
        self.session_id = session_id
        self.user_id = user_id
        self.dwell_threshold = dwell_threshold
        self.phase = BROWSING
        self.position: tuple[float, float] | None = None
        self.last_t: float | None = None
        self.cart: list = []
        self.panels: list[PanelRecord] = []
        self.stay: DwellState | None = None
        self.last_qualifying_shelf: str | None = None
        self.applied_deltas: list[tuple] = []  # (item_id, delta, reason)
        self._open_info_item = None
        self._open_rec: PanelRecord | None = None

    # -- clock ------------------------------------------------------------

    def clock(self) -> float:
        """Logical session time: the last accepted position timestamp."""
        return self.last_t if self.last_t is not None else 0.0

    def _require_open(self):
        if self.phase == CHECKED_OUT:
            raise PhaseConflict("session is checked out")

    # -- spatial ----------------------------------------------------------

    def advance(self, x: float, y: float, t: float, layout: StoreLayout) -> AdvanceResult:
        """Accept one position sample and update dwell bookkeeping."""
        self._require_open()
        if self.last_t is not None and t <= self.last_t:
            raise StaleTimestamp(f"timestamp {t} not after {self.last_t}")

        shelf = locate(x, y, layout)
        newly_qualified = None
        if self.stay is not None and shelf == self.stay.shelf_id:
            self.stay.continuous_dwell += t - self.last_t
        else:
            newly_qualified = self._end_stay()
            if shelf is not None:
                self.stay = DwellState(shelf_id=shelf, entered_at=t)

        self.position = (x, y)
        self.last_t = t
        return AdvanceResult(
            current_shelf=shelf,
            dwell_seconds=self.stay.continuous_dwell if self.stay else 0.0,
            last_qualifying_shelf=self.last_qualifying_shelf,
            newly_qualified=newly_qualified,
        )

    def _end_stay(self) -> str | None:
        """Evaluate and drop the active stay; returns the shelf if it qualified."""
        stay, self.stay = self.stay, None
        if (
            stay is not None
            and stay.continuous_dwell >= self.dwell_threshold
            and not stay.purchased_here_this_stay
        ):
            self.last_qualifying_shelf = stay.shelf_id
            return stay.shelf_id
        return None

    def register_purchase(self, item_id, layout: StoreLayout) -> None:
        """Spatial side effects of any purchase, info panel or recommendation.

        Buying from the shelf being browsed poisons the current stay; buying
        from elsewhere ends the current stay (which may qualify it) and a
        fresh stay begins on the spot.
        """
        if self.stay is None:
            return
        shelf_id = layout.shelf_of(item_id)
        if shelf_id == self.stay.shelf_id:
            self.stay.purchased_here_this_stay = True
        else:
            here = self.stay.shelf_id
            self._end_stay()
            self.stay = DwellState(shelf_id=here, entered_at=self.clock())

    # -- shopping flow ----------------------------------------------------

    def handle_pickup(self, item_id, layout: StoreLayout, panel_id: str) -> PanelRecord:
        self._require_open()
        if self.phase != BROWSING:
            raise PhaseConflict(f"pickup not allowed in phase {self.phase}")
        if item_id not in layout.items:
            raise UnknownItem(f"no such item: {item_id}")
        panel = PanelRecord(panel_id=panel_id, kind="info", items=(item_id,))
        self.panels.append(panel)
        self._open_info_item = item_id
        self.phase = INFO_PANEL
        return panel

    def handle_purchase_decision(self, item_id, bought: bool, layout: StoreLayout) -> DecisionOutcome:
        self._require_open()
        if self.phase != INFO_PANEL:
            raise PhaseConflict(f"no info panel open in phase {self.phase}")
        if item_id != self._open_info_item:
            raise PhaseConflict(f"open panel shows {self._open_info_item!r}, not {item_id!r}")

        self._open_info_item = None
        if bought:
            self.cart.append(item_id)
            self.register_purchase(item_id, layout)
            # phase settles once the recommendation panel is attached
            return DecisionOutcome(True, "info_buy", wants_recommendation=True)
        self.phase = BROWSING
        return DecisionOutcome(False, "info_decline", wants_recommendation=False)

    def attach_recommendation_panel(self, panel: PanelRecord | None) -> None:
        """Complete a bought decision: open the panel, or return to browsing
        when the catalog had nothing left to recommend."""
        if panel is None:
            self.phase = BROWSING
            return
        self.panels.append(panel)
        self._open_rec = panel
        self.phase = RECOMMENDATION_PANEL

    def open_recommendation(self) -> PanelRecord | None:
        return self._open_rec

    def find_panel(self, panel_id: str) -> PanelRecord:
        for panel in self.panels:
            if panel.panel_id == panel_id:
                return panel
        raise UnknownPanel(f"no such panel: {panel_id}")

    def rec_purchase(self, panel_id: str, item_id, layout: StoreLayout) -> PanelRecord:
        self._require_open()
        panel = self.find_panel(panel_id)
        if self.phase != RECOMMENDATION_PANEL or panel is not self._open_rec:
            raise PhaseConflict("recommendation panel is not open")
        if item_id not in panel.items:
            raise PhaseConflict(f"item {item_id!r} is not on this panel")
        if item_id in panel.purchased:
            raise PhaseConflict(f"item {item_id!r} already bought from this panel")
        panel.purchased.add(item_id)
        self.cart.append(item_id)
        self.register_purchase(item_id, layout)
        return panel

    def close_recommendation(self, panel_id: str) -> PanelRecord:
        """Dismiss the open panel; settlement is the store's job."""
        self._require_open()
        panel = self.find_panel(panel_id)
        if panel.settled:
            raise AlreadySettled(f"panel {panel_id} already settled")
        if self.phase != RECOMMENDATION_PANEL or panel is not self._open_rec:
            raise PhaseConflict("recommendation panel is not open")
        self._open_rec = None
        self.phase = BROWSING
        return panel

    def checkout(self) -> PanelRecord | None:
        """Close the session; returns a still-open panel for settlement."""
        self._require_open()
        if self.phase not in (BROWSING, RECOMMENDATION_PANEL):
            raise PhaseConflict(f"cannot check out in phase {self.phase}")
        pending = self._open_rec
        self._open_rec = None
        self.phase = CHECKED_OUT
        return pending
