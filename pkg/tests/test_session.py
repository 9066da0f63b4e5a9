import pytest

from storerec.catalog import sample_layout
from storerec.errors import PhaseConflict, StaleTimestamp, UnknownItem
from storerec.session import (
    BROWSING,
    CHECKED_OUT,
    INFO_PANEL,
    RECOMMENDATION_PANEL,
    PanelRecord,
    Session,
    locate,
)


@pytest.fixture
def layout():
    return sample_layout()


def walk(session, layout, points):
    result = None
    for x, y, t in points:
        result = session.advance(x, y, t, layout)
    return result


def inside(layout, shelf_id):
    zone = layout.shelves[shelf_id].zone
    return ((zone.min_corner[0] + zone.max_corner[0]) / 2,
            (zone.min_corner[1] + zone.max_corner[1]) / 2)


class TestLocate:
    def test_point_inside_zone(self, layout):
        x, y = inside(layout, "snacks")
        assert locate(x, y, layout) == "snacks"

    def test_point_in_aisle(self, layout):
        assert locate(4.5, 2.5, layout) is None

    def test_max_edge_excluded(self, layout):
        zone = layout.shelves["housewares"].zone
        assert locate(zone.max_corner[0], zone.min_corner[1], layout) is None
        assert locate(zone.min_corner[0], zone.min_corner[1], layout) == "housewares"


class TestDwell:
    def test_twelve_second_stay_qualifies(self, layout):
        s = Session("s1", "u")
        x, y = inside(layout, "housewares")
        walk(s, layout, [(x, y, float(t)) for t in range(13)])
        result = s.advance(4.5, 2.5, 13.0, layout)
        assert result.newly_qualified == "housewares"
        assert s.last_qualifying_shelf == "housewares"

    def test_eight_second_stay_does_not_qualify(self, layout):
        s = Session("s1", "u")
        x, y = inside(layout, "housewares")
        walk(s, layout, [(x, y, 0.0), (x, y, 8.0)])
        s.advance(4.5, 2.5, 9.0, layout)
        assert s.last_qualifying_shelf is None

    def test_exact_threshold_qualifies(self, layout):
        s = Session("s1", "u")
        x, y = inside(layout, "drinks")
        walk(s, layout, [(x, y, 0.0), (x, y, 10.0)])
        s.advance(4.5, 2.5, 10.5, layout)
        assert s.last_qualifying_shelf == "drinks"

    def test_just_under_threshold_does_not_qualify(self, layout):
        s = Session("s1", "u")
        x, y = inside(layout, "drinks")
        walk(s, layout, [(x, y, 0.0), (x, y, 9.9)])
        s.advance(4.5, 2.5, 10.2, layout)
        assert s.last_qualifying_shelf is None

    def test_most_recent_qualifying_shelf_overwrites(self, layout):
        s = Session("s1", "u")
        ax, ay = inside(layout, "housewares")
        bx, by = inside(layout, "bath")
        walk(s, layout, [(ax, ay, 0.0), (ax, ay, 11.0)])
        walk(s, layout, [(bx, by, 12.0), (bx, by, 23.0)])
        s.advance(4.5, 2.5, 24.0, layout)
        assert s.last_qualifying_shelf == "bath"

    def test_dwell_resets_on_exit_and_reentry(self, layout):
        s = Session("s1", "u")
        x, y = inside(layout, "snacks")
        walk(s, layout, [(x, y, 0.0), (x, y, 6.0)])
        s.advance(4.5, 2.5, 7.0, layout)  # out after 6s
        result = walk(s, layout, [(x, y, 8.0), (x, y, 14.0)])
        assert result.dwell_seconds == pytest.approx(6.0)
        s.advance(4.5, 2.5, 15.0, layout)
        assert s.last_qualifying_shelf is None  # neither stay reached 10s

    def test_continuous_dwell_matches_trace_duration(self, layout):
        s = Session("s1", "u")
        x, y = inside(layout, "bath")
        samples = [(x, y, t * 0.5) for t in range(25)]  # 0 .. 12s at 2 Hz
        result = walk(s, layout, samples)
        assert result.dwell_seconds == pytest.approx(12.0)

    def test_purchase_on_shelf_poisons_stay(self, layout):
        s = Session("s1", "u")
        x, y = inside(layout, "housewares")
        walk(s, layout, [(x, y, 0.0), (x, y, 11.0)])
        s.register_purchase("mug", layout)  # mug lives on housewares
        s.advance(4.5, 2.5, 12.0, layout)
        assert s.last_qualifying_shelf is None

    def test_purchase_elsewhere_ends_and_qualifies_stay(self, layout):
        s = Session("s1", "u")
        x, y = inside(layout, "housewares")
        walk(s, layout, [(x, y, 0.0), (x, y, 11.0)])
        s.register_purchase("cola", layout)  # cola lives on drinks
        assert s.last_qualifying_shelf == "housewares"
        # a fresh stay begins on the spot and can qualify again later
        assert s.stay is not None
        assert s.stay.continuous_dwell == 0.0

    def test_poisoned_stay_recovers_after_reentry(self, layout):
        s = Session("s1", "u")
        x, y = inside(layout, "housewares")
        walk(s, layout, [(x, y, 0.0), (x, y, 11.0)])
        s.register_purchase("mug", layout)
        s.advance(4.5, 2.5, 12.0, layout)  # poisoned stay ends, no qualify
        walk(s, layout, [(x, y, 13.0), (x, y, 24.0)])
        s.advance(4.5, 2.5, 25.0, layout)
        assert s.last_qualifying_shelf == "housewares"

    def test_non_monotonic_timestamp_rejected(self, layout):
        s = Session("s1", "u")
        s.advance(1.0, 1.0, 5.0, layout)
        with pytest.raises(StaleTimestamp):
            s.advance(1.0, 1.0, 5.0, layout)
        with pytest.raises(StaleTimestamp):
            s.advance(1.0, 1.0, 4.0, layout)


class TestPhaseMachine:
    def test_pickup_opens_info_panel(self, layout):
        s = Session("s1", "u")
        s.handle_pickup("mug", layout, "p1")
        assert s.phase == INFO_PANEL
        assert s.panels[-1].kind == "info"
        assert s.panels[-1].items == ("mug",)

    def test_pickup_during_panel_rejected(self, layout):
        s = Session("s1", "u")
        s.handle_pickup("mug", layout, "p1")
        with pytest.raises(PhaseConflict):
            s.handle_pickup("soap", layout, "p2")

    def test_pickup_unknown_item_rejected(self, layout):
        s = Session("s1", "u")
        with pytest.raises(UnknownItem):
            s.handle_pickup("jetpack", layout, "p1")
        assert s.phase == BROWSING

    def test_decision_for_other_item_rejected(self, layout):
        s = Session("s1", "u")
        s.handle_pickup("mug", layout, "p1")
        with pytest.raises(PhaseConflict):
            s.handle_purchase_decision("soap", True, layout)

    def test_decline_returns_to_browsing(self, layout):
        s = Session("s1", "u")
        s.handle_pickup("mug", layout, "p1")
        outcome = s.handle_purchase_decision("mug", False, layout)
        assert outcome.scoring_kind == "info_decline"
        assert s.phase == BROWSING
        assert s.cart == []

    def test_buy_requests_recommendation(self, layout):
        s = Session("s1", "u")
        s.handle_pickup("mug", layout, "p1")
        outcome = s.handle_purchase_decision("mug", True, layout)
        assert outcome.wants_recommendation
        assert s.cart == ["mug"]
        panel = PanelRecord("r1", "recommendation", ("soap", "tea"))
        s.attach_recommendation_panel(panel)
        assert s.phase == RECOMMENDATION_PANEL

    def test_rec_purchase_and_dismiss(self, layout):
        s = Session("s1", "u")
        s.handle_pickup("mug", layout, "p1")
        s.handle_purchase_decision("mug", True, layout)
        panel = PanelRecord("r1", "recommendation", ("soap", "tea"))
        s.attach_recommendation_panel(panel)
        s.rec_purchase("r1", "soap", layout)
        assert s.cart == ["mug", "soap"]
        with pytest.raises(PhaseConflict):
            s.rec_purchase("r1", "soap", layout)  # duplicate
        with pytest.raises(PhaseConflict):
            s.rec_purchase("r1", "cola", layout)  # not on the panel
        closed = s.close_recommendation("r1")
        assert closed.purchased == {"soap"}
        assert s.phase == BROWSING

    def test_checkout_during_info_panel_rejected(self, layout):
        s = Session("s1", "u")
        s.handle_pickup("mug", layout, "p1")
        with pytest.raises(PhaseConflict):
            s.checkout()

    def test_checkout_returns_pending_panel(self, layout):
        s = Session("s1", "u")
        s.handle_pickup("mug", layout, "p1")
        s.handle_purchase_decision("mug", True, layout)
        panel = PanelRecord("r1", "recommendation", ("soap",))
        s.attach_recommendation_panel(panel)
        pending = s.checkout()
        assert pending is panel
        assert s.phase == CHECKED_OUT

    def test_no_events_after_checkout(self, layout):
        s = Session("s1", "u")
        assert s.checkout() is None
        for call in (
            lambda: s.advance(1, 1, 1.0, layout),
            lambda: s.handle_pickup("mug", layout, "p9"),
            lambda: s.checkout(),
        ):
            with pytest.raises(PhaseConflict):
                call()

    def test_random_event_fuzz_never_breaks_phase_graph(self, layout):
        # the phase graph, exercised with random legal/illegal events
        import random

        rng = random.Random(42)
        items = list(layout.items)
        legal_next = {
            BROWSING: {"position", "pickup", "checkout"},
            INFO_PANEL: {"position", "decision"},
            RECOMMENDATION_PANEL: {"position", "rec_purchase", "dismiss", "checkout"},
            CHECKED_OUT: set(),
        }
        for trial in range(60):
            s = Session(f"s{trial}", "u")
            t = 0.0
            panel_n = 0
            while s.phase != CHECKED_OUT:
                event = rng.choice(["position", "pickup", "decision",
                                    "rec_purchase", "dismiss", "checkout"])
                phase_before = s.phase
                try:
                    if event == "position":
                        t += 1.0
                        s.advance(rng.uniform(0, 14), rng.uniform(0, 8), t, layout)
                    elif event == "pickup":
                        panel_n += 1
                        s.handle_pickup(rng.choice(items), layout, f"p{panel_n}")
                    elif event == "decision":
                        item = s._open_info_item or rng.choice(items)
                        s.handle_purchase_decision(item, rng.random() < 0.5, layout)
                        if s.phase == INFO_PANEL:  # bought, waiting for panel
                            panel_n += 1
                            s.attach_recommendation_panel(
                                PanelRecord(f"r{panel_n}", "recommendation",
                                            (rng.choice(items),)))
                    elif event == "rec_purchase":
                        panel = s.open_recommendation()
                        if panel is None:
                            raise PhaseConflict("no panel")
                        s.rec_purchase(panel.panel_id, panel.items[0], layout)
                    elif event == "dismiss":
                        panel = s.open_recommendation()
                        if panel is None:
                            raise PhaseConflict("no panel")
                        s.close_recommendation(panel.panel_id)
                    else:
                        s.checkout()
                    assert event in legal_next[phase_before] or event in (
                        "decision", "rec_purchase", "dismiss")
                except PhaseConflict:
                    assert s.phase == phase_before  # rejected events change nothing
