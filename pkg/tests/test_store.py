import random

import pytest

from storerec.catalog import sample_layout
from storerec.config import ServiceConfig
from storerec.errors import InvalidArgument, PhaseConflict, UnknownSession
from storerec.eventlog import read_log, replay_events
from storerec.store import Store, derive_seed


def scripted_session(store):
    """Dwell at housewares, buy shower gel, accept one recommendation, check out."""
    s = store.create_session("walker")
    zone = store.layout.shelves["housewares"].zone
    x = (zone.min_corner[0] + zone.max_corner[0]) / 2
    y = (zone.min_corner[1] + zone.max_corner[1]) / 2
    for t in range(13):
        store.position(s.session_id, x, y, float(t))
    store.position(s.session_id, zone.max_corner[0] + 0.5, y, 13.0)
    store.pickup(s.session_id, "shower-gel")
    result = store.decision(s.session_id, "shower-gel", True)
    store.panel_purchase(s.session_id, result.panel.rec_id, result.panel.items[0])
    store.panel_dismiss(s.session_id, result.panel.rec_id)
    return store.checkout(s.session_id)


class TestStoreFlow:
    def test_invalid_layout_rejected(self):
        layout = sample_layout()
        layout.shelves["bath"] = layout.shelves["bath"].__class__(
            "bath", ("shower-gel", "shampoo", "soap", "toothpaste"),
            layout.shelves["housewares"].zone)  # overlapping zone
        with pytest.raises(InvalidArgument):
            Store(layout, ServiceConfig())

    def test_unknown_session_404(self):
        store = Store(sample_layout(), ServiceConfig())
        with pytest.raises(UnknownSession):
            store.position("ghost", 0, 0, 1.0)

    def test_scripted_session_receipt(self, tmp_path):
        store = Store(sample_layout(), ServiceConfig(), data_dir=str(tmp_path))
        receipt = scripted_session(store)
        assert receipt.cart == ["shower-gel", "mug"]
        reasons = {r for _, _, r in receipt.deltas}
        assert reasons == {"info_buy", "rec_buy", "rec_decline"}

    def test_qualifying_dwell_drives_shelf_panel(self, tmp_path):
        store = Store(sample_layout(), ServiceConfig(), data_dir=str(tmp_path))
        s = store.create_session("walker")
        zone = store.layout.shelves["drinks"].zone
        x = (zone.min_corner[0] + zone.max_corner[0]) / 2
        y = (zone.min_corner[1] + zone.max_corner[1]) / 2
        for t in range(11):
            store.position(s.session_id, x, y, float(t))
        store.position(s.session_id, x, zone.max_corner[1] + 1.0, 11.0)
        store.pickup(s.session_id, "mug")
        result = store.decision(s.session_id, "mug", True)
        assert list(result.panel.items) == ["cola", "juice", "water", "tea"]
        assert set(result.panel.sources) == {"str_shelf"}

    def test_empty_store_panel_is_random_but_never_empty(self):
        store = Store(sample_layout(), ServiceConfig(seed=3))
        s = store.create_session("fresh")
        store.pickup(s.session_id, "mug")
        result = store.decision(s.session_id, "mug", True)
        assert result.panel is not None
        assert len(result.panel.items) == 5
        assert set(result.panel.sources) == {"str_random"}
        assert "mug" not in result.panel.items

    def test_catalog_exhaustion_flagged(self):
        store = Store(sample_layout(), ServiceConfig())
        s = store.create_session("hoarder")
        items = list(store.layout.items)
        for item in items[:-1]:
            store.pickup(s.session_id, item)
            result = store.decision(s.session_id, item, True)
            if result.panel is not None:
                store.panel_dismiss(s.session_id, result.panel.rec_id)
        store.pickup(s.session_id, items[-1])
        result = store.decision(s.session_id, items[-1], True)
        assert result.catalog_exhausted
        assert result.panel is None

    def test_panel_pagination(self):
        store = Store(sample_layout(), ServiceConfig(page_size=2))
        s = store.create_session("pager")
        store.pickup(s.session_id, "mug")
        result = store.decision(s.session_id, "mug", True)
        pages = result.panel.pages
        assert len(pages) == 3  # 5 items at page size 2
        assert [len(p) for p in pages] == [2, 2, 1]

    def test_decision_without_pickup_conflicts(self):
        store = Store(sample_layout(), ServiceConfig())
        s = store.create_session("u")
        with pytest.raises(PhaseConflict):
            store.decision(s.session_id, "mug", True)


class TestDeterminism:
    def test_same_script_fresh_store_byte_identical_logs(self, tmp_path):
        logs = []
        for run in ("a", "b"):
            data_dir = tmp_path / run
            store = Store(sample_layout(), ServiceConfig(seed=11), data_dir=str(data_dir))
            scripted_session(store)
            store.close()
            logs.append((data_dir / "events.log").read_bytes())
        assert logs[0] == logs[1]

    def test_different_seed_changes_random_panels(self):
        panels = []
        for seed in (1, 2):
            store = Store(sample_layout(), ServiceConfig(seed=seed))
            s = store.create_session("u")
            store.pickup(s.session_id, "mug")
            panels.append(tuple(store.decision(s.session_id, "mug", True).panel.items))
        assert panels[0] != panels[1]

    def test_derive_seed_stable(self):
        assert derive_seed(1, "s1", "r2") == derive_seed(1, "s1", "r2")
        assert derive_seed(1, "s1", "r2") != derive_seed(2, "s1", "r2")


class TestRecoveryAndReplay:
    def test_live_state_equals_replay_of_log(self, tmp_path):
        store = Store(sample_layout(), ServiceConfig(), data_dir=str(tmp_path))
        scripted_session(store)
        store.close()
        state = replay_events(read_log(tmp_path / "events.log"))
        assert state.ratings.equals(store.ratings)
        assert state.carts["s1"] == ["shower-gel", "mug"]

    def test_restart_recovers_ratings(self, tmp_path):
        store = Store(sample_layout(), ServiceConfig(), data_dir=str(tmp_path))
        scripted_session(store)
        store.close()
        reopened = Store(sample_layout(), ServiceConfig(), data_dir=str(tmp_path))
        assert reopened.ratings.equals(store.ratings)
        reopened.close()

    def test_snapshot_written_and_recovery_matches(self, tmp_path):
        cfg = ServiceConfig(snapshot_every=5)
        store = Store(sample_layout(), cfg, data_dir=str(tmp_path))
        scripted_session(store)
        store.close()
        assert (tmp_path / "snapshot.json").exists()
        reopened = Store(sample_layout(), cfg, data_dir=str(tmp_path))
        assert reopened.ratings.equals(store.ratings)
        reopened.close()

    def test_rebuild_model_swaps_and_reports_duration(self):
        store = Store(sample_layout(), ServiceConfig())
        s = store.create_session("u")
        store.pickup(s.session_id, "mug")
        store.decision(s.session_id, "mug", True)
        duration = store.rebuild_model("item_item")
        assert duration >= 0.0
        stats = store.model_stats()
        assert stats["item_item"]["entities"] >= 1
        assert stats["item_item"]["source_revision"] == store.ratings.revision


class TestSessionFuzz:
    def fuzz_session(self, store, rng, session_n):
        session = store.create_session(f"fuzzer-{session_n % 7}")
        sid = session.session_id
        items = list(store.layout.items)
        t = 0.0
        for _ in range(rng.randrange(3, 18)):
            move = rng.random()
            if move < 0.45:
                t += rng.uniform(0.5, 6.0)
                store.position(sid, rng.uniform(0, 14), rng.uniform(0, 8), t)
            elif move < 0.8 and session.phase == "browsing":
                item = rng.choice(items)
                store.pickup(sid, item)
                buy = rng.random() < 0.6
                result = store.decision(sid, item, buy)
                if buy:
                    uncarted = set(items) - set(session.cart)
                    if uncarted:
                        assert result.panel is not None and result.panel.items
                    if result.panel is not None:
                        if rng.random() < 0.5:
                            pick = rng.choice(result.panel.items)
                            if pick not in session.panels[-1].purchased:
                                store.panel_purchase(sid, result.panel.rec_id, pick)
                        store.panel_dismiss(sid, result.panel.rec_id)
            elif session.phase == "browsing":
                break
        if session.phase in ("browsing", "recommendation_panel"):
            store.checkout(sid)
        return session

    def test_mini_fuzz_replay_equivalence(self, tmp_path):
        rng = random.Random(2024)
        store = Store(sample_layout(), ServiceConfig(seed=5), data_dir=str(tmp_path))
        sessions = [self.fuzz_session(store, rng, n) for n in range(40)]
        store.close()
        state = replay_events(read_log(tmp_path / "events.log"))
        assert state.ratings.equals(store.ratings)
        for session in sessions:
            assert state.carts.get(session.session_id, []) == session.cart
