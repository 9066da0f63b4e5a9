"""The live store: sessions, models, scoring, and the event log in one place.

Every state change flows through here so the HTTP layer stays a thin
translation. Determinism contract: session and panel ids are counters,
random draws are seeded from (config seed, session, panel), and non-
position events are stamped with the session's logical clock, so replaying
the same script against a fresh store reproduces the log byte for byte.
"""

from __future__ import annotations

import os
import threading
import zlib
from dataclasses import dataclass, field

from storerec import scoring
from storerec.catalog import StoreLayout, validate_layout
from storerec.config import ServiceConfig
from storerec.errors import CatalogExhausted, InvalidArgument, UnknownItem, UnknownSession
from storerec.eventlog import EventLog, EventRecord, ReplayState, load_snapshot, write_snapshot
from storerec.ratings import RatingMatrix
from storerec.recommend import StrContext, icf_str_recommend
from storerec.session import PanelRecord, Session
from storerec.similarity import ITEM_ITEM, USER_USER, build_item_model, build_user_model

SNAPSHOT_NAME = "snapshot.json"
LOG_NAME = "events.log"


def derive_seed(*parts) -> int:
    """Stable cross-process seed from any mix of ids (never hash())."""
    key = "\x1f".join(str(p) for p in parts)
    return zlib.crc32(key.encode("utf-8"))


@dataclass
class PanelView:
    rec_id: str
    items: list
    scores: list
    sources: list
    page_size: int

    @property
    def pages(self) -> list[list]:
        size = self.page_size
        return [self.items[i:i + size] for i in range(0, len(self.items), size)]


@dataclass
class DecisionResult:
    bought: bool
    cart: list
    panel: PanelView | None
    catalog_exhausted: bool
    applied_delta: float


@dataclass
class Receipt:
    session_id: str
    user_id: object
    cart: list
    deltas: list = field(default_factory=list)  # (item_id, delta, reason)


class Store:
    def __init__(self, layout: StoreLayout, config: ServiceConfig | None = None,
                 data_dir: str | None = None):
        self.config = config or ServiceConfig()
        violations = validate_layout(layout)
        if violations:
            detail = "; ".join(f"{v.kind}:{v.subject}" for v in violations)
            raise InvalidArgument(f"invalid store layout: {detail}")
        self.layout = layout

        self.data_dir = data_dir if data_dir is not None else self.config.data_dir
        self.ratings = RatingMatrix()
        self._snapshot_path = None
        if self.data_dir is not None:
            os.makedirs(self.data_dir, exist_ok=True)
            self._snapshot_path = os.path.join(self.data_dir, SNAPSHOT_NAME)
            log_path = os.path.join(self.data_dir, LOG_NAME)
        else:
            log_path = None
        self._recover(log_path)

        self.sessions: dict[str, Session] = {}
        self._session_counter = 0
        self._panel_counter = 0
        self._build_lock = threading.Lock()
        self.item_model = build_item_model(self.ratings)
        self.user_model = build_user_model(self.ratings)

    def _recover(self, log_path) -> None:
        """Start from the latest snapshot plus the log tail, if any."""
        state = ReplayState()
        start_seq = 0
        if self._snapshot_path and os.path.exists(self._snapshot_path):
            state, start_seq = load_snapshot(self._snapshot_path)
        self.log = EventLog(log_path, fsync=self.config.fsync)
        for record in self.log.records:
            if record.sequence_number > start_seq:
                state.apply(record)
        self.replay_state = state
        self.ratings = state.ratings

    # -- sessions ----------------------------------------------------------

    def create_session(self, user_id) -> Session:
        self._session_counter += 1
        session = Session(f"s{self._session_counter}", user_id,
                          dwell_threshold=self.config.dwell_seconds)
        self.sessions[session.session_id] = session
        return session

    def _session(self, session_id: str) -> Session:
        session = self.sessions.get(session_id)
        if session is None:
            raise UnknownSession(f"no such session: {session_id}")
        return session

    def _append(self, session: Session, kind: str, payload: dict, t=None) -> dict:
        record = EventRecord(
            sequence_number=0,
            session_id=session.session_id,
            user_id=session.user_id,
            timestamp=session.clock() if t is None else t,
            kind=kind,
            payload=payload,
        )
        seq = self.log.append(record)
        deltas = self.replay_state.apply(self.log.records[-1])
        if self._snapshot_path and seq % self.config.snapshot_every == 0:
            write_snapshot(self._snapshot_path, self.replay_state, seq)
        return deltas

    # -- shopping flow -----------------------------------------------------

    def position(self, session_id: str, x: float, y: float, t: float):
        session = self._session(session_id)
        result = session.advance(x, y, t, self.layout)
        self._append(session, "position", {"x": x, "y": y}, t=t)
        return result

    def pickup(self, session_id: str, item_id: str):
        session = self._session(session_id)
        self._panel_counter += 1
        session.handle_pickup(item_id, self.layout, f"p{self._panel_counter}")
        self._append(session, "pickup", {"item_id": item_id})
        return self.layout.items[item_id]

    def decision(self, session_id: str, item_id: str, bought: bool) -> DecisionResult:
        session = self._session(session_id)
        outcome = session.handle_purchase_decision(item_id, bought, self.layout)

        deltas = self._append(session, "purchase" if bought else "decline",
                              {"item_id": item_id})
        delta = deltas[item_id]
        session.applied_deltas.append((item_id, delta, outcome.scoring_kind))

        if not outcome.wants_recommendation:
            return DecisionResult(False, list(session.cart), None, False, delta)

        panel_view, exhausted = self._recommend(session)
        return DecisionResult(True, list(session.cart), panel_view, exhausted, delta)

    def _recommend(self, session: Session) -> tuple[PanelView | None, bool]:
        self._panel_counter += 1
        rec_id = f"r{self._panel_counter}"
        ctx = StrContext(
            last_qualifying_shelf=session.last_qualifying_shelf,
            random_seed=derive_seed(self.config.seed, session.session_id, rec_id),
            random_count=min(self.config.random_count, len(self.layout.items)),
        )
        try:
            recs = icf_str_recommend(self.item_model, self.ratings, session.user_id,
                                     session.cart, self.config.top_n, ctx, self.layout)
        except CatalogExhausted:
            session.attach_recommendation_panel(None)
            return None, True

        panel = PanelRecord(
            panel_id=rec_id,
            kind="recommendation",
            items=tuple(r.item_id for r in recs),
            scores=tuple(r.score for r in recs),
            sources=tuple(r.source for r in recs),
        )
        session.attach_recommendation_panel(panel)
        self._append(session, "rec_shown", {"rec_id": rec_id, "items": list(panel.items)})
        view = PanelView(rec_id, list(panel.items), list(panel.scores),
                         list(panel.sources), self.config.page_size)
        return view, False

    def panel_purchase(self, session_id: str, rec_id: str, item_id: str) -> list:
        session = self._session(session_id)
        if item_id not in self.layout.items:
            raise UnknownItem(f"no such item: {item_id}")
        session.rec_purchase(rec_id, item_id, self.layout)
        self._append(session, "rec_accepted", {"rec_id": rec_id, "item_id": item_id})
        return list(session.cart)

    def panel_dismiss(self, session_id: str, rec_id: str) -> dict:
        session = self._session(session_id)
        panel = session.close_recommendation(rec_id)
        deltas = self._append(session, "rec_dismissed", {"rec_id": rec_id})
        self._record_settlement(session, panel, deltas)
        return deltas

    def _record_settlement(self, session: Session, panel: PanelRecord, deltas: dict) -> None:
        panel.settled = True
        for item, delta in deltas.items():
            kind = scoring.REC_BUY if delta > 0 else scoring.REC_DECLINE
            session.applied_deltas.append((item, delta, kind))

    def checkout(self, session_id: str) -> Receipt:
        session = self._session(session_id)
        pending = session.checkout()
        deltas = self._append(session, "checkout", {"cart": list(session.cart)})
        if pending is not None and deltas:
            self._record_settlement(session, pending, deltas)
        return Receipt(session.session_id, session.user_id,
                       list(session.cart), list(session.applied_deltas))

    # -- administration ------------------------------------------------------

    def rebuild_model(self, kind: str) -> float:
        """Full rebuild of one similarity model; the snapshot swap is atomic
        so in-flight recommendations keep a consistent view."""
        if kind not in (ITEM_ITEM, USER_USER):
            raise InvalidArgument(f"unknown model kind: {kind!r}")
        with self._build_lock:
            if kind == ITEM_ITEM:
                model = build_item_model(self.ratings)
                self.item_model = model
            else:
                model = build_user_model(self.ratings)
                self.user_model = model
        return model.build_duration

    def model_stats(self) -> dict:
        return {
            kind: {
                "entities": model.entity_count,
                "pairs": model.pair_count,
                "build_duration_seconds": model.build_duration,
                "source_revision": model.source_revision,
            }
            for kind, model in ((ITEM_ITEM, self.item_model), (USER_USER, self.user_model))
        }

    def close(self) -> None:
        self.log.close()
