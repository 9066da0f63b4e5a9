"""Append-only event log with deterministic replay.

One JSON object per line, preceded by a format-version header line.
Sequence numbers are assigned by the log and are gap-free; replaying a log
through the same scoring rules reconstructs the exact rating matrix and
every session's cart. A trailing partial line (torn write) is ignored on
read, so an interrupted append never surfaces a half record.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from storerec import scoring
from storerec.errors import InvalidArgument, MalformedData, StorageFailure
from storerec.ratings import RatingMatrix

LOG_FORMAT = "storerec-events/1"
SNAPSHOT_FORMAT = "storerec-snapshot/1"

EVENT_KINDS = (
    "position",
    "pickup",
    "purchase",
    "decline",
    "rec_shown",
    "rec_accepted",
    "rec_dismissed",
    "checkout",
)


@dataclass(frozen=True)
class EventRecord:
    sequence_number: int
    session_id: str
    user_id: object
    timestamp: float
    kind: str
    payload: dict = field(default_factory=dict)

    def to_obj(self) -> dict:
        return {
            "seq": self.sequence_number,
            "session_id": self.session_id,
            "user_id": self.user_id,
            "t": self.timestamp,
            "kind": self.kind,
            "payload": self.payload,
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "EventRecord":
        try:
            return cls(
                sequence_number=int(obj["seq"]),
                session_id=obj["session_id"],
                user_id=obj["user_id"],
                timestamp=float(obj["t"]),
                kind=str(obj["kind"]),
                payload=dict(obj.get("payload", {})),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedData(f"bad event record: {exc}") from exc


def _encode(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


class EventLog:
    """Durable (or in-memory, for tests and benches) append-only log."""

    def __init__(self, path=None, fsync: bool = False):
        self.path = path
        self.fsync = fsync
        self.records: list[EventRecord] = []
        self._next_seq = 1
        self._fh = None
        if path is not None:
            existing = self._load_existing()
            if existing is not None:
                self.records = existing
                self._next_seq = existing[-1].sequence_number + 1 if existing else 1
            self._fh = open(path, "a", encoding="utf-8")
            if existing is None:
                self._fh.write(_encode({"format": LOG_FORMAT}) + "\n")
                self._fh.flush()

    def _load_existing(self) -> list[EventRecord] | None:
        if not os.path.exists(self.path) or os.path.getsize(self.path) == 0:
            return None
        return list(read_log(self.path))

    @property
    def next_sequence_number(self) -> int:
        return self._next_seq

    def append(self, record: EventRecord) -> int:
        """Durably append; returns the acknowledged sequence number.

        A record may carry sequence_number 0 to have the log assign the
        next one; a pre-assigned number must match exactly (gap-free).
        """
        if record.kind not in EVENT_KINDS:
            raise InvalidArgument(f"unknown event kind: {record.kind!r}")
        seq = record.sequence_number
        if seq == 0:
            seq = self._next_seq
            record = EventRecord(seq, record.session_id, record.user_id,
                                 record.timestamp, record.kind, record.payload)
        elif seq != self._next_seq:
            raise InvalidArgument(
                f"sequence number {seq} breaks the log (expected {self._next_seq})")

        if self._fh is not None:
            try:
                self._fh.write(_encode(record.to_obj()) + "\n")
                self._fh.flush()
                if self.fsync:
                    os.fsync(self._fh.fileno())
            except OSError as exc:
                raise StorageFailure(f"append failed: {exc}") from exc
        self.records.append(record)
        self._next_seq = seq + 1
        return seq

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    def __iter__(self) -> Iterator[EventRecord]:
        return iter(self.records)


def append_event(log: EventLog, record: EventRecord) -> int:
    return log.append(record)


def read_log(path) -> Iterator[EventRecord]:
    """Parse a log file, validating the header and gap-free sequencing."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = fh.read()
    # A complete file ends with a newline, leaving one empty trailing chunk;
    # anything else is a torn final line. Either way the last chunk goes.
    lines = raw.split("\n")[:-1]
    if not lines:
        return
    try:
        header = json.loads(lines[0])
    except ValueError as exc:
        raise MalformedData(f"bad log header: {exc}") from exc
    if header.get("format") != LOG_FORMAT:
        raise MalformedData(f"unsupported log format: {header.get('format')!r}")
    expected = None
    for lineno, line in enumerate(lines[1:], start=2):
        try:
            record = EventRecord.from_obj(json.loads(line))
        except ValueError as exc:
            raise MalformedData(f"bad event at line {lineno}: {exc}") from exc
        if expected is not None and record.sequence_number != expected:
            raise MalformedData(
                f"sequence gap at line {lineno}: {record.sequence_number} after {expected - 1}")
        expected = record.sequence_number + 1
        yield record


@dataclass
class ReplayState:
    """Everything a log determines: scores, carts, and purchase history."""

    ratings: RatingMatrix = field(default_factory=RatingMatrix)
    carts: dict = field(default_factory=dict)
    purchases: list = field(default_factory=list)  # (session_id, user_id, item_id)
    open_panels: dict = field(default_factory=dict)  # session_id -> (shown, accepted)

    def apply(self, record: EventRecord) -> dict:
        """Fold one event into the state; returns the per-item deltas it caused.

        This is the only place events turn into score changes, for the live
        store and for replay alike, so the two can never drift apart.
        """
        sid, uid, kind, payload = (record.session_id, record.user_id,
                                   record.kind, record.payload)
        deltas: dict = {}
        if kind == "purchase":
            item = payload["item_id"]
            self.carts.setdefault(sid, []).append(item)
            self.purchases.append((sid, uid, item))
            deltas[item] = scoring.apply_event(self.ratings, uid, item, scoring.INFO_BUY)
        elif kind == "decline":
            item = payload["item_id"]
            deltas[item] = scoring.apply_event(self.ratings, uid, item, scoring.INFO_DECLINE)
        elif kind == "rec_shown":
            self.open_panels[sid] = (list(payload["items"]), set())
        elif kind == "rec_accepted":
            item = payload["item_id"]
            self.carts.setdefault(sid, []).append(item)
            self.purchases.append((sid, uid, item))
            shown, accepted = self.open_panels[sid]
            accepted.add(item)
        elif kind == "rec_dismissed":
            deltas = self._settle(sid, uid)
        elif kind == "checkout":
            deltas = self._settle(sid, uid)
        # position and pickup events carry no persistent state
        return deltas

    def _settle(self, sid, uid) -> dict:
        open_panel = self.open_panels.pop(sid, None)
        if open_panel is None:
            return {}
        shown, accepted = open_panel
        return scoring.settle_recommendation_panel(self.ratings, uid, shown, accepted)


def replay_events(records: Iterable[EventRecord]) -> ReplayState:
    state = ReplayState()
    for record in records:
        state.apply(record)
    return state


def write_snapshot(path, state: ReplayState, last_seq: int) -> None:
    """Persist replay state so startup replays only the log tail."""
    doc = {
        "format": SNAPSHOT_FORMAT,
        "last_seq": last_seq,
        "entries": [[u, i, s] for u, i, s in state.ratings.entries()],
        "users": state.ratings.users(),
        "items": state.ratings.items(),
        "carts": state.carts,
        "purchases": [list(p) for p in state.purchases],
        "open_panels": {
            sid: [shown, sorted(accepted, key=str)]
            for sid, (shown, accepted) in state.open_panels.items()
        },
    }
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True)
    os.replace(tmp, path)


def load_snapshot(path) -> tuple[ReplayState, int]:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != SNAPSHOT_FORMAT:
        raise MalformedData(f"unsupported snapshot format: {doc.get('format')!r}")
    state = ReplayState()
    ratings = state.ratings
    for uid in doc["users"]:
        ratings._user_index.setdefault(uid, len(ratings._user_index))
    for iid in doc["items"]:
        ratings._item_index.setdefault(iid, len(ratings._item_index))
    for uid, iid, score in doc["entries"]:
        ratings._rows.setdefault(uid, {})[iid] = float(score)
    ratings.revision = len(doc["entries"])
    state.carts = {sid: list(items) for sid, items in doc["carts"].items()}
    state.purchases = [tuple(p) for p in doc["purchases"]]
    state.open_panels = {
        sid: (list(shown), set(accepted))
        for sid, (shown, accepted) in doc["open_panels"].items()
    }
    return state, int(doc["last_seq"])
