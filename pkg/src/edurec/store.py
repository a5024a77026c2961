"""File-backed session persistence: append-only event log plus replay.

Every state change is one JSON line in the log (created / answer / scored /
recommended); the in-memory index is rebuilt on startup by replaying the
file. Finalization appends its scored and recommended events in a single
buffered write-and-fsync, and replay treats a prerequisite session's scored
event as staged until the paired recommended event arrives, so any prefix
of the log replays to a consistent state: either the session is still open
(and finalize can be retried) or it carries its full result.

A trailing partial line (torn final write) is tolerated and ignored;
corruption anywhere else is an error.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from edurec.recommend import FeatureVector, QuizSession, Recommendation, SessionClosedError


class StoreError(RuntimeError):
    """The event log is corrupt or an event cannot be applied."""


class UnknownSessionError(KeyError):
    def __init__(self, session_id: str):
        super().__init__(session_id)
        self.session_id = session_id

    def __str__(self) -> str:
        return f"unknown session {self.session_id!r}"


@dataclass
class SessionResult:
    features: FeatureVector | None = None
    recommendation: Recommendation | None = None
    performance_score: float | None = None


@dataclass
class StoredSession:
    session: QuizSession
    model_path: str | None
    created_at: str
    staged_features: FeatureVector | None = None
    result: SessionResult | None = None


def _features_to_dict(fv: FeatureVector) -> dict:
    return {
        "subject": fv.subject,
        "bla": fv.bla,
        "mla": fv.mla,
        "hla": fv.hla,
        "avg_score": fv.avg_score,
    }


def _features_from_dict(d: dict) -> FeatureVector:
    return FeatureVector(
        subject=d["subject"],
        bla=int(d["bla"]),
        mla=int(d["mla"]),
        hla=int(d["hla"]),
        avg_score=float(d["avg_score"]),
    )


def _recommendation_to_dict(rec: Recommendation) -> dict:
    return {
        "course": rec.course,
        "level": rec.level,
        "confidence": rec.confidence,
        "model": rec.model,
    }


def _recommendation_from_dict(d: dict) -> Recommendation:
    return Recommendation(
        course=d["course"], level=d["level"], confidence=float(d["confidence"]), model=d["model"]
    )


class SessionStore:
    """Append-only log of session events with an in-memory replayed index.

    The append call is the single serialization point: all mutations take
    the store lock, validate against current state, append, then apply.
    """

    def __init__(self, log_path: str | Path):
        self._path = Path(log_path)
        self._lock = threading.RLock()
        self._sessions: dict[str, StoredSession] = {}
        self._path.parent.mkdir(parents=True, exist_ok=True)
        self._replay()

    # -- querying ----------------------------------------------------------

    def get(self, session_id: str) -> StoredSession:
        with self._lock:
            try:
                return self._sessions[session_id]
            except KeyError:
                raise UnknownSessionError(session_id) from None

    def __contains__(self, session_id: str) -> bool:
        with self._lock:
            return session_id in self._sessions

    def session_ids(self) -> list[str]:
        with self._lock:
            return list(self._sessions)

    # -- mutations ---------------------------------------------------------

    def create_session(self, session: QuizSession, model_path: str | None) -> StoredSession:
        with self._lock:
            if session.session_id in self._sessions:
                raise StoreError(f"session id {session.session_id!r} already exists")
            event = {
                "type": "created",
                "session_id": session.session_id,
                "student": session.student,
                "subject": session.subject,
                "phase": session.phase,
                "question_ids": list(session.question_ids),
                "model_path": model_path,
                "ts": datetime.now(timezone.utc).isoformat(),
            }
            self._append([event])
            self._apply(event)
            return self._sessions[session.session_id]

    def record_answer(self, session_id: str, question_id: str, option: int) -> None:
        with self._lock:
            stored = self.get(session_id)
            stored.session.check_answer(question_id, option)  # validate before appending
            event = {
                "type": "answer",
                "session_id": session_id,
                "question_id": question_id,
                "option": option,
            }
            self._append([event])
            self._apply(event)

    def finalize_prerequisite(
        self, session_id: str, features: FeatureVector, recommendation: Recommendation
    ) -> None:
        """Persist scoring and recommendation atomically (one write, one fsync)."""
        with self._lock:
            stored = self.get(session_id)
            if stored.session.status != "open":
                raise SessionClosedError(f"session {session_id} is already scored")
            events = [
                {"type": "scored", "session_id": session_id, "features": _features_to_dict(features)},
                {
                    "type": "recommended",
                    "session_id": session_id,
                    "recommendation": _recommendation_to_dict(recommendation),
                },
            ]
            self._append(events)
            for event in events:
                self._apply(event)

    def finalize_followup(self, session_id: str, features: FeatureVector) -> None:
        with self._lock:
            stored = self.get(session_id)
            if stored.session.status != "open":
                raise SessionClosedError(f"session {session_id} is already scored")
            event = {"type": "scored", "session_id": session_id, "features": _features_to_dict(features)}
            self._append([event])
            self._apply(event)

    # -- log plumbing -------------------------------------------------------

    def _append(self, events: list[dict]) -> None:
        payload = "".join(json.dumps(e, sort_keys=True) + "\n" for e in events)
        with open(self._path, "a", encoding="utf-8") as f:
            f.write(payload)
            f.flush()
            os.fsync(f.fileno())

    def _replay(self) -> None:
        if not self._path.exists():
            return
        lines = self._path.read_text(encoding="utf-8").split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        for i, line in enumerate(lines):
            try:
                event = json.loads(line)
            except json.JSONDecodeError:
                if i == len(lines) - 1:
                    break  # torn final write; ignore the partial record
                raise StoreError(f"corrupt event log: undecodable line {i + 1}") from None
            try:
                self._apply(event)
            except (KeyError, ValueError) as exc:
                raise StoreError(f"corrupt event log: line {i + 1}: {exc}") from None

    def _apply(self, event: dict) -> None:
        kind = event["type"]
        if kind == "created":
            session = QuizSession(
                session_id=event["session_id"],
                student=event["student"],
                subject=event["subject"],
                phase=event["phase"],
                question_ids=tuple(event["question_ids"]),
            )
            self._sessions[session.session_id] = StoredSession(
                session=session,
                model_path=event.get("model_path"),
                created_at=event.get("ts", ""),
            )
            return

        stored = self._sessions.get(event["session_id"])
        if stored is None:
            raise StoreError(f"event for unknown session {event['session_id']!r}")
        if kind == "answer":
            stored.session.record_answer(event["question_id"], int(event["option"]))
        elif kind == "scored":
            features = _features_from_dict(event["features"])
            if stored.session.phase == "followup":
                stored.session.status = "scored"
                stored.result = SessionResult(
                    features=features, performance_score=features.avg_score
                )
            else:
                # staged until the paired recommended event lands
                stored.staged_features = features
        elif kind == "recommended":
            if stored.staged_features is None:
                raise StoreError(
                    f"recommended event without staged score for session {event['session_id']!r}"
                )
            stored.session.status = "scored"
            stored.result = SessionResult(
                features=stored.staged_features,
                recommendation=_recommendation_from_dict(event["recommendation"]),
            )
            stored.staged_features = None
        else:
            raise StoreError(f"unknown event type {kind!r}")
