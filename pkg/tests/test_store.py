import json

import pytest

from edurec.recommend import (
    DuplicateAnswerError,
    FeatureVector,
    QuizSession,
    Recommendation,
    SessionClosedError,
)
from edurec.store import SessionStore, StoreError, UnknownSessionError


def new_session(sid="s-1", phase="prerequisite", n_questions=3):
    return QuizSession(
        session_id=sid,
        student="amit",
        subject="Java",
        phase=phase,
        question_ids=tuple(f"q{i}" for i in range(n_questions)),
    )


FEATURES = FeatureVector("Java", 6, 3, 0, 2.0)
REC = Recommendation("Java", "Beginner", 0.9, "decision_tree")


@pytest.fixture
def log_path(tmp_path):
    return tmp_path / "events.log"


def fill_answers(store, sid, n=3):
    for i in range(n):
        store.record_answer(sid, f"q{i}", 0)


class TestEventLog:
    def test_create_and_lookup(self, log_path):
        store = SessionStore(log_path)
        store.create_session(new_session(), model_path="m.json")
        stored = store.get("s-1")
        assert stored.session.subject == "Java"
        assert stored.model_path == "m.json"

    def test_unknown_session(self, log_path):
        store = SessionStore(log_path)
        with pytest.raises(UnknownSessionError):
            store.get("nope")

    def test_duplicate_session_id_rejected(self, log_path):
        store = SessionStore(log_path)
        store.create_session(new_session(), None)
        with pytest.raises(StoreError):
            store.create_session(new_session(), None)

    def test_replay_reproduces_state(self, log_path):
        store = SessionStore(log_path)
        store.create_session(new_session(), "m.json")
        fill_answers(store, "s-1")
        store.finalize_prerequisite("s-1", FEATURES, REC)

        replayed = SessionStore(log_path)
        a, b = store.get("s-1"), replayed.get("s-1")
        assert b.session == a.session
        assert b.result.recommendation == REC
        assert b.result.features == FEATURES
        assert b.session.status == "scored"

    def test_duplicate_answer_rejected_and_state_unchanged(self, log_path):
        store = SessionStore(log_path)
        store.create_session(new_session(), None)
        store.record_answer("s-1", "q0", 2)
        size_before = log_path.stat().st_size
        with pytest.raises(DuplicateAnswerError):
            store.record_answer("s-1", "q0", 1)
        assert store.get("s-1").session.answers == {"q0": 2}
        # the rejected submission must not have been appended
        assert log_path.stat().st_size == size_before

    def test_finalize_of_closed_session_rejected(self, log_path):
        store = SessionStore(log_path)
        store.create_session(new_session(), None)
        fill_answers(store, "s-1")
        store.finalize_prerequisite("s-1", FEATURES, REC)
        with pytest.raises(SessionClosedError):
            store.finalize_prerequisite("s-1", FEATURES, REC)

    def test_followup_finalize_records_performance(self, log_path):
        store = SessionStore(log_path)
        store.create_session(new_session(phase="followup"), None)
        fill_answers(store, "s-1")
        store.finalize_followup("s-1", FEATURES)
        stored = store.get("s-1")
        assert stored.session.status == "scored"
        assert stored.result.performance_score == 2.0
        assert stored.result.recommendation is None

    def test_events_are_one_json_object_per_line(self, log_path):
        store = SessionStore(log_path)
        store.create_session(new_session(), None)
        fill_answers(store, "s-1")
        store.finalize_prerequisite("s-1", FEATURES, REC)
        lines = log_path.read_text().strip().split("\n")
        assert [json.loads(l)["type"] for l in lines] == [
            "created", "answer", "answer", "answer", "scored", "recommended",
        ]


class TestCrashSafety:
    def make_full_log(self, log_path):
        store = SessionStore(log_path)
        store.create_session(new_session(), "m.json")
        fill_answers(store, "s-1")
        store.finalize_prerequisite("s-1", FEATURES, REC)
        return log_path.read_text()

    def test_any_prefix_of_complete_events_is_consistent(self, log_path, tmp_path):
        full = self.make_full_log(log_path)
        lines = full.strip().split("\n")
        for cut in range(len(lines) + 1):
            partial = tmp_path / f"cut-{cut}.log"
            partial.write_text("".join(l + "\n" for l in lines[:cut]))
            store = SessionStore(partial)
            if cut == 0:
                assert "s-1" not in store
                continue
            stored = store.get("s-1")
            if cut == len(lines):
                assert stored.session.status == "scored"
                assert stored.result.recommendation == REC
            else:
                # without the final recommended event the session must still
                # be open (a dangling scored event stays staged)
                assert stored.session.status == "open"
                assert stored.result is None

    def test_torn_final_write_is_ignored(self, log_path, tmp_path):
        full = self.make_full_log(log_path)
        torn = tmp_path / "torn.log"
        torn.write_text(full + '{"type": "answer", "session_id": "s-1", "que')
        store = SessionStore(torn)
        assert store.get("s-1").session.status == "scored"

    def test_corruption_mid_file_raises(self, log_path, tmp_path):
        full = self.make_full_log(log_path)
        lines = full.strip().split("\n")
        lines[2] = "garbage {{{"
        bad = tmp_path / "bad.log"
        bad.write_text("".join(l + "\n" for l in lines))
        with pytest.raises(StoreError, match="line 3"):
            SessionStore(bad)

    def test_missing_log_file_starts_empty(self, tmp_path):
        store = SessionStore(tmp_path / "fresh" / "events.log")
        assert store.session_ids() == []
