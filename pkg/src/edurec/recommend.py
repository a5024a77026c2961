"""Prerequisite quizzes: question banks, session scoring and recommendations.

A session gets a seeded sample of questions (basic block, then medium, then
high), answers are tallied into the bla/mla/hla feature vector, and a trained
model maps the features to a course-with-level recommendation. Confidence is
the model's natural certainty: posterior for naive Bayes, vote fraction for
the forest, leaf purity for the decision tree.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from edurec.dataset import compute_average_score, parse_label

QUESTION_LEVELS = ("basic", "medium", "high")


class BankError(ValueError):
    """Malformed question bank or not enough questions to assemble a quiz."""


class SessionError(ValueError):
    """Invalid session operation (already scored, unanswered questions, ...)."""


class SessionClosedError(SessionError):
    """The session has already been scored."""


class QuestionNotAssignedError(SessionError):
    """The question id is not part of this session."""


class DuplicateAnswerError(SessionError):
    """The question already has a recorded answer."""


class IncompleteSessionError(SessionError):
    """Scoring was requested before every assigned question was answered."""

    def __init__(self, question_ids: list[str]):
        super().__init__(f"unanswered questions: {', '.join(question_ids)}")
        self.question_ids = question_ids


class RecommendationError(ValueError):
    """The model produced a label that does not parse as course-with-level."""


@dataclass(frozen=True)
class Question:
    id: str
    subject: str
    level: str
    prompt: str
    options: tuple[str, ...]
    answer_index: int  # never exposed to clients

    def __post_init__(self):
        if self.level not in QUESTION_LEVELS:
            raise BankError(f"question {self.id!r}: unknown level {self.level!r}")
        if len(self.options) < 2:
            raise BankError(f"question {self.id!r}: needs at least 2 options")
        if not 0 <= self.answer_index < len(self.options):
            raise BankError(f"question {self.id!r}: answer index {self.answer_index} out of range")


@dataclass(frozen=True)
class QuestionBank:
    questions: tuple[Question, ...]

    def __post_init__(self):
        ids = [q.id for q in self.questions]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise BankError(f"duplicate question ids: {', '.join(dupes)}")

    def subjects(self) -> tuple[str, ...]:
        return tuple(sorted({q.subject for q in self.questions}))

    def by_id(self, question_id: str) -> Question:
        for q in self.questions:
            if q.id == question_id:
                return q
        raise BankError(f"unknown question id {question_id!r}")

    def pool(self, subject: str, level: str) -> list[Question]:
        return [q for q in self.questions if q.subject == subject and q.level == level]


def load_question_bank(path: str | Path) -> QuestionBank:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise BankError(f"question bank is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("questions"), list):
        raise BankError('question bank must be an object with a "questions" list')
    questions = []
    for i, raw in enumerate(doc["questions"]):
        try:
            questions.append(
                Question(
                    id=raw["id"],
                    subject=raw["subject"],
                    level=raw["level"],
                    prompt=raw["prompt"],
                    options=tuple(raw["options"]),
                    answer_index=int(raw["answer_index"]),
                )
            )
        except KeyError as exc:
            raise BankError(f"question #{i}: missing field {exc}") from None
    return QuestionBank(questions=tuple(questions))


@dataclass
class QuizSession:
    session_id: str
    student: str
    subject: str
    phase: str  # "prerequisite" or "followup"
    question_ids: tuple[str, ...]
    answers: dict[str, int] = field(default_factory=dict)
    status: str = "open"  # open -> scored, never back

    def check_answer(self, question_id: str, option: int) -> None:
        """Validate an answer submission without recording it."""
        if self.status != "open":
            raise SessionClosedError(f"session {self.session_id} is already scored")
        if question_id not in self.question_ids:
            raise QuestionNotAssignedError(
                f"question {question_id!r} is not assigned to this session"
            )
        if question_id in self.answers:
            raise DuplicateAnswerError(f"question {question_id!r} already answered")
        if option < 0:
            raise SessionError(f"option index must be non-negative, got {option}")

    def record_answer(self, question_id: str, option: int) -> None:
        self.check_answer(question_id, option)
        self.answers[question_id] = option

    def unanswered(self) -> list[str]:
        return [qid for qid in self.question_ids if qid not in self.answers]


@dataclass(frozen=True)
class FeatureVector:
    subject: str
    bla: int
    mla: int
    hla: int
    avg_score: float


@dataclass(frozen=True)
class Recommendation:
    course: str
    level: str
    confidence: float
    model: str  # algorithm tag of the model that produced it


def select_questions(bank: QuestionBank, subject: str, per_level: int, seed: int) -> list[Question]:
    """Sample per_level questions of each difficulty, without replacement.

    Deterministic for a given (bank, seed); output order is the basic block,
    then medium, then high.
    """
    if subject not in bank.subjects():
        raise BankError(f"unknown subject {subject!r}")
    rng = np.random.default_rng(seed)
    selected: list[Question] = []
    for level in QUESTION_LEVELS:
        pool = bank.pool(subject, level)
        if len(pool) < per_level:
            raise BankError(
                f"bank has only {len(pool)} {level}-level questions for {subject!r}, need {per_level}"
            )
        picks = rng.permutation(len(pool))[:per_level]
        selected.extend(pool[i] for i in picks)
    return selected


def compute_features(session: QuizSession, bank: QuestionBank) -> FeatureVector:
    """Pure tally of a fully answered session into its feature vector."""
    unanswered = session.unanswered()
    if unanswered:
        raise IncompleteSessionError(unanswered)
    correct = {level: 0 for level in QUESTION_LEVELS}
    assigned = {level: 0 for level in QUESTION_LEVELS}
    for qid in session.question_ids:
        q = bank.by_id(qid)
        assigned[q.level] += 1
        if session.answers[qid] == q.answer_index:
            correct[q.level] += 1
    per_level = assigned["basic"]
    if not (assigned["medium"] == assigned["high"] == per_level) or per_level == 0:
        raise SessionError(
            f"session {session.session_id} has uneven level blocks: {assigned}"
        )
    avg = compute_average_score(
        correct["basic"], correct["medium"], correct["high"], q_per_level=per_level
    )
    return FeatureVector(
        subject=session.subject,
        bla=correct["basic"],
        mla=correct["medium"],
        hla=correct["high"],
        avg_score=avg,
    )


def score_session(session: QuizSession, bank: QuestionBank) -> FeatureVector:
    """Score a fully answered open session and mark it scored."""
    if session.status != "open":
        raise SessionClosedError(f"session {session.session_id} is already scored")
    features = compute_features(session, bank)
    session.status = "scored"
    return features


def recommend(model, features: FeatureVector) -> Recommendation:
    """Predict a course-with-level for a feature vector.

    The predicted class label must parse as "<course>-<level>"; anything else
    signals a corrupted model artifact.
    """
    label, confidence = model.predict_detail(features)
    try:
        course, level = parse_label(label)
    except ValueError:
        raise RecommendationError(
            f"model produced label {label!r} that is not a course-with-level"
        ) from None
    return Recommendation(course=course, level=level, confidence=confidence, model=model.algorithm)


def followup_performance(session: QuizSession, bank: QuestionBank) -> float:
    """Score a follow-up session; returns the performance score in [0, 10]."""
    if session.phase != "followup":
        raise SessionError(f"session {session.session_id} is not a follow-up session")
    return score_session(session, bank).avg_score
