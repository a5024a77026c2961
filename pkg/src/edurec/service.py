"""HTTP JSON API over the quiz-to-recommendation workflow.

Students create a session, answer its questions one by one and finalize to
receive their features plus a course-with-level recommendation (or, for
follow-up sessions, a performance score). Admin endpoints train models and
run algorithm comparisons, gated by a bearer token.

Correct answer indices never leave the server. Sessions persist through the
append-only event store; the model used to grade a session is the one that
was active when the session was created, so a hot swap mid-quiz cannot
change a session's grader.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import uuid
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from edurec.classifiers import ModelFormatError, load_model, save_model
from edurec.dataset import DatasetError, load_csv
from edurec.evaluation import (
    ALGORITHM_NAMES,
    AlgorithmSpec,
    EvaluationError,
    compare_algorithms,
    evaluate_holdout_with_model,
    params_from_dict,
)
from edurec.recommend import (
    BankError,
    DuplicateAnswerError,
    IncompleteSessionError,
    QuestionNotAssignedError,
    QuizSession,
    RecommendationError,
    SessionClosedError,
    compute_features,
    load_question_bank,
    recommend,
    select_questions,
)
from edurec.store import SessionStore, UnknownSessionError

PHASES = ("prerequisite", "followup")


class ServiceConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ServiceConfig:
    data_dir: Path
    model_path: Path
    bank_path: Path
    host: str = "127.0.0.1"
    port: int = 8000
    per_level: int = 10
    # "session-id" derives each quiz sample's seed from the session id;
    # "fixed:<n>" gives every session the same question sample.
    session_seed_policy: str = "session-id"
    admin_token: str | None = None
    static_dir: Path | None = None

    def __post_init__(self):
        if not 0 < self.port < 65536:
            raise ServiceConfigError(f"invalid port {self.port}")
        if self.per_level < 1:
            raise ServiceConfigError("per_level must be >= 1")
        policy = self.session_seed_policy
        if policy != "session-id" and not _parse_fixed_policy(policy):
            raise ServiceConfigError(f"unknown session_seed_policy {policy!r}")


def _parse_fixed_policy(policy: str) -> tuple[int] | None:
    if policy.startswith("fixed:"):
        try:
            return (int(policy.split(":", 1)[1]),)
        except ValueError:
            return None
    return None


def load_service_config(path: str | Path) -> ServiceConfig:
    """Read a JSON config file; relative paths resolve against its directory."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ServiceConfigError(f"cannot read config {path}: {exc}") from None
    base = path.resolve().parent

    def resolve(key, default=None):
        value = raw.get(key, default)
        if value is None:
            return None
        p = Path(value)
        return p if p.is_absolute() else base / p

    for required in ("data_dir", "model_path", "bank_path"):
        if required not in raw:
            raise ServiceConfigError(f"config is missing {required!r}")
    return ServiceConfig(
        data_dir=resolve("data_dir"),
        model_path=resolve("model_path"),
        bank_path=resolve("bank_path"),
        host=raw.get("host", "127.0.0.1"),
        port=int(raw.get("port", 8000)),
        per_level=int(raw.get("per_level", 10)),
        session_seed_policy=raw.get("session_seed_policy", "session-id"),
        admin_token=raw.get("admin_token"),
        static_dir=resolve("static_dir"),
    )


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, details: dict | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.details = details or {}


def _envelope(status: int, code: str, message: str, details: dict) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"error": {"code": code, "message": message, "details": details}},
    )


class CreateSessionBody(BaseModel):
    student: str = Field(min_length=1)
    subject: str = Field(min_length=1)
    phase: str = "prerequisite"


class AnswerBody(BaseModel):
    question_id: str
    option: int = Field(ge=0)


class TrainBody(BaseModel):
    dataset_path: str
    algorithm: str
    params: dict | None = None
    seed: int


class ModelRegistry:
    """Loads model artifacts on demand and tracks the active artifact path.

    The active path lives in a pointer file updated by atomic rename, so a
    training request swaps models without disturbing in-flight sessions
    (each session records the artifact path it was created under).
    """

    def __init__(self, config: ServiceConfig):
        self._config = config
        self._pointer = config.data_dir / "active-model"
        self._cache: dict[str, object] = {}
        self._lock = threading.Lock()

    def active_path(self) -> Path:
        if self._pointer.exists():
            return Path(self._pointer.read_text(encoding="utf-8").strip())
        return self._config.model_path

    def load(self, path: str | Path):
        key = str(path)
        with self._lock:
            if key not in self._cache:
                self._cache[key] = load_model(path)
            return self._cache[key]

    def swap_active(self, path: Path) -> None:
        tmp = self._pointer.with_suffix(".tmp")
        tmp.write_text(str(path), encoding="utf-8")
        os.replace(tmp, self._pointer)


def _session_seed(config: ServiceConfig, session_id: str) -> int:
    fixed = _parse_fixed_policy(config.session_seed_policy)
    if fixed:
        return fixed[0]
    digest = hashlib.sha256(session_id.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def _question_payload(bank, question_ids) -> list[dict]:
    # prompts and options only: answer_index stays server-side
    payload = []
    for qid in question_ids:
        q = bank.by_id(qid)
        payload.append({"id": q.id, "prompt": q.prompt, "options": list(q.options), "level": q.level})
    return payload


def create_app(config: ServiceConfig) -> FastAPI:
    config.data_dir.mkdir(parents=True, exist_ok=True)
    bank = load_question_bank(config.bank_path)
    store = SessionStore(config.data_dir / "events.log")
    registry = ModelRegistry(config)
    registry.load(registry.active_path())  # fail fast on a missing/broken artifact

    app = FastAPI(title="edurec", version="0.1.0", docs_url=None, redoc_url=None)

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        return _envelope(exc.status, exc.code, str(exc), exc.details)

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(request: Request, exc: RequestValidationError):
        return _envelope(400, "invalid_request", "request body failed validation",
                         {"errors": exc.errors()})

    def require_admin(request: Request) -> None:
        if config.admin_token is None:
            raise ApiError(403, "admin_disabled", "no admin token configured")
        header = request.headers.get("authorization", "")
        if header != f"Bearer {config.admin_token}":
            raise ApiError(401, "unauthorized", "missing or wrong bearer token")

    @app.get("/api/subjects")
    def list_subjects():
        return {"subjects": list(bank.subjects())}

    @app.post("/api/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        if body.phase not in PHASES:
            raise ApiError(400, "invalid_phase", f"phase must be one of {PHASES}")
        session_id = uuid.uuid4().hex
        try:
            questions = select_questions(
                bank, body.subject, config.per_level, _session_seed(config, session_id)
            )
        except BankError as exc:
            code = "unknown_subject" if "unknown subject" in str(exc) else "bank_shortfall"
            raise ApiError(400, code, str(exc)) from None
        session = QuizSession(
            session_id=session_id,
            student=body.student,
            subject=body.subject,
            phase=body.phase,
            question_ids=tuple(q.id for q in questions),
        )
        store.create_session(session, model_path=str(registry.active_path()))
        return {
            "session_id": session_id,
            "questions": _question_payload(bank, session.question_ids),
        }

    def lookup(session_id: str):
        try:
            return store.get(session_id)
        except UnknownSessionError as exc:
            raise ApiError(404, "unknown_session", str(exc)) from None

    @app.get("/api/sessions/{session_id}")
    def session_view(session_id: str):
        stored = lookup(session_id)
        session = stored.session
        result = None
        if stored.result is not None:
            if session.phase == "followup":
                result = {"performance_score": stored.result.performance_score}
            else:
                fv, rec = stored.result.features, stored.result.recommendation
                result = {
                    "features": {
                        "subject": fv.subject, "bla": fv.bla, "mla": fv.mla,
                        "hla": fv.hla, "avg_score": fv.avg_score,
                    },
                    "recommendation": {
                        "course": rec.course, "level": rec.level,
                        "confidence": rec.confidence,
                    },
                }
        return {
            "session_id": session.session_id,
            "student": session.student,
            "subject": session.subject,
            "phase": session.phase,
            "status": session.status,
            "questions": _question_payload(bank, session.question_ids),
            "answers": dict(session.answers),
            "result": result,
        }

    @app.post("/api/sessions/{session_id}/answers", status_code=204)
    def submit_answer(session_id: str, body: AnswerBody):
        stored = lookup(session_id)
        try:
            question = bank.by_id(body.question_id)
        except BankError as exc:
            raise ApiError(404, "unknown_question", str(exc)) from None
        if body.option >= len(question.options):
            raise ApiError(400, "invalid_option", f"option {body.option} out of range")
        try:
            store.record_answer(session_id, body.question_id, body.option)
        except QuestionNotAssignedError as exc:
            raise ApiError(404, "unknown_question", str(exc)) from None
        except DuplicateAnswerError as exc:
            raise ApiError(409, "duplicate_answer", str(exc)) from None
        except SessionClosedError as exc:
            raise ApiError(409, "session_closed", str(exc)) from None
        return Response(status_code=204)

    @app.post("/api/sessions/{session_id}/finalize")
    def finalize(session_id: str):
        stored = lookup(session_id)
        session = stored.session
        if session.status != "open":
            raise ApiError(409, "session_closed", f"session {session_id} is already scored")
        try:
            features = compute_features(session, bank)
        except IncompleteSessionError as exc:
            raise ApiError(422, "incomplete_session", str(exc),
                           {"unanswered": exc.question_ids}) from None
        features_payload = {
            "subject": features.subject, "bla": features.bla, "mla": features.mla,
            "hla": features.hla, "avg_score": features.avg_score,
        }
        if session.phase == "followup":
            store.finalize_followup(session_id, features)
            return {"features": features_payload, "performance_score": features.avg_score}
        try:
            model = registry.load(stored.model_path)
        except (OSError, ModelFormatError) as exc:
            raise ApiError(500, "model_unavailable", f"cannot load model: {exc}") from None
        try:
            recommendation = recommend(model, features)
        except RecommendationError as exc:
            raise ApiError(500, "corrupt_model", str(exc)) from None
        store.finalize_prerequisite(session_id, features, recommendation)
        return {
            "features": features_payload,
            "recommendation": {
                "course": recommendation.course,
                "level": recommendation.level,
                "confidence": recommendation.confidence,
            },
        }

    @app.post("/api/admin/train")
    def admin_train(body: TrainBody, request: Request):
        require_admin(request)
        if body.algorithm not in ALGORITHM_NAMES:
            raise ApiError(400, "unknown_algorithm",
                           f"algorithm must be one of {sorted(ALGORITHM_NAMES)}")
        try:
            dataset = load_csv(body.dataset_path)
        except OSError as exc:
            raise ApiError(400, "bad_dataset", f"cannot read dataset: {exc}") from None
        except DatasetError as exc:
            raise ApiError(400, "bad_dataset", str(exc)) from None
        try:
            spec = AlgorithmSpec(body.algorithm, params_from_dict(body.algorithm, body.params))
            report, model = evaluate_holdout_with_model(
                dataset, spec, split_seed=body.seed, training_seed=body.seed
            )
        except (EvaluationError, DatasetError, ValueError) as exc:
            raise ApiError(400, "training_failed", str(exc)) from None
        models_dir = config.data_dir / "models"
        models_dir.mkdir(parents=True, exist_ok=True)
        fingerprint = report.dataset_fingerprint.split(":", 1)[1][:8]
        artifact = models_dir / f"{body.algorithm}-seed{body.seed}-{fingerprint}.model.json"
        tmp = artifact.with_suffix(".tmp")
        save_model(model, tmp)
        os.replace(tmp, artifact)  # atomic publish, then atomic activation
        registry.swap_active(artifact)
        return {"model_path": str(artifact), "report": report.as_dict()}

    @app.get("/api/admin/compare")
    def admin_compare(request: Request, dataset: str = Query(...), seed: int = Query(0)):
        require_admin(request)
        try:
            data = load_csv(dataset)
        except OSError as exc:
            raise ApiError(400, "bad_dataset", f"cannot read dataset: {exc}") from None
        except DatasetError as exc:
            raise ApiError(400, "bad_dataset", str(exc)) from None
        report = compare_algorithms(data, split_seed=seed, training_seed=seed)
        return report.as_dict()

    if config.static_dir is not None and Path(config.static_dir).is_dir():
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="webui")

    return app
