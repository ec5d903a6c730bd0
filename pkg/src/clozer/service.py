"""Quiz delivery service: sessions, two-attempt answering, summaries.

The test protocol: questions are served one at a time in a fixed,
seeded order. A correct (exact) answer finalizes the question. In hint
mode a wrong first attempt earns the first letter of the answer and a
second attempt; otherwise, and on any second attempt, the question
finalizes. Skipping ahead is not allowed.

State is event-sourced: session creation records and every submitted
answer append to JSON-lines files under the data directory, and
replaying those files reconstructs the in-memory state exactly.
"""

from __future__ import annotations

import json
import random
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import analysis
from .grading import GradeResult, Hint, grade, make_hint
from .question_bank import Question, load_bank, select

SESSIONS_FILE = "sessions.jsonl"
ANSWERS_FILE = "answers.jsonl"


class ServiceError(Exception):
    """Service failure with a stable error code and an HTTP status."""

    def __init__(self, code: str, message: str, status: int = 400):
        super().__init__(message)
        self.code = code
        self.message = message
        self.status = status


@dataclass
class QuestionState:
    attempts_used: int = 0
    hint_issued: bool = False
    finalized: bool = False
    grades: list[GradeResult] = field(default_factory=list)


@dataclass
class QuizSession:
    session_id: str
    question_ids: list[str]
    hint_mode: bool
    created_at: str
    cursor: int = 0
    states: dict[str, QuestionState] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for question_id in self.question_ids:
            self.states.setdefault(question_id, QuestionState())

    @property
    def finished(self) -> bool:
        return self.cursor >= len(self.question_ids)

    @property
    def current_question_id(self) -> str | None:
        return None if self.finished else self.question_ids[self.cursor]


@dataclass(frozen=True)
class AnswerOutcome:
    grade: GradeResult
    hint: Hint | None
    finalized: bool


@dataclass(frozen=True)
class SessionSummary:
    n_questions: int
    exact_ratio: float
    stem_ratio: float
    with_hint_exact_ratio: float
    with_hint_stem_ratio: float


class QuizService:
    """Session lifecycle over an immutable question bank."""

    def __init__(self, bank: list[Question], data_dir: str | Path):
        self.bank = list(bank)
        self.by_id = {q.question_id: q for q in self.bank}
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.sessions: dict[str, QuizSession] = {}
        self._lock = threading.Lock()
        self._replay_existing()

    # -- persistence ----------------------------------------------------

    def _sessions_path(self) -> Path:
        return self.data_dir / SESSIONS_FILE

    def _answers_path(self) -> Path:
        return self.data_dir / ANSWERS_FILE

    def _append(self, path: Path, payload: dict) -> None:
        with open(path, "a", encoding="utf-8") as handle:
            handle.write(json.dumps(payload, ensure_ascii=False) + "\n")

    def _replay_existing(self) -> None:
        """Rebuild sessions from the append-only logs on startup."""
        sessions_path = self._sessions_path()
        if sessions_path.exists():
            with open(sessions_path, encoding="utf-8") as handle:
                for line in handle:
                    line = line.strip()
                    if not line:
                        continue
                    row = json.loads(line)
                    session = QuizSession(
                        session_id=row["session_id"],
                        question_ids=list(row["question_ids"]),
                        hint_mode=bool(row["hint_mode"]),
                        created_at=row["created_at"],
                    )
                    self.sessions[session.session_id] = session
        answers_path = self._answers_path()
        if answers_path.exists():
            with open(answers_path, encoding="utf-8") as handle:
                for line in handle:
                    line = line.strip()
                    if not line:
                        continue
                    row = json.loads(line)
                    session = self.sessions.get(row["session_id"])
                    if session is None:
                        continue
                    self._apply_answer(session, row["question_id"], row["raw_answer"])

    # -- state machine ---------------------------------------------------

    def _apply_answer(self, session: QuizSession, question_id: str, text: str) -> AnswerOutcome:
        """Advance the session by one submission; pure given bank + state."""
        if session.finished:
            raise ServiceError("finished", "session already finished", status=409)
        if question_id not in session.states:
            raise ServiceError(
                "unknown_question", f"question {question_id!r} is not part of the session", status=404
            )
        if question_id != session.current_question_id:
            raise ServiceError(
                "out_of_order",
                f"current question is {session.current_question_id!r}, not {question_id!r}",
                status=409,
            )
        state = session.states[question_id]
        if state.finalized:
            raise ServiceError("already_finalized", "question already finalized", status=409)

        truth = self.by_id[question_id].target_word
        attempt_number = state.attempts_used + 1
        result = grade(
            text, truth, used_hint=state.hint_issued, attempt_number=attempt_number
        )
        state.attempts_used = attempt_number
        state.grades.append(result)

        hint: Hint | None = None
        if result.exact or attempt_number >= 2:
            state.finalized = True
        elif session.hint_mode:
            hint = make_hint(truth)
            state.hint_issued = True
        else:
            state.finalized = True
        if state.finalized:
            session.cursor += 1
        return AnswerOutcome(grade=result, hint=hint, finalized=state.finalized)

    # -- public API -------------------------------------------------------

    def create_session(
        self,
        n_questions: int,
        min_gap: float = 0.0,
        hint_mode: bool = False,
        seed: int | None = None,
    ) -> QuizSession:
        if n_questions < 1:
            raise ServiceError("bad_request", "n_questions must be >= 1")
        qualifying = select(self.bank, min_gap=min_gap)
        if len(qualifying) < n_questions:
            raise ServiceError(
                "insufficient_questions",
                f"{len(qualifying)} available at min_gap {min_gap}, {n_questions} requested",
            )
        ids = [q.question_id for q in qualifying]
        rng = random.Random(seed)
        rng.shuffle(ids)
        chosen = ids[:n_questions]
        session = QuizSession(
            session_id=uuid.uuid4().hex,
            question_ids=chosen,
            hint_mode=hint_mode,
            created_at=datetime.now(timezone.utc).isoformat(),
        )
        with self._lock:
            self.sessions[session.session_id] = session
            self._append(
                self._sessions_path(),
                {
                    "session_id": session.session_id,
                    "question_ids": session.question_ids,
                    "hint_mode": session.hint_mode,
                    "min_gap": min_gap,
                    "n_questions": n_questions,
                    "seed": seed,
                    "created_at": session.created_at,
                },
            )
        return session

    def get_session(self, session_id: str) -> QuizSession:
        session = self.sessions.get(session_id)
        if session is None:
            raise ServiceError("unknown_session", f"no session {session_id!r}", status=404)
        return session

    def submit_answer(self, session_id: str, question_id: str, text: str) -> AnswerOutcome:
        with self._lock:
            session = self.get_session(session_id)
            outcome = self._apply_answer(session, question_id, text)
            self._append(
                self._answers_path(),
                {
                    "session_id": session_id,
                    "question_id": question_id,
                    "attempt_number": outcome.grade.attempt_number,
                    "raw_answer": text,
                    "grade": {"exact": outcome.grade.exact, "stem": outcome.grade.stem},
                    "hint_issued": outcome.grade.used_hint,
                    "timestamp": datetime.now(timezone.utc).isoformat(),
                },
            )
        return outcome

    def session_summary(self, session_id: str) -> SessionSummary:
        session = self.get_session(session_id)
        remaining = [qid for qid in session.question_ids if not session.states[qid].finalized]
        if remaining:
            raise ServiceError(
                "unfinished",
                "session has unfinished questions: " + ", ".join(remaining),
                status=409,
            )
        n = len(session.question_ids)
        first = [session.states[qid].grades[0] for qid in session.question_ids]
        exact_ratio = 100.0 * sum(1 for g in first if g.exact) / n
        stem_ratio = 100.0 * sum(1 for g in first if g.stem) / n
        # best-of-two: a question counts if any attempt matched
        any_exact = sum(
            1 for qid in session.question_ids if any(g.exact for g in session.states[qid].grades)
        )
        any_stem = sum(
            1 for qid in session.question_ids if any(g.stem for g in session.states[qid].grades)
        )
        return SessionSummary(
            n_questions=n,
            exact_ratio=exact_ratio,
            stem_ratio=stem_ratio,
            with_hint_exact_ratio=100.0 * any_exact / n,
            with_hint_stem_ratio=100.0 * any_stem / n,
        )

    def load_answer_log(self) -> list[dict]:
        path = self._answers_path()
        if not path.exists():
            return []
        rows = []
        with open(path, encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if line:
                    rows.append(json.loads(line))
        return rows

    def question_stats(self) -> list[analysis.QuestionStats]:
        return analysis.aggregate(self.bank, self.load_answer_log())


# -- HTTP layer ------------------------------------------------------------


class CreateSessionBody(BaseModel):
    n_questions: int
    min_gap: float = 0.0
    hint_mode: bool = False
    seed: int | None = None


class AnswerBody(BaseModel):
    question_id: str
    text: str


def _question_payload(question: Question) -> dict:
    return {
        "question_id": question.question_id,
        "masked_text": question.masked_text,
        "target_word": question.target_word,
        "phi": question.phi,
        "gini": question.gini,
        "rw": question.rw,
        "target_rank": question.target_rank,
        "top_candidates": [[w, c] for w, c in question.top_candidates],
        "source": question.source,
        "model_name": question.model_name,
        "created_at": question.created_at,
    }


def _grade_payload(result: GradeResult) -> dict:
    return {
        "exact": result.exact,
        "stem": result.stem,
        "normalized_answer": result.normalized_answer,
        "normalized_truth": result.normalized_truth,
        "used_hint": result.used_hint,
        "attempt_number": result.attempt_number,
    }


def _hint_payload(hint: Hint | None) -> dict | None:
    return None if hint is None else {"kind": hint.kind, "value": hint.value}


def create_app(service: QuizService) -> FastAPI:
    app = FastAPI(title="clozer quiz service")
    # the browser frontend may be hosted on a different origin
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(ServiceError)
    async def service_error_handler(request: Request, exc: ServiceError):
        return JSONResponse(
            status_code=exc.status,
            content={"error": {"code": exc.code, "message": exc.message}},
        )

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"error": {"code": "invalid_request", "message": str(exc)}},
        )

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "questions": len(service.bank)}

    @app.get("/questions")
    def questions(min_gap: float | None = None, target: str | None = None, limit: int | None = None):
        chosen = select(service.bank, min_gap=min_gap, target_word=target, limit=limit)
        return {"questions": [_question_payload(q) for q in chosen]}

    @app.post("/sessions")
    def create_session(body: CreateSessionBody):
        session = service.create_session(
            n_questions=body.n_questions,
            min_gap=body.min_gap,
            hint_mode=body.hint_mode,
            seed=body.seed,
        )
        return {
            "session_id": session.session_id,
            "n_questions": len(session.question_ids),
            "hint_mode": session.hint_mode,
            "created_at": session.created_at,
        }

    @app.get("/sessions/{session_id}/current")
    def current(session_id: str):
        session = service.get_session(session_id)
        answered = sum(1 for s in session.states.values() if s.finalized)
        correct = sum(
            1 for s in session.states.values() if s.finalized and any(g.exact for g in s.grades)
        )
        if session.finished:
            return {
                "session_id": session_id,
                "finished": True,
                "index": session.cursor,
                "total": len(session.question_ids),
                "answered": answered,
                "correct_so_far": correct,
                "question": None,
                "attempts_used": 0,
                "hint": None,
            }
        question_id = session.current_question_id
        state = session.states[question_id]
        question = service.by_id[question_id]
        hint = make_hint(question.target_word) if state.hint_issued else None
        return {
            "session_id": session_id,
            "finished": False,
            "index": session.cursor,
            "total": len(session.question_ids),
            "answered": answered,
            "correct_so_far": correct,
            "question": {
                "question_id": question_id,
                "masked_text": question.masked_text,
            },
            "attempts_used": state.attempts_used,
            "hint": _hint_payload(hint),
        }

    @app.post("/sessions/{session_id}/answer")
    def answer(session_id: str, body: AnswerBody):
        outcome = service.submit_answer(session_id, body.question_id, body.text)
        payload = {
            "grade": _grade_payload(outcome.grade),
            "hint": _hint_payload(outcome.hint),
            "finalized": outcome.finalized,
        }
        if outcome.finalized:
            payload["answer"] = service.by_id[body.question_id].target_word
        return payload

    @app.get("/sessions/{session_id}/summary")
    def summary(session_id: str):
        result = service.session_summary(session_id)
        return {
            "n_questions": result.n_questions,
            "exact_ratio": result.exact_ratio,
            "stem_ratio": result.stem_ratio,
            "with_hint_exact_ratio": result.with_hint_exact_ratio,
            "with_hint_stem_ratio": result.with_hint_stem_ratio,
        }

    @app.get("/stats/questions")
    def stats():
        return {
            "stats": [
                {
                    "question_id": s.question_id,
                    "phi": s.phi,
                    "n_answers": s.n_answers,
                    "exact_ratio": s.exact_ratio,
                    "stem_ratio": s.stem_ratio,
                }
                for s in service.question_stats()
            ]
        }

    return app


def build_app(bank_path: str | Path, data_dir: str | Path) -> FastAPI:
    """Convenience factory used by the CLI and external runners."""
    return create_app(QuizService(load_bank(bank_path), data_dir))
