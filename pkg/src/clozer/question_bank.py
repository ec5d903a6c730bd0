"""Durable storage for generated questions.

Banks are JSON-lines files, one question per line, written atomically
(temp file + rename). Floats round-trip at full precision and unknown
fields survive a load/save cycle, so banks can be annotated by other
tools without loss.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

DISPLAY_BLANK = "(____)"

_FIELDS = (
    "question_id",
    "masked_text",
    "target_word",
    "phi",
    "gini",
    "rw",
    "target_rank",
    "top_candidates",
    "source",
    "model_name",
    "created_at",
)


class BankError(Exception):
    """Raised for malformed or inconsistent bank files."""


@dataclass
class Question:
    """One rankable open cloze question with its scoring audit trail."""

    question_id: str
    masked_text: str  # human display form, blank shown as DISPLAY_BLANK
    target_word: str
    phi: float
    gini: float
    rw: float
    target_rank: int
    top_candidates: list[tuple[str, float]]
    source: dict  # {"doc": document id, "sentence_id": sentence id}
    model_name: str
    created_at: str
    extras: dict = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {name: getattr(self, name) for name in _FIELDS}
        payload["top_candidates"] = [[w, c] for w, c in self.top_candidates]
        payload.update(self.extras)
        return json.dumps(payload, ensure_ascii=False)

    @classmethod
    def from_dict(cls, payload: dict) -> "Question":
        missing = [name for name in _FIELDS if name not in payload]
        if missing:
            raise BankError(f"missing fields: {', '.join(missing)}")
        extras = {k: v for k, v in payload.items() if k not in _FIELDS}
        return cls(
            question_id=payload["question_id"],
            masked_text=payload["masked_text"],
            target_word=payload["target_word"],
            phi=float(payload["phi"]),
            gini=float(payload["gini"]),
            rw=float(payload["rw"]),
            target_rank=int(payload["target_rank"]),
            top_candidates=[(w, float(c)) for w, c in payload["top_candidates"]],
            source=payload["source"],
            model_name=payload["model_name"],
            created_at=payload["created_at"],
            extras=extras,
        )


def save_bank(questions: list[Question], path: str | Path) -> None:
    """Write the bank atomically; the old file survives a failed write."""
    path = Path(path)
    payload = "".join(q.to_json() + "\n" for q in questions)
    fd, tmp_name = tempfile.mkstemp(dir=str(path.parent), prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(payload)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def load_bank(path: str | Path) -> list[Question]:
    questions = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                payload = json.loads(line)
                question = Question.from_dict(payload)
            except (json.JSONDecodeError, BankError, TypeError, ValueError, KeyError) as exc:
                raise BankError(f"{path}: line {lineno}: {exc}") from exc
            if question.question_id in seen:
                raise BankError(
                    f"{path}: line {lineno}: duplicate question_id {question.question_id!r}"
                )
            seen.add(question.question_id)
            questions.append(question)
    return questions


def select(
    bank: list[Question],
    min_gap: float | None = None,
    target_word: str | None = None,
    limit: int | None = None,
    order: str = "phi_desc",
) -> list[Question]:
    """Filter and order questions; pure function of bank and filter."""
    if order not in ("phi_desc", "phi_asc"):
        raise ValueError(f"unknown order {order!r}")
    chosen = [
        q
        for q in bank
        if (min_gap is None or q.phi >= min_gap)
        and (target_word is None or q.target_word == target_word)
    ]
    reverse = order == "phi_desc"
    chosen.sort(key=lambda q: ((-q.phi if reverse else q.phi), q.question_id))
    if limit is not None:
        chosen = chosen[:limit]
    return chosen
