"""Generation pipeline: extract, filter, mask, predict, score, select.

For each target word the corpus is narrowed to candidate sentences, each
candidate is masked and sent to the prediction backend, gap scores are
computed and the above-threshold questions are kept in descending score
order up to a per-target limit. Per-sentence failures are recorded in
the report and never abort the job.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone

from . import gap_score, mlm_backend, text_corpus
from .mlm_backend import Backend, BackendDescriptor, BackendError
from .question_bank import DISPLAY_BLANK, Question
from .text_corpus import ExtractionConfig, SentenceRecord

SKIP_OUT_OF_VOCAB = "OUT_OF_VOCAB"
SKIP_NO_PREDICTION = "NO_PREDICTION"
SKIP_TARGET_ABSENT = "TARGET_ABSENT"

TOP_CANDIDATES_KEPT = 5


@dataclass(frozen=True)
class GenerationJob:
    """Everything run_generation needs besides the corpus itself."""

    targets: list[str]
    extraction: ExtractionConfig
    backend: BackendDescriptor
    k: int = 2
    min_gap: float = 0.80
    per_target_limit: int = 20

    def __post_init__(self) -> None:
        if not 0.0 <= self.min_gap < 1.0:
            raise ValueError("min_gap must lie in [0, 1)")
        if self.per_target_limit < 1:
            raise ValueError("per_target_limit must be >= 1")


@dataclass
class TargetReport:
    target: str
    extracted: int = 0
    filtered: int = 0
    predicted: int = 0
    scored: int = 0
    selected: int = 0
    skipped: dict[str, int] = field(default_factory=dict)
    errors: list[str] = field(default_factory=list)
    seconds: float = 0.0

    def skip(self, reason: str, count: int = 1) -> None:
        self.skipped[reason] = self.skipped.get(reason, 0) + count


@dataclass
class GenerationReport:
    targets: list[TargetReport] = field(default_factory=list)
    seconds: float = 0.0

    def total_selected(self) -> int:
        return sum(t.selected for t in self.targets)


def _display_text(masked: text_corpus.MaskedSentence) -> str:
    return masked.masked_text.replace(masked.mask_placeholder, DISPLAY_BLANK, 1)


def run_generation(
    job: GenerationJob,
    corpus: list[SentenceRecord],
    backend: Backend | None = None,
    created_at: str | None = None,
) -> tuple[list[Question], GenerationReport]:
    """Produce ranked questions for every target in the job.

    Deterministic given a tabular backend and fixed configuration;
    ``created_at`` can be pinned for reproducible banks and defaults to
    the current UTC time.
    """
    if backend is None:
        backend = mlm_backend.make_backend(job.backend)
    if created_at is None:
        created_at = datetime.now(timezone.utc).isoformat()

    report = GenerationReport()
    questions: list[Question] = []
    job_start = time.monotonic()

    for target in job.targets:
        target_report = TargetReport(target=target)
        start = time.monotonic()

        extracted = text_corpus.extract_target_sentences(corpus, target)
        target_report.extracted = len(extracted)
        kept = text_corpus.filter_sentences(extracted, target, job.extraction)
        target_report.filtered = len(kept)

        if kept and not backend.vocab_check(target):
            target_report.skip(SKIP_OUT_OF_VOCAB, len(kept))
            target_report.seconds = time.monotonic() - start
            report.targets.append(target_report)
            continue

        # Repeated targets were either dropped by the filter or allowed
        # explicitly; in the latter case the first occurrence is masked.
        masked_list = [
            text_corpus.mask_sentence(
                record, target, occurrence=0, placeholder=job.extraction.mask_placeholder
            )
            for record in kept
        ]
        predictions = mlm_backend.predict_batch(backend, masked_list)

        scored: list[tuple[SentenceRecord, text_corpus.MaskedSentence, mlm_backend.MaskPrediction, gap_score.GapScoreResult]] = []
        for record, masked, outcome in zip(kept, masked_list, predictions):
            if isinstance(outcome, BackendError):
                target_report.skip(SKIP_NO_PREDICTION)
                target_report.errors.append(f"{record.id}: {outcome}")
                continue
            target_report.predicted += 1
            result = gap_score.gap(outcome, target, k=job.k)
            if not result.found:
                target_report.skip(SKIP_TARGET_ABSENT)
                continue
            target_report.scored += 1
            scored.append((record, masked, outcome, result))

        qualifying = [
            (record, masked, prediction, result)
            for record, masked, prediction, result in scored
            if result.phi >= job.min_gap
        ]
        ranking = gap_score.rank([(record.id, result) for record, _, _, result in qualifying])
        by_id = {record.id: (record, masked, prediction, result) for record, masked, prediction, result in qualifying}
        for sentence_id, result in ranking.entries[: job.per_target_limit]:
            record, masked, prediction, _ = by_id[sentence_id]
            questions.append(
                Question(
                    question_id=f"{target}@{sentence_id}",
                    masked_text=_display_text(masked),
                    target_word=target,
                    phi=result.phi,
                    gini=result.gini,
                    rw=result.rw,
                    target_rank=result.target_rank,
                    top_candidates=list(prediction.candidates[:TOP_CANDIDATES_KEPT]),
                    source={"doc": record.source[0], "sentence_id": record.id},
                    model_name=job.backend.model_name,
                    created_at=created_at,
                )
            )
            target_report.selected += 1

        target_report.seconds = time.monotonic() - start
        report.targets.append(target_report)

    report.seconds = time.monotonic() - job_start
    return questions, report


def sample_questions(questions: list[Question], n: int, seed: int) -> list[Question]:
    """Seeded random subset, original relative order preserved."""
    if n >= len(questions):
        return list(questions)
    rng = random.Random(seed)
    indices = sorted(rng.sample(range(len(questions)), n))
    return [questions[i] for i in indices]
