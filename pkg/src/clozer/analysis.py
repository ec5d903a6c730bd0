"""Aggregate answer logs per question and correlate with gap scores.

Ratios are computed over first attempts only, so hint-assisted second
tries never leak into the correlation between gap score and correct
ratio.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .question_bank import Question


@dataclass(frozen=True)
class QuestionStats:
    question_id: str
    n_answers: int
    exact_ratio: float
    stem_ratio: float
    phi: float


def aggregate(bank: list[Question], answer_log: list[dict]) -> list[QuestionStats]:
    """Per-question correct ratios over first attempts.

    ``answer_log`` rows are answer-log records as dicts (see the service
    module for the file format). Every row must reference a bank
    question; questions nobody answered appear with n_answers == 0.
    """
    by_id = {q.question_id: q for q in bank}
    exact_counts: dict[str, int] = {q.question_id: 0 for q in bank}
    stem_counts: dict[str, int] = {q.question_id: 0 for q in bank}
    totals: dict[str, int] = {q.question_id: 0 for q in bank}
    for row in answer_log:
        question_id = row["question_id"]
        if question_id not in by_id:
            raise ValueError(f"answer log references unknown question {question_id!r}")
        if int(row["attempt_number"]) != 1:
            continue
        grade = row["grade"]
        totals[question_id] += 1
        exact_counts[question_id] += 1 if grade["exact"] else 0
        stem_counts[question_id] += 1 if grade["stem"] else 0
    stats = []
    for question in bank:
        qid = question.question_id
        n = totals[qid]
        stats.append(
            QuestionStats(
                question_id=qid,
                n_answers=n,
                exact_ratio=100.0 * exact_counts[qid] / n if n else 0.0,
                stem_ratio=100.0 * stem_counts[qid] / n if n else 0.0,
                phi=question.phi,
            )
        )
    return stats


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Sample Pearson correlation coefficient, clamped to [-1, 1]."""
    if len(xs) != len(ys):
        raise ValueError("series lengths differ")
    n = len(xs)
    if n < 2:
        raise ValueError("need at least two points")
    mean_x = math.fsum(xs) / n
    mean_y = math.fsum(ys) / n
    cov = math.fsum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    var_x = math.fsum((x - mean_x) ** 2 for x in xs)
    var_y = math.fsum((y - mean_y) ** 2 for y in ys)
    if var_x == 0.0 or var_y == 0.0:
        raise ValueError("zero variance series")
    r = cov / math.sqrt(var_x * var_y)
    return max(-1.0, min(1.0, r))


def export_scatter(stats: list[QuestionStats]) -> list[tuple[str, float, float, float, int]]:
    """Rows for the gap-score vs correct-ratio scatter, answered questions only."""
    return [
        (s.question_id, s.phi, s.exact_ratio, s.stem_ratio, s.n_answers)
        for s in stats
        if s.n_answers >= 1
    ]


def write_scatter_csv(stats: list[QuestionStats], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["question_id", "phi", "exact_ratio", "stem_ratio", "n"])
        for row in export_scatter(stats):
            writer.writerow(row)


def correlation_series(
    stats: list[QuestionStats], metric: str = "exact"
) -> tuple[list[float], list[float]]:
    """(phi, ratio) series for answered questions, ready for pearson()."""
    if metric not in ("exact", "stem"):
        raise ValueError(f"unknown metric {metric!r}")
    answered = [s for s in stats if s.n_answers >= 1]
    phis = [s.phi for s in answered]
    ratios = [s.exact_ratio if metric == "exact" else s.stem_ratio for s in answered]
    return phis, ratios
