"""Answer grading: exact match, stem match, first-letter hints.

Both metrics are case-insensitive. Exact match compares the trimmed,
lowercased answer against the ground truth; stem match compares their
English stems, so inflected forms of the target ("turns" for "turn")
still earn stem credit. An exact match always implies a stem match.

Answers containing internal whitespace grade false on both metrics: the
blank holds a single word.
"""

from __future__ import annotations

from dataclasses import dataclass

from .stemmer import stem


@dataclass(frozen=True)
class GradeResult:
    exact: bool
    stem: bool
    normalized_answer: str
    normalized_truth: str
    used_hint: bool = False
    attempt_number: int = 1


@dataclass(frozen=True)
class Hint:
    kind: str
    value: str


def normalize(text: str) -> str:
    """Trim surrounding whitespace and lowercase; nothing else is touched."""
    return text.strip().lower()


def grade(
    answer: str,
    truth: str,
    used_hint: bool = False,
    attempt_number: int = 1,
) -> GradeResult:
    """Grade one submitted answer against the ground-truth word."""
    if not truth:
        raise ValueError("truth must be non-empty")
    normalized_answer = normalize(answer)
    normalized_truth = normalize(truth)
    if not normalized_answer or any(ch.isspace() for ch in normalized_answer):
        exact = stem_match = False
    else:
        exact = normalized_answer == normalized_truth
        stem_match = exact or stem(normalized_answer) == stem(normalized_truth)
    return GradeResult(
        exact=exact,
        stem=stem_match,
        normalized_answer=normalized_answer,
        normalized_truth=normalized_truth,
        used_hint=used_hint,
        attempt_number=attempt_number,
    )


def make_hint(truth: str) -> Hint:
    """First-letter hint, lowercased."""
    if not truth:
        raise ValueError("truth must be non-empty")
    return Hint(kind="first_letter", value=truth[0].lower())


def session_score(grades: list[GradeResult]) -> tuple[float, float]:
    """Percent of exact and stem matches over a list of final grades."""
    if not grades:
        raise ValueError("cannot score an empty grade list")
    n = len(grades)
    exact_ratio = 100.0 * sum(1 for g in grades if g.exact) / n
    stem_ratio = 100.0 * sum(1 for g in grades if g.stem) / n
    return exact_ratio, stem_ratio
