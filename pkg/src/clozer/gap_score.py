"""Answer-uniqueness scoring for masked-word predictions.

The gap score of a candidate sentence multiplies two factors computed
from the predictor's descending confidence vector:

  * a discrete Gini coefficient over the tail slice that starts at the
    target word's rank, measuring how unevenly the remaining confidence
    mass is spread (0 = even spread, towards 1 = one candidate holds
    almost everything);
  * a reweighting factor, the target confidence divided by the sum of
    the top-k confidences, which shrinks the score when the target is
    not clearly ahead of its strongest competitor.

Scores fall in [0, 1); higher means the blank admits fewer alternative
answers. The Lorenz curve underneath the Gini coefficient is taken over
the ascending ordering of the values, the standard convention that keeps
the coefficient non-negative and drives it towards 1 - 1/N when the
top candidate monopolizes the mass.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .mlm_backend import MaskPrediction

DEFAULT_TOP_K = 2

# Positive reals in non-increasing order (rank 1 first); the functions
# below re-sort internally where a different ordering is required.
ConfidenceVector = Sequence[float]


@dataclass(frozen=True)
class GapScoreResult:
    """Gap score with its decomposition, for auditability.

    When the target is absent from the candidate list, ``found`` is False
    and phi is 0; gini, rw and target_rank are zeroed placeholders.
    """

    phi: float
    gini: float
    rw: float
    target_rank: int
    found: bool


@dataclass(frozen=True)
class RankedQuestions:
    """Sentence ids with their scores, ordered by phi descending.

    Ties are broken by sentence id ascending so rankings are total and
    reproducible.
    """

    entries: tuple[tuple[str, GapScoreResult], ...]


def lorenz(values: ConfidenceVector, i: int) -> float:
    """Cumulative share of the i smallest values.

    ``i`` ranges over 0..N inclusive; L(0) = 0 and L(N) = 1. The input
    may arrive in any order, ascending re-sorting happens here.
    """
    vals = np.asarray(values, dtype=np.float64)
    if vals.size == 0:
        raise ValueError("empty confidence vector")
    if not 0 <= i <= vals.size:
        raise ValueError(f"lorenz index {i} out of range 0..{vals.size}")
    asc = np.sort(vals)
    return float(asc[:i].sum() / asc.sum())


def gini(values: ConfidenceVector) -> float:
    """Discrete Gini coefficient of a positive confidence vector.

    Trapezoid form over the ascending Lorenz curve:
    1 - 2 * sum_i (1/N) * (L(i) + L(i-1)) / 2. The result lies in
    [0, 1 - 1/N]; a single-element vector scores 0.
    """
    vals = np.asarray(values, dtype=np.float64)
    if vals.size == 0:
        raise ValueError("empty confidence vector")
    asc = np.sort(vals)
    cum = np.cumsum(asc) / asc.sum()
    left = np.concatenate(([0.0], cum[:-1]))
    return float(1.0 - ((cum + left) / vals.size).sum())


def reweight(values: ConfidenceVector, j: int, k: int = DEFAULT_TOP_K) -> float:
    """Target confidence divided by the top-k confidence mass.

    ``values`` must be in descending order and ``j`` is the 1-based rank
    of the target. The result lies in (0, 1]; with k=2 it is >= 1/2 for
    a rank-1 target and <= 1/2 otherwise.
    """
    n = len(values)
    if k > n:
        raise ValueError(f"k={k} exceeds the {n} available candidates")
    if k < 2:
        raise ValueError("k must be at least 2")
    if not 1 <= j <= n:
        raise ValueError(f"target rank {j} out of range 1..{n}")
    return float(values[j - 1] / sum(values[:k]))


def gap(prediction: MaskPrediction, target: str, k: int = DEFAULT_TOP_K) -> GapScoreResult:
    """Score how uniquely ``target`` fits the blank of a prediction.

    The target is located by case-insensitive token equality; the Gini
    coefficient is computed over the slice from its rank to the end of
    the candidate list, the reweighting factor over the full list.
    Absence of the target is a valid result (phi 0, found False), not an
    error.
    """
    rank_j = 0
    for idx, (word, _) in enumerate(prediction.candidates, start=1):
        if word.lower() == target:
            rank_j = idx
            break
    if rank_j == 0:
        return GapScoreResult(phi=0.0, gini=0.0, rw=0.0, target_rank=0, found=False)
    values = [conf for _, conf in prediction.candidates]
    g = gini(values[rank_j - 1:])
    rw = reweight(values, rank_j, k)
    return GapScoreResult(phi=g * rw, gini=g, rw=rw, target_rank=rank_j, found=True)


def rank(results: Sequence[tuple[str, GapScoreResult]]) -> RankedQuestions:
    """Order scored sentences by phi descending, ties by id ascending."""
    seen: set[str] = set()
    for sentence_id, _ in results:
        if sentence_id in seen:
            raise ValueError(f"duplicate sentence id {sentence_id!r}")
        seen.add(sentence_id)
    ordered = sorted(results, key=lambda entry: (-entry[1].phi, entry[0]))
    return RankedQuestions(entries=tuple(ordered))
