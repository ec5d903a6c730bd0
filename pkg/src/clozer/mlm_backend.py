"""Masked-word predictors behind a uniform interface.

Two implementations: a deterministic tabular backend that replays stored
prediction rows (testing, offline reproduction), and a remote client that
talks to any inference server over a minimal JSON protocol:

    POST {endpoint}/predict     {"masked_text": str, "mask_token": str, "top_m": int}
        -> {"candidates": [{"token": str, "confidence": number}, ...]}
    POST {endpoint}/vocab_check {"word": str}
        -> {"in_vocab": bool}

Responses are validated against the prediction invariants (positive,
descending, unique, total mass <= 1) and never silently repaired; the one
documented exception is the re-sort of tabular rows stored out of order.
"""

from __future__ import annotations

import json
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import requests

from .text_corpus import MaskedSentence

SUM_TOLERANCE = 1e-6


class BackendError(Exception):
    """Base class for prediction failures."""


class NoPredictionRow(BackendError):
    """The tabular backend has no row for the requested sentence."""


class TransportError(BackendError):
    """The remote backend could not complete the HTTP exchange."""


class PredictionValidationError(BackendError):
    """A backend response violates a prediction invariant."""


@dataclass(frozen=True)
class MaskPrediction:
    """Candidate words with confidences, descending; rank is 1-based list position."""

    candidates: tuple[tuple[str, float], ...]
    truncation_m: int


@dataclass(frozen=True)
class BackendDescriptor:
    """Where predictions come from and how to ask for them."""

    kind: str  # "tabular" | "remote"
    model_name: str
    mask_token: str = "[MASK]"
    endpoint: str | None = None
    table_path: str | None = None
    top_m: int = 50

    def __post_init__(self) -> None:
        if self.kind not in ("tabular", "remote"):
            raise ValueError(f"unknown backend kind {self.kind!r}")
        if self.top_m < 2:
            raise ValueError("top_m must be at least 2")


def _validate_candidates(raw: Sequence[tuple[str, float]]) -> tuple[tuple[str, float], ...]:
    """Check the prediction invariants, raising on the first violation."""
    if not raw:
        raise PredictionValidationError("empty candidate list")
    words = set()
    total = 0.0
    previous = None
    for token, confidence in raw:
        if not isinstance(token, str) or not token:
            raise PredictionValidationError(f"invalid candidate token {token!r}")
        confidence = float(confidence)
        if confidence <= 0.0:
            raise PredictionValidationError(
                f"non-positive confidence {confidence} for token {token!r}"
            )
        if previous is not None and confidence > previous:
            raise PredictionValidationError(
                "confidences not sorted in descending order"
            )
        if token in words:
            raise PredictionValidationError(f"duplicate candidate token {token!r}")
        words.add(token)
        total += confidence
        previous = confidence
    if total > 1.0 + SUM_TOLERANCE:
        raise PredictionValidationError(f"confidence mass {total} exceeds 1")
    return tuple((token, float(confidence)) for token, confidence in raw)


class TabularBackend:
    """Replays stored prediction rows keyed by sentence id.

    Rows are loaded from a JSON-lines file, one object per masked
    sentence: {"key": sentence_id, "candidates": [[token, confidence], ...]}.
    Rows stored out of order are re-sorted descending on load; everything
    else must already satisfy the prediction invariants.
    """

    def __init__(self, table: dict[str, list[tuple[str, float]]], descriptor: BackendDescriptor):
        self.descriptor = descriptor
        self._table = {
            key: _validate_candidates(
                sorted(row, key=lambda cand: -cand[1])
            )
            for key, row in table.items()
        }

    @classmethod
    def load(
        cls,
        path: str | Path,
        model_name: str = "tabular",
        mask_token: str = "[MASK]",
        top_m: int = 50,
    ) -> "TabularBackend":
        table: dict[str, list[tuple[str, float]]] = {}
        with open(path, encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    row = json.loads(line)
                    key = row["key"]
                    candidates = [(str(t), float(c)) for t, c in row["candidates"]]
                except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                    raise BackendError(f"{path}: line {lineno}: malformed row ({exc})") from exc
                table[key] = candidates
        descriptor = BackendDescriptor(
            kind="tabular",
            model_name=model_name,
            mask_token=mask_token,
            table_path=str(path),
            top_m=top_m,
        )
        return cls(table, descriptor)

    def predict(self, masked: MaskedSentence) -> MaskPrediction:
        row = self._table.get(masked.sentence_id)
        if row is None:
            raise NoPredictionRow(f"no prediction row for sentence {masked.sentence_id!r}")
        return MaskPrediction(candidates=row, truncation_m=len(row))

    def vocab_check(self, word: str) -> bool:
        # A stored table has no vocabulary of its own; never skip on its account.
        return True


class RemoteBackend:
    """HTTP client for an inference server speaking the wire protocol above.

    Requests are idempotent and retried up to ``retries`` times with
    exponential backoff; at most ``max_in_flight`` requests run
    concurrently.
    """

    def __init__(
        self,
        descriptor: BackendDescriptor,
        timeout: float = 30.0,
        max_in_flight: int = 8,
        retries: int = 2,
        backoff: float = 0.25,
    ):
        if not descriptor.endpoint:
            raise ValueError("remote backend requires an endpoint")
        self.descriptor = descriptor
        self.timeout = timeout
        self.max_in_flight = max_in_flight
        self.retries = retries
        self.backoff = backoff
        self._slots = threading.Semaphore(max_in_flight)

    def _post(self, path: str, body: dict) -> dict:
        url = self.descriptor.endpoint.rstrip("/") + path
        last_error: Exception | None = None
        for attempt in range(self.retries + 1):
            if attempt:
                time.sleep(self.backoff * (2 ** (attempt - 1)))
            try:
                with self._slots:
                    response = requests.post(url, json=body, timeout=self.timeout)
                response.raise_for_status()
                return response.json()
            except (requests.RequestException, json.JSONDecodeError) as exc:
                last_error = exc
        raise TransportError(f"{url}: {last_error}") from last_error

    def predict(self, masked: MaskedSentence) -> MaskPrediction:
        text = masked.masked_text.replace(
            masked.mask_placeholder, self.descriptor.mask_token, 1
        )
        payload = self._post(
            "/predict",
            {
                "masked_text": text,
                "mask_token": self.descriptor.mask_token,
                "top_m": self.descriptor.top_m,
            },
        )
        raw = payload.get("candidates")
        if not isinstance(raw, list):
            raise PredictionValidationError("response missing candidates list")
        extracted = []
        for item in raw:
            if not isinstance(item, dict) or "token" not in item or "confidence" not in item:
                raise PredictionValidationError(f"malformed candidate entry {item!r}")
            extracted.append((item["token"], item["confidence"]))
        if len(extracted) > self.descriptor.top_m:
            raise PredictionValidationError(
                f"server returned {len(extracted)} candidates, requested {self.descriptor.top_m}"
            )
        candidates = _validate_candidates(extracted)
        return MaskPrediction(candidates=candidates, truncation_m=len(candidates))

    def vocab_check(self, word: str) -> bool:
        payload = self._post("/vocab_check", {"word": word})
        verdict = payload.get("in_vocab")
        if not isinstance(verdict, bool):
            raise PredictionValidationError("vocab_check response missing in_vocab bool")
        return verdict


Backend = TabularBackend | RemoteBackend


def make_backend(descriptor: BackendDescriptor) -> Backend:
    if descriptor.kind == "tabular":
        if not descriptor.table_path:
            raise ValueError("tabular backend requires table_path")
        return TabularBackend.load(
            descriptor.table_path,
            model_name=descriptor.model_name,
            mask_token=descriptor.mask_token,
            top_m=descriptor.top_m,
        )
    return RemoteBackend(descriptor)


def predict_mask(backend: Backend, masked: MaskedSentence) -> MaskPrediction:
    """Single prediction; see the backend classes for error semantics."""
    return backend.predict(masked)


def predict_batch(
    backend: Backend,
    masked_list: Sequence[MaskedSentence],
    max_workers: int | None = None,
) -> list[MaskPrediction | BackendError]:
    """Predict a batch, preserving order; failures are reported per item.

    Each element of the result is either a MaskPrediction or the
    BackendError raised for that item; one bad item never aborts the
    batch.
    """
    if not masked_list:
        return []

    def one(masked: MaskedSentence) -> MaskPrediction | BackendError:
        try:
            return backend.predict(masked)
        except BackendError as exc:
            return exc

    workers = max_workers or getattr(backend, "max_in_flight", 1)
    if workers <= 1 or len(masked_list) == 1:
        return [one(masked) for masked in masked_list]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, masked_list))
