"""Corpus ingestion and target-sentence preparation.

Takes plaintext or JSON-lines documents, segments them into sentences,
extracts the sentences containing a target word, filters them down to
learner-appropriate candidates (length bounds, allowed-vocabulary list,
single target occurrence) and substitutes the target with a mask
placeholder.

Everything here is rule-based and deterministic: a regex word tokenizer
(alphabetic runs with internal apostrophes) and a punctuation-driven
sentence splitter with a fixed abbreviation list. No linguistic models
or resources are involved.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

DEFAULT_MASK_PLACEHOLDER = "[MASK]"

_TOKEN_RE = re.compile(r"[^\W\d_]+(?:['’][^\W\d_]+)*")

# Titles, ranks and common abbreviations whose trailing period never ends a
# sentence. Single letters (initials, "e.g."-style fragments) are exempted
# separately in the splitter.
_ABBREVIATIONS = frozenset(
    """
    mr mrs ms dr st prof rev fr sr jr hon gen col sgt capt lt cmdr maj
    etc vs inc ltd co corp dept univ fig al
    jan feb mar apr jun jul aug sep sept oct nov dec
    """.split()
)

_LAST_WORD_RE = re.compile(r"([^\W\d_]+)$")
_BLANK_LINE_RE = re.compile(r"\n[ \t\r]*\n+")
_WS_RUN_RE = re.compile(r"\s+")


class CorpusError(Exception):
    """Raised for unusable corpus inputs (bad encoding, malformed records)."""


@dataclass(frozen=True)
class SentenceRecord:
    """One corpus sentence with its tokens and provenance.

    ``tokens`` is always re-derivable as tokenize(text); ``source`` is the
    originating document id plus the byte offset of the sentence start.
    """

    id: str
    text: str
    tokens: tuple[str, ...]
    source: tuple[str, int]


@dataclass(frozen=True)
class WordList:
    """Allowed-vocabulary set; entries are lowercase single words."""

    words: frozenset[str]

    def __contains__(self, word: str) -> bool:
        return word in self.words

    @classmethod
    def load(cls, path: str | Path) -> "WordList":
        """Read a word list: one word per line, '#' lines are comments."""
        entries = set()
        with open(path, encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split()
                if len(parts) != 1:
                    raise CorpusError(f"{path}: line {lineno}: expected one word per line")
                entries.add(parts[0].lower())
        return cls(words=frozenset(entries))


@dataclass(frozen=True)
class MaskedSentence:
    """A sentence with one target occurrence replaced by a placeholder.

    Putting ``surface_form`` back at the placeholder reproduces the
    original sentence text exactly.
    """

    sentence_id: str
    target_word: str
    target_token_index: int
    masked_text: str
    surface_form: str
    mask_placeholder: str = DEFAULT_MASK_PLACEHOLDER

    def __post_init__(self) -> None:
        if self.masked_text.count(self.mask_placeholder) != 1:
            raise ValueError(
                f"masked text must contain the placeholder exactly once: {self.masked_text!r}"
            )

    def unmask(self) -> str:
        return self.masked_text.replace(self.mask_placeholder, self.surface_form, 1)


@dataclass(frozen=True)
class ExtractionConfig:
    """Filter parameters for candidate sentences."""

    min_tokens: int = 8
    max_tokens: int = 30
    word_list: WordList | None = None
    exempt_capitalized: bool = True
    drop_repeated_target: bool = True
    mask_placeholder: str = DEFAULT_MASK_PLACEHOLDER

    def __post_init__(self) -> None:
        if not 1 <= self.min_tokens <= self.max_tokens:
            raise ValueError("need 1 <= min_tokens <= max_tokens")


def tokenize(text: str) -> list[str]:
    """Word tokens: alphabetic runs, apostrophe-internal forms allowed."""
    return [match.group(0) for match in _TOKEN_RE.finditer(text)]


def _is_abbreviation(text: str, period_index: int) -> bool:
    match = _LAST_WORD_RE.search(text[:period_index])
    if not match:
        return False
    word = match.group(1)
    return len(word) == 1 or word.lower() in _ABBREVIATIONS


def _split_sentences(text: str) -> list[tuple[int, str]]:
    """Split one paragraph into (char_offset, normalized_text) sentences.

    A boundary is '.', '!' or '?' followed by whitespace and an uppercase
    letter, or by end of text; a period preceded by a known abbreviation
    or a single letter never splits.
    """
    sentences: list[tuple[int, str]] = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in ".!?":
            j = i + 1
            while j < n and text[j].isspace():
                j += 1
            at_end = j >= n
            boundary = (at_end or (j > i + 1 and text[j].isupper()))
            if boundary and ch == "." and _is_abbreviation(text, i):
                boundary = False
            if boundary:
                sentences.append((start, text[start : i + 1]))
                start = j
                i = j
                continue
        i += 1
    if start < n:
        sentences.append((start, text[start:]))

    normalized = []
    for offset, raw in sentences:
        stripped = raw.lstrip()
        offset += len(raw) - len(stripped)
        clean = _WS_RUN_RE.sub(" ", stripped.strip())
        if clean:
            normalized.append((offset, clean))
    return normalized


def _paragraph_spans(text: str) -> list[tuple[int, str]]:
    spans = []
    pos = 0
    for match in _BLANK_LINE_RE.finditer(text):
        if match.start() > pos:
            spans.append((pos, text[pos : match.start()]))
        pos = match.end()
    if pos < len(text):
        spans.append((pos, text[pos:]))
    return spans


def _byte_offsets(text: str, char_offsets: list[int]) -> list[int]:
    """Convert ascending char offsets to UTF-8 byte offsets in one pass."""
    result = []
    byte_pos = 0
    char_pos = 0
    for offset in char_offsets:
        byte_pos += len(text[char_pos:offset].encode("utf-8"))
        char_pos = offset
        result.append(byte_pos)
    return result


def _document_id(path: Path, root: Path | None) -> str:
    if root is not None:
        try:
            return path.relative_to(root).as_posix()
        except ValueError:
            pass
    return path.name


def _segment_document(doc_id: str, text: str) -> list[SentenceRecord]:
    offsets_and_texts: list[tuple[int, str]] = []
    for para_offset, para in _paragraph_spans(text):
        for offset, sentence in _split_sentences(para):
            offsets_and_texts.append((para_offset + offset, sentence))
    byte_offsets = _byte_offsets(text, [off for off, _ in offsets_and_texts])
    records = []
    for index, ((_, sentence), byte_off) in enumerate(zip(offsets_and_texts, byte_offsets)):
        tokens = tuple(tokenize(sentence))
        if not tokens:
            continue
        records.append(
            SentenceRecord(
                id=f"{doc_id}#{index}",
                text=sentence,
                tokens=tokens,
                source=(doc_id, byte_off),
            )
        )
    return records


def _ingest_jsonl(doc_id: str, raw: str) -> list[SentenceRecord]:
    records = []
    index = 0
    byte_pos = 0
    for lineno, line in enumerate(raw.splitlines(keepends=True), start=1):
        stripped = line.strip()
        if stripped:
            try:
                obj = json.loads(stripped)
                text = obj["text"]
            except (json.JSONDecodeError, TypeError, KeyError) as exc:
                raise CorpusError(f"{doc_id}: line {lineno}: bad record ({exc})") from exc
            if not isinstance(text, str):
                raise CorpusError(f"{doc_id}: line {lineno}: 'text' is not a string")
            for _, sentence in _split_sentences(text):
                tokens = tuple(tokenize(sentence))
                if not tokens:
                    continue
                records.append(
                    SentenceRecord(
                        id=f"{doc_id}#{index}",
                        text=sentence,
                        tokens=tokens,
                        source=(doc_id, byte_pos),
                    )
                )
                index += 1
        byte_pos += len(line.encode("utf-8"))
    return records


def ingest_corpus(
    paths: list[str | Path],
    format: str = "plaintext",
    root: Path | None = None,
) -> tuple[list[SentenceRecord], list[tuple[str, str]]]:
    """Segment documents into sentence records with stable ids.

    Plaintext documents are paragraph blocks separated by blank lines;
    JSON-lines documents carry one {"text": ...} object per line. Returns
    the records plus a list of (path, message) for files that could not
    be read; a bad file never discards the results of the good ones.
    """
    if format not in ("plaintext", "jsonl"):
        raise ValueError(f"unknown corpus format {format!r}")
    records: list[SentenceRecord] = []
    errors: list[tuple[str, str]] = []
    seen_docs: set[str] = set()
    for path in paths:
        path = Path(path)
        doc_id = _document_id(path, root)
        if doc_id in seen_docs:
            errors.append((str(path), f"duplicate document id {doc_id!r}"))
            continue
        seen_docs.add(doc_id)
        try:
            raw = path.read_bytes().decode("utf-8")
        except OSError as exc:
            errors.append((str(path), f"unreadable: {exc}"))
            continue
        except UnicodeDecodeError as exc:
            errors.append((str(path), f"invalid UTF-8 in {path}: {exc}"))
            continue
        try:
            if format == "jsonl":
                doc_records = _ingest_jsonl(doc_id, raw)
            else:
                doc_records = _segment_document(doc_id, raw)
        except CorpusError as exc:
            errors.append((str(path), str(exc)))
            continue
        records.extend(doc_records)
    return records, errors


def _target_occurrences(tokens: tuple[str, ...], target: str) -> list[int]:
    return [i for i, token in enumerate(tokens) if token.lower() == target]


def extract_target_sentences(
    corpus: list[SentenceRecord], target: str
) -> list[SentenceRecord]:
    """Sentences whose token list contains the target, order preserved.

    Matching is case-insensitive on whole tokens; substrings never match.
    """
    if not target or target != target.lower():
        raise ValueError("target must be a non-empty lowercase word")
    return [record for record in corpus if _target_occurrences(record.tokens, target)]


def filter_sentences(
    candidates: list[SentenceRecord], target: str, cfg: ExtractionConfig
) -> list[SentenceRecord]:
    """Apply length bounds, the word-list filter and the repeated-target rule.

    A capitalized token at a non-sentence-initial position is exempt from
    the word-list check when ``exempt_capitalized`` is set (proper nouns
    are not expected on learner vocabulary lists).
    """
    kept = []
    for record in candidates:
        count = len(record.tokens)
        if not cfg.min_tokens <= count <= cfg.max_tokens:
            continue
        if cfg.drop_repeated_target and len(_target_occurrences(record.tokens, target)) != 1:
            continue
        if cfg.word_list is not None:
            def allowed(position: int, token: str) -> bool:
                if cfg.exempt_capitalized and position > 0 and token[0].isupper():
                    return True
                return token.lower() in cfg.word_list
            if not all(allowed(i, token) for i, token in enumerate(record.tokens)):
                continue
        kept.append(record)
    return kept


def mask_sentence(
    record: SentenceRecord,
    target: str,
    occurrence: int = 0,
    placeholder: str = DEFAULT_MASK_PLACEHOLDER,
) -> MaskedSentence:
    """Replace the occurrence-th match of the target with the placeholder."""
    matches = [
        (token_index, match)
        for token_index, match in enumerate(_TOKEN_RE.finditer(record.text))
        if match.group(0).lower() == target
    ]
    if not 0 <= occurrence < len(matches):
        raise ValueError(
            f"occurrence {occurrence} out of range: {len(matches)} match(es) of "
            f"{target!r} in sentence {record.id!r}"
        )
    token_index, match = matches[occurrence]
    masked = record.text[: match.start()] + placeholder + record.text[match.end() :]
    return MaskedSentence(
        sentence_id=record.id,
        target_word=target,
        target_token_index=token_index,
        masked_text=masked,
        surface_form=match.group(0),
        mask_placeholder=placeholder,
    )
