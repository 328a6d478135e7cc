"""Phrase lexicon and paragraph corpus: normalization, loading, matching, labeling.

File formats:
  - Lexicon CSV: UTF-8, header ``tortured,expected``, one phrase pair per row,
    fields optionally double-quoted.
  - Paragraph JSONL: one object per line,
    ``{"id": str, "text": str, "source": str, "label": 0|1 (optional)}``.
    Labels are always recomputed from matching; a stored label that disagrees
    is logged and overridden.
"""

from __future__ import annotations

import csv
import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

from .errors import LoadError

logger = logging.getLogger(__name__)

# A token is a maximal run of letters/digits, optionally joined by internal
# single hyphens ("state-of-the-art" is one token). Everything else separates.
_TOKEN_RE = re.compile(r"[^\W_]+(?:-[^\W_]+)*", re.UNICODE)

MAX_PHRASE_TOKENS = 5


def normalize(raw_text: str) -> list[str]:
    """Lowercase *raw_text* and split it into tokens.

    Deterministic; empty input yields an empty list.
    """
    return _TOKEN_RE.findall(raw_text.lower())


@dataclass(frozen=True)
class PhrasePair:
    """A tortured phrase and its expected (legitimate) counterpart."""

    tortured: tuple[str, ...]
    expected: tuple[str, ...]
    source_id: str = ""


class Occurrence(NamedTuple):
    """One contiguous match of a lexicon phrase inside a token sequence."""

    pair_index: int
    offset: int
    length: int


@dataclass
class LexiconReport:
    """Counts from one lexicon load."""

    rows_total: int = 0
    kept: int = 0
    rejected_too_long: int = 0
    rejected_empty: int = 0
    rejected_identical: int = 0
    duplicates_dropped: int = 0
    malformed_rows: int = 0


@dataclass(frozen=True)
class Lexicon:
    """Deduplicated phrase pairs plus a first-token index for matching."""

    pairs: tuple[PhrasePair, ...]
    match_index: dict[str, tuple[int, ...]]
    report: LexiconReport = field(default_factory=LexiconReport)

    def max_tortured_length(self) -> int:
        return max(len(p.tortured) for p in self.pairs)


def build_lexicon(pairs: list[PhrasePair], report: LexiconReport | None = None) -> Lexicon:
    """Index already-validated pairs by their first tortured token."""
    index: dict[str, list[int]] = {}
    for i, pair in enumerate(pairs):
        index.setdefault(pair.tortured[0], []).append(i)
    frozen = {tok: tuple(ids) for tok, ids in index.items()}
    return Lexicon(pairs=tuple(pairs), match_index=frozen, report=report or LexiconReport())


def load_lexicon(path: str | Path) -> Lexicon:
    """Load a phrase-pair lexicon from CSV.

    Rows are normalized; rows whose tortured or expected side is empty,
    longer than five tokens, or identical on both sides are rejected with a
    diagnostic. Duplicate tortured phrases keep the first occurrence. A file
    with zero valid rows is fatal.
    """
    path = Path(path)
    try:
        fh = path.open(newline="", encoding="utf-8")
    except OSError as exc:
        raise LoadError(f"cannot open lexicon {path}: {exc}") from exc

    report = LexiconReport()
    pairs: list[PhrasePair] = []
    seen: dict[tuple[str, ...], int] = {}
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise LoadError(f"lexicon {path} is empty")
        if [h.strip().lower() for h in header] != ["tortured", "expected"]:
            raise LoadError(
                f"lexicon {path} must start with header 'tortured,expected', got {header!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            report.rows_total += 1
            if len(row) != 2:
                report.malformed_rows += 1
                logger.warning("%s:%d: expected 2 fields, got %d; row skipped", path, lineno, len(row))
                continue
            tortured = tuple(normalize(row[0]))
            expected = tuple(normalize(row[1]))
            if not tortured or not expected:
                report.rejected_empty += 1
                logger.warning("%s:%d: empty phrase after normalization; row skipped", path, lineno)
                continue
            if len(tortured) > MAX_PHRASE_TOKENS or len(expected) > MAX_PHRASE_TOKENS:
                report.rejected_too_long += 1
                logger.warning("%s:%d: phrase longer than %d tokens; row skipped", path, lineno, MAX_PHRASE_TOKENS)
                continue
            if tortured == expected:
                report.rejected_identical += 1
                logger.warning("%s:%d: tortured equals expected; row skipped", path, lineno)
                continue
            if tortured in seen:
                report.duplicates_dropped += 1
                logger.warning("%s:%d: duplicate tortured phrase %r; first occurrence kept", path, lineno, " ".join(tortured))
                continue
            seen[tortured] = len(pairs)
            pairs.append(PhrasePair(tortured=tortured, expected=expected, source_id=f"{path.name}:{lineno}"))

    if not pairs:
        raise LoadError(f"lexicon {path} contains no valid phrase pairs")
    report.kept = len(pairs)
    return build_lexicon(pairs, report)


def match_phrases(tokens: list[str] | tuple[str, ...], lexicon: Lexicon) -> list[Occurrence]:
    """Find every contiguous occurrence of a lexicon tortured phrase.

    All matches are reported, including overlapping ones; a longer match does
    not suppress shorter ones. Ordered by (offset, pair index).
    """
    out: list[Occurrence] = []
    n = len(tokens)
    for offset, tok in enumerate(tokens):
        for pair_index in lexicon.match_index.get(tok, ()):
            phrase = lexicon.pairs[pair_index].tortured
            end = offset + len(phrase)
            if end <= n and tuple(tokens[offset:end]) == phrase:
                out.append(Occurrence(pair_index, offset, len(phrase)))
    return out


@dataclass(frozen=True)
class Paragraph:
    """A normalized paragraph, labeled by lexicon matching."""

    id: str
    raw_text: str
    tokens: tuple[str, ...]
    label: int
    occurrences: tuple[Occurrence, ...]
    source: str = ""


def make_paragraph(pid: str, raw_text: str, lexicon: Lexicon, source: str = "") -> Paragraph:
    tokens = tuple(normalize(raw_text))
    occurrences = tuple(match_phrases(tokens, lexicon))
    return Paragraph(
        id=pid,
        raw_text=raw_text,
        tokens=tokens,
        label=1 if occurrences else 0,
        occurrences=occurrences,
        source=source,
    )


def load_paragraphs(path: str | Path, lexicon: Lexicon) -> list[Paragraph]:
    """Load paragraphs from JSONL, matching and labeling each record.

    Malformed lines are skipped with a diagnostic. A stored ``label`` that
    disagrees with matching is logged; the matching result wins.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise LoadError(f"cannot read paragraphs {path}: {exc}") from exc

    paragraphs: list[Paragraph] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            logger.warning("%s:%d: bad JSON (%s); line skipped", path, lineno, exc)
            continue
        if not isinstance(record, dict) or "id" not in record or "text" not in record:
            logger.warning("%s:%d: record missing 'id' or 'text'; line skipped", path, lineno)
            continue
        para = make_paragraph(
            str(record["id"]), str(record["text"]), lexicon, source=str(record.get("source", ""))
        )
        stored = record.get("label")
        if stored is not None and int(stored) != para.label:
            logger.warning(
                "%s:%d: stored label %s disagrees with matched label %d for %r; matching wins",
                path, lineno, stored, para.label, para.id,
            )
        paragraphs.append(para)
    return paragraphs
