"""Five-gram dataset construction.

Windows slide with step 1 over the whole paragraph token stream. A window is
positive exactly when a complete tortured phrase lies inside it. Dataset
JSONL format: ``{"tokens": [5 strings], "label": 0|1, "paragraph_id": str,
"offset": int}``.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

from .corpus import Lexicon, Paragraph, match_phrases
from .errors import LoadError

logger = logging.getLogger(__name__)

DEFAULT_WINDOW = 5


@dataclass(frozen=True)
class LabeledWindow:
    """A fixed-length token window with its binary label and provenance."""

    tokens: tuple[str, ...]
    label: int
    paragraph_id: str
    offset: int
    matched_pair: int | None = None


def _leftmost_shortest(contained: list) -> int:
    # Provenance rule for multi-phrase windows: leftmost occurrence, ties
    # broken by shorter phrase.
    best = min(contained, key=lambda occ: (occ.offset, occ.length, occ.pair_index))
    return best.pair_index


def extract_windows(paragraph: Paragraph, lexicon: Lexicon, n: int = DEFAULT_WINDOW) -> list[LabeledWindow]:
    """All length-*n* windows of the paragraph, labeled by phrase containment."""
    if n < lexicon.max_tortured_length():
        raise ValueError(
            f"window size {n} is smaller than the longest lexicon phrase "
            f"({lexicon.max_tortured_length()} tokens)"
        )
    tokens = paragraph.tokens
    windows: list[LabeledWindow] = []
    for start in range(len(tokens) - n + 1):
        end = start + n
        contained = [
            occ for occ in paragraph.occurrences
            if occ.offset >= start and occ.offset + occ.length <= end
        ]
        windows.append(
            LabeledWindow(
                tokens=tokens[start:end],
                label=1 if contained else 0,
                paragraph_id=paragraph.id,
                offset=start,
                matched_pair=_leftmost_shortest(contained) if contained else None,
            )
        )
    return windows


@dataclass
class DatasetSummary:
    total: int = 0
    positive: int = 0
    negative: int = 0
    negatives_from_label0_paragraphs: int = 0
    negatives_from_label1_paragraphs: int = 0
    short_paragraphs: int = 0


def build_dataset(
    paragraphs: list[Paragraph], lexicon: Lexicon, n: int = DEFAULT_WINDOW
) -> tuple[list[LabeledWindow], DatasetSummary]:
    """Concatenate per-paragraph windows in deterministic order with counts.

    Negatives come both from label-0 paragraphs and from non-covering windows
    of label-1 paragraphs; the summary reports the breakdown. An empty result
    is fatal.
    """
    if not paragraphs:
        raise LoadError("no paragraphs to build a dataset from")
    summary = DatasetSummary()
    windows: list[LabeledWindow] = []
    for para in paragraphs:
        per_para = extract_windows(para, lexicon, n)
        if not per_para:
            summary.short_paragraphs += 1
            continue
        for w in per_para:
            if w.label == 1:
                summary.positive += 1
            elif para.label == 1:
                summary.negatives_from_label1_paragraphs += 1
            else:
                summary.negatives_from_label0_paragraphs += 1
        windows.extend(per_para)
    summary.total = len(windows)
    summary.negative = summary.total - summary.positive
    if not windows:
        raise LoadError(
            f"dataset is empty: all {len(paragraphs)} paragraphs are shorter than {n} tokens"
        )
    return windows, summary


def save_dataset(windows: list[LabeledWindow], path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for w in windows:
            fh.write(json.dumps({
                "tokens": list(w.tokens),
                "label": w.label,
                "paragraph_id": w.paragraph_id,
                "offset": w.offset,
            }) + "\n")


def load_dataset(path: str | Path, lexicon: Lexicon | None = None) -> list[LabeledWindow]:
    """Read a dataset JSONL file.

    The file format carries no phrase provenance; when *lexicon* is given,
    ``matched_pair`` is recomputed for positive windows (same leftmost-then-
    shortest rule as extraction). Positives that no longer match any lexicon
    phrase are kept but logged.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise LoadError(f"cannot read dataset {path}: {exc}") from exc

    windows: list[LabeledWindow] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            tokens = tuple(str(t) for t in rec["tokens"])
            label = int(rec["label"])
            pid = str(rec["paragraph_id"])
            offset = int(rec["offset"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            logger.warning("%s:%d: bad dataset record (%s); line skipped", path, lineno, exc)
            continue
        matched: int | None = None
        if lexicon is not None and label == 1:
            contained = match_phrases(tokens, lexicon)
            if contained:
                matched = _leftmost_shortest(contained)
            else:
                logger.warning(
                    "%s:%d: positive window matches no lexicon phrase", path, lineno
                )
        windows.append(LabeledWindow(tokens, label, pid, offset, matched))
    if not windows:
        raise LoadError(f"dataset {path} contains no records")
    return windows
