"""Readers for the shared file formats and the split/balance helpers.

This package talks to the main pipeline only through its file formats:
  - five-gram dataset JSONL: {"tokens": [5 strings], "label": 0|1,
    "paragraph_id": str, "offset": int}
  - paragraph JSONL: {"id", "text", "source", "label"} (the label is optional
    in the format at large but required here, since this package does no
    phrase matching of its own)
  - phrase-pair lexicon CSV with header ``tortured,expected``
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class Sample:
    text: str
    label: int


def load_windows(path: str | Path) -> list[Sample]:
    """Five-gram dataset JSONL -> samples whose text is the joined window."""
    samples = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        rec = json.loads(line)
        samples.append(Sample(" ".join(rec["tokens"]), int(rec["label"])))
    if not samples:
        raise ValueError(f"{path} contains no records")
    return samples


def load_paragraphs(path: str | Path) -> list[Sample]:
    """Paragraph JSONL -> samples; every record must carry a label."""
    samples = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        rec = json.loads(line)
        if "label" not in rec:
            raise ValueError(
                f"{path}:{lineno}: paragraph record has no 'label'; "
                "this tool does not match phrases itself"
            )
        samples.append(Sample(str(rec["text"]), int(rec["label"])))
    if not samples:
        raise ValueError(f"{path} contains no records")
    return samples


def load_lexicon_pairs(path: str | Path) -> list[tuple[list[str], list[str]]]:
    """Lexicon CSV -> [(tortured tokens, expected tokens)], lowercased."""
    pairs = []
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header] != ["tortured", "expected"]:
            raise ValueError(f"{path} must start with header 'tortured,expected'")
        for row in reader:
            if len(row) != 2:
                continue
            tortured = row[0].lower().split()
            expected = row[1].lower().split()
            if tortured and expected:
                pairs.append((tortured, expected))
    if not pairs:
        raise ValueError(f"{path} contains no phrase pairs")
    return pairs


def split_random(samples: list[Sample], fraction: float, seed: int) -> tuple[list[Sample], list[Sample]]:
    """Seeded shuffle with a round-half-up cut, as in the main pipeline."""
    n = len(samples)
    if n < 2:
        raise ValueError(f"cannot split {n} samples")
    n_train = int(math.floor(fraction * n + 0.5))
    if n_train in (0, n):
        raise ValueError(f"degenerate split at fraction {fraction}")
    order = np.random.default_rng(seed).permutation(n)
    return [samples[i] for i in order[:n_train]], [samples[i] for i in order[n_train:]]


def balance(samples: list[Sample], seed: int) -> list[Sample]:
    """Downsample the majority class to the minority count, reshuffled."""
    by_class = {0: [s for s in samples if s.label == 0], 1: [s for s in samples if s.label == 1]}
    if not by_class[0] or not by_class[1]:
        raise ValueError("both classes must be present to balance")
    rng = np.random.default_rng(seed)
    minority = min(len(by_class[0]), len(by_class[1]))
    kept = []
    for cls in (0, 1):
        items = by_class[cls]
        if len(items) > minority:
            chosen = rng.choice(len(items), size=minority, replace=False)
            items = [items[i] for i in sorted(chosen)]
        kept.extend(items)
    order = rng.permutation(len(kept))
    return [kept[i] for i in order]


def majority_baseline_accuracy(labels: list[int]) -> float:
    """Accuracy of always predicting the most frequent class."""
    if not labels:
        raise ValueError("no labels")
    ones = sum(labels)
    return max(ones, len(labels) - ones) / len(labels)
