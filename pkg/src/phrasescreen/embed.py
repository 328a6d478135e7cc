"""Word-embedding tables and cosine scoring of two-token phrases.

Embedding text format (GloVe-compatible): ``<token> <f1> ... <fD>``, UTF-8,
space-separated, no header. Out-of-vocabulary tokens are padded with the zero
vector, so a phrase with one unknown token scores 0 and a phrase with both
unknown scores 0 and is uninformative.
"""

from __future__ import annotations

import logging
import statistics
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import Lexicon
from .errors import ConfigError, LoadError, PhraseLengthError

logger = logging.getLogger(__name__)

# Shipped thresholds: the two median scores reported for the public 200-d
# static table (tortured .12, expected .30).
DEFAULT_T_LOW = 0.12
DEFAULT_T_HIGH = 0.30

VERDICT_TORTURED = "tortured"
VERDICT_REVIEW = "needs-review"
VERDICT_LEGITIMATE = "legitimate"


@dataclass(frozen=True)
class EmbeddingTable:
    dim: int
    vectors: dict[str, np.ndarray]
    kind: str = "static"  # "static" or "contextual-export"
    skipped_lines: int = 0
    duplicate_tokens: int = 0

    def __len__(self) -> int:
        return len(self.vectors)

    def __contains__(self, token: str) -> bool:
        return token in self.vectors


def load_embeddings(
    path: str | Path, expected_dim: int | None = None, kind: str = "static"
) -> EmbeddingTable:
    """Load a token → vector table from a GloVe-format text file.

    The dimension is inferred from the first parsable line and, when
    *expected_dim* is given, must match it (fatal otherwise). Lines with the
    wrong number of fields, unparsable or non-finite floats are skipped and
    counted. Duplicate tokens keep their first vector.
    """
    path = Path(path)
    try:
        fh = path.open(encoding="utf-8")
    except OSError as exc:
        raise LoadError(f"cannot open embeddings {path}: {exc}") from exc

    dim: int | None = None
    vectors: dict[str, np.ndarray] = {}
    skipped = 0
    duplicates = 0
    with fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split(" ")
            if len(parts) < 2 or not parts[0]:
                if line.strip():
                    skipped += 1
                    logger.warning("%s:%d: malformed embedding line skipped", path, lineno)
                continue
            token = parts[0]
            try:
                values = np.array([float(p) for p in parts[1:] if p != ""], dtype=np.float64)
            except ValueError:
                skipped += 1
                logger.warning("%s:%d: unparsable float; line skipped", path, lineno)
                continue
            if not np.isfinite(values).all() or values.size == 0:
                skipped += 1
                logger.warning("%s:%d: non-finite or empty vector; line skipped", path, lineno)
                continue
            if dim is None:
                dim = int(values.size)
                if expected_dim is not None and dim != expected_dim:
                    raise LoadError(
                        f"embeddings {path} have dimension {dim}, expected {expected_dim}"
                    )
            if values.size != dim:
                skipped += 1
                logger.warning(
                    "%s:%d: vector has %d components, table dimension is %d; line skipped",
                    path, lineno, values.size, dim,
                )
                continue
            if token in vectors:
                duplicates += 1
                logger.warning("%s:%d: duplicate token %r; first vector kept", path, lineno, token)
                continue
            vectors[token] = values

    if dim is None:
        raise LoadError(f"embeddings {path} contain no parsable vectors")
    return EmbeddingTable(
        dim=dim, vectors=vectors, kind=kind, skipped_lines=skipped, duplicate_tokens=duplicates
    )


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """dot(u, v) / (|u| |v|); defined as 0 when either norm is 0.

    Inputs are rescaled by their largest component before squaring, so
    extreme magnitudes cannot underflow or overflow; output is clamped to
    [-1, 1].
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"vector lengths differ: {u.shape} vs {v.shape}")
    mu = float(np.max(np.abs(u))) if u.size else 0.0
    mv = float(np.max(np.abs(v))) if v.size else 0.0
    if mu == 0.0 or mv == 0.0:
        return 0.0
    us = u / mu
    vs = v / mv
    c = float(np.dot(us, vs) / (np.linalg.norm(us) * np.linalg.norm(vs)))
    return max(-1.0, min(1.0, c))


@dataclass(frozen=True)
class PhraseScore:
    phrase: tuple[str, str]
    score: float
    oov_flags: tuple[bool, bool]

    @property
    def both_oov(self) -> bool:
        return self.oov_flags[0] and self.oov_flags[1]


def score_phrase(phrase, table: EmbeddingTable) -> PhraseScore:
    """Cosine similarity of a two-token phrase, with zero-padding for OOV."""
    phrase = tuple(phrase)
    if len(phrase) != 2:
        raise PhraseLengthError(
            f"only two-token phrases are scoreable, got {len(phrase)}: {' '.join(phrase)!r}"
        )
    zero = np.zeros(table.dim, dtype=np.float64)
    a = table.vectors.get(phrase[0])
    b = table.vectors.get(phrase[1])
    flags = (a is None, b is None)
    return PhraseScore(
        phrase=(phrase[0], phrase[1]),
        score=cosine(a if a is not None else zero, b if b is not None else zero),
        oov_flags=flags,
    )


@dataclass(frozen=True)
class PhraseRow:
    """One scored phrase, for the per-phrase CSV behind the comparison plot."""

    phrase: str
    kind: str  # "tortured" or "expected"
    score: float
    oov_a: bool
    oov_b: bool
    retained: bool


@dataclass
class ComparisonReport:
    tortured_scores: list[float] = field(default_factory=list)
    expected_scores: list[float] = field(default_factory=list)
    median_tortured: float | None = None
    median_expected: float | None = None
    discarded_count: int = 0
    skipped_non_bigram: int = 0
    degenerate: bool = False
    rows: list[PhraseRow] = field(default_factory=list)


def compare_lexicon(lexicon: Lexicon, table: EmbeddingTable) -> ComparisonReport:
    """Score every two-token tortured and expected phrase and compare medians.

    Scores <= 0 are discarded from both lists before the medians, mirroring
    the static-embedding filtering rule; discards stay in the per-phrase rows.
    The report is flagged degenerate when either filtered list has fewer than
    two scores.
    """
    report = ComparisonReport()
    for pair in lexicon.pairs:
        for kind, phrase in (("tortured", pair.tortured), ("expected", pair.expected)):
            if len(phrase) != 2:
                report.skipped_non_bigram += 1
                continue
            ps = score_phrase(phrase, table)
            retained = ps.score > 0.0
            report.rows.append(
                PhraseRow(
                    phrase=" ".join(phrase),
                    kind=kind,
                    score=ps.score,
                    oov_a=ps.oov_flags[0],
                    oov_b=ps.oov_flags[1],
                    retained=retained,
                )
            )
            if not retained:
                report.discarded_count += 1
            elif kind == "tortured":
                report.tortured_scores.append(ps.score)
            else:
                report.expected_scores.append(ps.score)

    if report.tortured_scores:
        report.median_tortured = float(statistics.median(report.tortured_scores))
    if report.expected_scores:
        report.median_expected = float(statistics.median(report.expected_scores))
    report.degenerate = len(report.tortured_scores) < 2 or len(report.expected_scores) < 2
    return report


def threshold_classify(
    score: PhraseScore, t_low: float = DEFAULT_T_LOW, t_high: float = DEFAULT_T_HIGH
) -> str:
    """Three-way verdict: tortured below t_low, legitimate above t_high,
    needs-review between; a both-OOV score of 0 is always needs-review."""
    if t_low > t_high:
        raise ConfigError(f"t_low ({t_low}) must not exceed t_high ({t_high})")
    if score.both_oov:
        return VERDICT_REVIEW
    if score.score < t_low:
        return VERDICT_TORTURED
    if score.score > t_high:
        return VERDICT_LEGITIMATE
    return VERDICT_REVIEW
