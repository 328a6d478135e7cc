"""Document scanning: classify sliding windows and merge flagged spans.

A finding is a maximal run of overlapping/adjacent positively classified
windows, reported as a token span with the mean decision score of its member
windows. When an embedding table is supplied, every adjacent token bigram
inside a flagged span gets a cosine verdict attached.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import classify, vectorize
from .embed import DEFAULT_T_HIGH, DEFAULT_T_LOW, EmbeddingTable, score_phrase, threshold_classify
from .ngram import DEFAULT_WINDOW


@dataclass
class Finding:
    start: int
    end: int  # exclusive token offset
    text: str
    decision_score: float
    bigram_verdicts: list[dict] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "doc_offset_tokens": [self.start, self.end],
            "text": self.text,
            "decision_score": self.decision_score,
            "bigram_verdicts": self.bigram_verdicts,
        }


def scan_tokens(
    tokens: list[str],
    model,
    tfidf: vectorize.TfIdfModel,
    embeddings: EmbeddingTable | None = None,
    t_low: float = DEFAULT_T_LOW,
    t_high: float = DEFAULT_T_HIGH,
    n: int = DEFAULT_WINDOW,
) -> list[Finding]:
    """Scan a normalized token stream; returns findings sorted by position."""
    if len(tokens) < n:
        return []

    positive: list[tuple[int, float]] = []
    for start in range(len(tokens) - n + 1):
        x = vectorize.transform(tfidf, tokens[start:start + n])
        if classify.predict(model, x) == 1:
            positive.append((start, classify.decision(model, x)))
    if not positive:
        return []

    findings: list[Finding] = []
    span_start, first_score = positive[0]
    span_end = span_start + n
    scores = [first_score]
    for start, score in positive[1:]:
        if start <= span_end:  # overlapping or adjacent window joins the span
            span_end = max(span_end, start + n)
            scores.append(score)
        else:
            findings.append(_make_finding(tokens, span_start, span_end, scores, embeddings, t_low, t_high))
            span_start, span_end, scores = start, start + n, [score]
    findings.append(_make_finding(tokens, span_start, span_end, scores, embeddings, t_low, t_high))
    return findings


def _make_finding(
    tokens, start: int, end: int, scores: list[float],
    embeddings: EmbeddingTable | None, t_low: float, t_high: float,
) -> Finding:
    verdicts: list[dict] = []
    if embeddings is not None:
        for i in range(start, end - 1):
            ps = score_phrase((tokens[i], tokens[i + 1]), embeddings)
            verdicts.append({
                "tokens": [tokens[i], tokens[i + 1]],
                "offset": i,
                "score": ps.score,
                "verdict": threshold_classify(ps, t_low, t_high),
                "oov": list(ps.oov_flags),
            })
    return Finding(
        start=start,
        end=end,
        text=" ".join(tokens[start:end]),
        decision_score=sum(scores) / len(scores),
        bigram_verdicts=verdicts,
    )
