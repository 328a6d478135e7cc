"""TF-IDF vectorizer over token sequences.

Normative formula (smooth idf, raw counts, L2 norm):

    idf[t] = ln((1 + n_docs) / (1 + df[t])) + 1
    weight[t] = count(t in doc) * idf[t], then the vector is L2-normalized.

Vocabulary order is lexicographic for cross-run determinism. No pruning, no
stop words. Serialized as versioned JSON:
``{"format_version", "n_docs", "terms": [{"term", "index", "df", "idf"}]}``.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .errors import ArtifactMismatchError, LoadError

FORMAT_VERSION = 1


@dataclass(frozen=True)
class SparseVector:
    """Strictly increasing feature indices with matching values."""

    indices: tuple[int, ...]
    values: tuple[float, ...]

    def value_at(self, index: int) -> float:
        i = bisect_left(self.indices, index)
        if i < len(self.indices) and self.indices[i] == index:
            return self.values[i]
        return 0.0

    def dot_dense(self, dense) -> float:
        return float(sum(dense[i] * v for i, v in zip(self.indices, self.values)))

    @property
    def nnz(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class Vocabulary:
    """Term → dense 0-based feature index, plus per-term document frequency."""

    index: dict[str, int]
    document_frequency: dict[str, int]

    def __len__(self) -> int:
        return len(self.index)


@dataclass(frozen=True)
class TfIdfModel:
    vocabulary: Vocabulary
    idf: tuple[float, ...]  # by feature index
    n_docs: int

    @property
    def n_features(self) -> int:
        return len(self.vocabulary)


def fit(documents: list[list[str]] | list[tuple[str, ...]]) -> TfIdfModel:
    """Fit vocabulary and idf weights over *documents*."""
    if not documents:
        raise ValueError("cannot fit TF-IDF on an empty corpus")
    df: Counter[str] = Counter()
    for doc in documents:
        df.update(set(doc))
    terms = sorted(df)
    index = {t: i for i, t in enumerate(terms)}
    n_docs = len(documents)
    idf = tuple(math.log((1 + n_docs) / (1 + df[t])) + 1.0 for t in terms)
    return TfIdfModel(
        vocabulary=Vocabulary(index=index, document_frequency=dict(df)),
        idf=idf,
        n_docs=n_docs,
    )


def transform(model: TfIdfModel, document: list[str] | tuple[str, ...]) -> SparseVector:
    """Raw counts × idf, L2-normalized. Out-of-vocabulary terms contribute nothing."""
    counts: Counter[str] = Counter(document)
    entries = [
        (model.vocabulary.index[t], c * model.idf[model.vocabulary.index[t]])
        for t, c in counts.items()
        if t in model.vocabulary.index
    ]
    if not entries:
        return SparseVector((), ())
    entries.sort()
    norm = math.sqrt(sum(v * v for _, v in entries))
    return SparseVector(
        indices=tuple(i for i, _ in entries),
        values=tuple(v / norm for _, v in entries),
    )


def transform_all(model: TfIdfModel, documents) -> list[SparseVector]:
    return [transform(model, doc) for doc in documents]


def save_model(model: TfIdfModel, path: str | Path) -> None:
    terms = sorted(model.vocabulary.index.items(), key=lambda kv: kv[1])
    payload = {
        "format_version": FORMAT_VERSION,
        "kind": "tfidf",
        "n_docs": model.n_docs,
        "terms": [
            {
                "term": term,
                "index": idx,
                "df": model.vocabulary.document_frequency[term],
                "idf": model.idf[idx],
            }
            for term, idx in terms
        ],
    }
    Path(path).write_text(json.dumps(payload), encoding="utf-8")


def load_model(path: str | Path) -> TfIdfModel:
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise LoadError(f"cannot read vectorizer {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise LoadError(f"vectorizer {path} is not valid JSON: {exc}") from exc
    if payload.get("kind") != "tfidf":
        raise LoadError(f"{path} is not a TF-IDF model file")
    if payload.get("format_version") != FORMAT_VERSION:
        raise ArtifactMismatchError(
            f"vectorizer {path} has format_version {payload.get('format_version')}, "
            f"expected {FORMAT_VERSION}"
        )
    terms = payload["terms"]
    index = {t["term"]: int(t["index"]) for t in terms}
    df = {t["term"]: int(t["df"]) for t in terms}
    idf = [0.0] * len(terms)
    for t in terms:
        idf[int(t["index"])] = float(t["idf"])
    return TfIdfModel(
        vocabulary=Vocabulary(index=index, document_frequency=df),
        idf=tuple(idf),
        n_docs=int(payload["n_docs"]),
    )
