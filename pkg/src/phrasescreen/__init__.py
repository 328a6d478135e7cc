"""Tortured-phrase detection: corpus labeling, five-gram classifiers, and
embedding-cosine phrase scoring."""

from .corpus import (
    Lexicon,
    Occurrence,
    Paragraph,
    PhrasePair,
    load_lexicon,
    load_paragraphs,
    match_phrases,
    normalize,
)
from .embed import (
    EmbeddingTable,
    PhraseScore,
    compare_lexicon,
    cosine,
    load_embeddings,
    score_phrase,
    threshold_classify,
)
from .errors import (
    ArtifactMismatchError,
    ConfigError,
    LoadError,
    PhraseLengthError,
    PhraseScreenError,
)
from .evaluate import (
    Metrics,
    SplitSpec,
    balance,
    compute_metrics,
    run_experiment,
    split_phrase_disjoint,
    split_random,
)
from .ngram import LabeledWindow, build_dataset, extract_windows, load_dataset, save_dataset
from .vectorize import SparseVector, TfIdfModel, fit, transform

__version__ = "0.1.0"

__all__ = [
    "ArtifactMismatchError",
    "ConfigError",
    "EmbeddingTable",
    "LabeledWindow",
    "Lexicon",
    "LoadError",
    "Metrics",
    "Occurrence",
    "Paragraph",
    "PhraseLengthError",
    "PhrasePair",
    "PhraseScore",
    "PhraseScreenError",
    "SparseVector",
    "SplitSpec",
    "TfIdfModel",
    "balance",
    "build_dataset",
    "compare_lexicon",
    "compute_metrics",
    "cosine",
    "extract_windows",
    "fit",
    "load_dataset",
    "load_embeddings",
    "load_lexicon",
    "load_paragraphs",
    "match_phrases",
    "normalize",
    "run_experiment",
    "save_dataset",
    "score_phrase",
    "split_phrase_disjoint",
    "split_random",
    "threshold_classify",
    "transform",
]
