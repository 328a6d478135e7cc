import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import gen

settings.register_profile(
    "suite", max_examples=50, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def separable(tmp_path_factory):
    """200-paragraph corpus whose phrases are made of distinctive tokens.

    Strongly separable via TF-IDF; used for classifier sanity, the
    generalization-gap property, and end-to-end scans.
    """
    root = tmp_path_factory.mktemp("separable")
    rng = np.random.default_rng(11)
    pairs = gen.distinct_pairs(rng, 16, set())
    records, plants = gen.make_corpus(12, pairs, n_positive=80, n_negative=117, n_short=3)
    return {
        "root": root,
        "pairs": pairs,
        "records": records,
        "plants": plants,
        "lexicon": gen.write_lexicon_csv(root / "lexicon.csv", pairs),
        "paragraphs": gen.write_paragraphs_jsonl(root / "paragraphs.jsonl", records),
    }


@pytest.fixture(scope="session")
def marker(tmp_path_factory):
    """Corpus whose phrases share marker tokens across phrases, so a
    phrase-disjoint split still leaves a transferable signal."""
    root = tmp_path_factory.mktemp("marker")
    rng = np.random.default_rng(21)
    pairs = gen.marker_pairs(rng, n_markers=6, per_marker=5, taken=set())
    records, plants = gen.make_corpus(22, pairs, n_positive=100, n_negative=100)
    return {
        "root": root,
        "pairs": pairs,
        "records": records,
        "plants": plants,
        "lexicon": gen.write_lexicon_csv(root / "lexicon.csv", pairs),
        "paragraphs": gen.write_paragraphs_jsonl(root / "paragraphs.jsonl", records),
    }


@pytest.fixture(scope="session")
def embedding_fixture(tmp_path_factory):
    """Authored dim-10 table + bigram lexicon with angle-derived scores."""
    root = tmp_path_factory.mktemp("embedding")
    table = root / "vectors.txt"
    lexicon = root / "lexicon.csv"
    scores = gen.write_embedding_fixture(table, lexicon)
    return {"root": root, "table": table, "lexicon": lexicon, "scores": scores}
