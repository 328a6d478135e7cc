"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines. All thresholds are fixed here; fixture corpora are deterministic.
"""

import functools
import json
import os
import time

import numpy as np
import pytest
from click.testing import CliRunner

import gen
from phrasescreen import classify, corpus, embed, evaluate, ngram, vectorize
from phrasescreen.cli import main as cli_main


def criterion(name):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"\nFAIL  {name}")
                raise
            print(f"\nPASS  {name}")
        return wrapper
    return deco


def _windows(fixture):
    lex = corpus.load_lexicon(fixture["lexicon"])
    paras = corpus.load_paragraphs(fixture["paragraphs"], lex)
    windows, summary = ngram.build_dataset(paras, lex)
    return lex, paras, windows, summary


def _experiment(windows, lex, classifier, mode, seed, n_trees=100, train_fraction=0.8):
    spec = evaluate.SplitSpec(mode=mode, train_fraction=train_fraction, seed=seed)
    train, test = evaluate.split_windows(windows, spec, lex)
    tfidf = vectorize.fit([w.tokens for w in train])
    X_train = vectorize.transform_all(tfidf, [w.tokens for w in train])
    X_test = vectorize.transform_all(tfidf, [w.tokens for w in test])
    y_train = [w.label for w in train]
    y_test = [w.label for w in test]
    if classifier == "forest":
        model = classify.train_forest(X_train, y_train, n_trees=n_trees, seed=seed,
                                      n_features=tfidf.n_features)
    else:
        model = classify.train_perceptron(X_train, y_train, seed=seed,
                                          n_features=tfidf.n_features)
    preds = [classify.predict(model, x) for x in X_test]
    return evaluate.compute_metrics(preds, y_test), (train, test)


@criterion("five-gram oracle equivalence (200-paragraph fixture, < 5 s)")
def test_five_gram_oracle_equivalence(separable):
    lex = corpus.load_lexicon(separable["lexicon"])
    paras = corpus.load_paragraphs(separable["paragraphs"], lex)
    assert len(paras) == 200

    started = time.perf_counter()
    windows, summary = ngram.build_dataset(paras, lex)
    elapsed = time.perf_counter() - started

    total, pos, neg = gen.oracle_window_counts(
        [list(p.tokens) for p in paras], [p.tortured for p in lex.pairs]
    )
    assert (summary.total, summary.positive, summary.negative) == (total, pos, neg)
    assert summary.total == len(windows)
    assert elapsed < 5.0, f"build_dataset took {elapsed:.2f}s"


@criterion("TF-IDF numeric oracle (<= 5-doc corpora, 1e-9)")
def test_tfidf_numeric_oracle():
    from test_vectorize import brute_force_tfidf, as_term_map

    rng = np.random.default_rng(2024)
    alphabet = [f"term{i}" for i in range(12)]
    worst = 0.0
    for _ in range(100):
        docs = [
            [alphabet[rng.integers(0, len(alphabet))] for _ in range(rng.integers(1, 10))]
            for _ in range(rng.integers(1, 6))
        ]
        query = [alphabet[rng.integers(0, len(alphabet))] for _ in range(rng.integers(0, 10))]
        model = vectorize.fit(docs)
        got = as_term_map(model, vectorize.transform(model, query))
        want, want_idf = brute_force_tfidf(docs, query)
        assert set(got) == set(want)
        for t in want:
            worst = max(worst, abs(got[t] - want[t]))
        for t, v in want_idf.items():
            worst = max(worst, abs(model.idf[model.vocabulary.index[t]] - v))
    assert worst <= 1e-9, f"max abs diff {worst:.2e}"


@criterion("classifier sanity (forest >= 0.90, perceptron >= 0.85, forest >= perceptron)")
def test_classifier_sanity(separable):
    lex, _, windows, _ = _windows(separable)
    forest_metrics, _ = _experiment(windows, lex, "forest", "random", seed=0)
    perceptron_metrics, _ = _experiment(windows, lex, "perceptron", "random", seed=0)
    assert forest_metrics.accuracy >= 0.90, f"forest accuracy {forest_metrics.accuracy:.4f}"
    assert perceptron_metrics.accuracy >= 0.85, f"perceptron accuracy {perceptron_metrics.accuracy:.4f}"
    assert forest_metrics.accuracy >= perceptron_metrics.accuracy


@criterion("generalization gap (phrase-disjoint F1 strictly below random, 5 seeds)")
def test_generalization_gap(separable):
    lex, _, windows, _ = _windows(separable)
    for seed in range(5):
        random_metrics, _ = _experiment(windows, lex, "forest", "random", seed, n_trees=25)
        disjoint_metrics, _ = _experiment(windows, lex, "forest", "phrase-disjoint", seed, n_trees=25)
        assert disjoint_metrics.f1_1 < random_metrics.f1_1, (
            f"seed {seed}: disjoint f1_1 {disjoint_metrics.f1_1:.4f} "
            f">= random f1_1 {random_metrics.f1_1:.4f}"
        )


@criterion("balanced split (equal counts, per-class recall gap < 0.25)")
def test_balanced_split_property(marker):
    lex, _, windows, _ = _windows(marker)
    metrics, (train, test) = _experiment(
        windows, lex, "forest", "balanced-phrase-disjoint", seed=0
    )
    train_labels = [w.label for w in train]
    test_labels = [w.label for w in test]
    assert train_labels.count(0) == train_labels.count(1)
    assert test_labels.count(0) == test_labels.count(1)
    assert abs(metrics.recall_0 - metrics.recall_1) < 0.25, (
        f"recall_0 {metrics.recall_0:.4f} vs recall_1 {metrics.recall_1:.4f}"
    )


@criterion("cosine separation (median margin >= 0.1, >= 70% tortured at 0.12/0.30)")
def test_cosine_separation(embedding_fixture):
    lexicon = corpus.load_lexicon(embedding_fixture["lexicon"])
    table = embed.load_embeddings(embedding_fixture["table"])
    report = embed.compare_lexicon(lexicon, table)
    assert report.median_expected > report.median_tortured
    assert report.median_expected - report.median_tortured >= 0.1

    verdicts = [
        embed.threshold_classify(
            embed.score_phrase(pair.tortured, table),
            embed.DEFAULT_T_LOW, embed.DEFAULT_T_HIGH,
        )
        for pair in lexicon.pairs
    ]
    frac = verdicts.count(embed.VERDICT_TORTURED) / len(verdicts)
    assert frac >= 0.70, f"only {frac:.0%} of tortured phrases classified tortured"


@criterion("metrics oracle (1000 random vectors, 1e-12)")
def test_metrics_oracle():
    rng = np.random.default_rng(77)
    for _ in range(1000):
        n = int(rng.integers(1, 50))
        preds = rng.integers(0, 2, size=n).tolist()
        gold = rng.integers(0, 2, size=n).tolist()
        m = evaluate.compute_metrics(preds, gold)
        tp = sum(1 for p, g in zip(preds, gold) if (p, g) == (1, 1))
        fp = sum(1 for p, g in zip(preds, gold) if (p, g) == (1, 0))
        tn = sum(1 for p, g in zip(preds, gold) if (p, g) == (0, 0))
        fn = sum(1 for p, g in zip(preds, gold) if (p, g) == (0, 1))
        assert (m.tp, m.fp, m.tn, m.fn) == (tp, fp, tn, fn)

        def safe(a, b):
            return a / b if b else 0.0

        def f1(p, r):
            return 2 * p * r / (p + r) if p + r else 0.0

        checks = [
            (m.accuracy, (tp + tn) / n),
            (m.precision_1, safe(tp, tp + fp)),
            (m.recall_1, safe(tp, tp + fn)),
            (m.precision_0, safe(tn, tn + fn)),
            (m.recall_0, safe(tn, tn + fp)),
            (m.f1_1, f1(safe(tp, tp + fp), safe(tp, tp + fn))),
            (m.f1_0, f1(safe(tn, tn + fn), safe(tn, tn + fp))),
        ]
        for got, want in checks:
            assert abs(got - want) <= 1e-12


@criterion("end-to-end scan (planted phrase flagged, clean document silent)")
def test_end_to_end_scan(separable, tmp_path):
    runner = CliRunner()
    dataset = tmp_path / "dataset.jsonl"
    result = runner.invoke(cli_main, [
        "build-dataset",
        "--lexicon", str(separable["lexicon"]),
        "--paragraphs", str(separable["paragraphs"]),
        "--output", str(dataset),
    ], catch_exceptions=False)
    assert result.exit_code == 0, result.output

    config = tmp_path / "config.json"
    config.write_text(json.dumps({
        "dataset": str(dataset),
        "lexicon": str(separable["lexicon"]),
        "classifier": "forest",
        "split": {"mode": "random", "train_fraction": 0.8},
        "seed": 0,
    }))
    outdir = tmp_path / "run"
    result = runner.invoke(cli_main, ["train", str(config), "--output", str(outdir)],
                           catch_exceptions=False)
    assert result.exit_code == 0, result.output

    # One planted phrase in the middle of otherwise clean filler text.
    clean_record = next(r for r in separable["records"] if r["id"].startswith("neg"))
    filler_tokens = corpus.normalize(clean_record["text"])
    planted_phrase = separable["pairs"][0][0]
    mid = len(filler_tokens) // 2
    doc_tokens = filler_tokens[:mid] + list(planted_phrase) + filler_tokens[mid:]
    plant_span = (mid, mid + len(planted_phrase))

    planted_doc = tmp_path / "planted.txt"
    planted_doc.write_text(" ".join(doc_tokens))
    clean_doc = tmp_path / "clean.txt"
    clean_doc.write_text(" ".join(filler_tokens))

    findings_path = tmp_path / "findings.jsonl"
    result = runner.invoke(cli_main, [
        "scan", str(planted_doc),
        "--model", str(outdir / "model.json"),
        "--vectorizer", str(outdir / "vectorizer.json"),
        "--output", str(findings_path),
    ], catch_exceptions=False)
    assert result.exit_code == 0, result.output
    findings = [json.loads(line) for line in findings_path.read_text().splitlines()]
    assert findings, "planted document produced no findings"
    assert any(
        f["doc_offset_tokens"][0] < plant_span[1] and plant_span[0] < f["doc_offset_tokens"][1]
        for f in findings
    ), "no finding overlaps the plant"

    result = runner.invoke(cli_main, [
        "scan", str(clean_doc),
        "--model", str(outdir / "model.json"),
        "--vectorizer", str(outdir / "vectorizer.json"),
        "--output", str(findings_path),
    ], catch_exceptions=False)
    assert result.exit_code == 0, result.output
    assert findings_path.read_text() == "", "clean document produced findings"


_GLOVE = os.environ.get("PHRASESCREEN_GLOVE_200D", "")
_REAL_LEXICON = os.environ.get("PHRASESCREEN_LEXICON_CSV", "")


@pytest.mark.skipif(
    not (_GLOVE and os.path.exists(_GLOVE) and _REAL_LEXICON and os.path.exists(_REAL_LEXICON)),
    reason="public 200-d embedding file and real phrase lexicon not available "
    "(set PHRASESCREEN_GLOVE_200D and PHRASESCREEN_LEXICON_CSV)",
)
@criterion("optional integration: public 200-d table medians .30/.12, retained 139 +/- 5")
def test_public_embedding_integration():
    lexicon = corpus.load_lexicon(_REAL_LEXICON)
    table = embed.load_embeddings(_GLOVE, expected_dim=200)
    report = embed.compare_lexicon(lexicon, table)
    assert report.median_expected == pytest.approx(0.30, abs=0.05)
    assert report.median_tortured == pytest.approx(0.12, abs=0.05)
    assert abs(len(report.tortured_scores) - 139) <= 5
