"""Dataset splitting, metrics, and experiment orchestration.

Split modes:
  - random: seeded shuffle, cut at round-half-up(train_fraction * n).
  - phrase-disjoint: distinct tortured phrases are partitioned (greedy
    largest-first toward the target positive fraction, seeded shuffle for
    ties) so no phrase behind a test positive appears in any train positive;
    negatives split randomly at the same fraction.
  - balanced-phrase-disjoint: phrase-disjoint, then each side is downsampled
    to equal class counts (train with seed+1, test with seed+2).

Experiment config JSON:
``{"dataset", "lexicon"?, "classifier": "forest"|"perceptron",
   "split": {"mode", "train_fraction", "seed"?}, "seed", "output"?,
   "classifier_params"?: {...}}``
(the lexicon is required for the phrase-aware modes, which recompute
matched-pair provenance when the dataset comes from JSONL).

The report JSON mirrors the usual results-table columns; its ``row`` block
holds exactly accuracy, per-class precision/recall/F1, and per-class support.
"""

from __future__ import annotations

import json
import math
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import classify, vectorize
from .corpus import Lexicon, load_lexicon
from .errors import ArtifactMismatchError, ConfigError, LoadError
from .ngram import LabeledWindow, load_dataset

logger = logging.getLogger(__name__)

MODE_RANDOM = "random"
MODE_PHRASE_DISJOINT = "phrase-disjoint"
MODE_BALANCED = "balanced-phrase-disjoint"
MODES = (MODE_RANDOM, MODE_PHRASE_DISJOINT, MODE_BALANCED)

REPORT_VERSION = 1


@dataclass(frozen=True)
class SplitSpec:
    mode: str = MODE_RANDOM
    train_fraction: float = 0.8
    seed: int = 0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"unknown split mode {self.mode!r}; expected one of {MODES}")
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError(f"train_fraction must be in (0, 1), got {self.train_fraction}")


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def split_random(data: list, spec: SplitSpec) -> tuple[list, list]:
    """Seeded shuffle, then a prefix/suffix cut. Both sides must be non-empty."""
    n = len(data)
    if n < 2:
        raise ValueError(f"cannot split {n} items")
    n_train = _round_half_up(spec.train_fraction * n)
    if n_train == 0 or n_train == n:
        raise ValueError(
            f"degenerate split: {n_train}/{n - n_train} items at fraction {spec.train_fraction}"
        )
    order = np.random.default_rng(spec.seed).permutation(n)
    train = [data[i] for i in order[:n_train]]
    test = [data[i] for i in order[n_train:]]
    return train, test


def split_phrase_disjoint(
    windows: list[LabeledWindow], lexicon: Lexicon, spec: SplitSpec
) -> tuple[list[LabeledWindow], list[LabeledWindow]]:
    """Partition so test positives' phrases never occur in train positives.

    Phrases are assigned greedily, largest window count first (seeded shuffle
    breaks ties), to bring the train side's positive-window fraction as close
    as possible to the requested fraction. Negatives split randomly at the
    same fraction with the same RNG stream.
    """
    positives = [w for w in windows if w.label == 1]
    if any(w.matched_pair is None for w in positives):
        raise ValueError("positive windows must carry matched_pair provenance")

    group_sizes: dict[int, int] = {}
    for w in positives:
        group_sizes[w.matched_pair] = group_sizes.get(w.matched_pair, 0) + 1
    phrases = sorted(group_sizes)
    if len(phrases) < 2:
        raise ValueError(f"need at least 2 distinct phrases, got {len(phrases)}")

    rng = np.random.default_rng(spec.seed)
    shuffled = [phrases[i] for i in rng.permutation(len(phrases))]
    by_size = sorted(shuffled, key=lambda p: -group_sizes[p])  # stable: ties keep shuffled order

    total_pos = len(positives)
    target = spec.train_fraction * total_pos
    train_phrases: set[int] = set()
    train_pos = 0
    for p in by_size:
        size = group_sizes[p]
        if abs(train_pos + size - target) <= abs(train_pos - target):
            train_phrases.add(p)
            train_pos += size
    if train_pos == 0 or train_pos == total_pos:
        logger.warning(
            "phrase-disjoint split left one side without positives "
            "(train has %d of %d positive windows)", train_pos, total_pos,
        )

    neg_positions = [i for i, w in enumerate(windows) if w.label == 0]
    n_train_neg = _round_half_up(spec.train_fraction * len(neg_positions))
    perm = rng.permutation(len(neg_positions))
    train_neg = {neg_positions[i] for i in perm[:n_train_neg]}

    train: list[LabeledWindow] = []
    test: list[LabeledWindow] = []
    for i, w in enumerate(windows):
        if w.label == 1:
            (train if w.matched_pair in train_phrases else test).append(w)
        else:
            (train if i in train_neg else test).append(w)
    return train, test


def balance(data: list, seed: int = 0) -> list:
    """Downsample the majority class to the minority count, then reshuffle."""
    by_class: dict[int, list] = {0: [], 1: []}
    for item in data:
        by_class[item.label].append(item)
    if not by_class[0] or not by_class[1]:
        raise ValueError("both classes must be present to balance")
    rng = np.random.default_rng(seed)
    minority = min(len(by_class[0]), len(by_class[1]))
    kept: list = []
    for cls in (0, 1):
        items = by_class[cls]
        if len(items) > minority:
            chosen = rng.choice(len(items), size=minority, replace=False)
            items = [items[i] for i in sorted(chosen)]
        kept.extend(items)
    order = rng.permutation(len(kept))
    return [kept[i] for i in order]


@dataclass(frozen=True)
class Metrics:
    accuracy: float
    precision_0: float
    precision_1: float
    recall_0: float
    recall_1: float
    f1_0: float
    f1_1: float
    tp: int
    fp: int
    tn: int
    fn: int

    def as_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "precision_0": self.precision_0,
            "precision_1": self.precision_1,
            "recall_0": self.recall_0,
            "recall_1": self.recall_1,
            "f1_0": self.f1_0,
            "f1_1": self.f1_1,
            "tp": self.tp,
            "fp": self.fp,
            "tn": self.tn,
            "fn": self.fn,
        }


def _safe_div(num: float, den: float) -> float:
    return num / den if den > 0 else 0.0


def _f1(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def compute_metrics(predictions, gold) -> Metrics:
    """Accuracy plus per-class precision/recall/F1; confusion counts are
    w.r.t. class 1. Undefined precision/recall fall back to 0."""
    preds = list(predictions)
    golds = list(gold)
    if len(preds) != len(golds):
        raise ValueError(f"{len(preds)} predictions vs {len(golds)} gold labels")
    if not preds:
        raise ValueError("cannot compute metrics on empty inputs")
    tp = fp = tn = fn = 0
    for p, g in zip(preds, golds):
        if p not in (0, 1) or g not in (0, 1):
            raise ValueError(f"labels must be 0 or 1, got prediction {p!r} / gold {g!r}")
        if p == 1 and g == 1:
            tp += 1
        elif p == 1 and g == 0:
            fp += 1
        elif p == 0 and g == 0:
            tn += 1
        else:
            fn += 1
    precision_1 = _safe_div(tp, tp + fp)
    recall_1 = _safe_div(tp, tp + fn)
    precision_0 = _safe_div(tn, tn + fn)
    recall_0 = _safe_div(tn, tn + fp)
    return Metrics(
        accuracy=(tp + tn) / len(preds),
        precision_0=precision_0,
        precision_1=precision_1,
        recall_0=recall_0,
        recall_1=recall_1,
        f1_0=_f1(precision_0, recall_0),
        f1_1=_f1(precision_1, recall_1),
        tp=tp, fp=fp, tn=tn, fn=fn,
    )


# ---------------------------------------------------------------------------
# Experiment orchestration

CLASSIFIER_FOREST = "forest"
CLASSIFIER_PERCEPTRON = "perceptron"


@dataclass
class ExperimentConfig:
    dataset: str
    classifier: str
    split: SplitSpec
    seed: int = 0
    lexicon: str | None = None
    output: str | None = None
    classifier_params: dict | None = None

    @staticmethod
    def from_dict(raw: dict) -> "ExperimentConfig":
        problems = []
        if "dataset" not in raw:
            problems.append("missing 'dataset'")
        classifier = raw.get("classifier")
        if classifier not in (CLASSIFIER_FOREST, CLASSIFIER_PERCEPTRON):
            problems.append(f"'classifier' must be 'forest' or 'perceptron', got {classifier!r}")
        split_raw = raw.get("split", {})
        if not isinstance(split_raw, dict):
            problems.append("'split' must be an object")
            split_raw = {}
        if problems:
            raise ConfigError("invalid experiment config: " + "; ".join(problems))
        seed = int(raw.get("seed", 0))
        spec = SplitSpec(
            mode=split_raw.get("mode", MODE_RANDOM),
            train_fraction=float(split_raw.get("train_fraction", 0.8)),
            seed=int(split_raw.get("seed", seed)),
        )
        if spec.mode != MODE_RANDOM and not raw.get("lexicon"):
            raise ConfigError(f"split mode {spec.mode!r} requires a 'lexicon' path in the config")
        return ExperimentConfig(
            dataset=str(raw["dataset"]),
            classifier=classifier,
            split=spec,
            seed=seed,
            lexicon=raw.get("lexicon"),
            output=raw.get("output"),
            classifier_params=raw.get("classifier_params") or {},
        )

    @staticmethod
    def from_file(path: str | Path) -> "ExperimentConfig":
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise LoadError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        return ExperimentConfig.from_dict(raw)


def split_windows(
    windows: list[LabeledWindow], spec: SplitSpec, lexicon: Lexicon | None
) -> tuple[list[LabeledWindow], list[LabeledWindow]]:
    if spec.mode == MODE_RANDOM:
        return split_random(windows, spec)
    if lexicon is None:
        raise ConfigError(f"split mode {spec.mode!r} requires a lexicon")
    train, test = split_phrase_disjoint(windows, lexicon, spec)
    if spec.mode == MODE_BALANCED:
        train = balance(train, seed=spec.seed + 1)
        test = balance(test, seed=spec.seed + 2)
    return train, test


def _train(config: ExperimentConfig, X_train, y_train, n_features: int):
    params = config.classifier_params or {}
    if config.classifier == CLASSIFIER_FOREST:
        return classify.train_forest(
            X_train, y_train,
            n_trees=int(params.get("n_trees", 100)),
            seed=config.seed,
            max_depth=params.get("max_depth"),
            n_features=n_features,
        )
    return classify.train_perceptron(
        X_train, y_train,
        epochs=int(params.get("epochs", 1000)),
        seed=config.seed,
        n_features=n_features,
    )


def _report(config: ExperimentConfig, split_sizes, metrics: Metrics, extra: dict) -> dict:
    n_train, n_test, train_pos, test_pos = split_sizes
    row = {
        "accuracy": metrics.accuracy,
        "precision_0": metrics.precision_0,
        "precision_1": metrics.precision_1,
        "recall_0": metrics.recall_0,
        "recall_1": metrics.recall_1,
        "f1_0": metrics.f1_0,
        "f1_1": metrics.f1_1,
        "support_0": (n_test - test_pos),
        "support_1": test_pos,
    }
    report = {
        "report_version": REPORT_VERSION,
        "classifier": config.classifier,
        "split_mode": config.split.mode,
        "train_fraction": config.split.train_fraction,
        "seed": config.seed,
        "n_train": n_train,
        "n_test": n_test,
        "train_positive": train_pos,
        "train_negative": n_train - train_pos,
        "test_positive": test_pos,
        "test_negative": n_test - test_pos,
        "realized_train_fraction": n_train / (n_train + n_test),
        "row": row,
        "confusion": {"tp": metrics.tp, "fp": metrics.fp, "tn": metrics.tn, "fn": metrics.fn},
    }
    report.update(extra)
    return report


def run_experiment(config: ExperimentConfig) -> dict:
    """Split → fit vectorizer on train only → train → evaluate → report."""
    lexicon = load_lexicon(config.lexicon) if config.lexicon else None
    windows = load_dataset(config.dataset, lexicon)
    train, test = split_windows(windows, config.split, lexicon)

    tfidf = vectorize.fit([w.tokens for w in train])
    X_train = vectorize.transform_all(tfidf, [w.tokens for w in train])
    X_test = vectorize.transform_all(tfidf, [w.tokens for w in test])
    y_train = [w.label for w in train]
    y_test = [w.label for w in test]

    model = _train(config, X_train, y_train, tfidf.n_features)
    preds = [classify.predict(model, x) for x in X_test]
    metrics = compute_metrics(preds, y_test)
    sizes = (len(train), len(test), sum(y_train), sum(y_test))
    report = _report(config, sizes, metrics, {"vocabulary_size": tfidf.n_features})
    return {"report": report, "model": model, "vectorizer": tfidf}


def evaluate_pretrained(
    config: ExperimentConfig,
    model: classify.PerceptronModel | classify.ForestModel,
    tfidf: vectorize.TfIdfModel,
) -> dict:
    """Evaluate persisted artifacts on the configured split's test side."""
    if model_features(model) != tfidf.n_features:
        raise ArtifactMismatchError(
            f"model expects {model_features(model)} features but the vectorizer "
            f"provides {tfidf.n_features}"
        )
    lexicon = load_lexicon(config.lexicon) if config.lexicon else None
    windows = load_dataset(config.dataset, lexicon)
    train, test = split_windows(windows, config.split, lexicon)

    X_test = vectorize.transform_all(tfidf, [w.tokens for w in test])
    y_test = [w.label for w in test]
    preds = [classify.predict(model, x) for x in X_test]
    metrics = compute_metrics(preds, y_test)
    sizes = (len(train), len(test), sum(w.label for w in train), sum(y_test))
    return _report(config, sizes, metrics, {"vocabulary_size": tfidf.n_features})


def model_features(model) -> int:
    return model.n_features


def format_report_text(report: dict) -> str:
    """Aligned text rendering of one report row."""
    row = report["row"]
    header = f"{'classifier':<12}{'split':<26}{'acc':>6}{'P0':>6}{'P1':>6}{'R0':>6}{'R1':>6}{'F1_0':>6}{'F1_1':>6}"
    line = (
        f"{report['classifier']:<12}{report['split_mode']:<26}"
        f"{row['accuracy']:>6.2f}{row['precision_0']:>6.2f}{row['precision_1']:>6.2f}"
        f"{row['recall_0']:>6.2f}{row['recall_1']:>6.2f}{row['f1_0']:>6.2f}{row['f1_1']:>6.2f}"
    )
    sizes = (
        f"train {report['n_train']} ({report['train_positive']} pos), "
        f"test {report['n_test']} ({report['test_positive']} pos)"
    )
    return "\n".join([header, line, sizes])
