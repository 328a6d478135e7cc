"""Fine-tune a transformer encoder with a linear head on the shared datasets.

Regimes (split fractions follow the reference experiments):
  - paragraph: labeled paragraph JSONL, 67/33 random split
  - five-gram-random: five-gram dataset JSONL, 79/21 random split
  - five-gram-balanced: as above, then both sides downsampled to equal
    class counts

Alternatively pass pre-split --train/--test files. The report JSON uses the
same schema as the main pipeline's experiment reports, with a ``training``
block recording the hyperparameters the reference leaves unstated.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch
from torch.nn import functional as F

from . import data
from .model import PhraseClassifier, hidden_size_of, load_encoder_and_tokenizer, predict

REPORT_VERSION = 1

REGIMES = {
    "paragraph": {"loader": data.load_paragraphs, "fraction": 0.67, "balanced": False},
    "five-gram-random": {"loader": data.load_windows, "fraction": 0.79, "balanced": False},
    "five-gram-balanced": {"loader": data.load_windows, "fraction": 0.79, "balanced": True},
}


@dataclass
class FineTuneConfig:
    model: str
    regime: str
    epochs: int = 10
    seed: int = 0
    batch_size: int = 16
    learning_rate: float = 5e-5
    max_length: int = 64
    train_fraction: float | None = None  # default comes from the regime

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise ValueError(f"unknown regime {self.regime!r}; expected one of {sorted(REGIMES)}")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")


def _metrics(preds: list[int], gold: list[int]) -> dict:
    tp = sum(1 for p, g in zip(preds, gold) if (p, g) == (1, 1))
    fp = sum(1 for p, g in zip(preds, gold) if (p, g) == (1, 0))
    tn = sum(1 for p, g in zip(preds, gold) if (p, g) == (0, 0))
    fn = sum(1 for p, g in zip(preds, gold) if (p, g) == (0, 1))

    def safe(a, b):
        return a / b if b else 0.0

    def f1(p, r):
        return 2 * p * r / (p + r) if p + r else 0.0

    p1, r1 = safe(tp, tp + fp), safe(tp, tp + fn)
    p0, r0 = safe(tn, tn + fn), safe(tn, tn + fp)
    return {
        "row": {
            "accuracy": (tp + tn) / len(gold),
            "precision_0": p0,
            "precision_1": p1,
            "recall_0": r0,
            "recall_1": r1,
            "f1_0": f1(p0, r0),
            "f1_1": f1(p1, r1),
            "support_0": tn + fp,
            "support_1": tp + fn,
        },
        "confusion": {"tp": tp, "fp": fp, "tn": tn, "fn": fn},
    }


def _load_split(config: FineTuneConfig, dataset=None, train=None, test=None):
    regime = REGIMES[config.regime]
    if train and test:
        return regime["loader"](train), regime["loader"](test)
    if not dataset:
        raise ValueError("pass either --dataset or both --train and --test")
    samples = regime["loader"](dataset)
    fraction = config.train_fraction or regime["fraction"]
    train_s, test_s = data.split_random(samples, fraction, config.seed)
    if regime["balanced"]:
        train_s = data.balance(train_s, config.seed + 1)
        test_s = data.balance(test_s, config.seed + 2)
    return train_s, test_s


def _encode(tokenizer, samples, max_length: int):
    enc = tokenizer(
        [s.text for s in samples],
        padding=True, truncation=True, max_length=max_length, return_tensors="pt",
    )
    labels = torch.tensor([s.label for s in samples], dtype=torch.long)
    return enc["input_ids"], enc["attention_mask"], labels


def finetune_classifier(
    config: FineTuneConfig,
    dataset: str | Path | None = None,
    train: str | Path | None = None,
    test: str | Path | None = None,
    output: str | Path | None = None,
) -> dict:
    """Train encoder + linear head, evaluate, and return the report dict."""
    torch.manual_seed(config.seed)
    encoder, tokenizer = load_encoder_and_tokenizer(config.model)
    model = PhraseClassifier(encoder, hidden_size_of(encoder))

    train_s, test_s = _load_split(config, dataset, train, test)
    ids_tr, mask_tr, y_tr = _encode(tokenizer, train_s, config.max_length)
    ids_te, mask_te, y_te = _encode(tokenizer, test_s, config.max_length)

    optimizer = torch.optim.AdamW(model.parameters(), lr=config.learning_rate)
    rng = np.random.default_rng(config.seed)
    model.train()
    for _ in range(config.epochs):
        order = rng.permutation(len(train_s))
        for start in range(0, len(train_s), config.batch_size):
            batch = torch.from_numpy(order[start:start + config.batch_size].copy())
            optimizer.zero_grad()
            logits = model(ids_tr[batch], mask_tr[batch])
            loss = F.cross_entropy(logits, y_tr[batch])
            loss.backward()
            optimizer.step()

    preds = predict(model, ids_te, mask_te)
    gold = y_te.tolist()
    scored = _metrics(preds, gold)

    n_train, n_test = len(train_s), len(test_s)
    report = {
        "report_version": REPORT_VERSION,
        "classifier": "transformer",
        "split_mode": config.regime,
        "train_fraction": config.train_fraction or REGIMES[config.regime]["fraction"],
        "seed": config.seed,
        "n_train": n_train,
        "n_test": n_test,
        "train_positive": sum(s.label for s in train_s),
        "train_negative": n_train - sum(s.label for s in train_s),
        "test_positive": sum(gold),
        "test_negative": n_test - sum(gold),
        "realized_train_fraction": n_train / (n_train + n_test),
        "row": scored["row"],
        "confusion": scored["confusion"],
        "training": {
            "base_model": config.model,
            "epochs": config.epochs,
            "batch_size": config.batch_size,
            "learning_rate": config.learning_rate,
            "optimizer": "adamw",
            "max_length": config.max_length,
            "head": {"out_features": 2},
        },
    }
    if output:
        Path(output).write_text(json.dumps(report, indent=2), encoding="utf-8")
    return report


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Fine-tune a transformer on the shared datasets.")
    parser.add_argument("--model", required=True, help="Model name or local directory.")
    parser.add_argument("--regime", required=True, choices=sorted(REGIMES))
    parser.add_argument("--dataset", help="Single input file; split per the regime.")
    parser.add_argument("--train", help="Pre-split training file.")
    parser.add_argument("--test", help="Pre-split test file.")
    parser.add_argument("--epochs", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--batch-size", type=int, default=16)
    parser.add_argument("--learning-rate", type=float, default=5e-5)
    parser.add_argument("--output", help="Report JSON path.")
    args = parser.parse_args(argv)

    config = FineTuneConfig(
        model=args.model, regime=args.regime, epochs=args.epochs, seed=args.seed,
        batch_size=args.batch_size, learning_rate=args.learning_rate,
    )
    try:
        report = finetune_classifier(
            config, dataset=args.dataset, train=args.train, test=args.test, output=args.output
        )
    except (OSError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps(report["row"]))
    return 0


if __name__ == "__main__":
    sys.exit(main())
