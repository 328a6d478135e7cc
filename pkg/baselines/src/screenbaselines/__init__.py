"""Transformer baselines for the tortured-phrase pipeline."""

from .data import Sample, balance, load_paragraphs, load_windows, majority_baseline_accuracy, split_random
from .export_vectors import export_contextual_vectors
from .finetune import FineTuneConfig, finetune_classifier

__all__ = [
    "FineTuneConfig",
    "Sample",
    "balance",
    "export_contextual_vectors",
    "finetune_classifier",
    "load_paragraphs",
    "load_windows",
    "majority_baseline_accuracy",
    "split_random",
]
