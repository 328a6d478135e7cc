"""Encoder wrapper: a pretrained transformer body plus one linear
classification layer (hidden size in, 2 out)."""

from __future__ import annotations

import torch
from torch import nn


class PhraseClassifier(nn.Module):
    def __init__(self, encoder, hidden_size: int):
        super().__init__()
        self.encoder = encoder
        self.head = nn.Linear(hidden_size, 2)

    def forward(self, input_ids, attention_mask):
        out = self.encoder(input_ids=input_ids, attention_mask=attention_mask)
        # First-position state stands in for the sequence.
        return self.head(out.last_hidden_state[:, 0])


def load_encoder_and_tokenizer(model_name_or_path: str):
    """Load a pretrained encoder + tokenizer; fail with a download hint when
    the weights are not available locally."""
    from transformers import AutoModel, AutoTokenizer

    try:
        tokenizer = AutoTokenizer.from_pretrained(model_name_or_path)
        encoder = AutoModel.from_pretrained(model_name_or_path)
    except OSError as exc:
        raise RuntimeError(
            f"pretrained weights for {model_name_or_path!r} are not available: {exc}\n"
            "Download the model on a machine with network access "
            "(e.g. `huggingface-cli download distilbert-base-uncased`) and pass "
            "the local directory instead."
        ) from exc
    return encoder, tokenizer


def hidden_size_of(encoder) -> int:
    cfg = encoder.config
    for attr in ("hidden_size", "dim"):
        if hasattr(cfg, attr):
            return int(getattr(cfg, attr))
    raise ValueError(f"cannot determine hidden size of {type(encoder).__name__}")


@torch.no_grad()
def predict(model: PhraseClassifier, input_ids, attention_mask, batch_size: int = 64) -> list[int]:
    model.eval()
    preds: list[int] = []
    for i in range(0, input_ids.shape[0], batch_size):
        logits = model(input_ids[i:i + batch_size], attention_mask[i:i + batch_size])
        preds.extend(logits.argmax(dim=1).tolist())
    return preds
