"""Export contextual per-token vectors for two-token lexicon phrases.

Each phrase is encoded on its own; a token's vector is the sum of the
encoder's last four hidden layers at that position (768 components for a
12-layer base encoder). Phrases containing words the tokenizer splits into
sub-word pieces, or maps to the unknown token, are skipped and counted.

Output is the GloVe-compatible text format the main pipeline loads, with
keys namespaced ``<phraseid>/<position>`` (e.g. ``t0003/0``) so contextual
vectors of identical surface tokens stay distinct.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import torch

from .data import load_lexicon_pairs
from .model import load_encoder_and_tokenizer

SUM_LAYERS = 4


def _whole_word_pieces(tokenizer, word: str) -> bool:
    pieces = tokenizer.tokenize(word)
    return len(pieces) == 1 and pieces[0] == word.lower() and pieces[0] != tokenizer.unk_token


@torch.no_grad()
def export_contextual_vectors(
    lexicon_path: str | Path,
    output_path: str | Path,
    model: str = "bert-base-uncased",
    sum_layers: int = SUM_LAYERS,
) -> dict:
    """Write one vector per surviving phrase token; returns export stats."""
    encoder, tokenizer = load_encoder_and_tokenizer(model)
    encoder.eval()
    pairs = load_lexicon_pairs(lexicon_path)

    stats = {
        "phrases_total": 0,
        "exported_phrases": 0,
        "exported_vectors": 0,
        "skipped_multipiece": 0,
        "skipped_non_bigram": 0,
        "dim": None,
    }
    lines: list[str] = []
    for i, (tortured, expected) in enumerate(pairs):
        for kind, phrase in (("t", tortured), ("e", expected)):
            stats["phrases_total"] += 1
            if len(phrase) != 2:
                stats["skipped_non_bigram"] += 1
                continue
            if not all(_whole_word_pieces(tokenizer, w) for w in phrase):
                stats["skipped_multipiece"] += 1
                continue
            enc = tokenizer(" ".join(phrase), return_tensors="pt")
            out = encoder(**enc, output_hidden_states=True)
            summed = torch.stack(out.hidden_states[-sum_layers:]).sum(dim=0)[0]
            # Positions 1 and 2: the two word tokens behind the leading
            # sequence-start special token.
            for position in (0, 1):
                vec = summed[position + 1]
                if not torch.isfinite(vec).all():
                    raise ValueError(f"non-finite vector for phrase {' '.join(phrase)!r}")
                stats["dim"] = int(vec.shape[0])
                key = f"{kind}{i:04d}/{position}"
                lines.append(key + " " + " ".join(f"{x:.6f}" for x in vec.tolist()))
                stats["exported_vectors"] += 1
            stats["exported_phrases"] += 1

    Path(output_path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
    return stats


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Export contextual phrase-token vectors.")
    parser.add_argument("--lexicon", required=True, help="Phrase-pair CSV.")
    parser.add_argument("--output", required=True, help="Embedding text file to write.")
    parser.add_argument("--model", default="bert-base-uncased", help="Encoder name or local directory.")
    parser.add_argument("--sum-layers", type=int, default=SUM_LAYERS,
                        help="How many final hidden layers to sum.")
    args = parser.parse_args(argv)
    try:
        stats = export_contextual_vectors(
            args.lexicon, args.output, model=args.model, sum_layers=args.sum_layers
        )
    except (OSError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps(stats))
    return 0


if __name__ == "__main__":
    sys.exit(main())
