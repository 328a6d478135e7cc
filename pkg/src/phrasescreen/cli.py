"""Command-line interface.

Subcommands: build-dataset, train, evaluate, cosine-compare, scan.
Exit codes: 0 success (possibly with warnings), 1 input error, 2 internal
error.
"""

from __future__ import annotations

import csv
import functools
import json
import logging
import sys
from pathlib import Path

import click

from . import classify, corpus, embed, evaluate, ngram, scan, vectorize
from .errors import ArtifactMismatchError, PhraseScreenError

logger = logging.getLogger(__name__)

_format_option = click.option(
    "--format", "fmt", type=click.Choice(["json", "text"]), default="text",
    help="Console summary format.",
)


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (PhraseScreenError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)
        except Exception as exc:
            click.echo(f"internal error: {type(exc).__name__}: {exc}", err=True)
            sys.exit(2)
    return wrapper


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log diagnostics at DEBUG level.")
def main(verbose: bool):
    """Detect tortured phrases in text corpora and documents."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )


@main.command("build-dataset")
@click.option("--lexicon", "lexicon_path", required=True, help="Phrase-pair CSV.")
@click.option("--paragraphs", "paragraphs_path", required=True, help="Paragraph JSONL.")
@click.option("--output", "output", required=True, help="Dataset JSONL to write.")
@click.option("--window", default=ngram.DEFAULT_WINDOW, show_default=True, help="Window length.")
@_format_option
@_guarded
def cmd_build_dataset(lexicon_path, paragraphs_path, output, window, fmt):
    """Extract labeled five-gram windows from a paragraph corpus."""
    lexicon = corpus.load_lexicon(lexicon_path)
    paragraphs = corpus.load_paragraphs(paragraphs_path, lexicon)
    windows, summary = ngram.build_dataset(paragraphs, lexicon, n=window)
    ngram.save_dataset(windows, output)
    if fmt == "json":
        click.echo(json.dumps({
            "total": summary.total,
            "positive": summary.positive,
            "negative": summary.negative,
            "negatives_from_label0_paragraphs": summary.negatives_from_label0_paragraphs,
            "negatives_from_label1_paragraphs": summary.negatives_from_label1_paragraphs,
            "short_paragraphs": summary.short_paragraphs,
            "output": str(output),
        }))
    else:
        click.echo(f"{summary.total} windows ({summary.positive} positive / {summary.negative} negative)")
        click.echo(
            f"negatives: {summary.negatives_from_label0_paragraphs} from clean paragraphs, "
            f"{summary.negatives_from_label1_paragraphs} from flagged paragraphs"
        )
        if summary.short_paragraphs:
            click.echo(f"{summary.short_paragraphs} paragraphs shorter than {window} tokens yielded no windows")
        click.echo(f"wrote {output}")


def _write_artifacts(outdir: Path, result: dict) -> dict[str, Path]:
    outdir.mkdir(parents=True, exist_ok=True)
    paths = {
        "model": outdir / "model.json",
        "vectorizer": outdir / "vectorizer.json",
        "report": outdir / "report.json",
    }
    classify.save_classifier(result["model"], paths["model"])
    vectorize.save_model(result["vectorizer"], paths["vectorizer"])
    paths["report"].write_text(json.dumps(result["report"], indent=2), encoding="utf-8")
    return paths


@main.command("train")
@click.argument("config_path")
@click.option("--output", default=None, help="Output directory (overrides config).")
@click.option("--seed", type=int, default=None, help="Override the config seed.")
@_format_option
@_guarded
def cmd_train(config_path, output, seed, fmt):
    """Run a training experiment from a JSON config; persist model + report."""
    config = evaluate.ExperimentConfig.from_file(config_path)
    if seed is not None:
        config.seed = seed
        config.split = evaluate.SplitSpec(config.split.mode, config.split.train_fraction, seed)
    outdir = Path(output or config.output or ".")
    result = evaluate.run_experiment(config)
    paths = _write_artifacts(outdir, result)
    if fmt == "json":
        click.echo(json.dumps(result["report"]))
    else:
        click.echo(evaluate.format_report_text(result["report"]))
        click.echo(f"artifacts in {outdir}")
    logger.info("model=%s vectorizer=%s report=%s", paths["model"], paths["vectorizer"], paths["report"])


@main.command("evaluate")
@click.argument("config_path")
@click.option("--model", "model_path", default=None, help="Model JSON (overrides config key 'model').")
@click.option("--vectorizer", "vectorizer_path", default=None, help="Vectorizer JSON (overrides config key 'vectorizer').")
@click.option("--output", default=None, help="Report JSON path (overrides config).")
@click.option("--seed", type=int, default=None, help="Override the config seed (changes the evaluated split).")
@_format_option
@_guarded
def cmd_evaluate(config_path, model_path, vectorizer_path, output, seed, fmt):
    """Evaluate persisted artifacts on the configured split's test side."""
    raw = json.loads(Path(config_path).read_text(encoding="utf-8"))
    config = evaluate.ExperimentConfig.from_dict(raw)
    if seed is not None:
        config.seed = seed
        config.split = evaluate.SplitSpec(config.split.mode, config.split.train_fraction, seed)
    model_path = model_path or raw.get("model")
    vectorizer_path = vectorizer_path or raw.get("vectorizer")
    if not model_path or not vectorizer_path:
        raise PhraseScreenError("evaluate needs --model and --vectorizer (or 'model'/'vectorizer' config keys)")
    model = classify.load_classifier(model_path)
    tfidf = vectorize.load_model(vectorizer_path)
    report = evaluate.evaluate_pretrained(config, model, tfidf)
    out = output or config.output
    if out:
        Path(out).write_text(json.dumps(report, indent=2), encoding="utf-8")
    click.echo(json.dumps(report) if fmt == "json" else evaluate.format_report_text(report))


@main.command("cosine-compare")
@click.option("--lexicon", "lexicon_path", required=True, help="Phrase-pair CSV.")
@click.option("--embeddings", "embeddings_path", required=True, help="Embedding text file.")
@click.option("--output", "prefix", required=True, help="Output prefix; writes <prefix>.csv and <prefix>.json.")
@click.option("--expected-dim", type=int, default=None, help="Require this embedding dimension.")
@_format_option
@_guarded
def cmd_cosine_compare(lexicon_path, embeddings_path, prefix, expected_dim, fmt):
    """Compare cosine scores of tortured vs expected two-token phrases."""
    lexicon = corpus.load_lexicon(lexicon_path)
    table = embed.load_embeddings(embeddings_path, expected_dim=expected_dim)
    report = embed.compare_lexicon(lexicon, table)

    csv_path = Path(f"{prefix}.csv")
    with csv_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["phrase", "kind", "score", "oov_a", "oov_b"])
        for row in report.rows:
            writer.writerow([row.phrase, row.kind, f"{row.score:.6f}", int(row.oov_a), int(row.oov_b)])

    summary = {
        "median_tortured": report.median_tortured,
        "median_expected": report.median_expected,
        "retained_tortured": len(report.tortured_scores),
        "retained_expected": len(report.expected_scores),
        "discarded_count": report.discarded_count,
        "skipped_non_bigram": report.skipped_non_bigram,
        "degenerate": report.degenerate,
        "embedding_load": {
            "tokens": len(table),
            "dim": table.dim,
            "skipped_lines": table.skipped_lines,
            "duplicate_tokens": table.duplicate_tokens,
        },
    }
    json_path = Path(f"{prefix}.json")
    json_path.write_text(json.dumps(summary, indent=2), encoding="utf-8")
    if report.degenerate:
        click.echo("warning: degenerate comparison (fewer than 2 retained scores in a list)", err=True)
    if fmt == "json":
        click.echo(json.dumps(summary))
    else:
        click.echo(
            f"median tortured={_fmt(report.median_tortured)} expected={_fmt(report.median_expected)} "
            f"(retained {len(report.tortured_scores)}/{len(report.expected_scores)}, "
            f"discarded {report.discarded_count})"
        )
        click.echo(f"wrote {csv_path} and {json_path}")


def _fmt(value) -> str:
    return "n/a" if value is None else f"{value:.4f}"


@main.command("scan")
@click.argument("document")
@click.option("--model", "model_path", required=True, help="Trained classifier JSON.")
@click.option("--vectorizer", "vectorizer_path", required=True, help="Fitted vectorizer JSON.")
@click.option("--embeddings", "embeddings_path", default=None, help="Optional embedding table for bigram verdicts.")
@click.option("--threshold-low", default=embed.DEFAULT_T_LOW, show_default=True,
              help="Cosine score below which a bigram is called tortured.")
@click.option("--threshold-high", default=embed.DEFAULT_T_HIGH, show_default=True,
              help="Cosine score above which a bigram is called legitimate.")
@click.option("--output", default=None, help="Findings JSONL path (default: stdout).")
@_format_option
@_guarded
def cmd_scan(document, model_path, vectorizer_path, embeddings_path, threshold_low, threshold_high, output, fmt):
    """Flag candidate tortured-phrase spans in a text document."""
    try:
        text = Path(document).read_text(encoding="utf-8")
    except OSError as exc:
        raise PhraseScreenError(f"cannot read document {document}: {exc}") from exc
    model = classify.load_classifier(model_path)
    tfidf = vectorize.load_model(vectorizer_path)
    if model.n_features != tfidf.n_features:
        raise ArtifactMismatchError(
            f"model expects {model.n_features} features but the vectorizer provides {tfidf.n_features}"
        )
    table = embed.load_embeddings(embeddings_path) if embeddings_path else None

    tokens = corpus.normalize(text)
    if len(tokens) < ngram.DEFAULT_WINDOW:
        click.echo(f"warning: document has {len(tokens)} tokens (< {ngram.DEFAULT_WINDOW}); no findings", err=True)
    findings = scan.scan_tokens(
        tokens, model, tfidf, embeddings=table, t_low=threshold_low, t_high=threshold_high
    )

    lines = [json.dumps(f.as_dict()) for f in findings]
    if output:
        Path(output).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
        if fmt == "json":
            click.echo(json.dumps({"findings": len(findings), "output": str(output)}))
        else:
            click.echo(f"{len(findings)} finding(s) written to {output}")
    else:
        for line in lines:
            click.echo(line)


if __name__ == "__main__":
    main()
