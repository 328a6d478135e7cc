import pytest

import tinyfixtures as tf

# Export fixture lexicon: rows exercising whole-word survival, sub-word
# splitting, unknown words, and the bigram-only rule.
EXPORT_LEXICON = (
    "tortured,expected\n"
    "alpha beta,gamma delta\n"
    "vitality utilize,energy use\n"
    "zorp glib,alpha delta\n"
    "one two three,beta gamma\n"
)
EXPORT_WHOLE_WORDS = [
    "alpha", "beta", "gamma", "delta", "utilize", "energy", "use", "one", "two", "three",
]
EXPORT_PIECES = ["vital", "##ity"]


@pytest.fixture(scope="session")
def tiny_bert(tmp_path_factory):
    """Tokenizer + 4-layer hidden-32 encoder saved into one directory."""
    root = tmp_path_factory.mktemp("tiny_bert")
    vocab_size = tf.build_tokenizer(root, EXPORT_WHOLE_WORDS, pieces=EXPORT_PIECES)
    tf.build_tiny_bert(root, vocab_size)
    return root


@pytest.fixture(scope="session")
def export_lexicon(tmp_path_factory):
    path = tmp_path_factory.mktemp("lex") / "lexicon.csv"
    path.write_text(EXPORT_LEXICON, encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def tiny_distilbert(tmp_path_factory):
    """Tokenizer + 2-layer hidden-32 encoder for fine-tune runs."""
    root = tmp_path_factory.mktemp("tiny_distilbert")
    vocab_size = tf.build_tokenizer(root, [*tf.FILLER, *tf.MARKER])
    tf.build_tiny_distilbert(root, vocab_size)
    return root


@pytest.fixture(scope="session")
def window_dataset(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "windows.jsonl"
    tf.write_window_dataset(path, n_pos=120, n_neg=280, seed=5)
    return path


@pytest.fixture(scope="session")
def paragraph_dataset(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "paragraphs.jsonl"
    tf.write_paragraph_dataset(path, n_pos=60, n_neg=90, seed=6)
    return path
