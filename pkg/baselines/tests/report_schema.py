"""JSON schema of the experiment report shared with the main pipeline."""

_ROW_FIELDS = [
    "accuracy", "precision_0", "precision_1", "recall_0", "recall_1",
    "f1_0", "f1_1", "support_0", "support_1",
]

REPORT_SCHEMA = {
    "type": "object",
    "required": [
        "report_version", "classifier", "split_mode", "train_fraction", "seed",
        "n_train", "n_test", "train_positive", "train_negative",
        "test_positive", "test_negative", "realized_train_fraction",
        "row", "confusion",
    ],
    "properties": {
        "report_version": {"type": "integer", "minimum": 1},
        "classifier": {"type": "string"},
        "split_mode": {"type": "string"},
        "train_fraction": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "seed": {"type": "integer"},
        "n_train": {"type": "integer", "minimum": 1},
        "n_test": {"type": "integer", "minimum": 1},
        "train_positive": {"type": "integer", "minimum": 0},
        "train_negative": {"type": "integer", "minimum": 0},
        "test_positive": {"type": "integer", "minimum": 0},
        "test_negative": {"type": "integer", "minimum": 0},
        "realized_train_fraction": {"type": "number", "minimum": 0, "maximum": 1},
        "row": {
            "type": "object",
            "required": _ROW_FIELDS,
            "properties": {f: {"type": "number"} for f in _ROW_FIELDS},
            "additionalProperties": False,
        },
        "confusion": {
            "type": "object",
            "required": ["tp", "fp", "tn", "fn"],
            "properties": {k: {"type": "integer", "minimum": 0} for k in ("tp", "fp", "tn", "fn")},
            "additionalProperties": False,
        },
    },
}
