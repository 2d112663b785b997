"""Closed-form and brute-force checks of the classifier metric arithmetic."""

import numpy as np
import pytest

from gesturegan.errors import DataFormatError
from gesturegan.metrics import evaluate_predictions

CLASSES = ["01a", "02a", "05a", "06a"]


def confusion_matrix_metrics(y_true, y_pred, classes):
    """Accuracy, macro recall, macro F1 straight from per-class counts.
    Undefined ratios (empty denominators) count as 0, matching the
    reported convention."""
    acc = sum(t == p for t, p in zip(y_true, y_pred)) / len(y_true)
    recalls, f1s = [], []
    for c in classes:
        tp = sum(1 for t, p in zip(y_true, y_pred) if t == c and p == c)
        fp = sum(1 for t, p in zip(y_true, y_pred) if t != c and p == c)
        fn = sum(1 for t, p in zip(y_true, y_pred) if t == c and p != c)
        recall = tp / (tp + fn) if tp + fn else 0.0
        precision = tp / (tp + fp) if tp + fp else 0.0
        f1 = (
            2 * precision * recall / (precision + recall)
            if precision + recall
            else 0.0
        )
        recalls.append(recall)
        f1s.append(f1)
    return {
        "accuracy": acc,
        "recall": sum(recalls) / len(classes),
        "f1": sum(f1s) / len(classes),
    }


def test_matches_confusion_matrix_oracle_on_random_cases():
    rng = np.random.default_rng(0)
    for _ in range(50):
        n = int(rng.integers(4, 60))
        y_true = rng.choice(CLASSES, size=n)
        y_pred = rng.choice(CLASSES, size=n)
        got = evaluate_predictions(y_true, y_pred, CLASSES)
        want = confusion_matrix_metrics(list(y_true), list(y_pred), CLASSES)
        for key in ("accuracy", "recall", "f1"):
            assert abs(got[key] - want[key]) < 1e-12, key


def test_perfect_predictions():
    y = np.repeat(CLASSES, 5)
    got = evaluate_predictions(y, y.copy(), CLASSES)
    assert got == {"accuracy": 1.0, "recall": 1.0, "f1": 1.0}


def test_constant_predictor_on_balanced_classes():
    # Always answering the first class on a balanced 4-class set:
    # accuracy 1/4; recall 1 for that class and 0 elsewhere -> macro 1/4;
    # F1 there is 2 * (1/4 * 1) / (1/4 + 1) = 0.4 -> macro 0.1.
    y_true = np.repeat(CLASSES, 10)
    y_pred = np.full(40, CLASSES[0], dtype=object)
    got = evaluate_predictions(y_true, y_pred, CLASSES)
    assert abs(got["accuracy"] - 0.25) < 1e-12
    assert abs(got["recall"] - 0.25) < 1e-12
    assert abs(got["f1"] - 0.1) < 1e-12


def test_empty_test_set_rejected():
    with pytest.raises(DataFormatError, match="empty"):
        evaluate_predictions([], [], CLASSES)


def test_length_mismatch_rejected():
    with pytest.raises(ValueError, match="mismatch"):
        evaluate_predictions(["01a"], ["01a", "02a"], CLASSES)
