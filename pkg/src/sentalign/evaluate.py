"""Precision/recall/F1 harness for the two binary evaluation tasks.

Task 1 treats aligned and partially-aligned pairs as positive; Task 2 only
fully aligned pairs. Identical sentence pairs (equal after lowercasing and
whitespace collapsing) are trivial and removed from both predictions and
gold before counting.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Iterable, Mapping

from .corpus import AlignmentLabelKind, DocumentPair
from .errors import DataError


class Task(enum.Enum):
    TASK1 = "task1"
    TASK2 = "task2"

    @property
    def positive_labels(self) -> frozenset[AlignmentLabelKind]:
        if self is Task.TASK1:
            return frozenset({AlignmentLabelKind.ALIGNED, AlignmentLabelKind.PARTIAL})
        return frozenset({AlignmentLabelKind.ALIGNED})


@dataclass(frozen=True)
class EvalReport:
    task: Task
    tp: int
    fp: int
    fn: int
    excluded_identical: int

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 0.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0

    def to_json(self) -> str:
        return json.dumps({
            "task": self.task.value,
            "tp": self.tp, "fp": self.fp, "fn": self.fn,
            "precision": self.precision, "recall": self.recall, "f1": self.f1,
            "excluded_identical": self.excluded_identical,
        })

    def as_text(self) -> str:
        return (f"{self.task.value}: P={self.precision:.4f} R={self.recall:.4f} "
                f"F1={self.f1:.4f} (tp={self.tp} fp={self.fp} fn={self.fn} "
                f"identical_excluded={self.excluded_identical})")


def _normalize(text: str) -> str:
    return " ".join(text.lower().split())


def identical_pairs(pair: DocumentPair) -> frozenset[tuple[int, int]]:
    """All (simple_sent, complex_sent) index pairs whose normalized texts
    are equal."""
    by_text: dict[str, list[int]] = {}
    for c in pair.complex.sentences:
        by_text.setdefault(_normalize(c.text), []).append(c.sent_index)
    out = set()
    for s in pair.simple.sentences:
        for j in by_text.get(_normalize(s.text), ()):
            out.add((s.sent_index, j))
    return frozenset(out)


def evaluate(
    pred: Iterable[tuple[int, int]],
    gold: Mapping[tuple[int, int], AlignmentLabelKind],
    task: Task,
    identical: frozenset[tuple[int, int]] = frozenset(),
) -> EvalReport:
    """Count tp/fp/fn of predicted positives against gold labels. Pairs
    absent from `gold` count as not-aligned."""
    pred_set = set(pred)
    excluded = identical & (pred_set | set(gold))
    pred_set -= identical
    positives = {
        key for key, label in gold.items()
        if label in task.positive_labels and key not in identical
    }
    tp = len(pred_set & positives)
    return EvalReport(
        task=task,
        tp=tp,
        fp=len(pred_set) - tp,
        fn=len(positives) - tp,
        excluded_identical=len(excluded),
    )


def evaluate_corpus(reports: Iterable[EvalReport]) -> EvalReport:
    """Micro-average: pool tp/fp/fn across pairs, then recompute P/R/F1."""
    reports = list(reports)
    if not reports:
        raise DataError("evaluate_corpus needs at least one report")
    task = reports[0].task
    if any(r.task is not task for r in reports):
        raise DataError("cannot pool reports from different tasks")
    return EvalReport(
        task=task,
        tp=sum(r.tp for r in reports),
        fp=sum(r.fp for r in reports),
        fn=sum(r.fn for r in reports),
        excluded_identical=sum(r.excluded_identical for r in reports),
    )
