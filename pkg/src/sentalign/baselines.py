"""Similarity-plus-strategy baseline aligners: per-sentence argmax with a
threshold (greedy) and plain cell thresholding, with dev-set tuning."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .corpus import AlignmentLabelKind
from .errors import DataError
from .evaluate import Task, evaluate, evaluate_corpus
from .similarity import SimilarityMatrix

GoldMap = Mapping[tuple[int, int], AlignmentLabelKind]


@dataclass(frozen=True)
class ThresholdClassifier:
    scorer_name: str
    threshold: float

    def __post_init__(self):
        if not 0.0 <= self.threshold <= 1.0:
            raise DataError(f"threshold {self.threshold} outside [0, 1]")


def greedy_align(sim: SimilarityMatrix, threshold: float) -> list[tuple[int, int]]:
    """One candidate per simple sentence: its argmax complex sentence, kept
    when the score exceeds the threshold. Several simple sentences may pick
    the same complex sentence."""
    out = []
    for i in range(sim.m):
        if sim.n == 0:
            break
        j = int(np.argmax(sim.values[i]))
        if sim.values[i, j] > threshold:
            out.append((i, j))
    return out


def classify_pairs(sim: SimilarityMatrix, threshold: float) -> set[tuple[int, int]]:
    """Every cell strictly above the threshold."""
    ii, jj = np.nonzero(sim.values > threshold)
    return {(int(i), int(j)) for i, j in zip(ii, jj)}


def tune_threshold(
    dev: Sequence[tuple[SimilarityMatrix, GoldMap]],
    task: Task,
    grid_step: float | None = None,
) -> tuple[float, float]:
    """Sweep candidate thresholds and return (threshold, F1) maximizing
    micro F1 over the dev pairs under cell thresholding. The candidate set
    is every observed score plus 0 and 1 (the exact maximizer, since F1 only
    changes at observed scores); `grid_step` merges in a uniform grid on top
    for callers that want round numbers. F1 ties go to the larger threshold."""
    if not dev:
        raise DataError("tune_threshold needs a non-empty dev set")
    candidates = {0.0, 1.0}
    if grid_step:
        candidates.update(float(t) for t in np.arange(0.0, 1.0, grid_step))
    any_positive = False
    for sim, gold in dev:
        candidates.update(float(v) for v in np.unique(sim.values))
        if any(label in task.positive_labels for label in gold.values()):
            any_positive = True
    if not any_positive:
        raise DataError("dev set has no positive gold pair; F1 is undefined")
    best_threshold, best_f1 = 0.0, -1.0
    for threshold in sorted(candidates):
        f1 = _pooled_f1(dev, task, threshold)
        if f1 > best_f1 or (f1 == best_f1 and threshold > best_threshold):
            best_threshold, best_f1 = threshold, f1
    return best_threshold, best_f1


def _pooled_f1(dev, task: Task, threshold: float) -> float:
    reports = [
        evaluate(classify_pairs(sim, threshold), gold, task)
        for sim, gold in dev
    ]
    return evaluate_corpus(reports).f1
