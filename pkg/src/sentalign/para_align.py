"""Paragraph-alignment pre-pass.

Pairwise paragraph similarities are reduced from sentence similarities in
one or two channels (channel 0: average of per-sentence maxima, channel 1:
global maximum), thresholded into a binary paragraph alignment, and merged
into per-paragraph decoding blocks for the sentence aligner. Two threshold
variants ship as defaults, tuned for news-style rewrites and for
encyclopedia-style rewrites respectively.

All public indices (paragraphs, sentences) are 0-based; only
`relative_distance` speaks 1-based because its formula i/k needs the
position counted from 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .corpus import Document, DocumentPair, Sentence
from .errors import DataError

NEWSELA_THRESHOLDS_JSON = {
    "variant": "newsela",
    "tau1": 0.1,
    "tau2": 0.34,
    "tau3": 0.9998861788416304,
    "tau4": 0.998915818299745,
    "tau5": 0.5,
}

WIKI_THRESHOLDS_JSON = {
    "variant": "wiki",
    "tau1": 0.991775706637882,
    "tau2": 0.8,
    "tau3": 0.5,
    "tau4": 5,
    "tau5": 0.9958,
}


@dataclass(frozen=True)
class ThresholdSet:
    variant: str
    tau1: float
    tau2: float
    tau3: float
    tau4: float
    tau5: float

    def __post_init__(self):
        if self.variant not in ("newsela", "wiki"):
            raise DataError(f"unknown threshold variant {self.variant!r}")
        in_unit = [self.tau1, self.tau2, self.tau3, self.tau5]
        if self.variant == "newsela":
            in_unit.append(self.tau4)
        elif self.tau4 < 0:
            raise DataError("wiki tau4 is a paragraph-count threshold and must be >= 0")
        for tau in in_unit:
            if not 0.0 <= tau <= 1.0:
                raise DataError(f"threshold {tau} outside [0, 1]")

    @classmethod
    def newsela_default(cls) -> "ThresholdSet":
        return cls.from_json(NEWSELA_THRESHOLDS_JSON)

    @classmethod
    def wiki_default(cls) -> "ThresholdSet":
        return cls.from_json(WIKI_THRESHOLDS_JSON)

    @classmethod
    def from_json(cls, raw: dict) -> "ThresholdSet":
        try:
            return cls(
                variant=raw["variant"],
                tau1=float(raw["tau1"]), tau2=float(raw["tau2"]),
                tau3=float(raw["tau3"]), tau4=float(raw["tau4"]),
                tau5=float(raw["tau5"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"bad threshold config: {exc}") from None

    @classmethod
    def load(cls, path: str | Path) -> "ThresholdSet":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))

    @classmethod
    def named(cls, name: str) -> "ThresholdSet":
        if name == "newsela":
            return cls.newsela_default()
        if name == "wiki":
            return cls.wiki_default()
        raise DataError(f"unknown threshold preset {name!r}")


@dataclass(frozen=True)
class ParagraphSimilarity:
    """channels x k x l similarity tensor between simple paragraphs (k) and
    complex paragraphs (l)."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 3 or vals.shape[0] not in (1, 2):
            raise DataError("paragraph similarity must be (1|2) x k x l")
        if vals.size == 0:
            raise DataError("paragraph similarity dimensions must be positive")
        if not np.all(np.isfinite(vals)) or vals.min() < 0.0 or vals.max() > 1.0:
            raise DataError("paragraph similarity values must be finite in [0, 1]")

    @property
    def channels(self) -> int:
        return self.values.shape[0]

    @property
    def k(self) -> int:
        return self.values.shape[1]

    @property
    def l(self) -> int:
        return self.values.shape[2]


@dataclass(frozen=True)
class ParagraphAlignment:
    """Binary k x l alignment with, for every set cell, the condition tags
    that fired for it (testing hooks)."""

    matrix: np.ndarray
    witnesses: dict[tuple[int, int], tuple[str, ...]] = field(default_factory=dict)

    @property
    def k(self) -> int:
        return self.matrix.shape[0]

    @property
    def l(self) -> int:
        return self.matrix.shape[1]


def relative_distance(i: int, j: int, k: int, l: int) -> float:
    """|i/k - j/l| for 1-based paragraph positions i of k and j of l."""
    if not (1 <= i <= k and 1 <= j <= l):
        raise DataError(f"paragraph position out of range: i={i}/{k}, j={j}/{l}")
    return abs(i / k - j / l)


def _sentence_sim_grid(
    s_para: Sequence[Sentence],
    c_para: Sequence[Sentence],
    scorer: Callable[[Sentence, Sentence], float],
) -> np.ndarray:
    return np.array([[scorer(s, c) for c in c_para] for s in s_para], dtype=np.float64)


def _check_paragraphs(doc: Document, side: str) -> None:
    if not doc.paragraphs:
        raise DataError(f"{side} document has no paragraphs")
    for para in doc.paragraphs:
        if not para:
            raise DataError(f"{side} document contains an empty paragraph")


def paragraph_similarity_newsela(
    simple: Document, complex_: Document,
    scorer: Callable[[Sentence, Sentence], float],
) -> ParagraphSimilarity:
    """Two channels per paragraph pair: the average over simple sentences of
    their best complex-sentence similarity, and the overall maximum."""
    _check_paragraphs(simple, "simple")
    _check_paragraphs(complex_, "complex")
    k, l = len(simple.paragraphs), len(complex_.paragraphs)
    values = np.zeros((2, k, l))
    for i, s_para in enumerate(simple.paragraphs):
        for j, c_para in enumerate(complex_.paragraphs):
            grid = _sentence_sim_grid(s_para, c_para, scorer)
            row_max = grid.max(axis=1)
            values[0, i, j] = row_max.mean()
            values[1, i, j] = grid.max()
    return ParagraphSimilarity(values=values)


def paragraph_similarity_wiki(
    simple: Document, complex_: Document,
    scorer: Callable[[Sentence, Sentence], float],
) -> ParagraphSimilarity:
    """Single channel: the maximum sentence similarity per paragraph pair."""
    _check_paragraphs(simple, "simple")
    _check_paragraphs(complex_, "complex")
    k, l = len(simple.paragraphs), len(complex_.paragraphs)
    values = np.zeros((1, k, l))
    for i, s_para in enumerate(simple.paragraphs):
        for j, c_para in enumerate(complex_.paragraphs):
            values[0, i, j] = _sentence_sim_grid(s_para, c_para, scorer).max()
    return ParagraphSimilarity(values=values)


def align_paragraphs_newsela(simp: ParagraphSimilarity, thresholds: ThresholdSet) -> ParagraphAlignment:
    """Set alignP[i][j] when one of three conditions fires:

    (a) j is the channel-0 argmax for i, above tau1, within distance tau2;
    (b) channel-1 similarity exceeds tau3 anywhere;
    (c) two consecutive complex paragraphs both exceed tau4 on channel 1
        within distance tau5 (splits and fusions).
    """
    if thresholds.variant != "newsela":
        raise DataError("newsela alignment needs newsela-variant thresholds")
    if simp.channels != 2:
        raise DataError(f"expected 2 channels, found {simp.channels}")
    k, l = simp.k, simp.l
    avg, mx = simp.values[0], simp.values[1]
    matrix = np.zeros((k, l), dtype=np.int8)
    witnesses: dict[tuple[int, int], list[str]] = {}

    def fire(i: int, j: int, tag: str) -> None:
        matrix[i, j] = 1
        witnesses.setdefault((i, j), []).append(tag)

    for i in range(k):
        j_max = int(np.argmax(avg[i]))
        if avg[i, j_max] > thresholds.tau1 and relative_distance(i + 1, j_max + 1, k, l) < thresholds.tau2:
            fire(i, j_max, "a")
        for j in range(l):
            if mx[i, j] > thresholds.tau3:
                fire(i, j, "b")
            if (
                j > 0
                and mx[i, j] > thresholds.tau4
                and mx[i, j - 1] > thresholds.tau4
                and relative_distance(i + 1, j + 1, k, l) < thresholds.tau5
                and relative_distance(i + 1, j, k, l) < thresholds.tau5
            ):
                fire(i, j, "c")
                fire(i, j - 1, "c")
    return ParagraphAlignment(
        matrix=matrix,
        witnesses={key: tuple(dict.fromkeys(tags)) for key, tags in witnesses.items()},
    )


def align_paragraphs_wiki(simp: ParagraphSimilarity, thresholds: ThresholdSet) -> ParagraphAlignment:
    """Candidate complex paragraphs pass tau1 similarity within distance
    tau2. A spread-out candidate set (relative span above tau3 and absolute
    span above tau4) is pruned to the candidate nearest i plus any others
    above tau5. Survivors are aligned; an empty candidate set aligns nothing.
    """
    if thresholds.variant != "wiki":
        raise DataError("wiki alignment needs wiki-variant thresholds")
    if simp.channels != 1:
        raise DataError(f"expected 1 channel, found {simp.channels}")
    k, l = simp.k, simp.l
    sim = simp.values[0]
    matrix = np.zeros((k, l), dtype=np.int8)
    witnesses: dict[tuple[int, int], tuple[str, ...]] = {}
    for i in range(k):
        cand = [
            j for j in range(l)
            if sim[i, j] > thresholds.tau1
            and relative_distance(i + 1, j + 1, k, l) < thresholds.tau2
        ]
        if not cand:
            continue
        span = max(cand) - min(cand)
        survivors = cand
        pruned = False
        if len(cand) > 1 and span / l > thresholds.tau3 and span > thresholds.tau4:
            pruned = True
            nearest = min(cand, key=lambda j: (abs(j - i), j))
            survivors = [j for j in cand if j == nearest or sim[i, j] > thresholds.tau5]
        for j in survivors:
            matrix[i, j] = 1
            witnesses[(i, j)] = ("survivor",) if pruned else ("candidate",)
    return ParagraphAlignment(matrix=matrix, witnesses=witnesses)


class AlignmentBlock(NamedTuple):
    """One decoding block: a simple paragraph against a run of consecutive
    aligned complex paragraphs, carrying document-level sentence indices."""

    simple_para: int
    complex_paras: tuple[int, ...]
    simple_sents: tuple[int, ...]
    complex_sents: tuple[int, ...]


def merge_blocks(alignment: ParagraphAlignment, pair: DocumentPair) -> list[AlignmentBlock]:
    """Group each simple paragraph's aligned complex paragraphs into maximal
    consecutive runs and emit one block per run, with the run's sentences
    concatenated in order. Unaligned simple paragraphs emit nothing."""
    k, l = alignment.k, alignment.l
    if k != len(pair.simple.paragraphs) or l != len(pair.complex.paragraphs):
        raise DataError(f"pair {pair.pair_id!r}: paragraph alignment does not match pair")
    blocks: list[AlignmentBlock] = []
    for i in range(k):
        aligned = [j for j in range(l) if alignment.matrix[i, j]]
        if not aligned:
            continue
        runs: list[list[int]] = [[aligned[0]]]
        for j in aligned[1:]:
            if j == runs[-1][-1] + 1:
                runs[-1].append(j)
            else:
                runs.append([j])
        simple_sents = tuple(s.sent_index for s in pair.simple.paragraphs[i])
        for run in runs:
            complex_sents = tuple(
                s.sent_index for j in run for s in pair.complex.paragraphs[j]
            )
            blocks.append(AlignmentBlock(
                simple_para=i,
                complex_paras=tuple(run),
                simple_sents=simple_sents,
                complex_sents=complex_sents,
            ))
    return blocks
