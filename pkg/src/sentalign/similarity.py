"""Sentence-similarity scorers producing the aligner's emission scores.

Three lexical scorers are built in (jaccard, tfidf, char_ngram). Scores
from any external system, e.g. a neural sentence-pair classifier, can be
injected through a matrix file instead:

    {"pair_id": str, "m": int, "n": int, "values": [[float, ...], ...]}

with row index = simple sentence, column index = complex sentence, and
every value finite in [0, 1].
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Protocol, Sequence

import numpy as np

from .corpus import Document, DocumentPair, Sentence
from .errors import DataError


class Scorer(Protocol):
    name: str

    def __call__(self, a: Sentence, b: Sentence) -> float: ...


@dataclass(frozen=True)
class SimilarityMatrix:
    """m x n emission scores between the simple and complex sentences of
    one document pair. values[i][j] scores (simple i, complex j)."""

    pair_id: str
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 2:
            raise DataError(f"pair {self.pair_id!r}: similarity values must be 2-d")
        if not np.all(np.isfinite(vals)):
            raise DataError(f"pair {self.pair_id!r}: non-finite similarity value")
        if vals.size and (vals.min() < 0.0 or vals.max() > 1.0):
            raise DataError(f"pair {self.pair_id!r}: similarity value outside [0, 1]")

    @property
    def m(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class IdfTable:
    """Smoothed inverse sentence-frequency weights; unseen tokens fall back
    to the idf of a frequency-zero token."""

    weights: dict[str, float]
    document_count: int

    @property
    def default_idf(self) -> float:
        return math.log(1 + self.document_count) + 1.0

    def idf(self, token: str) -> float:
        return self.weights.get(token, self.default_idf)


def jaccard_sim(a: Sequence[str], b: Sequence[str]) -> float:
    if not a or not b:
        raise DataError("jaccard_sim requires non-empty token lists")
    sa, sb = set(a), set(b)
    return len(sa & sb) / len(sa | sb)


def build_idf(corpus: Iterable[Document]) -> IdfTable:
    """idf(t) = ln((1 + N) / (1 + df(t))) + 1 with N = total sentences and
    df = number of sentences containing t."""
    df: Counter = Counter()
    total = 0
    for doc in corpus:
        for sent in doc.sentences:
            total += 1
            df.update(set(sent.tokens))
    if total == 0:
        raise DataError("build_idf requires a corpus with at least one sentence")
    weights = {tok: math.log((1 + total) / (1 + n)) + 1.0 for tok, n in df.items()}
    return IdfTable(weights=weights, document_count=total)


def tfidf_cosine(a: Sequence[str], b: Sequence[str], idf: IdfTable) -> float:
    if not a or not b:
        raise DataError("tfidf_cosine requires non-empty token lists")
    ca, cb = Counter(a), Counter(b)
    dot = sum(ca[t] * cb[t] * idf.idf(t) ** 2 for t in ca.keys() & cb.keys())
    norm_a = math.sqrt(sum((c * idf.idf(t)) ** 2 for t, c in ca.items()))
    norm_b = math.sqrt(sum((c * idf.idf(t)) ** 2 for t, c in cb.items()))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    return min(1.0, dot / (norm_a * norm_b))


def _char_ngrams(s: str, order: int) -> Counter:
    return Counter(s[i:i + order] for i in range(len(s) - order + 1))


def _count_cosine(ca: Counter, cb: Counter) -> float:
    if not ca or not cb:
        return 0.0
    dot = sum(c * cb[g] for g, c in ca.items())
    norm = math.sqrt(sum(c * c for c in ca.values())) * math.sqrt(sum(c * c for c in cb.values()))
    return min(1.0, dot / norm) if norm else 0.0


def char_ngram_sim(a: str, b: str, orders: Iterable[int] = (2, 3, 4)) -> float:
    """Mean over n-gram orders of the cosine between character n-gram count
    vectors. A string shorter than an order contributes 0 for that order."""
    na = " ".join(a.lower().split())
    nb = " ".join(b.lower().split())
    if not na or not nb:
        raise DataError("char_ngram_sim requires non-empty strings")
    order_list = sorted(set(orders))
    if not order_list:
        raise DataError("char_ngram_sim requires at least one n-gram order")
    total = sum(_count_cosine(_char_ngrams(na, k), _char_ngrams(nb, k)) for k in order_list)
    return total / len(order_list)


class JaccardScorer:
    name = "jaccard"

    def __call__(self, a: Sentence, b: Sentence) -> float:
        return jaccard_sim(a.tokens, b.tokens)


class TfidfScorer:
    name = "tfidf"

    def __init__(self, idf: IdfTable):
        self.idf = idf

    def __call__(self, a: Sentence, b: Sentence) -> float:
        return tfidf_cosine(a.tokens, b.tokens, self.idf)


class CharNgramScorer:
    name = "char_ngram"

    def __init__(self, orders: Iterable[int] = (2, 3, 4)):
        self.orders = tuple(sorted(set(orders)))

    def __call__(self, a: Sentence, b: Sentence) -> float:
        return char_ngram_sim(a.text, b.text, self.orders)


def make_scorer(name: str, corpus: Iterable[Document] | None = None,
                idf: IdfTable | None = None) -> Scorer:
    """Build a scorer by name. `tfidf` needs an IdfTable or a corpus to
    derive one from."""
    if name == "jaccard":
        return JaccardScorer()
    if name == "char_ngram":
        return CharNgramScorer()
    if name == "tfidf":
        if idf is None:
            if corpus is None:
                raise DataError("tfidf scorer needs an idf table or a corpus")
            idf = build_idf(corpus)
        return TfidfScorer(idf)
    raise DataError(f"unknown scorer {name!r}")


def score_pair(pair: DocumentPair, scorer: Callable[[Sentence, Sentence], float]) -> SimilarityMatrix:
    simple = pair.simple.sentences
    complex_ = pair.complex.sentences
    if not simple or not complex_:
        raise DataError(f"pair {pair.pair_id!r}: cannot score an empty document")
    values = np.empty((len(simple), len(complex_)), dtype=np.float64)
    for i, s in enumerate(simple):
        for j, c in enumerate(complex_):
            values[i, j] = scorer(s, c)
    return SimilarityMatrix(pair_id=pair.pair_id, values=values)


def save_matrix(matrix: SimilarityMatrix, path: str | Path) -> None:
    payload = {
        "pair_id": matrix.pair_id,
        "m": matrix.m,
        "n": matrix.n,
        "values": [[float(v) for v in row] for row in matrix.values],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False)
        fh.write("\n")


def load_external_matrix(path: str | Path, pair: DocumentPair) -> SimilarityMatrix:
    """Load a matrix file and check it against the pair's dimensions.
    Out-of-range or non-finite values are errors, never clamped."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"{path}: invalid matrix file: {exc}") from None
    for key in ("pair_id", "m", "n", "values"):
        if key not in raw:
            raise DataError(f"{path}: missing field {key!r}")
    m_exp = pair.simple.n_sentences
    n_exp = pair.complex.n_sentences
    values = raw["values"]
    if raw["m"] != m_exp or raw["n"] != n_exp or len(values) != m_exp or any(
        len(row) != n_exp for row in values
    ):
        raise DataError(
            f"{path}: dimension mismatch: expected {m_exp}x{n_exp}, "
            f"found {raw['m']}x{raw['n']}"
        )
    for i, row in enumerate(values):
        for j, v in enumerate(row):
            if not isinstance(v, (int, float)) or not math.isfinite(v) or not 0.0 <= v <= 1.0:
                raise DataError(f"{path}: invalid value {v!r} at ({i}, {j})")
    return SimilarityMatrix(pair_id=raw["pair_id"], values=np.asarray(values, dtype=np.float64))
