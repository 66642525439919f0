"""Corpus-construction utilities: sentence filters, overlap scoring,
label derivation across readability levels, and candidate selection."""

from __future__ import annotations

import math
import re
from collections import Counter
from typing import Callable, Mapping, Sequence

from .corpus import AlignmentLabelKind, Document, DocumentPair, Sentence
from .errors import DataError

SentencePair = tuple[Sentence | str, Sentence | str]

LabelMap = dict[tuple[int, int], AlignmentLabelKind]


def _text_of(item: Sentence | str) -> str:
    return item.text if isinstance(item, Sentence) else item


def preprocess_wiki(doc: Document) -> Document:
    """Drop sentences with fewer than 4 tokens or ending with a colon.

    Paragraph structure is preserved, emptied paragraphs are dropped, and
    sentence/paragraph indices are reassigned contiguously. A document may
    come back with zero sentences; downstream alignment rejects it.
    """
    kept_paras: list[list[Sentence]] = []
    for para in doc.paragraphs:
        kept = [s for s in para
                if len(s.tokens) >= 4 and not s.text.rstrip().endswith(":")]
        if kept:
            kept_paras.append(kept)
    out: list[tuple[Sentence, ...]] = []
    sent_index = 0
    for para_index, para in enumerate(kept_paras):
        rebuilt = []
        for s in para:
            rebuilt.append(Sentence(text=s.text, tokens=s.tokens,
                                    para_index=para_index, sent_index=sent_index))
            sent_index += 1
        out.append(tuple(rebuilt))
    return Document(doc_id=doc.doc_id, level=doc.level, paragraphs=tuple(out))


def pattern_filter(pairs: Sequence[SentencePair], patterns: Sequence[str]) -> list[SentencePair]:
    """Remove pairs whose simple side matches any of the regex patterns."""
    compiled = []
    for pat in patterns:
        try:
            compiled.append(re.compile(pat))
        except re.error as exc:
            raise DataError(f"invalid pattern {pat!r}: {exc}") from None
    if not compiled:
        return list(pairs)
    return [p for p in pairs
            if not any(rx.search(_text_of(p[0])) for rx in compiled)]


def load_patterns(path) -> list[str]:
    """One regex per line; blank lines and `#` comments are skipped."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            stripped = line.strip()
            if stripped and not stripped.startswith("#"):
                out.append(stripped)
    return out


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def sentence_bleu(hypothesis: Sequence[str], reference: Sequence[str]) -> float:
    """Sentence-level BLEU over n-gram orders 1-4 with uniform weights,
    brevity penalty, and add-one smoothing of every n-gram precision.

    Smoothing all orders keeps the score strictly positive even with zero
    unigram overlap, which the downstream overlap filter relies on.
    """
    if not hypothesis or not reference:
        raise DataError("sentence_bleu requires non-empty token lists")
    log_sum = 0.0
    for n in range(1, 5):
        hyp_counts = _ngrams(hypothesis, n)
        ref_counts = _ngrams(reference, n)
        total = sum(hyp_counts.values())
        matched = sum(min(c, ref_counts[g]) for g, c in hyp_counts.items())
        log_sum += 0.25 * math.log((matched + 1) / (total + 1))
    c, r = len(hypothesis), len(reference)
    brevity = 1.0 if c > r else math.exp(1 - r / c)
    return brevity * math.exp(log_sum)


def bleu_filter(pairs: Sequence[SentencePair], low: float = 0.1, high: float = 0.9,
                tokenizer: Callable[[str], list[str]] | None = None) -> list[SentencePair]:
    """Keep pairs whose simple-vs-complex BLEU falls inside [low, high]."""
    if not (0.0 <= low < high <= 1.0):
        raise DataError(f"invalid BLEU bounds low={low}, high={high}")
    kept = []
    for simple, complex_ in pairs:
        s_toks = _tokens_of(simple, tokenizer)
        c_toks = _tokens_of(complex_, tokenizer)
        if low <= sentence_bleu(s_toks, c_toks) <= high:
            kept.append((simple, complex_))
    return kept


def _tokens_of(item: Sentence | str, tokenizer) -> list[str]:
    if isinstance(item, Sentence):
        return list(item.tokens)
    from .corpus import tokenize
    return (tokenizer or tokenize)(item)


def compose_labels(first: AlignmentLabelKind, second: AlignmentLabelKind) -> AlignmentLabelKind:
    """Weakest-link composition: a chain is only as aligned as its weakest hop."""
    return first if first.rank <= second.rank else second


def best_label(a: AlignmentLabelKind, b: AlignmentLabelKind) -> AlignmentLabelKind:
    return a if a.rank >= b.rank else b


def compose_label_maps(first: LabelMap, second: LabelMap) -> LabelMap:
    """Compose (x,y) labels with (y,z) labels into (x,z) labels, taking the
    best path through any intermediate y. NotAligned results are dropped
    (absence means not aligned)."""
    by_mid: dict[int, list[tuple[int, AlignmentLabelKind]]] = {}
    for (y, z), label in second.items():
        by_mid.setdefault(y, []).append((z, label))
    out: LabelMap = {}
    for (x, y), l1 in first.items():
        for z, l2 in by_mid.get(y, []):
            candidate = compose_labels(l1, l2)
            if candidate is AlignmentLabelKind.NOT_ALIGNED:
                continue
            prev = out.get((x, z))
            out[(x, z)] = candidate if prev is None else best_label(prev, candidate)
    return out


def derive_nonadjacent(
    adjacent: Mapping[tuple[int, int], LabelMap],
) -> dict[tuple[int, int], LabelMap]:
    """Derive label maps for all non-adjacent level pairs from a contiguous
    chain of adjacent-level maps keyed (level, level + 1)."""
    if not adjacent:
        return {}
    for (a, b) in adjacent:
        if b != a + 1:
            raise DataError(f"adjacent map key ({a}, {b}) is not an adjacent level pair")
    starts = sorted(a for a, _ in adjacent)
    lo, hi = starts[0], starts[-1] + 1
    for level in range(lo, hi):
        if (level, level + 1) not in adjacent:
            raise DataError(f"missing adjacent map for levels ({level}, {level + 1})")
    derived: dict[tuple[int, int], LabelMap] = {}
    for a in range(lo, hi):
        acc = dict(adjacent[(a, a + 1)])
        for b in range(a + 2, hi + 1):
            acc = compose_label_maps(acc, adjacent[(b - 1, b)])
            derived[(a, b)] = dict(acc)
    return derived


def select_candidates(
    pair: DocumentPair,
    scorers: Sequence[Callable[[Sentence, Sentence], float]],
) -> list[tuple[int, int]]:
    """For every simple sentence, take the union over scorers of the best
    complex sentence per scorer. Ties go to the lower complex index."""
    if not scorers:
        raise DataError("select_candidates requires at least one scorer")
    complex_sents = pair.complex.sentences
    if not complex_sents:
        raise DataError(f"pair {pair.pair_id!r}: empty complex document")
    out: set[tuple[int, int]] = set()
    for s in pair.simple.sentences:
        for scorer in scorers:
            best_j, best_score = 0, -math.inf
            for j, c in enumerate(complex_sents):
                score = scorer(s, c)
                if score > best_score:
                    best_j, best_score = j, score
            out.add((s.sent_index, best_j))
    return sorted(out)
