"""Synthetic document-pair generator with known gold alignments.

Documents are built from per-pair vocabularies so that unrelated sentences
inside a pair still share tokens (lexical scorers see plausible distractor
scores). The simple side walks the complex side in order, so alignments are
monotone, with deletions, 1-to-2 splits, exact copies, unaligned
insertions, and token-substitution paraphrase noise.
"""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass

import numpy as np

from .corpus import (
    AlignmentLabelKind,
    AnnotationRecord,
    AnnotationSource,
    DocumentPair,
    build_document,
)

EPOCH = _dt.datetime(1970, 1, 1, tzinfo=_dt.timezone.utc)

_SYLLABLES = [
    "ba", "ce", "di", "fo", "gu", "ha", "je", "ki", "lo", "mu",
    "na", "pe", "ri", "so", "tu", "va", "we", "xi", "yo", "zu",
]


def _make_vocabulary(size: int, rng: np.random.Generator) -> list[str]:
    words: set[str] = set()
    while len(words) < size:
        n_syl = int(rng.integers(2, 4))
        words.add("".join(rng.choice(_SYLLABLES) for _ in range(n_syl)))
    return sorted(words)


@dataclass(frozen=True)
class SyntheticConfig:
    n_pairs: int = 200
    seed: int = 0
    deletion_rate: float = 0.20
    split_rate: float = 0.15
    insertion_rate: float = 0.10
    copy_rate: float = 0.10
    noise_rate: float = 0.45
    vocab_size: int = 30
    paragraphs: tuple[int, int] = (2, 4)          # min/max per document
    sentences_per_paragraph: tuple[int, int] = (3, 6)
    tokens_per_sentence: tuple[int, int] = (8, 14)


def _sentence_tokens(vocab: list[str], rng: np.random.Generator,
                     low: int, high: int) -> list[str]:
    n = int(rng.integers(low, high + 1))
    return [vocab[int(i)] for i in rng.integers(0, len(vocab), size=n)]


def _substitute(tokens: list[str], vocab: list[str], rate: float,
                rng: np.random.Generator) -> list[str]:
    out = list(tokens)
    for idx in range(len(out)):
        if rng.random() < rate:
            out[idx] = vocab[int(rng.integers(0, len(vocab)))]
    return out


def generate_pair(pair_id: str, config: SyntheticConfig,
                  rng: np.random.Generator) -> tuple[DocumentPair, list[AnnotationRecord]]:
    vocab = _make_vocabulary(config.vocab_size, rng)
    complex_paras: list[list[str]] = []
    simple_paras: list[list[str]] = []
    records: list[AnnotationRecord] = []
    simple_index = 0
    complex_index = 0

    def note(label: AlignmentLabelKind, s_idx: int, c_idx: int) -> None:
        records.append(AnnotationRecord(
            pair_id=pair_id, simple_sent=s_idx, complex_sent=c_idx,
            label=label, source=AnnotationSource.HUMAN, timestamp=EPOCH,
        ))

    n_paras = int(rng.integers(config.paragraphs[0], config.paragraphs[1] + 1))
    for _ in range(n_paras):
        c_para: list[str] = []
        s_para: list[str] = []
        n_sents = int(rng.integers(config.sentences_per_paragraph[0],
                                   config.sentences_per_paragraph[1] + 1))
        for _ in range(n_sents):
            tokens = _sentence_tokens(vocab, rng, *config.tokens_per_sentence)
            c_para.append(" ".join(tokens) + " .")
            c_idx = complex_index
            complex_index += 1
            roll = rng.random()
            if roll < config.deletion_rate:
                pass
            elif roll < config.deletion_rate + config.split_rate:
                half = len(tokens) // 2
                first = _substitute(tokens[:half + 1], vocab, config.noise_rate, rng)
                second = _substitute(tokens[half - 1:], vocab, config.noise_rate, rng)
                for part in (first, second):
                    s_para.append(" ".join(part) + " .")
                    note(AlignmentLabelKind.PARTIAL, simple_index, c_idx)
                    simple_index += 1
            elif rng.random() < config.copy_rate:
                s_para.append(" ".join(tokens) + " .")
                note(AlignmentLabelKind.ALIGNED, simple_index, c_idx)
                simple_index += 1
            else:
                noisy = _substitute(tokens, vocab, config.noise_rate, rng)
                s_para.append(" ".join(noisy) + " .")
                note(AlignmentLabelKind.ALIGNED, simple_index, c_idx)
                simple_index += 1
            if rng.random() < config.insertion_rate:
                filler = _sentence_tokens(vocab, rng, *config.tokens_per_sentence)
                s_para.append(" ".join(filler) + " .")
                simple_index += 1
        if not s_para:
            # Paragraphs must stay non-empty for the paragraph pre-pass.
            filler = _sentence_tokens(vocab, rng, *config.tokens_per_sentence)
            s_para.append(" ".join(filler) + " .")
            simple_index += 1
        complex_paras.append(c_para)
        simple_paras.append(s_para)

    pair = DocumentPair(
        pair_id=pair_id,
        simple=build_document(f"{pair_id}-simple", 1, simple_paras),
        complex=build_document(f"{pair_id}-complex", 0, complex_paras),
    )
    return pair, records


def generate_corpus(config: SyntheticConfig) -> tuple[list[DocumentPair], list[AnnotationRecord]]:
    rng = np.random.default_rng(config.seed)
    pairs: list[DocumentPair] = []
    records: list[AnnotationRecord] = []
    for idx in range(config.n_pairs):
        pair, recs = generate_pair(f"pair{idx:04d}", config, rng)
        pairs.append(pair)
        records.extend(recs)
    return pairs, records
