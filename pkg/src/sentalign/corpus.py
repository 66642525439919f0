"""Domain types and file I/O for document pairs and annotation records.

A corpus file is UTF-8 JSON lines, one document pair per line:

    {"pair_id": str,
     "simple":  {"doc_id": str, "level": int, "paragraphs": [[str, ...], ...]},
     "complex": {"doc_id": str, "level": int, "paragraphs": [[str, ...], ...]}}

An annotation file is JSON lines of `AnnotationRecord`, append-only; the
last record for a (pair_id, simple_sent, complex_sent) key wins.
"""

from __future__ import annotations

import datetime as _dt
import enum
import json
import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .errors import DataError


class AlignmentLabelKind(enum.Enum):
    """Three-way sentence pair label, ordered Aligned > Partial > NotAligned."""

    ALIGNED = "aligned"
    PARTIAL = "partial"
    NOT_ALIGNED = "not_aligned"

    @property
    def rank(self) -> int:
        return _LABEL_RANK[self]

    @classmethod
    def from_wire(cls, value: str) -> "AlignmentLabelKind":
        try:
            return cls(value)
        except ValueError:
            raise DataError(f"unknown alignment label {value!r}") from None


_LABEL_RANK = {
    AlignmentLabelKind.ALIGNED: 2,
    AlignmentLabelKind.PARTIAL: 1,
    AlignmentLabelKind.NOT_ALIGNED: 0,
}


class AnnotationSource(enum.Enum):
    PREDICTED = "predicted"
    HUMAN = "human"


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize(text: str) -> list[str]:
    """Lowercase and split on whitespace; leading/trailing punctuation of
    each chunk becomes separate tokens (internal punctuation is kept)."""
    tokens: list[str] = []
    for chunk in text.lower().split():
        lead: list[str] = []
        trail: list[str] = []
        while chunk and _is_punct(chunk[0]):
            lead.append(chunk[0])
            chunk = chunk[1:]
        while chunk and _is_punct(chunk[-1]):
            trail.append(chunk[-1])
            chunk = chunk[:-1]
        tokens.extend(lead)
        if chunk:
            tokens.append(chunk)
        tokens.extend(reversed(trail))
    return tokens


@dataclass(frozen=True)
class Sentence:
    """One sentence with its position inside the owning document.

    `sent_index` is the 0-based index in document order (across paragraphs);
    `para_index` is the 0-based paragraph the sentence belongs to.
    """

    text: str
    tokens: tuple[str, ...]
    para_index: int
    sent_index: int


@dataclass(frozen=True)
class Document:
    doc_id: str
    level: int
    paragraphs: tuple[tuple[Sentence, ...], ...]

    @property
    def sentences(self) -> list[Sentence]:
        return [s for para in self.paragraphs for s in para]

    @property
    def n_sentences(self) -> int:
        return sum(len(p) for p in self.paragraphs)


@dataclass(frozen=True)
class DocumentPair:
    pair_id: str
    simple: Document
    complex: Document


@dataclass(frozen=True)
class AnnotationRecord:
    pair_id: str
    simple_sent: int
    complex_sent: int
    label: AlignmentLabelKind
    source: AnnotationSource
    timestamp: _dt.datetime

    def to_json(self) -> str:
        return json.dumps(
            {
                "pair_id": self.pair_id,
                "simple_sent": self.simple_sent,
                "complex_sent": self.complex_sent,
                "label": self.label.value,
                "source": self.source.value,
                "timestamp": self.timestamp.isoformat(),
            },
            ensure_ascii=False,
        )

    @classmethod
    def from_json(cls, line: str) -> "AnnotationRecord":
        try:
            raw = json.loads(line)
            return cls(
                pair_id=raw["pair_id"],
                simple_sent=int(raw["simple_sent"]),
                complex_sent=int(raw["complex_sent"]),
                label=AlignmentLabelKind.from_wire(raw["label"]),
                source=AnnotationSource(raw["source"]),
                timestamp=_dt.datetime.fromisoformat(raw["timestamp"]),
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise DataError(f"malformed annotation record: {exc}") from exc


def build_document(doc_id: str, level: int, paragraphs: Iterable[Iterable[str]]) -> Document:
    """Tokenize raw paragraph texts into a Document.

    Raises DataError on whitespace-only sentences; they cannot satisfy the
    non-empty-token invariant.
    """
    out_paras: list[tuple[Sentence, ...]] = []
    sent_index = 0
    for para_index, para in enumerate(paragraphs):
        sents: list[Sentence] = []
        for text in para:
            if not isinstance(text, str):
                raise DataError(f"document {doc_id!r}: sentence is not a string")
            toks = tokenize(text)
            if not toks:
                raise DataError(
                    f"document {doc_id!r}: whitespace-only sentence at index {sent_index}"
                )
            sents.append(Sentence(text=text, tokens=tuple(toks),
                                  para_index=para_index, sent_index=sent_index))
            sent_index += 1
        out_paras.append(tuple(sents))
    return Document(doc_id=doc_id, level=level, paragraphs=tuple(out_paras))


def _document_from_raw(raw: Mapping, side: str) -> Document:
    for key in ("doc_id", "level", "paragraphs"):
        if key not in raw:
            raise DataError(f"{side} document missing field {key!r}")
    if not isinstance(raw["paragraphs"], list) or not raw["paragraphs"]:
        raise DataError(f"{side} document has an empty or invalid paragraph list")
    return build_document(raw["doc_id"], int(raw["level"]), raw["paragraphs"])


def _document_to_raw(doc: Document) -> dict:
    return {
        "doc_id": doc.doc_id,
        "level": doc.level,
        "paragraphs": [[s.text for s in para] for para in doc.paragraphs],
    }


def load_corpus(path: str | Path) -> list[DocumentPair]:
    """Load a JSON-lines corpus file. Errors carry the 1-based line number."""
    pairs: list[DocumentPair] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                pairs.append(_pair_from_line(line))
            except DataError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from None
            if pairs[-1].pair_id in seen:
                raise DataError(f"{path}:{lineno}: duplicate pair_id {pairs[-1].pair_id!r}")
            seen.add(pairs[-1].pair_id)
    return pairs


def _pair_from_line(line: str) -> DocumentPair:
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise DataError(f"invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise DataError("pair record is not a JSON object")
    for key in ("pair_id", "simple", "complex"):
        if key not in raw:
            raise DataError(f"missing {key!r} field")
    simple = _document_from_raw(raw["simple"], "simple")
    complex_ = _document_from_raw(raw["complex"], "complex")
    if simple.level <= complex_.level:
        raise DataError(
            f"simple level {simple.level} must exceed complex level {complex_.level}"
        )
    return DocumentPair(pair_id=str(raw["pair_id"]), simple=simple, complex=complex_)


def save_corpus(pairs: Iterable[DocumentPair], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for pair in pairs:
            fh.write(json.dumps(
                {
                    "pair_id": pair.pair_id,
                    "simple": _document_to_raw(pair.simple),
                    "complex": _document_to_raw(pair.complex),
                },
                ensure_ascii=False,
            ))
            fh.write("\n")


def load_annotations(path: str | Path) -> list[AnnotationRecord]:
    records: list[AnnotationRecord] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                records.append(AnnotationRecord.from_json(line))
            except DataError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from None
    return records


def save_annotations(records: Iterable[AnnotationRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(rec.to_json())
            fh.write("\n")


def merge_annotations(
    records: Iterable[AnnotationRecord],
) -> dict[tuple[str, int, int], AnnotationRecord]:
    """Collapse an append-only record stream: last write per key wins."""
    merged: dict[tuple[str, int, int], AnnotationRecord] = {}
    for rec in records:
        merged[(rec.pair_id, rec.simple_sent, rec.complex_sent)] = rec
    return merged


def validate_annotation_file(path: str | Path) -> int:
    """Check every line parses as an AnnotationRecord; return the merged
    record count. Raises DataError on the first bad line."""
    return len(merge_annotations(load_annotations(path)))
