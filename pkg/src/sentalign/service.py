"""HTTP service backing the annotation review UI.

Serves documents, candidate sentence pairs with predicted and human labels,
and accepts label corrections. Every accepted label is appended to the
state file and flushed to disk before the request is acknowledged, so an
acknowledged write survives a restart. Reads are lock-free snapshots;
writes are serialized through one lock.
"""

from __future__ import annotations

import datetime as _dt
import os
import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .construction import select_candidates
from .corpus import (
    AlignmentLabelKind,
    AnnotationRecord,
    AnnotationSource,
    Document,
    DocumentPair,
    load_annotations,
    load_corpus,
)
from .errors import DataError
from .similarity import build_idf, make_scorer


class LabelRequest(BaseModel):
    simple_sent: int
    complex_sent: int
    label: str


def _doc_payload(doc: Document) -> dict:
    return {
        "doc_id": doc.doc_id,
        "level": doc.level,
        "paragraphs": [
            [{"text": s.text, "sent_index": s.sent_index} for s in para]
            for para in doc.paragraphs
        ],
    }


class AnnotationStore:
    """In-memory view of predictions and human labels, with an append-only
    journal for the human ones."""

    def __init__(self, pairs: list[DocumentPair], predictions: list[AnnotationRecord],
                 state_path: str | Path, scorer_names: tuple[str, ...] = ("jaccard",)):
        self.pairs = {p.pair_id: p for p in pairs}
        self.order = [p.pair_id for p in pairs]
        self.state_path = Path(state_path)
        self.lock = threading.Lock()
        self.predicted: dict[tuple[str, int, int], AnnotationRecord] = {}
        for rec in predictions:
            self.predicted[(rec.pair_id, rec.simple_sent, rec.complex_sent)] = rec
        self.human: dict[tuple[str, int, int], AnnotationRecord] = {}
        if self.state_path.exists():
            for rec in load_annotations(self.state_path):
                self.human[(rec.pair_id, rec.simple_sent, rec.complex_sent)] = rec

        docs = [d for p in pairs for d in (p.simple, p.complex)]
        idf = build_idf(docs) if docs else None
        self.scorers = [make_scorer(name, idf=idf) for name in scorer_names]
        self.candidates: dict[str, list[tuple[int, int]]] = {}
        for pair in pairs:
            from_scorers = select_candidates(pair, self.scorers) if self.scorers else []
            predicted_keys = [
                (key[1], key[2]) for key in self.predicted if key[0] == pair.pair_id
            ]
            self.candidates[pair.pair_id] = sorted(set(from_scorers) | set(predicted_keys))

    def pair_summary(self) -> list[dict]:
        out = []
        for pair_id in self.order:
            cands = self.candidates[pair_id]
            labeled = sum(1 for (i, j) in cands if (pair_id, i, j) in self.human)
            out.append({
                "pair_id": pair_id,
                "simple_doc_id": self.pairs[pair_id].simple.doc_id,
                "labeled_count": labeled,
                "total_candidates": len(cands),
            })
        return out

    def pair_detail(self, pair_id: str) -> dict:
        pair = self.pairs[pair_id]
        primary = self.scorers[0] if self.scorers else None
        simple_sents = pair.simple.sentences
        complex_sents = pair.complex.sentences
        cands = []
        for (i, j) in self.candidates[pair_id]:
            predicted = self.predicted.get((pair_id, i, j))
            human = self.human.get((pair_id, i, j))
            cands.append({
                "simple_sent": i,
                "complex_sent": j,
                "similarity": (
                    primary(simple_sents[i], complex_sents[j]) if primary else None
                ),
                "predicted_label": predicted.label.value if predicted else None,
                "human_label": human.label.value if human else None,
            })
        return {
            "pair_id": pair_id,
            "simple": _doc_payload(pair.simple),
            "complex": _doc_payload(pair.complex),
            "candidates": cands,
        }

    def add_label(self, pair_id: str, req: LabelRequest) -> AnnotationRecord:
        pair = self.pairs[pair_id]
        if not (0 <= req.simple_sent < pair.simple.n_sentences):
            raise DataError(f"simple_sent {req.simple_sent} out of range")
        if not (0 <= req.complex_sent < pair.complex.n_sentences):
            raise DataError(f"complex_sent {req.complex_sent} out of range")
        record = AnnotationRecord(
            pair_id=pair_id,
            simple_sent=req.simple_sent,
            complex_sent=req.complex_sent,
            label=AlignmentLabelKind.from_wire(req.label),
            source=AnnotationSource.HUMAN,
            timestamp=_dt.datetime.now(_dt.timezone.utc),
        )
        with self.lock:
            # Durable before acknowledged: append, flush, fsync.
            with open(self.state_path, "a", encoding="utf-8") as fh:
                fh.write(record.to_json())
                fh.write("\n")
                fh.flush()
                os.fsync(fh.fileno())
            self.human[(pair_id, record.simple_sent, record.complex_sent)] = record
            key = (record.simple_sent, record.complex_sent)
            if key not in self.candidates[pair_id]:
                self.candidates[pair_id] = sorted(self.candidates[pair_id] + [key])
        return record

    def export_lines(self) -> str:
        lines = [rec.to_json() for rec in self.predicted.values()]
        lines += [rec.to_json() for rec in self.human.values()]
        return "\n".join(lines) + ("\n" if lines else "")


def create_app(
    corpus_path: str | Path,
    state_path: str | Path,
    predictions_path: str | Path | None = None,
    scorer_names: tuple[str, ...] = ("jaccard",),
    static_dir: str | Path | None = None,
) -> FastAPI:
    pairs = load_corpus(corpus_path)
    predictions = load_annotations(predictions_path) if predictions_path else []
    store = AnnotationStore(pairs, predictions, state_path, scorer_names)
    app = FastAPI(title="sentalign annotation service")
    app.state.store = store

    @app.get("/api/pairs")
    def list_pairs():
        return store.pair_summary()

    @app.get("/api/pairs/{pair_id}")
    def get_pair(pair_id: str):
        if pair_id not in store.pairs:
            raise HTTPException(status_code=404, detail=f"unknown pair {pair_id!r}")
        return store.pair_detail(pair_id)

    @app.post("/api/pairs/{pair_id}/labels")
    def post_label(pair_id: str, req: LabelRequest):
        if pair_id not in store.pairs:
            raise HTTPException(status_code=404, detail=f"unknown pair {pair_id!r}")
        try:
            record = store.add_label(pair_id, req)
        except DataError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        except OSError as exc:
            raise HTTPException(status_code=500, detail=f"write failed: {exc}") from None
        return {
            "pair_id": record.pair_id,
            "simple_sent": record.simple_sent,
            "complex_sent": record.complex_sent,
            "label": record.label.value,
            "source": record.source.value,
            "timestamp": record.timestamp.isoformat(),
        }

    @app.get("/api/export", response_class=PlainTextResponse)
    def export():
        return store.export_lines()

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")
    return app


def serve(
    corpus_path: str | Path,
    state_path: str | Path,
    predictions_path: str | Path | None = None,
    host: str = "127.0.0.1",
    port: int = 8400,
    static_dir: str | Path | None = None,
) -> None:
    import uvicorn

    app = create_app(corpus_path, state_path, predictions_path, static_dir=static_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")
