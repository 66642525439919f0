"""Pipeline wiring: corpus -> similarity -> paragraph pre-pass -> decoding
-> evaluation, plus training, tuning, and matrix export. Every command here
is a pure function of its inputs and the seed, so reruns are byte-identical.
"""

from __future__ import annotations

import datetime as _dt
import enum
import json
from dataclasses import dataclass, field
from pathlib import Path

from . import crf
from .corpus import (
    AlignmentLabelKind,
    AnnotationRecord,
    AnnotationSource,
    DocumentPair,
    load_annotations,
    load_corpus,
    merge_annotations,
    save_annotations,
)
from .errors import DataError, ModelError
from .evaluate import EvalReport, Task, evaluate, evaluate_corpus, identical_pairs
from .para_align import (
    AlignmentBlock,
    ParagraphAlignment,
    ThresholdSet,
    align_paragraphs_newsela,
    align_paragraphs_wiki,
    merge_blocks,
    paragraph_similarity_newsela,
    paragraph_similarity_wiki,
)
from .similarity import SimilarityMatrix, load_external_matrix, make_scorer, save_matrix, score_pair

import numpy as np

EPOCH = _dt.datetime(1970, 1, 1, tzinfo=_dt.timezone.utc)

GoldMap = dict[tuple[int, int], AlignmentLabelKind]


class Prepass(enum.Enum):
    NONE = "none"
    PREDICTED = "predicted"
    GOLD_FROM_FILE = "gold_from_file"


@dataclass
class PipelineConfig:
    scorer: str = "jaccard"
    thresholds: ThresholdSet = field(default_factory=ThresholdSet.newsela_default)
    model_path: Path | None = None
    prepass: Prepass = Prepass.NONE
    gold_paragraphs_path: Path | None = None
    matrix_dir: Path | None = None
    output_dir: Path = Path("out")
    seed: int = 0
    train: crf.TrainConfig = field(default_factory=crf.TrainConfig)

    @classmethod
    def from_json(cls, path: str | Path) -> "PipelineConfig":
        base = Path(path).parent
        try:
            with open(path, encoding="utf-8") as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise DataError(f"{path}: cannot read config: {exc}") from None

        def resolve(key: str) -> Path | None:
            value = raw.get(key)
            return (base / value) if value is not None else None

        thresholds = raw.get("thresholds", "newsela")
        if isinstance(thresholds, str):
            thresholds = ThresholdSet.named(thresholds)
        else:
            thresholds = ThresholdSet.from_json(thresholds)
        train_raw = dict(raw.get("train", {}))
        train_raw.setdefault("seed", raw.get("seed", 0))
        config = cls(
            scorer=raw.get("scorer", "jaccard"),
            thresholds=thresholds,
            model_path=resolve("model_path"),
            prepass=Prepass(raw.get("paragraph_prepass", "none")),
            gold_paragraphs_path=resolve("gold_paragraphs_path"),
            matrix_dir=resolve("matrix_dir"),
            output_dir=resolve("output_dir") or Path("out"),
            seed=int(raw.get("seed", 0)),
            train=crf.TrainConfig(**train_raw),
        )
        config.validate_inputs()
        return config

    def validate_inputs(self) -> None:
        if self.prepass is Prepass.GOLD_FROM_FILE:
            if self.gold_paragraphs_path is None or not self.gold_paragraphs_path.exists():
                raise DataError("gold paragraph pre-pass needs an existing gold_paragraphs_path")
        if self.matrix_dir is not None and not self.matrix_dir.exists():
            raise DataError(f"matrix_dir {self.matrix_dir} does not exist")


def load_gold_paragraphs(path: str | Path) -> dict[str, list[tuple[int, int]]]:
    """JSON lines {"pair_id": str, "aligned": [[simple_para, complex_para], ...]}."""
    out: dict[str, list[tuple[int, int]]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
                out[raw["pair_id"]] = [(int(i), int(j)) for i, j in raw["aligned"]]
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise DataError(f"{path}:{lineno}: bad gold paragraph record: {exc}") from None
    return out


def gold_map_for_pair(records, pair_id: str) -> GoldMap:
    merged = merge_annotations(records)
    return {
        (key[1], key[2]): rec.label
        for key, rec in merged.items()
        if key[0] == pair_id
    }


def _check_gold_indices(pair: DocumentPair, gold: GoldMap) -> None:
    m, n = pair.simple.n_sentences, pair.complex.n_sentences
    for (i, j) in gold:
        if not (0 <= i < m and 0 <= j < n):
            raise DataError(
                f"pair {pair.pair_id!r}: gold record ({i}, {j}) outside {m}x{n}"
            )


def get_matrix(pair: DocumentPair, config: PipelineConfig, scorer) -> SimilarityMatrix:
    if config.matrix_dir is not None:
        return load_external_matrix(config.matrix_dir / f"{pair.pair_id}.json", pair)
    return score_pair(pair, scorer)


def build_blocks(
    pair: DocumentPair,
    config: PipelineConfig,
    scorer,
    gold_paragraphs: dict[str, list[tuple[int, int]]] | None = None,
) -> list[AlignmentBlock] | None:
    """Paragraph blocks per the configured pre-pass; None means decode the
    whole document as a single block."""
    if config.prepass is Prepass.NONE:
        return None
    if config.prepass is Prepass.GOLD_FROM_FILE:
        aligned = (gold_paragraphs or {}).get(pair.pair_id, [])
        k = len(pair.simple.paragraphs)
        l = len(pair.complex.paragraphs)
        matrix = np.zeros((k, l), dtype=np.int8)
        for i, j in aligned:
            if not (0 <= i < k and 0 <= j < l):
                raise DataError(
                    f"pair {pair.pair_id!r}: gold paragraph ({i}, {j}) outside {k}x{l}"
                )
            matrix[i, j] = 1
        alignment = ParagraphAlignment(matrix=matrix)
        return merge_blocks(alignment, pair)
    if config.thresholds.variant == "newsela":
        simp = paragraph_similarity_newsela(pair.simple, pair.complex, scorer)
        alignment = align_paragraphs_newsela(simp, config.thresholds)
    else:
        simp = paragraph_similarity_wiki(pair.simple, pair.complex, scorer)
        alignment = align_paragraphs_wiki(simp, config.thresholds)
    return merge_blocks(alignment, pair)


def build_training_instances(
    pairs: list[DocumentPair],
    records,
    config: PipelineConfig,
    scorer,
) -> list[tuple[SimilarityMatrix, crf.AlignmentSequence]]:
    """Per-block (similarity, gold sequence) instances.

    A simple sentence's gold label is its lowest-index positive partner
    that falls inside the block's complex sentences; everything else,
    including unlabeled sentences, gets the null label.
    """
    gold_paragraphs = (
        load_gold_paragraphs(config.gold_paragraphs_path)
        if config.prepass is Prepass.GOLD_FROM_FILE else None
    )
    instances = []
    for pair in pairs:
        gold = gold_map_for_pair(records, pair.pair_id)
        _check_gold_indices(pair, gold)
        sim = get_matrix(pair, config, scorer)
        blocks = build_blocks(pair, config, scorer, gold_paragraphs)
        if blocks is None:
            blocks = [AlignmentBlock(
                simple_para=0,
                complex_paras=tuple(range(len(pair.complex.paragraphs))),
                simple_sents=tuple(range(sim.m)),
                complex_sents=tuple(range(sim.n)),
            )]
        positives: dict[int, list[int]] = {}
        for (i, j), label in gold.items():
            if label is not AlignmentLabelKind.NOT_ALIGNED:
                positives.setdefault(i, []).append(j)
        for block in blocks:
            col_of = {j: idx for idx, j in enumerate(block.complex_sents)}
            labels = []
            for i in block.simple_sents:
                partners = sorted(j for j in positives.get(i, []) if j in col_of)
                labels.append(col_of[partners[0]] + 1 if partners else 0)
            sub = SimilarityMatrix(
                pair_id=pair.pair_id,
                values=sim.values[np.ix_(block.simple_sents, block.complex_sents)],
            )
            instances.append((sub, crf.AlignmentSequence(pair_id=pair.pair_id,
                                                         labels=tuple(labels))))
    return instances


def cmd_sim_matrix(corpus_path: str | Path, config: PipelineConfig) -> list[Path]:
    pairs = load_corpus(corpus_path)
    scorer = make_scorer(config.scorer, corpus=_all_docs(pairs))
    config.output_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for pair in pairs:
        matrix = score_pair(pair, scorer)
        path = config.output_dir / f"{pair.pair_id}.json"
        save_matrix(matrix, path)
        written.append(path)
    return written


def _all_docs(pairs):
    return [doc for pair in pairs for doc in (pair.simple, pair.complex)]


def cmd_align(
    corpus_path: str | Path,
    config: PipelineConfig,
    gold_path: str | Path | None = None,
) -> tuple[Path, list[EvalReport]]:
    """Decode every pair and write predictions as annotation records; when
    gold labels are supplied, also write micro-averaged Task 1/2 reports."""
    if config.model_path is None:
        raise ModelError("align needs a model_path")
    model = crf.load_model(config.model_path)
    pairs = load_corpus(corpus_path)
    scorer = make_scorer(config.scorer, corpus=_all_docs(pairs))
    gold_paragraphs = (
        load_gold_paragraphs(config.gold_paragraphs_path)
        if config.prepass is Prepass.GOLD_FROM_FILE else None
    )
    config.output_dir.mkdir(parents=True, exist_ok=True)
    predictions: list[AnnotationRecord] = []
    per_pair: dict[str, list[tuple[int, int]]] = {}
    for pair in pairs:
        sim = get_matrix(pair, config, scorer)
        blocks = build_blocks(pair, config, scorer, gold_paragraphs)
        block_tuples = None if blocks is None else [
            (b.simple_sents, b.complex_sents) for b in blocks
        ]
        decoded = crf.decode_pair(model, pair, sim, block_tuples)
        per_pair[pair.pair_id] = decoded
        for i, j in decoded:
            predictions.append(AnnotationRecord(
                pair_id=pair.pair_id, simple_sent=i, complex_sent=j,
                label=AlignmentLabelKind.ALIGNED,
                source=AnnotationSource.PREDICTED, timestamp=EPOCH,
            ))
    pred_path = config.output_dir / "predictions.jsonl"
    save_annotations(predictions, pred_path)

    reports: list[EvalReport] = []
    if gold_path is not None:
        records = load_annotations(gold_path)
        for task in (Task.TASK1, Task.TASK2):
            pair_reports = []
            for pair in pairs:
                gold = gold_map_for_pair(records, pair.pair_id)
                pair_reports.append(evaluate(
                    per_pair[pair.pair_id], gold, task,
                    identical=identical_pairs(pair),
                ))
            reports.append(evaluate_corpus(pair_reports))
        report_path = config.output_dir / "eval.json"
        with open(report_path, "w", encoding="utf-8") as fh:
            fh.write("[" + ", ".join(r.to_json() for r in reports) + "]\n")
    return pred_path, reports


def cmd_train(
    corpus_path: str | Path,
    gold_path: str | Path,
    config: PipelineConfig,
) -> tuple[Path, list[float]]:
    if config.model_path is None:
        raise ModelError("train needs a model_path to save to")
    pairs = load_corpus(corpus_path)
    records = load_annotations(gold_path)
    scorer = make_scorer(config.scorer, corpus=_all_docs(pairs))
    instances = build_training_instances(pairs, records, config, scorer)
    history: list[float] = []
    model = crf.train(instances, config.train,
                      on_epoch=lambda _e, nll: history.append(nll))
    config.output_dir.mkdir(parents=True, exist_ok=True)
    crf.save_model(model, config.model_path)
    log_path = config.output_dir / "train_log.json"
    with open(log_path, "w", encoding="utf-8") as fh:
        json.dump({"epoch_mean_nll": history}, fh)
        fh.write("\n")
    return Path(config.model_path), history


def cmd_tune(
    corpus_path: str | Path,
    gold_path: str | Path,
    config: PipelineConfig,
    task: Task,
) -> tuple[float, float]:
    from .baselines import tune_threshold

    pairs = load_corpus(corpus_path)
    records = load_annotations(gold_path)
    scorer = make_scorer(config.scorer, corpus=_all_docs(pairs))
    dev = []
    for pair in pairs:
        gold = gold_map_for_pair(records, pair.pair_id)
        _check_gold_indices(pair, gold)
        dev.append((get_matrix(pair, config, scorer), gold))
    return tune_threshold(dev, task)


def cmd_eval(
    predictions_path: str | Path,
    corpus_path: str | Path,
    gold_path: str | Path,
) -> list[EvalReport]:
    pairs = load_corpus(corpus_path)
    pred_records = load_annotations(predictions_path)
    gold_records = load_annotations(gold_path)
    reports = []
    for task in (Task.TASK1, Task.TASK2):
        pair_reports = []
        for pair in pairs:
            pred_map = gold_map_for_pair(pred_records, pair.pair_id)
            pred = {key for key, label in pred_map.items()
                    if label in task.positive_labels}
            gold = gold_map_for_pair(gold_records, pair.pair_id)
            pair_reports.append(evaluate(pred, gold, task,
                                         identical=identical_pairs(pair)))
        reports.append(evaluate_corpus(pair_reports))
    return reports
