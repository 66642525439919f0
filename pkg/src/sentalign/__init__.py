"""Sentence alignment toolkit: a trainable chain-CRF aligner with a
paragraph pre-pass, lexical similarity scorers, baseline aligners, an
evaluation harness, and corpus-construction utilities."""

from .corpus import (
    AlignmentLabelKind,
    AnnotationRecord,
    AnnotationSource,
    Document,
    DocumentPair,
    Sentence,
    build_document,
    load_annotations,
    load_corpus,
    merge_annotations,
    save_annotations,
    save_corpus,
    tokenize,
)
from .crf import (
    AlignmentSequence,
    CrfModel,
    TrainConfig,
    decode_pair,
    load_model,
    log_partition,
    nll_and_grad,
    save_model,
    sequence_score,
    train,
    viterbi,
)
from .errors import DataError, ModelError, SentAlignError
from .evaluate import EvalReport, Task, evaluate, evaluate_corpus, identical_pairs
from .similarity import (
    IdfTable,
    SimilarityMatrix,
    build_idf,
    char_ngram_sim,
    jaccard_sim,
    load_external_matrix,
    make_scorer,
    score_pair,
    tfidf_cosine,
)

__version__ = "0.1.0"
