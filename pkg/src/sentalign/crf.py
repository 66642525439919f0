"""Linear-chain CRF sentence aligner.

For a pair with m simple and n complex sentences, position i carries a
label a_i in [0, n]: a_i = k >= 1 aligns simple sentence i to complex
sentence k - 1 (0-based), a_i = 0 leaves it unaligned. The sequence score
is

    sum_i [ emission(i, a_i) + T(a_i, a_{i-1}) ]

where emission(i, k) = scale * sim[i, k-1] + bias for k >= 1 and a single
trainable scalar for k = 0, and T is a 2-layer feedforward network over
four transition features of the label pair:

    g1 = |a_i - a_{i-1}|          (computed literally, nulls included)
    g2 = [a_i = 0 and a_{i-1} != 0]
    g3 = [a_i != 0 and a_{i-1} = 0]
    g4 = [a_i = 0 and a_{i-1} = 0]

Position 1 has no predecessor; it is scored against a virtual start state
with features g1 = g2 = g3 = 0 and g4 = [a_1 = 0], so "document start" is
never conflated with "previous sentence unaligned" for non-null a_1.

Decoding is Viterbi and the partition function is the forward algorithm,
both O(m n^2); training maximizes the log-likelihood of gold sequences
with exact gradients from forward-backward marginals.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.special import logsumexp

from .corpus import DocumentPair
from .errors import DataError, ModelError
from .similarity import SimilarityMatrix

MODEL_VERSION = "crf-v1"


@dataclass(frozen=True)
class AlignmentSequence:
    pair_id: str
    labels: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(int(x) for x in self.labels))


@dataclass(frozen=True)
class TransitionFeatures:
    g1: float
    g2: int
    g3: int
    g4: int

    def as_array(self) -> np.ndarray:
        return np.array([self.g1, self.g2, self.g3, self.g4], dtype=np.float64)


def transition_features(a_i: int, a_prev: int) -> TransitionFeatures:
    if a_i < 0 or a_prev < 0:
        raise DataError("labels must be non-negative")
    return TransitionFeatures(
        g1=float(abs(a_i - a_prev)),
        g2=int(a_i == 0 and a_prev != 0),
        g3=int(a_i != 0 and a_prev == 0),
        g4=int(a_i == 0 and a_prev == 0),
    )


START_FEATURES_NULL = TransitionFeatures(g1=0.0, g2=0, g3=0, g4=1)
START_FEATURES_ALIGNED = TransitionFeatures(g1=0.0, g2=0, g3=0, g4=0)


@dataclass
class CrfModel:
    """Trainable parameters: the transition network (w1, b1, w2, b2), the
    null-label emission scalar, and an optional affine rescaling of the
    similarity emissions (frozen at identity by default)."""

    w1: np.ndarray  # (hidden, 4)
    b1: np.ndarray  # (hidden,)
    w2: np.ndarray  # (hidden,)
    b2: float
    null_emission: float
    emission_scale: float = 1.0
    emission_bias: float = 0.0
    activation: str = "tanh"
    version: str = MODEL_VERSION

    def __post_init__(self):
        self.w1 = np.asarray(self.w1, dtype=np.float64)
        self.b1 = np.asarray(self.b1, dtype=np.float64)
        self.w2 = np.asarray(self.w2, dtype=np.float64)
        if self.activation != "tanh":
            raise ModelError(f"unsupported activation {self.activation!r}")
        if self.w1.shape != (self.hidden, 4) or self.b1.shape != (self.hidden,):
            raise ModelError("inconsistent transition network shapes")
        for arr in (self.w1, self.b1, self.w2):
            if not np.all(np.isfinite(arr)):
                raise ModelError("non-finite model weight")
        if not (math.isfinite(self.b2) and math.isfinite(self.null_emission)
                and math.isfinite(self.emission_scale) and math.isfinite(self.emission_bias)):
            raise ModelError("non-finite model scalar")

    @property
    def hidden(self) -> int:
        return self.w2.shape[0]

    @classmethod
    def init(cls, hidden: int = 32, seed: int = 0, null_emission: float = 0.5) -> "CrfModel":
        if hidden < 1:
            raise ModelError("hidden size must be >= 1")
        rng = np.random.default_rng(seed)
        return cls(
            w1=rng.uniform(-0.1, 0.1, size=(hidden, 4)),
            b1=rng.uniform(-0.1, 0.1, size=hidden),
            w2=rng.uniform(-0.1, 0.1, size=hidden),
            b2=float(rng.uniform(-0.1, 0.1)),
            null_emission=null_emission,
        )

    def copy(self) -> "CrfModel":
        return replace(self, w1=self.w1.copy(), b1=self.b1.copy(), w2=self.w2.copy())

    def ffnn(self, features: np.ndarray) -> np.ndarray:
        """Batched forward pass: (k, 4) feature rows -> (k,) scores."""
        h = np.tanh(features @ self.w1.T + self.b1)
        return h @ self.w2 + self.b2


def transition_score(model: CrfModel, a_i: int, a_prev: int) -> float:
    feats = transition_features(a_i, a_prev).as_array()
    return float(model.ffnn(feats[None, :])[0])


def start_score(model: CrfModel, a_1: int) -> float:
    feats = (START_FEATURES_NULL if a_1 == 0 else START_FEATURES_ALIGNED).as_array()
    return float(model.ffnn(feats[None, :])[0])


@dataclass(frozen=True)
class _Tables:
    """Per-pair score tables. trans[j, j_prev] holds T for current label j,
    start[j] the virtual-start transition, emit[i, j] the emission."""

    trans: np.ndarray       # (n+1, n+1)
    start: np.ndarray       # (n+1,)
    emit: np.ndarray        # (m, n+1)
    features: np.ndarray    # (u, 4) unique transition feature rows
    n: int

    @property
    def n_gaps(self) -> int:
        return max(self.n, 1)


def _unique_features(n: int) -> np.ndarray:
    """Unique transition feature rows for labels 0..n: non-null gap rows
    (d, 0, 0, 0) for d = 0..max(n-1, 0), to-null rows (j', 1, 0, 0), from-null
    rows (j, 0, 1, 0), and the null-to-null row (0, 0, 0, 1). The gap-0 row
    doubles as the non-null virtual-start row."""
    n_gaps = max(n, 1)
    rows = np.zeros((n_gaps + 2 * n + 1, 4), dtype=np.float64)
    rows[:n_gaps, 0] = np.arange(n_gaps)
    if n:
        rows[n_gaps:n_gaps + n, 0] = np.arange(1, n + 1)
        rows[n_gaps:n_gaps + n, 1] = 1.0
        rows[n_gaps + n:n_gaps + 2 * n, 0] = np.arange(1, n + 1)
        rows[n_gaps + n:n_gaps + 2 * n, 2] = 1.0
    rows[-1, 3] = 1.0
    return rows


def build_tables(model: CrfModel, sim: SimilarityMatrix) -> _Tables:
    m, n = sim.m, sim.n
    if m < 1:
        raise DataError(f"pair {sim.pair_id!r}: empty simple side")
    features = _unique_features(n)
    scores = model.ffnn(features)
    n_gaps = max(n, 1)
    t_gap = scores[:n_gaps]
    t_tonull = scores[n_gaps:n_gaps + n]
    t_fromnull = scores[n_gaps + n:n_gaps + 2 * n]
    t_nullnull = scores[-1]

    trans = np.empty((n + 1, n + 1), dtype=np.float64)
    trans[0, 0] = t_nullnull
    if n:
        idx = np.arange(1, n + 1)
        trans[1:, 1:] = t_gap[np.abs(idx[:, None] - idx[None, :])]
        trans[0, 1:] = t_tonull
        trans[1:, 0] = t_fromnull
    start = np.full(n + 1, t_gap[0])
    start[0] = t_nullnull

    emit = np.empty((m, n + 1), dtype=np.float64)
    emit[:, 0] = model.null_emission
    if n:
        emit[:, 1:] = model.emission_scale * sim.values + model.emission_bias
    return _Tables(trans=trans, start=start, emit=emit, features=features, n=n)


def emission_score(model: CrfModel, sim: SimilarityMatrix, i: int, a_i: int) -> float:
    """Emission for 0-based position i and label a_i."""
    if not (0 <= i < sim.m) or not (0 <= a_i <= sim.n):
        raise DataError(f"emission index out of range: i={i}, a_i={a_i}")
    if a_i == 0:
        return model.null_emission
    return model.emission_scale * float(sim.values[i, a_i - 1]) + model.emission_bias


def _check_labels(sim: SimilarityMatrix, labels: Sequence[int]) -> None:
    if len(labels) != sim.m:
        raise DataError(
            f"label sequence length {len(labels)} does not match m={sim.m}"
        )
    for a in labels:
        if not (0 <= a <= sim.n):
            raise DataError(f"label {a} outside [0, {sim.n}]")


def sequence_score(model: CrfModel, sim: SimilarityMatrix, labels: AlignmentSequence) -> float:
    _check_labels(sim, labels.labels)
    tables = build_tables(model, sim)
    return _sequence_score_from_tables(tables, labels.labels)


def _sequence_score_from_tables(tables: _Tables, labels: Sequence[int]) -> float:
    total = tables.start[labels[0]] + tables.emit[0, labels[0]]
    for i in range(1, len(labels)):
        total += tables.trans[labels[i], labels[i - 1]] + tables.emit[i, labels[i]]
    return float(total)


def viterbi(model: CrfModel, sim: SimilarityMatrix) -> tuple[AlignmentSequence, float]:
    """Best-scoring label sequence. Score ties are broken toward the smaller
    label at the latest position where candidate sequences differ, which is
    what backtracking with first-argmax backpointers yields."""
    tables = build_tables(model, sim)
    m, n = sim.m, tables.n
    delta = tables.start + tables.emit[0]
    back = np.zeros((m, n + 1), dtype=np.int64)
    for i in range(1, m):
        cand = tables.trans + delta[None, :]          # (curr, prev)
        back[i] = np.argmax(cand, axis=1)
        delta = cand[np.arange(n + 1), back[i]] + tables.emit[i]
    last = int(np.argmax(delta))
    labels = [0] * m
    labels[-1] = last
    for i in range(m - 1, 0, -1):
        labels[i - 1] = int(back[i][labels[i]])
    return AlignmentSequence(pair_id=sim.pair_id, labels=tuple(labels)), float(delta[last])


def log_partition(model: CrfModel, sim: SimilarityMatrix) -> float:
    tables = build_tables(model, sim)
    alpha = tables.start + tables.emit[0]
    for i in range(1, sim.m):
        alpha = logsumexp(tables.trans + alpha[None, :], axis=1) + tables.emit[i]
    return float(logsumexp(alpha))


def _forward_backward(tables: _Tables, m: int) -> tuple[np.ndarray, np.ndarray, float]:
    n1 = tables.n + 1
    alphas = np.empty((m, n1))
    alphas[0] = tables.start + tables.emit[0]
    for i in range(1, m):
        alphas[i] = logsumexp(tables.trans + alphas[i - 1][None, :], axis=1) + tables.emit[i]
    betas = np.zeros((m, n1))
    for i in range(m - 2, -1, -1):
        betas[i] = logsumexp(
            tables.trans + (tables.emit[i + 1] + betas[i + 1])[:, None], axis=0
        )
    return alphas, betas, float(logsumexp(alphas[-1]))


@dataclass
class CrfGradient:
    """Gradient of the negative log-likelihood, shaped like the model."""

    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: float
    null_emission: float
    emission_scale: float = 0.0
    emission_bias: float = 0.0

    def scaled(self, factor: float) -> "CrfGradient":
        return CrfGradient(
            w1=self.w1 * factor, b1=self.b1 * factor, w2=self.w2 * factor,
            b2=self.b2 * factor, null_emission=self.null_emission * factor,
            emission_scale=self.emission_scale * factor,
            emission_bias=self.emission_bias * factor,
        )


def nll_and_grad(
    model: CrfModel,
    sim: SimilarityMatrix,
    gold: AlignmentSequence,
    train_emission_affine: bool = False,
) -> tuple[float, CrfGradient]:
    """Exact negative log-likelihood of the gold sequence and its gradient.

    The gradient is (model-expected sufficient statistics) minus (gold
    statistics): transition-pair counts are accumulated per unique feature
    row and pushed through the network in one batched backward pass; node
    marginals drive the emission scalars.
    """
    _check_labels(sim, gold.labels)
    tables = build_tables(model, sim)
    m, n = sim.m, tables.n
    alphas, betas, log_z = _forward_backward(tables, m)
    gold_score = _sequence_score_from_tables(tables, gold.labels)
    nll = max(0.0, log_z - gold_score)

    # Node marginals P(a_i = j), minus gold indicator counts.
    node = np.exp(alphas + betas - log_z)
    node_diff = node.copy()
    for i, a in enumerate(gold.labels):
        node_diff[i, a] -= 1.0

    # Edge marginals P(a_{i-1} = j', a_i = j), minus gold edge counts.
    edge_diff = np.zeros((n + 1, n + 1))
    for i in range(1, m):
        edge_diff += np.exp(
            tables.trans + alphas[i - 1][None, :]
            + (tables.emit[i] + betas[i])[:, None] - log_z
        )
    for i in range(1, m):
        edge_diff[gold.labels[i], gold.labels[i - 1]] -= 1.0
    start_diff = node_diff[0]

    # Collapse label-pair weights onto the unique transition feature rows.
    n_gaps = tables.n_gaps
    weights = np.zeros(len(tables.features))
    if n:
        gap_idx = np.abs(np.arange(1, n + 1)[:, None] - np.arange(1, n + 1)[None, :])
        weights[:n_gaps] += np.bincount(
            gap_idx.ravel(), weights=edge_diff[1:, 1:].ravel(), minlength=n_gaps
        )
        weights[n_gaps:n_gaps + n] += edge_diff[0, 1:]
        weights[n_gaps + n:n_gaps + 2 * n] += edge_diff[1:, 0]
        weights[0] += start_diff[1:].sum()
    weights[-1] += edge_diff[0, 0] + start_diff[0]

    # One batched backward pass through the transition network.
    hidden = np.tanh(tables.features @ model.w1.T + model.b1)   # (u, H)
    d_hidden = weights[:, None] * model.w2[None, :] * (1.0 - hidden ** 2)
    grad = CrfGradient(
        w1=d_hidden.T @ tables.features,
        b1=d_hidden.sum(axis=0),
        w2=hidden.T @ weights,
        b2=float(weights.sum()),
        null_emission=float(node_diff[:, 0].sum()),
    )
    if train_emission_affine and n:
        grad.emission_scale = float((node_diff[:, 1:] * sim.values).sum())
        grad.emission_bias = float(node_diff[:, 1:].sum())
    return nll, grad


@dataclass
class TrainConfig:
    learning_rate: float = 1e-2
    epochs: int = 50
    optimizer: str = "adam"          # "adam" or "sgd"
    l2: float = 0.0
    seed: int = 0
    train_emission_affine: bool = False
    hidden: int = 32

    def __post_init__(self):
        if self.learning_rate < 0:
            raise DataError("learning_rate must be >= 0")
        if self.epochs < 1:
            raise DataError("epochs must be >= 1")
        if self.optimizer not in ("adam", "sgd"):
            raise DataError(f"unknown optimizer {self.optimizer!r}")
        if self.l2 < 0:
            raise DataError("l2 must be >= 0")


_PARAM_KEYS = ("w1", "b1", "w2", "b2", "null_emission", "emission_scale", "emission_bias")


def _trainable_keys(config: TrainConfig) -> tuple[str, ...]:
    if config.train_emission_affine:
        return _PARAM_KEYS
    return _PARAM_KEYS[:5]


class _Adam:
    def __init__(self, keys: Iterable[str], lr: float, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.m = {k: 0.0 for k in keys}
        self.v = {k: 0.0 for k in keys}
        self.t = 0

    def step(self, params: dict[str, np.ndarray | float],
             grads: dict[str, np.ndarray | float]) -> dict:
        self.t += 1
        out = {}
        for k, g in grads.items():
            self.m[k] = self.beta1 * self.m[k] + (1 - self.beta1) * np.asarray(g)
            self.v[k] = self.beta2 * self.v[k] + (1 - self.beta2) * np.square(g)
            m_hat = self.m[k] / (1 - self.beta1 ** self.t)
            v_hat = self.v[k] / (1 - self.beta2 ** self.t)
            out[k] = params[k] - self.lr * m_hat / (np.sqrt(v_hat) + self.eps)
        return out


def _model_params(model: CrfModel) -> dict:
    return {
        "w1": model.w1, "b1": model.b1, "w2": model.w2, "b2": model.b2,
        "null_emission": model.null_emission,
        "emission_scale": model.emission_scale, "emission_bias": model.emission_bias,
    }


def _apply_params(model: CrfModel, params: dict) -> None:
    model.w1 = np.asarray(params["w1"], dtype=np.float64)
    model.b1 = np.asarray(params["b1"], dtype=np.float64)
    model.w2 = np.asarray(params["w2"], dtype=np.float64)
    model.b2 = float(params["b2"])
    model.null_emission = float(params["null_emission"])
    model.emission_scale = float(params.get("emission_scale", model.emission_scale))
    model.emission_bias = float(params.get("emission_bias", model.emission_bias))


def train(
    dataset: Sequence[tuple[SimilarityMatrix, AlignmentSequence]],
    config: TrainConfig,
    initial: CrfModel | None = None,
    on_epoch: Callable[[int, float], None] | None = None,
) -> CrfModel:
    """Maximum-likelihood training over (similarity, gold sequence) pairs.

    Instances are visited in dataset order every epoch (deterministic given
    the seed, which only drives weight initialization). `on_epoch` receives
    (epoch, mean NLL) after each pass.
    """
    if not dataset:
        raise DataError("training dataset is empty")
    for sim, gold in dataset:
        _check_labels(sim, gold.labels)
    model = initial.copy() if initial is not None else CrfModel.init(
        hidden=config.hidden, seed=config.seed
    )
    keys = _trainable_keys(config)
    adam = _Adam(keys, config.learning_rate) if config.optimizer == "adam" else None
    for epoch in range(config.epochs):
        total = 0.0
        for sim, gold in dataset:
            nll, grad = nll_and_grad(model, sim, gold, config.train_emission_affine)
            total += nll
            params = _model_params(model)
            grads = {k: getattr(grad, k) for k in keys}
            if config.l2:
                grads = {k: grads[k] + config.l2 * np.asarray(params[k]) for k in keys}
            if adam is not None:
                new_params = adam.step({k: params[k] for k in keys}, grads)
            else:
                new_params = {k: params[k] - config.learning_rate * np.asarray(grads[k])
                              for k in keys}
            _apply_params(model, {**params, **new_params})
        if on_epoch is not None:
            on_epoch(epoch, total / len(dataset))
    return model


def decode_pair(
    model: CrfModel,
    pair: DocumentPair,
    sim: SimilarityMatrix,
    blocks: Iterable[tuple[Sequence[int], Sequence[int]]] | None = None,
) -> list[tuple[int, int]]:
    """Viterbi-decode a document pair into (simple_sent, complex_sent)
    predictions, dropping unaligned positions.

    `blocks` restricts decoding to (simple sentence indices, complex
    sentence indices) groups from a paragraph pre-pass; simple sentences
    outside every block are left unaligned. Without blocks the whole
    document is one block.
    """
    m, n = sim.m, sim.n
    if m != pair.simple.n_sentences or n != pair.complex.n_sentences:
        raise DataError(f"pair {pair.pair_id!r}: similarity matrix does not match pair")
    if blocks is None:
        blocks = [(list(range(m)), list(range(n)))]
    out: list[tuple[int, int]] = []
    for simple_idx, complex_idx in blocks:
        simple_idx = list(simple_idx)
        complex_idx = list(complex_idx)
        if not simple_idx:
            continue
        sub = SimilarityMatrix(
            pair_id=sim.pair_id,
            values=sim.values[np.ix_(simple_idx, complex_idx)],
        )
        seq, _ = viterbi(model, sub)
        for pos, label in enumerate(seq.labels):
            if label >= 1:
                out.append((simple_idx[pos], complex_idx[label - 1]))
    return sorted(out)


def decode_independent(
    model: CrfModel,
    pair: DocumentPair,
    sim: SimilarityMatrix,
    blocks: Iterable[tuple[Sequence[int], Sequence[int]]] | None = None,
) -> list[tuple[int, int]]:
    """Ablation decoder: each position independently takes the label with
    the best emission score (null included), ignoring transitions."""
    m, n = sim.m, sim.n
    if m != pair.simple.n_sentences or n != pair.complex.n_sentences:
        raise DataError(f"pair {pair.pair_id!r}: similarity matrix does not match pair")
    if blocks is None:
        blocks = [(list(range(m)), list(range(n)))]
    out: list[tuple[int, int]] = []
    for simple_idx, complex_idx in blocks:
        simple_idx = list(simple_idx)
        complex_idx = list(complex_idx)
        if not simple_idx or not complex_idx:
            continue
        sub = sim.values[np.ix_(simple_idx, complex_idx)]
        scaled = model.emission_scale * sub + model.emission_bias
        best = np.argmax(scaled, axis=1)
        for pos, j in enumerate(best):
            if scaled[pos, j] > model.null_emission:
                out.append((simple_idx[pos], complex_idx[int(j)]))
    return sorted(out)


def save_model(model: CrfModel, path: str | Path) -> None:
    payload = {
        "version": model.version,
        "hidden": model.hidden,
        "activation": model.activation,
        "w1": [[float(v) for v in row] for row in model.w1],
        "b1": [float(v) for v in model.b1],
        "w2": [float(v) for v in model.w2],
        "b2": float(model.b2),
        "null_emission": float(model.null_emission),
        "emission_scale": float(model.emission_scale),
        "emission_bias": float(model.emission_bias),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def load_model(path: str | Path) -> CrfModel:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (json.JSONDecodeError, OSError) as exc:
        raise ModelError(f"{path}: cannot read model: {exc}") from None
    if not isinstance(raw, dict) or raw.get("version") != MODEL_VERSION:
        raise ModelError(
            f"{path}: unsupported model version {raw.get('version')!r} "
            f"(expected {MODEL_VERSION!r})"
        )
    try:
        model = CrfModel(
            w1=np.asarray(raw["w1"], dtype=np.float64),
            b1=np.asarray(raw["b1"], dtype=np.float64),
            w2=np.asarray(raw["w2"], dtype=np.float64),
            b2=float(raw["b2"]),
            null_emission=float(raw["null_emission"]),
            emission_scale=float(raw["emission_scale"]),
            emission_bias=float(raw["emission_bias"]),
            activation=raw.get("activation", "tanh"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"{path}: corrupt model file: {exc}") from None
    if model.hidden != raw.get("hidden"):
        raise ModelError(f"{path}: hidden size field does not match weights")
    return model
