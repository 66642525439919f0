"""Brute-force oracles for the chain aligner, independent of its dynamic
programming: exhaustive sequence enumeration for decoding and the partition
function, and central finite differences for gradients. Scores are rebuilt
from the scalar per-position scoring functions, not the vectorized tables.
"""

import itertools
import math

import numpy as np

from sentalign import crf
from sentalign.similarity import SimilarityMatrix


def all_sequences(m, n):
    return itertools.product(range(n + 1), repeat=m)


def brute_sequence_score(model, sim, labels):
    total = crf.start_score(model, labels[0]) + crf.emission_score(model, sim, 0, labels[0])
    for i in range(1, len(labels)):
        total += crf.transition_score(model, labels[i], labels[i - 1])
        total += crf.emission_score(model, sim, i, labels[i])
    return total


def brute_viterbi(model, sim):
    """Exhaustive argmax. Ties prefer the smaller label at the latest
    differing position, i.e. the minimum of the reversed label tuple."""
    best_labels, best_score = None, -math.inf
    for labels in all_sequences(sim.m, sim.n):
        score = brute_sequence_score(model, sim, labels)
        if score > best_score or (
            score == best_score and tuple(reversed(labels)) < tuple(reversed(best_labels))
        ):
            best_labels, best_score = labels, score
    return best_labels, best_score


def brute_log_partition(model, sim):
    scores = [brute_sequence_score(model, sim, labels)
              for labels in all_sequences(sim.m, sim.n)]
    mx = max(scores)
    return mx + math.log(math.fsum(math.exp(s - mx) for s in scores))


def random_instance(rng, m=None, n=None, hidden=3, weight_scale=0.5):
    """Random small model + similarity matrix + gold sequence."""
    m = int(rng.integers(1, 5)) if m is None else m
    n = int(rng.integers(0, 5)) if n is None else n
    sim = SimilarityMatrix(
        pair_id="t", values=rng.uniform(0.0, 1.0, size=(m, n)))
    model = crf.CrfModel(
        w1=rng.uniform(-weight_scale, weight_scale, size=(hidden, 4)),
        b1=rng.uniform(-weight_scale, weight_scale, size=hidden),
        w2=rng.uniform(-weight_scale, weight_scale, size=hidden),
        b2=float(rng.uniform(-weight_scale, weight_scale)),
        null_emission=float(rng.uniform(-0.5, 1.0)),
        emission_scale=float(rng.uniform(0.5, 2.0)),
        emission_bias=float(rng.uniform(-0.5, 0.5)),
    )
    gold = crf.AlignmentSequence(
        pair_id="t", labels=tuple(int(x) for x in rng.integers(0, n + 1, size=m)))
    return model, sim, gold


def _param_views(model, train_emission_affine):
    views = [
        ("w1", model.w1), ("b1", model.b1), ("w2", model.w2),
        ("b2", None), ("null_emission", None),
    ]
    if train_emission_affine:
        views += [("emission_scale", None), ("emission_bias", None)]
    return views


def finite_difference_grads(model, sim, gold, train_emission_affine=False, eps=1e-4):
    """Central differences of log_partition - sequence_score on every
    trainable scalar, returned in the same shapes as CrfGradient."""

    def objective(m_):
        return crf.log_partition(m_, sim) - crf.sequence_score(m_, sim, gold)

    grads = {}
    for name, arr in _param_views(model, train_emission_affine):
        if arr is None:
            base = getattr(model, name)
            plus = model.copy()
            setattr(plus, name, base + eps)
            minus = model.copy()
            setattr(minus, name, base - eps)
            grads[name] = (objective(plus) - objective(minus)) / (2 * eps)
        else:
            grad = np.zeros_like(arr)
            for idx in np.ndindex(arr.shape):
                plus = model.copy()
                getattr(plus, name)[idx] += eps
                minus = model.copy()
                getattr(minus, name)[idx] -= eps
                grad[idx] = (objective(plus) - objective(minus)) / (2 * eps)
            grads[name] = grad
    return grads


def max_relative_error(analytic, numeric, floor=1e-6):
    analytic = np.asarray(analytic, dtype=np.float64)
    numeric = np.asarray(numeric, dtype=np.float64)
    denom = np.maximum(floor, np.maximum(np.abs(analytic), np.abs(numeric)))
    return float(np.max(np.abs(analytic - numeric) / denom))
