import pytest

from sentalign.corpus import save_annotations, save_corpus
from sentalign.synthetic import SyntheticConfig, generate_corpus


@pytest.fixture(scope="session")
def tiny_corpus_files(tmp_path_factory):
    """A small deterministic corpus + gold annotations on disk."""
    root = tmp_path_factory.mktemp("tiny")
    pairs, records = generate_corpus(SyntheticConfig(n_pairs=6, seed=99))
    corpus_path = root / "corpus.jsonl"
    gold_path = root / "gold.jsonl"
    save_corpus(pairs, corpus_path)
    save_annotations(records, gold_path)
    return corpus_path, gold_path, pairs, records
