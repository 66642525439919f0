#!/usr/bin/env python3
"""Write a synthetic corpus + gold annotations to disk, split into
train/dev/test files ready for the CLI."""

import argparse
from pathlib import Path

from sentalign.corpus import save_annotations, save_corpus
from sentalign.synthetic import SyntheticConfig, generate_corpus


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=Path("data"))
    ap.add_argument("--pairs", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--train-frac", type=float, default=0.6)
    ap.add_argument("--dev-frac", type=float, default=0.15)
    args = ap.parse_args()

    pairs, records = generate_corpus(SyntheticConfig(n_pairs=args.pairs, seed=args.seed))
    n_train = int(len(pairs) * args.train_frac)
    n_dev = int(len(pairs) * args.dev_frac)
    splits = {
        "train": pairs[:n_train],
        "dev": pairs[n_train:n_train + n_dev],
        "test": pairs[n_train + n_dev:],
    }
    args.out.mkdir(parents=True, exist_ok=True)
    by_pair = {}
    for rec in records:
        by_pair.setdefault(rec.pair_id, []).append(rec)
    for name, subset in splits.items():
        save_corpus(subset, args.out / f"{name}.jsonl")
        subset_records = [r for p in subset for r in by_pair.get(p.pair_id, [])]
        save_annotations(subset_records, args.out / f"{name}.gold.jsonl")
        print(f"{name}: {len(subset)} pairs, {len(subset_records)} gold records")


if __name__ == "__main__":
    main()
