"""Command-line entry point.

Exit codes: 0 success, 2 usage error, 3 data error, 4 model error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import pipeline
from .errors import DataError, ModelError
from .evaluate import Task
from .pipeline import PipelineConfig


def _load_config(args) -> PipelineConfig:
    config = PipelineConfig.from_json(args.config) if args.config else PipelineConfig()
    if args.seed is not None:
        config.seed = args.seed
        config.train.seed = args.seed
    if getattr(args, "out", None):
        config.output_dir = Path(args.out)
    return config


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sentalign")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, corpus=True):
        if corpus:
            p.add_argument("--corpus", required=True, help="corpus JSONL file")
        p.add_argument("--config", help="pipeline config JSON")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", help="output directory override")

    p = sub.add_parser("sim-matrix", help="write one similarity matrix file per pair")
    common(p)

    p = sub.add_parser("align", help="decode alignments, optionally evaluate")
    common(p)
    p.add_argument("--gold", help="gold annotation JSONL for evaluation")

    p = sub.add_parser("train", help="train the aligner on gold annotations")
    common(p)
    p.add_argument("--gold", required=True)

    p = sub.add_parser("tune", help="tune a similarity threshold on a dev set")
    common(p)
    p.add_argument("--gold", required=True)
    p.add_argument("--task", choices=["task1", "task2"], default="task1")

    p = sub.add_parser("eval", help="evaluate a predictions file")
    common(p)
    p.add_argument("--predictions", required=True)
    p.add_argument("--gold", required=True)

    p = sub.add_parser("serve", help="run the annotation review service")
    common(p)
    p.add_argument("--predictions")
    p.add_argument("--state", required=True, help="append-only human label file")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8400)
    p.add_argument("--static", help="directory of built UI assets")
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = _load_config(args)
    if args.command == "sim-matrix":
        written = pipeline.cmd_sim_matrix(args.corpus, config)
        print(f"wrote {len(written)} matrix files to {config.output_dir}")
    elif args.command == "align":
        pred_path, reports = pipeline.cmd_align(args.corpus, config, args.gold)
        print(f"wrote predictions to {pred_path}")
        for report in reports:
            print(report.as_text())
    elif args.command == "train":
        model_path, history = pipeline.cmd_train(args.corpus, args.gold, config)
        print(f"saved model to {model_path}")
        if history:
            print(f"mean NLL: first epoch {history[0]:.4f}, last epoch {history[-1]:.4f}")
    elif args.command == "tune":
        threshold, f1 = pipeline.cmd_tune(args.corpus, args.gold, config, Task(args.task))
        print(f"threshold={threshold:.6f} f1={f1:.4f}")
    elif args.command == "eval":
        for report in pipeline.cmd_eval(args.predictions, args.corpus, args.gold):
            print(report.as_text())
    elif args.command == "serve":
        from .service import serve

        serve(args.corpus, args.state, args.predictions,
              host=args.host, port=args.port, static_dir=args.static)
    return 0


def main() -> None:
    try:
        sys.exit(run())
    except (DataError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        sys.exit(3)
    except ModelError as exc:
        print(f"model error: {exc}", file=sys.stderr)
        sys.exit(4)


if __name__ == "__main__":
    main()
