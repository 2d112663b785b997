"""Command-line entry point for the experiment workflow.

Subcommands: preprocess, train, generate, evaluate, baseline, report,
toydata. A JSON config file (see config.py for the schema) drives
everything except toydata; --seed overrides the config's global seed.
Errors print to stderr tagged with the failing stage and exit nonzero.
"""

import argparse
import dataclasses
import sys
from pathlib import Path

from ..errors import StageError
from .config import FAMILIES, load_experiment_config
from .stages import (
    checkpoint_path,
    run_baseline,
    run_evaluate,
    run_generate,
    run_preprocess,
    run_report,
    run_train,
)
from .toydata import TOY_CLASSES, write_toy_corpus


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gesturegan",
        description="Train generative models on gesture windows and score the output.",
    )
    parser.add_argument("--config", type=Path, help="experiment config JSON")
    parser.add_argument("--seed", type=int, help="override the config's global seed")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("preprocess", help="filter, window, scale, and split the corpus")

    p_train = sub.add_parser("train", help="train one model for one class")
    p_train.add_argument("--family", required=True, choices=FAMILIES)
    p_train.add_argument("--class", dest="class_label", required=True, metavar="LABEL")

    p_gen = sub.add_parser("generate", help="sample synthetic windows from a checkpoint")
    p_gen.add_argument("--checkpoint", type=Path, help="checkpoint path")
    p_gen.add_argument("--family", choices=FAMILIES, help="with --class, locate the checkpoint")
    p_gen.add_argument("--class", dest="class_label", metavar="LABEL")
    p_gen.add_argument("--n", type=int, help="instances (default: real training count)")
    p_gen.add_argument("--seed", dest="gen_seed", type=int, help="sampling seed")

    p_eval = sub.add_parser("evaluate", help="score synthetic data and write the report")
    p_eval.add_argument(
        "--parallel-classes", action="store_true",
        help="evaluate classes in a thread pool (single-threaded stays bit-exact)",
    )
    sub.add_parser("baseline", help="train-on-real / test-on-real reference")
    sub.add_parser("report", help="re-render tables and draw figures")

    p_toy = sub.add_parser("toydata", help="write a labeled toy waveform corpus")
    p_toy.add_argument("--root", type=Path, required=True, help="corpus directory")
    p_toy.add_argument("--per-class", type=int, default=10)
    p_toy.add_argument("--toy-seed", type=int, default=0)
    p_toy.add_argument("--classes", nargs="+", default=list(TOY_CLASSES))
    return parser


def _load_config(args):
    if args.config is None:
        raise StageError(args.command, "--config is required for this command")
    cfg = load_experiment_config(args.config)
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    stage = args.command

    def log(msg: str) -> None:
        print(f"[{stage}] {msg}")

    try:
        if stage == "toydata":
            paths = write_toy_corpus(
                args.root,
                n_per_class=args.per_class,
                seed=args.toy_seed,
                classes=tuple(args.classes),
            )
            log(f"wrote {len(paths)} recordings under {args.root}")
            return 0

        cfg = _load_config(args)
        if stage == "preprocess":
            result = run_preprocess(cfg, log=log)
            log("cached" if result.cached else "done")
        elif stage == "train":
            run_train(cfg, args.family, args.class_label, log=log)
        elif stage == "generate":
            ckpt = args.checkpoint
            if ckpt is None:
                if args.family is None or args.class_label is None:
                    raise StageError(
                        stage, "pass --checkpoint, or --family with --class"
                    )
                ckpt = checkpoint_path(cfg, args.family, args.class_label)
            run_generate(cfg, ckpt, n=args.n, seed=args.gen_seed, log=log)
        elif stage == "evaluate":
            run_evaluate(cfg, parallel_classes=args.parallel_classes, log=log)
        elif stage == "baseline":
            run_baseline(cfg, log=log)
        elif stage == "report":
            run_report(cfg, log=log)
        return 0
    except StageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"[{stage}] {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
