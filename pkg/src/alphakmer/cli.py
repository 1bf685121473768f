"""Command-line interface: ``alphakmer {encode,embed,evaluate,synth,ttest}``.

Exit status is 0 on success, 1 on validation or parse errors and 2 when the
data is degenerate (all values equal).
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
from sklearn.pipeline import make_pipeline

from .classify import GaussianNBClassifier, KNNClassifier, SoftmaxRegression
from .core import AlphaKmerError, Alphabet, DegenerateRange, ValidationError
from .evaluation import SplitSpec, run_experiment, split, t_test
from .persist import (
    load_dataset,
    read_runs_csv,
    write_bounds_json,
    write_report_json,
    write_runs_csv,
    write_sequences_csv,
    write_signals_csv,
    write_spectrum,
)
from .spectrum import KmerSpectrumEmbedder, generate_embedding
from .synth import synth_dataset

log = logging.getLogger("alphakmer")

EXIT_OK, EXIT_INVALID, EXIT_DEGENERATE = 0, 1, 2
SCOPE_NAMES = {"all": "all_data", "train": "train_only"}


@dataclass
class RunConfig:
    alphabet_size: int = 26
    ksize: int = 3
    fit_scope: str = "all_data"
    train_frac: float = 0.6
    val_frac: float = 0.1
    test_frac: float = 0.3
    repetitions: int = 100
    base_seed: int = 42
    stratified: bool = False
    classifiers: List[str] = field(default_factory=lambda: ["knn", "logreg", "gnb"])
    knn_k: int = 5
    l2: float = 1e-3
    lr: float = 0.1
    epochs: int = 500
    var_smoothing: float = 1e-9
    n_jobs: Optional[int] = None

    def __post_init__(self):
        if not 2 <= self.alphabet_size <= 26:
            raise ValidationError("alphabet size must be in [2, 26]")
        if self.ksize < 1:
            raise ValidationError("ksize must be >= 1")
        if self.repetitions < 1:
            raise ValidationError("repetitions must be >= 1")
        if self.fit_scope not in SCOPE_NAMES.values():
            raise ValidationError(f"unknown fit scope {self.fit_scope!r}")
        unknown = set(self.classifiers) - {"knn", "logreg", "gnb"}
        if unknown:
            raise ValidationError(f"unknown classifiers: {', '.join(sorted(unknown))}")
        self.split_spec()

    @property
    def alphabet(self):
        return Alphabet.of_size(self.alphabet_size)

    def split_spec(self, seed=None):
        return SplitSpec(
            self.train_frac,
            self.val_frac,
            self.test_frac,
            self.base_seed if seed is None else seed,
            self.stratified,
        )

    def estimators(self) -> Dict[str, object]:
        make = {
            "knn": lambda: KNNClassifier(self.knn_k),
            "logreg": lambda: SoftmaxRegression(self.l2, self.lr, self.epochs, self.base_seed),
            "gnb": lambda: GaussianNBClassifier(self.var_smoothing),
        }
        return {name: make[name]() for name in self.classifiers}


def _train_mask(config, dataset):
    if config.fit_scope != "train_only":
        return None
    train, _, _ = split(len(dataset), dataset.labels, config.split_spec())
    mask = np.zeros(len(dataset), dtype=bool)
    mask[train] = True
    return mask


def _embed(config, dataset):
    return generate_embedding(
        dataset,
        config.alphabet,
        config.ksize,
        config.fit_scope,
        _train_mask(config, dataset),
    )


def _warn_short(dataset, ksize):
    short = [s.id for s in dataset.signals if len(s) < ksize]
    if short:
        log.warning(
            "%d signal(s) shorter than k=%d get all-zero spectra: %s",
            len(short),
            ksize,
            ", ".join(short[:10]) + (" ..." if len(short) > 10 else ""),
        )


def cmd_encode(config: RunConfig, input_path, output_dir):
    dataset = load_dataset(input_path)
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    _, bounds, sequences = _embed(config, dataset)
    write_bounds_json(bounds, config.alphabet, out / "bounds.json", fit_scope=config.fit_scope)
    write_sequences_csv(sequences, out / "sequences.csv")
    return {"bounds": str(out / "bounds.json"), "sequences": str(out / "sequences.csv")}


def cmd_embed(config: RunConfig, input_path, output_dir):
    dataset = load_dataset(input_path)
    _warn_short(dataset, config.ksize)
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    embedding, bounds, sequences = _embed(config, dataset)
    write_bounds_json(bounds, config.alphabet, out / "bounds.json", fit_scope=config.fit_scope)
    write_sequences_csv(sequences, out / "sequences.csv")
    write_spectrum(embedding, bounds, config.alphabet, out / "spectrum.csv", out / "manifest.json")
    return {"spectrum": str(out / "spectrum.csv"), "manifest": str(out / "manifest.json")}


def cmd_evaluate(config: RunConfig, input_path, output_dir):
    dataset = load_dataset(input_path)
    if dataset.labels is None:
        raise ValidationError("evaluate needs a labeled dataset")
    _warn_short(dataset, config.ksize)
    estimators = config.estimators()
    if config.fit_scope == "all_data":
        X, _, _ = generate_embedding(dataset, config.alphabet, config.ksize)
    else:
        # the grid is refitted on every repetition's training split
        X = dataset.arrays
        estimators = {
            name: make_pipeline(KmerSpectrumEmbedder(config.alphabet_size, config.ksize), est)
            for name, est in estimators.items()
        }
    report = run_experiment(
        X,
        dataset.labels,
        estimators,
        config.repetitions,
        config.base_seed,
        config.split_spec(),
        config.n_jobs,
    )
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_report_json(report, out / "report.json", config=asdict(config))
    write_runs_csv(report, out / "runs.csv")
    return report


def cmd_synth(classes, signals_per_class, length, seed, output_path, alphabet_size=26):
    dataset = synth_dataset(classes, signals_per_class, length, seed, alphabet_size)
    write_signals_csv(dataset, output_path)
    return dataset


def cmd_ttest(paths, metric, classifiers):
    """Welch test between two classifiers' per-run values of ``metric``."""
    paths = list(paths)
    if len(paths) not in (1, 2):
        raise ValidationError("ttest takes one or two runs files")
    if len(paths) == 1 and len(classifiers) != 2:
        raise ValidationError("with one runs file, name exactly two classifiers")
    if len(classifiers) == 1:
        classifiers = [classifiers[0]] * 2
    if len(classifiers) != 2:
        raise ValidationError("name one or two classifiers")
    tables = [read_runs_csv(p) for p in paths]
    if len(tables) == 1:
        tables = tables * 2
    samples = []
    for rows, clf in zip(tables, classifiers):
        vals = [v for _, c, m, v in rows if c == clf and m == metric]
        if not vals:
            raise ValidationError(f"no {metric!r} values for classifier {clf!r}")
        samples.append(vals)
    t, p = t_test(*samples)
    return {
        "metric": metric,
        "a": {"classifier": classifiers[0], "n": len(samples[0]), "mean": float(np.mean(samples[0]))},
        "b": {"classifier": classifiers[1], "n": len(samples[1]), "mean": float(np.mean(samples[1]))},
        "t": t,
        "p": p,
    }


def _csv_list(text):
    return [s.strip() for s in text.split(",") if s.strip()]


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="signals CSV (id,label,v1,...,vn)")
    common.add_argument("--output", help="output directory (file for synth)")
    common.add_argument("--alphabet-size", type=int, default=26)
    common.add_argument("--ksize", type=int, default=3)
    common.add_argument("--fit-scope", choices=sorted(SCOPE_NAMES), default="all")
    common.add_argument("--repetitions", type=int, default=100)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--classifiers", type=_csv_list, default=["knn", "logreg", "gnb"])
    common.add_argument("--stratified", action="store_true")
    common.add_argument("--knn-k", type=int, default=5)
    common.add_argument("--lr", type=float, default=0.1)
    common.add_argument("--l2", type=float, default=1e-3)
    common.add_argument("--epochs", type=int, default=500)
    common.add_argument("--var-smoothing", type=float, default=1e-9)
    common.add_argument("--n-jobs", type=int, default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="alphakmer",
        description="Alphabetic range mapping and k-mer spectra for time-series classification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("encode", parents=[common], help="fit ranges and write letter sequences")
    sub.add_parser("embed", parents=[common], help="write sparse k-mer spectra")
    sub.add_parser("evaluate", parents=[common], help="repeated-split classifier evaluation")
    p = sub.add_parser("synth", parents=[common], help="generate a labeled synthetic dataset")
    p.add_argument("--classes", type=int, default=2)
    p.add_argument("--signals-per-class", type=int, default=10)
    p.add_argument("--length", type=int, default=100)
    p = sub.add_parser("ttest", parents=[common], help="Welch t-test over per-run metrics")
    p.add_argument("runs", nargs="*", help="per-run metrics CSV file(s)")
    p.add_argument("--metric", default="accuracy")
    return parser


def _config(args):
    return RunConfig(
        alphabet_size=args.alphabet_size,
        ksize=args.ksize,
        fit_scope=SCOPE_NAMES[args.fit_scope],
        repetitions=args.repetitions,
        base_seed=args.seed,
        stratified=args.stratified,
        classifiers=args.classifiers,
        knn_k=args.knn_k,
        l2=args.l2,
        lr=args.lr,
        epochs=args.epochs,
        var_smoothing=args.var_smoothing,
        n_jobs=args.n_jobs,
    )


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise ValidationError("missing required option(s): " + ", ".join("--" + m for m in missing))


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    try:
        if args.command == "synth":
            _require(args, "output")
            ds = cmd_synth(args.classes, args.signals_per_class, args.length, args.seed,
                           args.output, args.alphabet_size)
            log.info("wrote %d signals to %s", len(ds), args.output)
        elif args.command == "ttest":
            paths = list(args.runs) or ([args.input] if args.input else [])
            result = cmd_ttest(paths, args.metric, args.classifiers)
            text = json.dumps(result, indent=2)
            if args.output:
                Path(args.output).write_text(text + "\n")
            print(text)
        else:
            _require(args, "input", "output")
            config = _config(args)
            command = {"encode": cmd_encode, "embed": cmd_embed, "evaluate": cmd_evaluate}
            result = command[args.command](config, args.input, args.output)
            if args.command == "evaluate":
                for name in config.classifiers:
                    acc = result.summary[name]["accuracy"]
                    auc = result.summary[name]["roc_auc_ovr_macro"]
                    print(f"{name}: accuracy {acc['mean']:.4f} ± {acc['sd']:.4f}, "
                          f"roc_auc {auc['mean']:.4f} ± {auc['sd']:.4f}")
    except DegenerateRange as exc:
        print(f"error: degenerate data: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (AlphaKmerError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
