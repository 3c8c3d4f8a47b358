"""Command-line front end: train, classify, evaluate, synth, inspect.

Exit codes: 0 success, 1 usage error, 2 runtime or data error.
"""

import argparse
import json
import sys

import numpy as np

from . import evaluation, pca, synth
from .classify import METHODS, METRICS, ClassifierConfig, batch_classify, classify
from .errors import EigenExprError
from .ingest import IngestConfig, load_image, load_manifest

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class StageError(Exception):
    def __init__(self, stage, err):
        super().__init__(f"{stage} failed: {err}")


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (EigenExprError, OSError) as exc:
        raise StageError(name, exc) from exc


def _config(cls, **kwargs):
    try:
        return cls(**kwargs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_train(args):
    ingest_cfg = _config(IngestConfig, width=args.width, height=args.height)
    train_cfg = _config(pca.TrainConfig, variance_threshold=args.variance, max_components=args.max_components)
    dataset = _stage("ingest", load_manifest, args.manifest, ingest_cfg)
    model = _stage("train", pca.train, dataset, train_cfg)
    _stage("save", pca.save_model, model, args.model)
    print(f"M={model.m} N={model.n_pixels} k={model.k} "
          f"cumulative_variance={pca.explained_variance(model, model.k):.6f}")
    print(f"model written to {args.model}")


def cmd_classify(args):
    model = _stage("load model", pca.load_model, args.model)
    cfg = _config(ClassifierConfig, method=args.method, metric=args.metric, reject_threshold=args.reject)
    if args.top < 1:
        raise UsageError("--top must be at least 1")
    pixels = _stage("ingest", load_image, args.image, IngestConfig(width=model.width, height=model.height))
    result = _stage("classify", classify, model, pixels, cfg)
    top = result.ranked[:args.top]
    if args.json:
        doc = {
            "label": result.label,
            "distance": result.distance,
            "rejected": result.rejected,
            "ranked": [{"index": i, "label": lab, "distance": d} for i, lab, d in top],
        }
        print(json.dumps(doc, indent=2))
        return
    print(f"label: {result.label}")
    print(f"distance: {result.distance!r}")
    if result.rejected:
        print("rejected: true")
    for rank, (i, lab, d) in enumerate(top, start=1):
        print(f"{rank}. index={i} label={lab} distance={d!r}")


def cmd_evaluate(args):
    model = _stage("load model", pca.load_model, args.model)
    cfg = _config(ClassifierConfig, method=args.method, metric=args.metric)
    dataset = _stage("ingest", load_manifest, args.manifest,
                     IngestConfig(width=model.width, height=model.height))
    results = _stage("classify", batch_classify, model, dataset, cfg)
    if not results:
        raise StageError("evaluate", "test split is empty")
    report = _stage("score", evaluation.score, results, dataset.label_counts())

    style = "json" if args.json else args.format
    if style == "json":
        doc = json.loads(evaluation.render_table(report, "json"))
        doc["confusion"] = evaluation.confusion_records(report)
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        sys.stdout.write(evaluation.render_table(report, style, args.places, args.rounding))
    if args.report:
        _stage("write report", _write_text, args.report, evaluation.render_table(report, "csv"))
    if args.chart:
        _stage("write chart", evaluation.emit_chart_data, report, args.chart)


def _write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def cmd_synth(args):
    try:
        manifest = synth.generate_synthetic(
            args.out, args.classes, args.train, args.test, args.width, args.height, args.noise, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    except EigenExprError as exc:
        raise StageError("synth", exc) from exc
    print(f"wrote {args.classes * (args.train + args.test)} images; manifest {manifest}")


def cmd_inspect(args):
    model = _stage("load model", pca.load_model, args.model)
    c = model.config
    print(f"dims: {model.width}x{model.height} (N={model.n_pixels})")
    print(f"training samples: M={model.m}")
    print(f"components: k={model.k}")
    print(f"config: variance_threshold={c.variance_threshold} max_components={c.max_components} "
          f"eigen_tol={c.eigen_tol} null_eigen_ratio={c.null_eigen_ratio}")
    print("per-label training counts:")
    counts = {}
    for label in model.train_labels:
        counts[label] = counts.get(label, 0) + 1
    for label, n in counts.items():
        print(f"  {label}: {n}")
    print("spectrum (component, eigenvalue, cumulative variance):")
    cumulative = np.cumsum(model.eigenvalues) / model.total_variance
    for i, (lam, frac) in enumerate(zip(model.eigenvalues, cumulative), start=1):
        print(f"  {i:4d}  {lam:.6e}  {min(frac, 1.0):.6f}")


def build_parser():
    parser = _Parser(prog="eigenexpr", description="Eigenfaces facial-expression recognition")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("train", help="train an eigenface model from a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--width", type=int, default=64)
    p.add_argument("--height", type=int, default=64)
    p.add_argument("--variance", type=float, default=0.95)
    p.add_argument("--max-components", type=int, default=None)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", help="classify one image")
    p.add_argument("--model", required=True)
    p.add_argument("--image", required=True)
    p.add_argument("--metric", choices=METRICS, default="euclidean")
    p.add_argument("--method", choices=METHODS, default="nearest_neighbor")
    p.add_argument("--top", type=int, default=5)
    p.add_argument("--reject", type=float, default=None, help="rejection distance threshold")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("evaluate", help="score the test split of a manifest")
    p.add_argument("--model", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--report", help="write the result table as CSV")
    p.add_argument("--chart", help="write chart data (label,true_rate,false_rate) as CSV")
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--json", action="store_true")
    p.add_argument("--places", type=int, choices=(1, 2), default=2, help="decimals shown in text tables")
    p.add_argument("--rounding", choices=tuple(evaluation.ROUNDING), default="half_up")
    p.add_argument("--metric", choices=METRICS, default="euclidean")
    p.add_argument("--method", choices=METHODS, default="nearest_neighbor")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("synth", help="generate a synthetic grating dataset")
    p.add_argument("--classes", type=int, default=7)
    p.add_argument("--train", type=int, default=20)
    p.add_argument("--test", type=int, default=10)
    p.add_argument("--width", type=int, default=64)
    p.add_argument("--height", type=int, default=64)
    p.add_argument("--noise", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("inspect", help="summarize a model file")
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        args.func(args)
    except UsageError as exc:
        print(f"eigenexpr {args.command}: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StageError as exc:
        print(f"eigenexpr {args.command}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
