"""Command-line entry point: fit, score, classify, grid, bench, serve.

Exit codes: 0 success, 1 usage error, 2 data error. All CSV outputs print
floats with 9 significant digits and are bitwise reproducible for fixed
flags (randomness sits behind --seed).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import eval as eval_mod
from . import scorer, server
from .classify import classify as classify_space
from .classify import write_classification_csv
from .dataset import DataError, Dataset, load_csv
from .scorer import BiknnParams, PRESETS

GRID_MARGIN = 0.1  # fraction of each axis range added on both sides


def _fmt(x: float) -> str:
    return f"{float(x):.9g}"


class UsageError(ValueError):
    """Bad flag values or combinations; exits 1 rather than 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; usage errors are 1
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, default=None, help="neighborhood size (default 30)")
    p.add_argument("--p1", type=float, default=None, help="Minkowski order, original space")
    p.add_argument("--p2", type=float, default=None, help="Minkowski order, ECDF space")
    p.add_argument("--agg", choices=["max", "mean", "median"], default=None)
    p.add_argument("--w1", type=float, default=None, help="spatial-anomaly weight")
    p.add_argument("--w2", type=float, default=None, help="density-anomaly weight")
    p.add_argument("--wp", type=float, default=None, help="Minkowski order of the weighted norm")
    p.add_argument("--mu", type=float, default=None, help="Mahalanobis/weighted-norm mix in [0,1]")
    p.add_argument("--preset", choices=sorted(PRESETS), default=None)
    p.add_argument("--support-fraction", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)


def _params_from_args(args) -> BiknnParams:
    try:
        return scorer.params_from_cli(
            args.preset,
            k=args.k,
            p1=args.p1,
            p2=args.p2,
            agg=args.agg,
            w1=args.w1,
            w2=args.w2,
            wp=args.wp,
            mu=args.mu,
            support_fraction=args.support_fraction,
            seed=args.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="biknn", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, labels=True, output=True):
        p.add_argument("--input", required=True, help="input CSV path")
        if labels:
            p.add_argument("--labels", default=None, metavar="COL", help="label column name")
        if output:
            p.add_argument("--output", required=True, help="output file path")
        _add_param_flags(p)

    p_fit = sub.add_parser("fit", help="fit a model and write it as JSON")
    common(p_fit)

    p_score = sub.add_parser("score", help="fit on the input and write per-row scores")
    common(p_score)
    p_score.add_argument("--n-outliers", type=int, default=None, help="also flag the top n rows")

    p_classify = sub.add_parser("classify", help="three-type outlier classification")
    common(p_classify)
    p_classify.add_argument("--n-outliers", type=int, required=True, help="expected outlier count m")

    p_grid = sub.add_parser("grid", help="score a 2D grid for contouring")
    common(p_grid)
    p_grid.add_argument("--resolution", type=int, default=200)

    p_bench = sub.add_parser("bench", help="multi-trial benchmark over labeled datasets")
    p_bench.add_argument("--input", required=True, help="file listing one dataset CSV path per line")
    p_bench.add_argument("--labels", default="label", metavar="COL")
    p_bench.add_argument("--output", required=True, help="summary CSV path (JSON written alongside)")
    p_bench.add_argument("--trials", type=int, default=10)
    p_bench.add_argument("--train-fraction", type=float, default=0.6)
    _add_param_flags(p_bench)

    p_serve = sub.add_parser("serve", help="run the explorer HTTP backend")
    p_serve.add_argument("--input", required=True)
    p_serve.add_argument("--labels", default=None, metavar="COL")
    p_serve.add_argument("--port", type=int, default=8334)
    p_serve.add_argument("--n-outliers", type=int, default=None, help="initial classification m")
    _add_param_flags(p_serve)

    return parser


def _cmd_fit(args) -> int:
    ds = load_csv(args.input, args.labels)
    model = scorer.fit(ds, _params_from_args(args))
    scorer.save_model(model, args.output)
    return 0


def _cmd_score(args) -> int:
    ds = load_csv(args.input, args.labels)
    model = scorer.fit(ds, _params_from_args(args))
    scores = model.score_train()
    with open(args.output, "w", newline="", encoding="utf-8") as fh:
        if args.n_outliers is None:
            fh.write("id,score\n")
            for i, s in enumerate(scores):
                fh.write(f"{i},{_fmt(s)}\n")
        else:
            threshold = scorer.decision_threshold(scores, args.n_outliers)
            fh.write("id,score,is_outlier\n")
            for i, s in enumerate(scores):
                fh.write(f"{i},{_fmt(s)},{int(s > threshold)}\n")
    return 0


def _cmd_classify(args) -> int:
    ds = load_csv(args.input, args.labels)
    model = scorer.fit(ds, _params_from_args(args))
    labels = classify_space(model.train_space, args.n_outliers)
    write_classification_csv(args.output, model.train_space, labels)
    return 0


def _cmd_grid(args) -> int:
    ds = load_csv(args.input, args.labels)
    if ds.d != 2:
        raise DataError(f"grid requires 2D data, got d={ds.d}")
    model = scorer.fit(ds, _params_from_args(args))
    lo = ds.features.min(axis=0)
    hi = ds.features.max(axis=0)
    pad = GRID_MARGIN * (hi - lo)
    mins, maxs = lo - pad, hi + pad
    grid = model.score_grid(mins, maxs, args.resolution)
    with open(args.output, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# {_fmt(mins[0])} {_fmt(maxs[0])} {_fmt(mins[1])} {_fmt(maxs[1])}\n")
        fh.write(f"# {args.resolution}\n")
        for row in grid:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    return 0


def _cmd_bench(args) -> int:
    list_path = Path(args.input)
    if not list_path.exists():
        raise DataError(f"no such file: {list_path}")
    datasets: list[tuple[str, Dataset]] = []
    for line in list_path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line:
            datasets.append((Path(line).stem, load_csv(line, args.labels)))
    if not datasets:
        raise DataError(f"{list_path}: no dataset paths listed")

    base = _params_from_args(args)
    if args.preset is not None:
        params_list = [(args.preset, base)]
    elif any(v is not None for v in (args.w1, args.w2, args.mu)):
        params_list = [("custom", base)]
    else:
        params_list = [
            (name, scorer.params_from_cli(name, k=args.k, p1=args.p1, p2=args.p2, agg=args.agg,
                                          wp=args.wp, support_fraction=args.support_fraction,
                                          seed=args.seed))
            for name in ("knn", "biknn1", "biknn2", "biknn3")
        ]
    reports = eval_mod.run_benchmark(
        datasets, params_list, args.trials, args.train_fraction, args.seed
    )
    out = Path(args.output)
    eval_mod.write_report_csv(reports, out)
    eval_mod.write_report_json(reports, out.with_suffix(".json"))
    return 0


def _cmd_serve(args) -> int:
    ds = load_csv(args.input, args.labels)
    params = _params_from_args(args)
    srv = server.create_server(
        ds,
        params,
        port=args.port,
        marks_path=Path(args.input).with_suffix(".marks.json"),
        n_outliers=args.n_outliers,
    )
    print(f"biknn explorer backend on http://localhost:{srv.port}/ (Ctrl-C to stop)")
    try:
        srv.serve_forever()
    except KeyboardInterrupt:
        srv.shutdown()
    return 0


_COMMANDS = {
    "fit": _cmd_fit,
    "score": _cmd_score,
    "classify": _cmd_classify,
    "grid": _cmd_grid,
    "bench": _cmd_bench,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"biknn {args.command}: usage error: {exc}", file=sys.stderr)
        return 1
    except (DataError, ValueError, OSError) as exc:
        print(f"biknn {args.command}: error: {exc}", file=sys.stderr)
        return 2


def console_main() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    console_main()
