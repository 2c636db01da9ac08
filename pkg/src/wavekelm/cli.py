"""Command-line entry point.

Subcommands:

* ``train``         fit a kernel-ELM or ELM classifier and save the model
* ``predict``       classify a CSV with a saved model
* ``benchmark``     repeated paired trials with statistics and timing
* ``verify-kernel`` Fourier nonnegativity check for a kernel
* ``gridsearch``    hyperparameter search on a dataset's training portion

Outputs are written atomically; every randomized step is driven by an
explicit seed flag, so identical invocations reproduce identical results
(timing measurements aside).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import admissibility, elm, evaluation, kelm, model_io, reporting
from .data import SplitPlan, load_csv, resolve_dataset
from .errors import ConfigError, WavekelmError
from .evaluation import Algo, AlgoConfig
from .kernels import KernelFamily, KernelSpec

__all__ = ["Command", "RunConfig", "parse_args", "dispatch", "main"]


class Command(str, Enum):
    TRAIN = "train"
    PREDICT = "predict"
    BENCHMARK = "benchmark"
    VERIFY_KERNEL = "verify-kernel"
    GRID_SEARCH = "gridsearch"


@dataclass
class RunConfig:
    command: Command
    args: argparse.Namespace


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavekelm",
        description="Wavelet-kernel ELM classifiers, admissibility checks, and benchmarks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_kernel_flags(p):
        p.add_argument("--kernel", choices=[f.value for f in KernelFamily], default="mhw")
        p.add_argument("--a", type=float, default=None, help="wavelet dilation (mhw, mhw-dot)")
        p.add_argument("--sigma", type=float, default=None, help="Gauss width")
        p.add_argument("--degree", type=int, default=None, help="polynomial degree")
        p.add_argument("--c", type=float, default=0.0, help="dot-product wavelet translation")

    def add_data_flags(p, required=True):
        p.add_argument("--data", required=required, help="CSV file")
        p.add_argument("--label-col", default=None, help="label column index or (with --header) name")
        p.add_argument("--header", action="store_true", help="the CSV has a header row")

    p = sub.add_parser("train", help="train a classifier and save the model")
    p.add_argument("--algo", choices=["kelm", "elm"], required=True)
    add_data_flags(p)
    add_kernel_flags(p)
    p.add_argument("--C", type=float, required=True, help="penalty factor")
    p.add_argument("--hidden-frac", type=float, default=1.0, help="ELM hidden nodes / training samples")
    p.add_argument("--seed", type=int, default=0, help="ELM hidden-layer seed")
    p.add_argument("--out", required=True, help="model file to write")

    p = sub.add_parser("predict", help="classify a CSV with a saved model")
    p.add_argument("--model", required=True)
    add_data_flags(p)
    p.add_argument("--out", default=None, help="write predictions here instead of stdout")

    p = sub.add_parser("benchmark", help="paired repeated trials with statistics")
    p.add_argument("--dataset", default=None, help="registry dataset name")
    add_data_flags(p, required=False)
    p.add_argument("--train-count", type=int, default=None)
    p.add_argument("--test-count", type=int, default=None)
    p.add_argument("--algos", default="mhw,gauss,poly,elm", help="comma list of mhw,gauss,poly,elm")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--base-seed", type=int, default=42)
    p.add_argument("--no-tune", action="store_true", help="skip grid search; use flag/default hyperparameters")
    add_kernel_flags(p)
    p.add_argument("--C", type=float, default=1.0, help="penalty factor when --no-tune")
    p.add_argument("--hidden-frac", type=float, default=1.0)
    p.add_argument("--jobs", type=int, default=1, help="parallel trials")
    p.add_argument("--out", default=None, help="report file (stdout when omitted)")
    p.add_argument("--timing-csv", default=None)
    p.add_argument("--figure", default=None, help="render the timing figure here")

    p = sub.add_parser("verify-kernel", help="Fourier nonnegativity check")
    add_kernel_flags(p)
    p.add_argument("--omega-max", type=float, default=8.0, help="grid covers [0, omega-max / dilation]")
    p.add_argument("--grid", type=int, default=400, help="number of omega grid points")
    p.add_argument("--quad-points", type=int, default=4001, help="Simpson sample count (odd)")
    p.add_argument("--out", default=None, help="write the (omega, numeric_ft) CSV here")
    p.add_argument("--figure", default=None, help="render the transform figure here")

    p = sub.add_parser("gridsearch", help="hyperparameter grid search")
    p.add_argument("--dataset", default=None)
    add_data_flags(p, required=False)
    p.add_argument("--train-count", type=int, default=None)
    p.add_argument("--test-count", type=int, default=None)
    p.add_argument("--algo", choices=[a.value for a in Algo], required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--val-splits", type=int, default=5)
    return parser


def _kernel_spec(args) -> KernelSpec:
    family = KernelFamily(args.kernel)
    if family in (KernelFamily.MHW_TI, KernelFamily.MHW_DOT):
        if args.a is None:
            raise ConfigError(f"--a is required for --kernel {family.value}")
        if args.a <= 0:
            raise ConfigError(f"--a must be positive, got {args.a}")
        return KernelSpec(family, a=args.a, c_translate=args.c)
    if family is KernelFamily.GAUSS:
        if args.sigma is None:
            raise ConfigError("--sigma is required for --kernel gauss")
        if args.sigma <= 0:
            raise ConfigError(f"--sigma must be positive, got {args.sigma}")
        return KernelSpec(family, sigma=args.sigma)
    if args.degree is None:
        raise ConfigError("--degree is required for --kernel poly")
    if args.degree < 1:
        raise ConfigError(f"--degree must be >= 1, got {args.degree}")
    return KernelSpec(family, degree=args.degree)


def parse_args(argv) -> RunConfig:
    """Parse and validate CLI arguments into a RunConfig."""
    args = _build_parser().parse_args(argv)
    command = Command(args.command)

    if hasattr(args, "C") and args.C is not None and args.C <= 0:
        raise ConfigError(f"--C must be positive, got {args.C}")
    if command is Command.TRAIN:
        if args.algo == "kelm":
            args.kernel_spec = _kernel_spec(args)
        if args.label_col is None:
            raise ConfigError("--label-col is required for train")
        if args.hidden_frac <= 0:
            raise ConfigError("--hidden-frac must be positive")
    elif command is Command.BENCHMARK:
        _require_dataset_source(args)
        algos = [a.strip() for a in args.algos.split(",") if a.strip()]
        if not algos:
            raise ConfigError("--algos must name at least one algorithm")
        try:
            args.algo_list = [Algo(a) for a in algos]
        except ValueError as exc:
            raise ConfigError(f"unknown algorithm in --algos: {exc}") from None
        if args.trials < 2:
            raise ConfigError("--trials must be >= 2")
        if args.jobs < 1:
            raise ConfigError("--jobs must be >= 1")
    elif command is Command.VERIFY_KERNEL:
        family = KernelFamily(args.kernel)
        if not family.translation_invariant:
            raise ConfigError(f"kernel {family.value!r} is not translation-invariant")
        if family is KernelFamily.MHW_TI and args.a is None:
            args.a = 1.0
        if family is KernelFamily.GAUSS and args.sigma is None:
            args.sigma = 1.0
        args.kernel_spec = _kernel_spec(args)
        if args.omega_max <= 0:
            raise ConfigError("--omega-max must be positive")
        if args.grid < 200:
            raise ConfigError("--grid must be at least 200 points")
    elif command is Command.GRID_SEARCH:
        _require_dataset_source(args)
    return RunConfig(command=command, args=args)


def _require_dataset_source(args) -> None:
    if args.dataset is None and args.data is None:
        raise ConfigError("either --dataset (registry name) or --data (CSV path) is required")
    if args.dataset is None:
        if args.label_col is None:
            raise ConfigError("--label-col is required with --data")
        if args.train_count is None or args.test_count is None:
            raise ConfigError("--train-count and --test-count are required with --data")


def _label_col(args):
    col = args.label_col
    try:
        return int(col)
    except (TypeError, ValueError):
        return col


def _load_benchmark_dataset(args):
    if args.dataset is not None:
        ds, entry = resolve_dataset(args.dataset)
        train_count = args.train_count or entry.train_count
        test_count = args.test_count or entry.test_count
        return ds, train_count, test_count
    ds = load_csv(args.data, _label_col(args), has_header=args.header)
    return ds, args.train_count, args.test_count


def _cmd_train(args) -> int:
    ds = load_csv(args.data, _label_col(args), has_header=args.header)
    if args.algo == "kelm":
        model = kelm.train_kelm(ds.features, ds.labels, args.kernel_spec, args.C, ds.label_map)
        predicted = kelm.classify_multiclass(model, ds.features)
    else:
        n_hidden = max(1, round(args.hidden_frac * ds.n_samples))
        model = elm.train_elm(ds.features, ds.labels, n_hidden, args.C, args.seed, ds.label_map)
        predicted = elm.predict_elm(model, ds.features)
    model_io.save_model(model, args.out)
    truth = [ds.label_map[k] for k in ds.labels]
    acc = float(np.mean([p == t for p, t in zip(predicted, truth)]))
    print(f"saved {args.algo} model to {args.out} (training accuracy {acc:.4f})")
    return 0


def _cmd_predict(args) -> int:
    model = model_io.load_model(args.model)
    n_features = (
        model.x_train.shape[1] if isinstance(model, kelm.KelmModel) else model.layer.W.shape[0]
    )
    if args.label_col is not None:
        ds = load_csv(args.data, _label_col(args), has_header=args.header)
        features, truth = ds.features, [ds.label_map[k] for k in ds.labels]
    else:
        ds = None
        rows = np.loadtxt(args.data, delimiter=",", skiprows=1 if args.header else 0, ndmin=2)
        features, truth = rows, None
    if features.shape[1] != n_features:
        raise ConfigError(f"model expects {n_features} features, data has {features.shape[1]}")
    if isinstance(model, kelm.KelmModel):
        predicted = kelm.classify_multiclass(model, features)
    else:
        predicted = elm.predict_elm(model, features)
    text = "\n".join(predicted) + "\n"
    if args.out:
        reporting.write_text_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    if truth is not None:
        acc = float(np.mean([p == t for p, t in zip(predicted, truth)]))
        print(f"accuracy {acc:.4f}")
    return 0


def _tuned_config(ds, plan, algo, args) -> AlgoConfig:
    if args.no_tune:
        if algo is Algo.ORIGINAL_ELM:
            return AlgoConfig(algo, C=args.C, hidden_frac=args.hidden_frac)
        family = evaluation.KERNEL_FOR_ALGO[algo]
        spec = KernelSpec(
            family,
            a=args.a if args.a is not None else 1.0,
            sigma=args.sigma if args.sigma is not None else 1.0,
            degree=args.degree if args.degree is not None else 2,
        )
        return AlgoConfig(algo, C=args.C, spec=spec)
    result = evaluation.grid_search(ds, plan, algo)
    config = result.config
    if algo is Algo.ORIGINAL_ELM:
        config = AlgoConfig(algo, C=config.C, hidden_frac=args.hidden_frac)
    return config


def _cmd_benchmark(args) -> int:
    ds, train_count, test_count = _load_benchmark_dataset(args)
    plan = SplitPlan(train_count, test_count, seed=args.base_seed)
    configs = [_tuned_config(ds, plan, algo, args) for algo in args.algo_list]
    results = evaluation.run_trials(ds, plan, configs, args.trials, args.base_seed, jobs=args.jobs)
    report = evaluation.summarize(results, ds.name, plan, ds.category_count, args.base_seed)

    hyper_lines = ["Hyperparameters:"]
    for config in configs:
        if config.algo is Algo.ORIGINAL_ELM:
            hyper_lines.append(
                f"  {config.algo.value}: C={config.C:g}, hidden nodes = {config.hidden_frac:g} x train"
            )
        else:
            hyper_lines.append(f"  {config.algo.value}: C={config.C:g}, {config.spec.describe()}")
    text = reporting.emit_report(report) + "\n" + "\n".join(hyper_lines) + "\n"

    if args.out:
        reporting.write_text_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    rows = reporting.timing_rows(report)
    if args.timing_csv:
        reporting.write_timing_csv(rows, args.timing_csv)
    if args.figure:
        reporting.render_timing_figure(rows, args.figure)
    return 0


def _cmd_verify_kernel(args) -> int:
    spec = args.kernel_spec
    scale = spec.a if spec.family is KernelFamily.MHW_TI else spec.sigma
    grid = np.linspace(0.0, args.omega_max / scale, args.grid)
    report = admissibility.verify_admissibility(spec, grid, n_points=args.quad_points)
    csv_lines = ["omega,numeric_ft"]
    csv_lines += [f"{w!r},{v!r}" for w, v in zip(report.omega_grid, report.numeric_ft)]
    csv_text = "\n".join(csv_lines) + "\n"
    if args.out:
        reporting.write_text_atomic(args.out, csv_text)
    else:
        sys.stdout.write(csv_text)
    if args.figure:
        reporting.render_transform_figure(report, args.figure)
    print(
        f"kernel {report.kernel}: verdict={report.verdict.value} "
        f"min_numeric_ft={report.min_numeric_ft:.3e} "
        f"numeric/closed-form ratio={report.proportionality_ratio:.6g}"
    )
    return 0 if report.verdict is admissibility.Verdict.ADMISSIBLE else 1


def _cmd_gridsearch(args) -> int:
    ds, train_count, test_count = _load_benchmark_dataset(args)
    plan = SplitPlan(train_count, test_count, seed=args.seed)
    algo = Algo(args.algo)
    result = evaluation.grid_search(ds, plan, algo, n_val_splits=args.val_splits)
    config = result.config
    if algo is Algo.ORIGINAL_ELM:
        print(f"best: C={config.C:g} (validation accuracy {result.score:.4f}, {result.n_candidates} candidates)")
    else:
        print(
            f"best: C={config.C:g}, {config.spec.describe()} "
            f"(validation accuracy {result.score:.4f}, {result.n_candidates} candidates)"
        )
    return 0


def dispatch(config: RunConfig) -> int:
    """Run the selected command; returns the process exit status."""
    handlers = {
        Command.TRAIN: _cmd_train,
        Command.PREDICT: _cmd_predict,
        Command.BENCHMARK: _cmd_benchmark,
        Command.VERIFY_KERNEL: _cmd_verify_kernel,
        Command.GRID_SEARCH: _cmd_gridsearch,
    }
    return handlers[config.command](config.args)


def main(argv=None) -> int:
    try:
        config = parse_args(argv if argv is not None else sys.argv[1:])
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    try:
        return dispatch(config)
    except WavekelmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
