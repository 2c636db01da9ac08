"""Benchmark protocol: repeated paired trials, t-tests, and grid search.

Each benchmark repeats a seeded random train/test split ``n_trials``
times.  Trial k uses seed ``base_seed + k`` for the split and for the
ELM hidden layer, and every algorithm consumes the *same* split in the
same trial, so per-trial accuracy differences are genuinely paired and
a paired Student's t-test against the best performer is meaningful.

Hyperparameters come from a deterministic grid search: candidate scores
are mean validation accuracy over seeded sub-splits of the training
portion only, and ties prefer the smallest penalty factor, then the
smallest kernel parameter (more regularization wins).
"""

from __future__ import annotations

import hashlib
import math
import time
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from scipy.special import betainc

from . import elm, kelm
from .data import Dataset, SplitPlan, apply_normalizer, fit_normalizer, random_split, split_indices
from .errors import ConfigError, NumericError
from .kernels import KernelFamily, KernelSpec, cross_kernel_matrix, gram_matrix

__all__ = [
    "Algo",
    "AlgoConfig",
    "TrialResult",
    "AlgoRow",
    "BenchmarkReport",
    "GridSearchResult",
    "classification_accuracy",
    "run_trials",
    "paired_t_test",
    "student_t_two_sided_p",
    "default_grids",
    "grid_search",
    "summarize",
]


class Algo(str, Enum):
    MHW_KELM = "mhw"
    GAUSS_KELM = "gauss"
    POLY_KELM = "poly"
    ORIGINAL_ELM = "elm"


KERNEL_FOR_ALGO = {
    Algo.MHW_KELM: KernelFamily.MHW_TI,
    Algo.GAUSS_KELM: KernelFamily.GAUSS,
    Algo.POLY_KELM: KernelFamily.POLY,
}


@dataclass(frozen=True)
class AlgoConfig:
    """One benchmarked algorithm with fixed hyperparameters."""

    algo: Algo
    C: float = 1.0
    spec: KernelSpec | None = None
    hidden_frac: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "algo", Algo(self.algo))
        if self.algo is Algo.ORIGINAL_ELM:
            if not 0 < self.hidden_frac:
                raise ConfigError("hidden_frac must be positive")
        else:
            spec = self.spec if self.spec is not None else _default_spec(self.algo)
            if spec.family is not KERNEL_FOR_ALGO[self.algo]:
                raise ConfigError(f"{self.algo.value} expects a {KERNEL_FOR_ALGO[self.algo].value} kernel")
            object.__setattr__(self, "spec", spec)


def _default_spec(algo: Algo) -> KernelSpec:
    return KernelSpec(family=KERNEL_FOR_ALGO[algo])


@dataclass
class TrialResult:
    algo: Algo
    accuracy: float
    train_time: float
    seed: int
    split_hash: str
    failed: bool = False
    error: str = ""


@dataclass
class AlgoRow:
    """One report row: accuracy statistics in percent, timing in seconds."""

    algo: Algo
    mean_accuracy: float
    std: float
    p_value: float
    mean_time: float
    n_failed: int = 0


@dataclass
class BenchmarkReport:
    dataset: str
    train_count: int
    test_count: int
    n_classes: int
    n_trials: int
    base_seed: int
    rows: list[AlgoRow]
    best_algo: Algo


@dataclass
class GridSearchResult:
    config: AlgoConfig
    score: float
    n_candidates: int


def classification_accuracy(predicted_indices, true_indices) -> float:
    """Fraction of matching class indices."""
    predicted_indices = np.asarray(predicted_indices)
    true_indices = np.asarray(true_indices)
    if predicted_indices.shape != true_indices.shape:
        raise ConfigError("prediction and truth must have the same length")
    return float(np.mean(predicted_indices == true_indices))


def _train_and_score(config: AlgoConfig, train: Dataset, test: Dataset, seed: int):
    """Train one model, timing training only; return (accuracy, seconds)."""
    if config.algo is Algo.ORIGINAL_ELM:
        n_hidden = max(1, round(config.hidden_frac * train.n_samples))
        t0 = time.perf_counter()
        model = elm.train_elm(train.features, train.labels, n_hidden, config.C, seed, train.label_map)
        train_time = time.perf_counter() - t0
        scores = elm.decision_matrix(model, test.features)
    else:
        t0 = time.perf_counter()
        model = kelm.train_kelm(train.features, train.labels, config.spec, config.C, train.label_map)
        train_time = time.perf_counter() - t0
        scores = kelm.decision_matrix(model, test.features)
    accuracy = classification_accuracy(np.argmax(scores, axis=1), test.labels)
    return accuracy, train_time


def run_trials(
    ds: Dataset,
    plan: SplitPlan,
    configs: list[AlgoConfig],
    n_trials: int,
    base_seed: int,
    jobs: int = 1,
) -> dict[Algo, list[TrialResult]]:
    """Repeat the split/train/test cycle with paired splits across algorithms.

    Trial k runs every configured algorithm on the split seeded with
    ``base_seed + k``; failed trainings are recorded, not dropped.
    """
    if n_trials < 2:
        raise ConfigError(f"need n_trials >= 2, got {n_trials}")
    if len({c.algo for c in configs}) != len(configs):
        raise ConfigError("each algorithm may appear only once per benchmark")

    def one_trial(k: int) -> list[TrialResult]:
        seed = base_seed + k
        trial_plan = replace(plan, seed=seed)
        train, test = random_split(ds, trial_plan)
        tr_idx, te_idx = split_indices(ds, trial_plan)
        digest = hashlib.sha256(tr_idx.tobytes() + b"|" + te_idx.tobytes()).hexdigest()[:16]
        out = []
        for config in configs:
            try:
                accuracy, train_time = _train_and_score(config, train, test, seed)
                out.append(TrialResult(config.algo, accuracy, train_time, seed, digest))
            except NumericError as exc:
                out.append(TrialResult(config.algo, math.nan, 0.0, seed, digest, failed=True, error=str(exc)))
        return out

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            per_trial = list(pool.map(one_trial, range(n_trials)))
    else:
        per_trial = [one_trial(k) for k in range(n_trials)]

    results: dict[Algo, list[TrialResult]] = {c.algo: [] for c in configs}
    for trial in per_trial:  # deterministic fold in trial-index order
        for res in trial:
            results[res.algo].append(res)
    return results


def student_t_two_sided_p(t: float, df: int) -> float:
    """Two-sided tail probability of Student's t via the regularized
    incomplete beta function: p = I_{df/(df+t^2)}(df/2, 1/2)."""
    if df < 1:
        raise ConfigError(f"degrees of freedom must be >= 1, got {df}")
    if math.isinf(t):
        return 0.0
    return float(betainc(df / 2.0, 0.5, df / (df + t * t)))


def paired_t_test(a, b) -> float:
    """Two-sided paired Student's t-test p-value for equal means.

    Returns 1.0 when every difference is zero; 0.0 in the degenerate
    case of identical nonzero differences (zero variance).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ConfigError(f"paired samples must be equal-length vectors, got {a.shape} and {b.shape}")
    n = a.shape[0]
    if n < 2:
        raise ConfigError("paired t-test needs at least 2 pairs")
    d = a - b
    if np.all(d == 0):
        return 1.0
    sd = float(np.std(d, ddof=1))
    if sd == 0.0:
        return 0.0
    t = float(np.mean(d)) / (sd / math.sqrt(n))
    return student_t_two_sided_p(t, n - 1)


def default_grids(algo: Algo) -> dict:
    """Default hyperparameter grids: C doubles twice per step from 2^-5 to
    2^19; kernel width/dilation spans 2^-3..2^3 by octaves; degree 1..3."""
    grids: dict = {"C": [2.0**e for e in range(-5, 20, 2)]}
    if algo in (Algo.MHW_KELM, Algo.GAUSS_KELM):
        grids["param"] = [2.0**e for e in range(-3, 4)]
    elif algo is Algo.POLY_KELM:
        grids["degree"] = [1, 2, 3]
    return grids


def _validation_splits(train: Dataset, plan: SplitPlan, n_val_splits: int):
    """Seeded sub-splits of the training portion (roughly 50/50)."""
    n_sub = max(1, min(train.n_samples - 1, round(0.5 * train.n_samples)))
    n_val = train.n_samples - n_sub
    out = []
    for i in range(n_val_splits):
        sub_plan = SplitPlan(n_sub, n_val, seed=plan.seed + 1 + i)
        out.append(random_split(train, sub_plan))
    return out


def _candidate_configs(algo: Algo, grids: dict) -> list[AlgoConfig]:
    """All grid points, sorted so earlier candidates win ties
    (smallest C first, then smallest kernel parameter)."""
    cs = sorted(grids["C"])
    if algo is Algo.ORIGINAL_ELM:
        return [AlgoConfig(algo, C=c) for c in cs]
    configs = []
    if algo is Algo.POLY_KELM:
        for c in cs:
            for d in sorted(grids["degree"]):
                configs.append(AlgoConfig(algo, C=c, spec=KernelSpec(KernelFamily.POLY, degree=d)))
        return configs
    family = KERNEL_FOR_ALGO[algo]
    for c in cs:
        for p in sorted(grids["param"]):
            spec = KernelSpec(family, a=p) if family is KernelFamily.MHW_TI else KernelSpec(family, sigma=p)
            configs.append(AlgoConfig(algo, C=c, spec=spec))
    return configs


def grid_search(
    ds: Dataset,
    plan: SplitPlan,
    algo: Algo,
    grids: dict | None = None,
    n_val_splits: int = 5,
) -> GridSearchResult:
    """Pick hyperparameters by mean validation accuracy.

    Uses only the training portion of ``plan``'s split: candidates are
    scored on ``n_val_splits`` seeded sub-splits and the best mean wins,
    with ties resolved toward more regularization (smallest C, then
    smallest kernel parameter).  Gram matrices are shared across the C
    grid, which only shifts the diagonal of the solve.
    """
    algo = Algo(algo)
    if grids is None:
        grids = default_grids(algo)
    if not grids.get("C"):
        raise ConfigError("grid must contain at least one C value")
    candidates = _candidate_configs(algo, grids)
    train, _ = random_split(ds, plan)
    splits = _validation_splits(train, plan, n_val_splits)

    scores = np.zeros(len(candidates))
    if algo is Algo.ORIGINAL_ELM:
        for sub_train, sub_val in splits:
            for j, config in enumerate(candidates):
                acc, _ = _train_and_score(config, sub_train, sub_val, seed=plan.seed)
                scores[j] += acc
    else:
        # group the C sweep under one Gram/cross matrix per kernel setting
        by_spec: dict[KernelSpec, list[int]] = {}
        for j, config in enumerate(candidates):
            by_spec.setdefault(config.spec, []).append(j)
        for sub_train, sub_val in splits:
            stats = fit_normalizer(sub_train.features)
            Xn = apply_normalizer(stats, sub_train.features)
            Vn = apply_normalizer(stats, sub_val.features)
            T = elm.one_hot_targets(sub_train.labels, len(ds.label_map))
            for spec, idxs in by_spec.items():
                omega = gram_matrix(spec, Xn).values
                crossk = cross_kernel_matrix(spec, Vn, Xn)
                for j in idxs:
                    A = kelm.solve_regularized(omega, T, candidates[j].C, spec.describe())
                    pred = np.argmax(crossk @ A, axis=1)
                    scores[j] += classification_accuracy(pred, sub_val.labels)

    scores /= len(splits)
    best = int(np.argmax(scores))  # first index wins ties: smallest C, then smallest parameter
    return GridSearchResult(config=candidates[best], score=float(scores[best]), n_candidates=len(candidates))


def summarize(
    results: dict[Algo, list[TrialResult]],
    dataset: str,
    plan: SplitPlan,
    n_classes: int,
    base_seed: int,
) -> BenchmarkReport:
    """Aggregate trials into report rows with p-values against the best mean.

    Failed trials are excluded from the statistics and surfaced as a
    failure count; the paired test drops trials that failed for either
    algorithm of the pair.
    """
    if not results:
        raise ConfigError("no trial results to summarize")
    order = list(results)
    accs = {}
    for algo in order:
        ok = [r.accuracy for r in results[algo] if not r.failed]
        if not ok:
            raise NumericError(f"all trials failed for {algo.value}")
        accs[algo] = np.array(ok)

    means = {algo: float(np.mean(a)) for algo, a in accs.items()}
    best = max(order, key=lambda algo: means[algo])

    rows = []
    n_trials = len(next(iter(results.values())))
    for algo in order:
        res = results[algo]
        a = accs[algo]
        if algo is best:
            p = 1.0
        else:
            paired = [
                (rb.accuracy, ra.accuracy)
                for rb, ra in zip(results[best], res)
                if not (rb.failed or ra.failed)
            ]
            pb = np.array([x for x, _ in paired])
            pa = np.array([y for _, y in paired])
            p = paired_t_test(pb, pa)
        rows.append(
            AlgoRow(
                algo=algo,
                mean_accuracy=100.0 * float(np.mean(a)),
                std=100.0 * float(np.std(a, ddof=1)) if a.size > 1 else 0.0,
                p_value=p,
                mean_time=float(np.mean([r.train_time for r in res if not r.failed])),
                n_failed=sum(r.failed for r in res),
            )
        )
    return BenchmarkReport(
        dataset=dataset,
        train_count=plan.train_count,
        test_count=plan.test_count,
        n_classes=n_classes,
        n_trials=n_trials,
        base_seed=base_seed,
        rows=rows,
        best_algo=best,
    )
