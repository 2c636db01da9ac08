"""Dataset ingestion, label encoding, normalization, and seeded splitting.

CSV files are comma-delimited with an optional header; one column carries
the class label and every other column must be numeric.  Train/test splits
follow a (train_count, test_count, seed) plan: a seeded permutation of the
row indices, first ``train_count`` rows for training, next ``test_count``
for testing.

A registry file maps benchmark dataset names to their CSV path, label
column, and default split plan.  The packaged registry can be overridden
with the ``WAVEKELM_REGISTRY`` environment variable; relative CSV paths
resolve against ``WAVEKELM_DATA_DIR`` (default: the working directory).
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ConfigError, ParseError, ShapeError

__all__ = [
    "Dataset",
    "SplitPlan",
    "NormStats",
    "load_csv",
    "save_csv",
    "random_split",
    "fit_normalizer",
    "apply_normalizer",
    "RegistryEntry",
    "load_registry",
    "resolve_dataset",
]

REGISTRY_ENV = "WAVEKELM_REGISTRY"
DATA_DIR_ENV = "WAVEKELM_DATA_DIR"


@dataclass
class Dataset:
    """Feature matrix with integer-encoded labels.

    ``labels`` holds indices into ``label_map``; ``label_map`` is the
    deduplicated label set in first-seen order, sorted lexicographically.
    """

    features: np.ndarray
    labels: np.ndarray
    label_map: list[str]
    name: str = ""

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=float)
        self.labels = np.asarray(self.labels, dtype=int)
        if self.features.ndim != 2:
            raise ShapeError(f"features must be 2-D, got shape {self.features.shape}")
        if self.labels.shape != (self.features.shape[0],):
            raise ShapeError("labels must be a vector matching the feature row count")
        if not np.all(np.isfinite(self.features)):
            raise ShapeError("features contain NaN/Inf")
        if len(self.label_map) < 2:
            raise ConfigError("a dataset needs at least two classes")
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= len(self.label_map)):
            raise ConfigError("label index outside [0, number of classes)")

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def attribute_count(self) -> int:
        return self.features.shape[1]

    @property
    def category_count(self) -> int:
        return len(self.label_map)


@dataclass(frozen=True)
class SplitPlan:
    train_count: int
    test_count: int
    seed: int = 0

    def __post_init__(self):
        if self.train_count < 1 or self.test_count < 1:
            raise ConfigError("train_count and test_count must both be >= 1")


@dataclass(frozen=True)
class NormStats:
    """Per-attribute training minima and maxima for min-max scaling."""

    minimum: np.ndarray
    maximum: np.ndarray


def load_csv(path, label_column, has_header: bool = False, name: str = "") -> Dataset:
    """Parse a delimited file into a Dataset.

    ``label_column`` is a zero-based column index, or a column name when
    ``has_header`` is set.  Errors report the offending row/column.
    """
    path = Path(path)
    if not path.exists():
        raise ParseError(f"no such file: {path}")
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row and any(cell.strip() for cell in row)]
    if has_header:
        if not rows:
            raise ParseError(f"{path}: empty file")
        header = [h.strip() for h in rows[0]]
        rows = rows[1:]
    else:
        header = None
    if len(rows) < 2:
        raise ParseError(f"{path}: expected at least 2 data rows, found {len(rows)}")

    n_cols = len(rows[0])
    if isinstance(label_column, str):
        if header is None:
            raise ConfigError("label column given by name requires a header row")
        try:
            label_idx = header.index(label_column)
        except ValueError:
            raise ParseError(f"{path}: unknown label column {label_column!r}") from None
    else:
        label_idx = int(label_column)
        if label_idx < 0:
            label_idx += n_cols
        if not 0 <= label_idx < n_cols:
            raise ParseError(f"{path}: label column {label_column} out of range for {n_cols} columns")

    features = np.empty((len(rows), n_cols - 1))
    raw_labels: list[str] = []
    for i, row in enumerate(rows):
        if len(row) != n_cols:
            raise ParseError(f"{path}: row {i + 1} has {len(row)} columns, expected {n_cols}")
        j_out = 0
        for j, cell in enumerate(row):
            if j == label_idx:
                raw_labels.append(cell.strip())
                continue
            try:
                features[i, j_out] = float(cell)
            except ValueError:
                raise ParseError(
                    f"{path}: non-numeric feature cell at row {i + 1}, column {j + 1}: {cell!r}"
                ) from None
            j_out += 1

    # dedupe in first-seen order, then sort lexicographically
    label_map = sorted(dict.fromkeys(raw_labels))
    index = {lab: k for k, lab in enumerate(label_map)}
    labels = np.array([index[lab] for lab in raw_labels], dtype=int)
    return Dataset(features=features, labels=labels, label_map=label_map, name=name or path.stem)


def save_csv(ds: Dataset, path) -> None:
    """Write a Dataset back to CSV (features then label; no header).

    Floats are written in shortest round-trip form, so load_csv recovers
    the feature matrix bit-exactly.
    """
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for x, lab in zip(ds.features, ds.labels):
            writer.writerow([repr(float(v)) for v in x] + [ds.label_map[lab]])


def random_split(ds: Dataset, plan: SplitPlan) -> tuple[Dataset, Dataset]:
    """Seeded random train/test split; both halves keep the full label_map."""
    if plan.train_count + plan.test_count > ds.n_samples:
        raise ConfigError(
            f"split plan needs {plan.train_count + plan.test_count} rows, dataset has {ds.n_samples}"
        )
    perm = np.random.default_rng(plan.seed).permutation(ds.n_samples)
    tr = perm[: plan.train_count]
    te = perm[plan.train_count : plan.train_count + plan.test_count]
    train = Dataset(ds.features[tr], ds.labels[tr], ds.label_map, name=ds.name)
    test = Dataset(ds.features[te], ds.labels[te], ds.label_map, name=ds.name)
    return train, test


def split_indices(ds: Dataset, plan: SplitPlan) -> tuple[np.ndarray, np.ndarray]:
    """The index sets random_split would use; handy for pairing audits."""
    perm = np.random.default_rng(plan.seed).permutation(ds.n_samples)
    return (
        perm[: plan.train_count].copy(),
        perm[plan.train_count : plan.train_count + plan.test_count].copy(),
    )


def fit_normalizer(train) -> NormStats:
    """Per-attribute min/max from training data (Dataset or 2-D array)."""
    X = train.features if isinstance(train, Dataset) else np.asarray(train, dtype=float)
    if X.ndim != 2 or X.shape[0] < 1:
        raise ShapeError("normalizer needs a nonempty 2-D training matrix")
    return NormStats(minimum=X.min(axis=0), maximum=X.max(axis=0))


def apply_normalizer(stats: NormStats, X) -> np.ndarray:
    """Affine map of each attribute onto [-1, 1] using training min/max.

    Zero-range attributes map to 0; values outside the training range are
    extrapolated, not clipped.
    """
    X = np.asarray(X, dtype=float)
    span = stats.maximum - stats.minimum
    safe = np.where(span > 0, span, 1.0)
    out = 2.0 * (X - stats.minimum) / safe - 1.0
    return np.where(span > 0, out, 0.0)


@dataclass(frozen=True)
class RegistryEntry:
    """One benchmark dataset: file location, label column, split plan."""

    name: str
    path: str
    label_column: object
    has_header: bool
    train_count: int
    test_count: int
    notes: str = ""

    def plan(self, seed: int = 0) -> SplitPlan:
        return SplitPlan(self.train_count, self.test_count, seed)


def _default_registry_path() -> Path:
    override = os.environ.get(REGISTRY_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("wavekelm").joinpath("registry.json")))


def load_registry(path=None) -> dict[str, RegistryEntry]:
    """Load the dataset registry (packaged file unless overridden)."""
    path = Path(path) if path is not None else _default_registry_path()
    if not path.exists():
        raise ConfigError(f"registry file not found: {path}")
    with open(path) as fh:
        raw = json.load(fh)
    registry = {}
    for name, entry in raw.items():
        registry[name] = RegistryEntry(
            name=name,
            path=entry["path"],
            label_column=entry["label_column"],
            has_header=bool(entry.get("has_header", False)),
            train_count=int(entry["train_count"]),
            test_count=int(entry["test_count"]),
            notes=entry.get("notes", ""),
        )
    return registry


def resolve_dataset(name: str, registry=None, data_dir=None) -> tuple[Dataset, RegistryEntry]:
    """Look a dataset up in the registry and load its CSV."""
    registry = registry if registry is not None else load_registry()
    if name not in registry:
        known = ", ".join(sorted(registry))
        raise ConfigError(f"unknown dataset {name!r}; registry has: {known}")
    entry = registry[name]
    base = Path(data_dir) if data_dir is not None else Path(os.environ.get(DATA_DIR_ENV, "."))
    path = Path(entry.path)
    if not path.is_absolute():
        path = base / path
    if not path.exists():
        raise ConfigError(
            f"dataset file for {name!r} not found at {path}; "
            f"place the CSV there or point {DATA_DIR_ENV}/{REGISTRY_ENV} elsewhere"
        )
    ds = load_csv(path, entry.label_column, has_header=entry.has_header, name=name)
    return ds, entry
