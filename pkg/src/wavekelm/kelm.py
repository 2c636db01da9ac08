"""Kernel ELM: training, raw outputs, sign and argmax classification.

Training normalizes the features, builds the Gram matrix of the training
set, and solves the symmetric positive-definite system

    (I/C + Omega) A = T

for the coefficient matrix A by Cholesky factorization, with T the
{+1, -1} one-hot target matrix.  Prediction evaluates the kernel between
a new point and every stored training point:

    f(x) = [K(x, x_1) ... K(x, x_N)] A

Training is fully deterministic: there is no random hidden layer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .data import NormStats, apply_normalizer, fit_normalizer
from .errors import ConfigError, NumericError, ShapeError
from .kernels import KernelSpec, cross_kernel_matrix, cross_kernel_vector, gram_matrix

__all__ = [
    "KelmModel",
    "solve_regularized",
    "train_kelm",
    "decision_matrix",
    "predict_raw",
    "classify_binary",
    "classify_multiclass",
]

RESIDUAL_TOL = 1e-6


@dataclass
class KelmModel:
    """Stored training set (normalized), coefficients, and kernel config."""

    x_train: np.ndarray
    coef: np.ndarray
    spec: KernelSpec
    C: float
    label_map: list[str]
    norm_stats: NormStats
    solve_residual: float = 0.0


def _solve_with_residual(omega, T, C, kernel_name):
    if C <= 0 or not np.isfinite(C):
        raise ConfigError(f"penalty factor C must be positive and finite, got {C}")
    omega = np.asarray(omega, dtype=float)
    T = np.asarray(T, dtype=float)
    if omega.ndim != 2 or omega.shape[0] != omega.shape[1]:
        raise ShapeError(f"omega must be square, got shape {omega.shape}")
    if T.ndim != 2 or T.shape[0] != omega.shape[0]:
        raise ShapeError("targets must have one row per training sample")

    M = omega.copy()
    M[np.diag_indices_from(M)] += 1.0 / C
    try:
        A = cho_solve(cho_factor(M, lower=True), T)
    except np.linalg.LinAlgError as exc:
        raise NumericError(
            f"Cholesky factorization of I/C + Gram failed for {kernel_name}: "
            f"matrix indefinite beyond the I/C shift ({exc})"
        ) from exc
    residual = float(np.linalg.norm(M @ A - T) / max(np.linalg.norm(T), np.finfo(float).tiny))
    if residual > RESIDUAL_TOL:
        raise NumericError(f"solve residual {residual:.3e} exceeds {RESIDUAL_TOL:.0e} for {kernel_name}")
    return A, residual


def solve_regularized(omega: np.ndarray, T: np.ndarray, C: float, kernel_name: str = "kernel") -> np.ndarray:
    """Solve (I/C + omega) A = T by Cholesky; fails loudly if indefinite.

    An indefinite system beyond the I/C shift means the kernel was not
    admissible; no fallback is attempted.
    """
    return _solve_with_residual(omega, T, C, kernel_name)[0]


def train_kelm(X, labels, spec: KernelSpec, C: float, label_map=None, binary_coding: bool = False) -> KelmModel:
    """Fit a kernel ELM on raw features and integer class labels.

    Features are min-max normalized to [-1, 1] (stats fitted here and
    stored).  ``label_map`` fixes the class count when the training split
    may be missing classes.  With ``binary_coding`` (exactly two classes),
    targets are a single signed column: +1 for label_map[0], -1 for
    label_map[1], matching the sign decision rule.
    """
    X = np.asarray(X, dtype=float)
    labels = np.asarray(labels, dtype=int)
    if X.ndim != 2 or X.shape[0] < 1:
        raise ShapeError("X must be a nonempty 2-D matrix")
    if labels.shape != (X.shape[0],):
        raise ShapeError("labels must match the number of rows of X")
    if label_map is None:
        label_map = [str(k) for k in range(int(labels.max()) + 1)]
    if labels.size and labels.max() >= len(label_map):
        raise ConfigError("label index outside label_map")

    if binary_coding:
        if len(label_map) != 2:
            raise ConfigError("binary_coding requires exactly two classes")
        T = np.where(labels == 0, 1.0, -1.0)[:, None]
    else:
        T = -np.ones((labels.shape[0], len(label_map)))
        T[np.arange(labels.shape[0]), labels] = 1.0

    stats = fit_normalizer(X)
    Xn = apply_normalizer(stats, X)
    omega = gram_matrix(spec, Xn).values
    A, residual = _solve_with_residual(omega, T, C, kernel_name=spec.describe())
    return KelmModel(
        x_train=Xn,
        coef=A,
        spec=spec,
        C=float(C),
        label_map=list(label_map),
        norm_stats=stats,
        solve_residual=residual,
    )


def decision_matrix(model: KelmModel, X) -> np.ndarray:
    """Raw outputs k(x)^T A for each row of X (Q x M)."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != model.x_train.shape[1]:
        raise ShapeError(f"X must be 2-D with {model.x_train.shape[1]} columns, got shape {X.shape}")
    Xn = apply_normalizer(model.norm_stats, X)
    return cross_kernel_matrix(model.spec, Xn, model.x_train) @ model.coef


def predict_raw(model: KelmModel, x) -> np.ndarray:
    """Raw output vector for a single sample."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.ndim != 1 or x.shape[0] != model.x_train.shape[1]:
        raise ShapeError(f"x must have dimension {model.x_train.shape[1]}, got shape {x.shape}")
    xn = apply_normalizer(model.norm_stats, x[None, :])[0]
    return cross_kernel_vector(model.spec, model.x_train, xn) @ model.coef


def classify_binary(model: KelmModel, x) -> int:
    """Sign decision for a binary model; a zero decision value maps to +1.

    Works on single-column signed-target models and on two-column one-hot
    models (reduced to the column difference).
    """
    raw = predict_raw(model, x)
    if raw.shape[0] == 1:
        value = raw[0]
    elif raw.shape[0] == 2:
        value = raw[0] - raw[1]
    else:
        raise ConfigError(f"classify_binary needs 1 or 2 output columns, model has {raw.shape[0]}")
    return 1 if value >= 0 else -1


def classify_multiclass(model: KelmModel, X) -> list:
    """Predicted labels per row; argmax with ties going to the lowest index."""
    scores = decision_matrix(model, X)
    return [model.label_map[k] for k in np.argmax(scores, axis=1)]
