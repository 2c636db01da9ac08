"""Original single-hidden-layer ELM baseline.

Input weights and biases are drawn once from a seeded generator and stay
fixed; only the output weights are learned, through the regularized
least-squares solution

    beta = H^T (I/C + H H^T)^-1 T        (used when L >= N)
    beta = (I/C + H^T H)^-1 H^T T        (equivalent, used when L < N)

with H the hidden-layer output matrix and T the {+1, -1} one-hot target
matrix.  Both systems are symmetric positive definite for C > 0 and are
solved by Cholesky factorization.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.special import expit

from .data import NormStats, apply_normalizer, fit_normalizer
from .errors import ConfigError, NumericError, ShapeError

__all__ = [
    "Activation",
    "HiddenLayer",
    "ElmModel",
    "init_hidden_layer",
    "hidden_output_matrix",
    "solve_output_weights",
    "one_hot_targets",
    "train_elm",
    "decision_matrix",
    "predict_elm",
]

RESIDUAL_TOL = 1e-6


class Activation(str, Enum):
    SIGMOID = "sigmoid"


@dataclass(frozen=True)
class HiddenLayer:
    """Random input weights W (D x L), biases b (L), and activation tag."""

    W: np.ndarray
    b: np.ndarray
    activation: Activation = Activation.SIGMOID


@dataclass
class ElmModel:
    layer: HiddenLayer
    beta: np.ndarray
    C: float
    label_map: list[str]
    norm_stats: NormStats
    train_residual: float = 0.0


def init_hidden_layer(n_features: int, n_hidden: int, seed: int) -> HiddenLayer:
    """Seeded random layer: W uniform on [-1, 1], b uniform on [0, 1]."""
    if n_features < 1 or n_hidden < 1:
        raise ConfigError(f"need n_features >= 1 and n_hidden >= 1, got {n_features}, {n_hidden}")
    rng = np.random.default_rng(seed)
    W = rng.uniform(-1.0, 1.0, size=(n_features, n_hidden))
    b = rng.uniform(0.0, 1.0, size=n_hidden)
    return HiddenLayer(W=W, b=b)


def hidden_output_matrix(layer: HiddenLayer, X) -> np.ndarray:
    """Entry (i, j) = g(w_j . x_i + b_j) with g the logistic sigmoid."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != layer.W.shape[0]:
        raise ShapeError(f"X must be 2-D with {layer.W.shape[0]} columns, got shape {X.shape}")
    return expit(X @ layer.W + layer.b)


def one_hot_targets(labels, n_classes: int) -> np.ndarray:
    """{+1, -1}-coded target matrix, +1 at the true class column."""
    labels = np.asarray(labels, dtype=int)
    T = -np.ones((labels.shape[0], n_classes))
    T[np.arange(labels.shape[0]), labels] = 1.0
    return T


def solve_output_weights(H: np.ndarray, T: np.ndarray, C: float, form: str = "auto") -> np.ndarray:
    """Regularized least-squares output weights for hidden outputs H.

    ``form`` picks the system that is factorized: "n" for the N x N
    sample-side system, "l" for the L x L feature-side system, "auto" for
    whichever is smaller (sample side when L >= N).
    """
    if C <= 0 or not np.isfinite(C):
        raise ConfigError(f"penalty factor C must be positive and finite, got {C}")
    H = np.asarray(H, dtype=float)
    T = np.asarray(T, dtype=float)
    n, length = H.shape
    if form == "auto":
        form = "n" if length >= n else "l"
    if form == "n":
        M = H @ H.T
        M[np.diag_indices_from(M)] += 1.0 / C
        alpha = _spd_solve(M, T, what="I/C + H H^T")
        _check_residual(M, alpha, T)
        return H.T @ alpha
    if form == "l":
        M = H.T @ H
        M[np.diag_indices_from(M)] += 1.0 / C
        rhs = H.T @ T
        beta = _spd_solve(M, rhs, what="I/C + H^T H")
        _check_residual(M, beta, rhs)
        return beta
    raise ConfigError(f"unknown solve form {form!r}")


def _spd_solve(M: np.ndarray, rhs: np.ndarray, what: str) -> np.ndarray:
    try:
        return cho_solve(cho_factor(M, lower=True), rhs)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"Cholesky factorization of {what} failed: {exc}") from exc


def _check_residual(M, sol, rhs) -> float:
    res = np.linalg.norm(M @ sol - rhs) / max(np.linalg.norm(rhs), np.finfo(float).tiny)
    if res > RESIDUAL_TOL:
        raise NumericError(f"solve residual {res:.3e} exceeds {RESIDUAL_TOL:.0e}")
    return res


def train_elm(X, labels, n_hidden: int, C: float, seed: int, label_map=None) -> ElmModel:
    """Fit an ELM on raw features and integer class labels.

    Features are min-max normalized to [-1, 1] (stats stored on the
    model).  ``label_map`` fixes the class count when the training split
    may be missing classes; it defaults to one entry per observed index.
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

    stats = fit_normalizer(X)
    Xn = apply_normalizer(stats, X)
    layer = init_hidden_layer(X.shape[1], n_hidden, seed)
    H = hidden_output_matrix(layer, Xn)
    T = one_hot_targets(labels, len(label_map))

    beta = solve_output_weights(H, T, C)
    residual = float(np.linalg.norm(H @ beta - T))
    return ElmModel(
        layer=layer,
        beta=beta,
        C=float(C),
        label_map=list(label_map),
        norm_stats=stats,
        train_residual=residual,
    )


def decision_matrix(model: ElmModel, X) -> np.ndarray:
    """Network outputs h(x) beta, one row per sample (Q x M)."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != model.layer.W.shape[0]:
        raise ShapeError(f"X must be 2-D with {model.layer.W.shape[0]} columns, got shape {X.shape}")
    H = hidden_output_matrix(model.layer, apply_normalizer(model.norm_stats, X))
    return H @ model.beta


def predict_elm(model: ElmModel, X) -> list:
    """Predicted labels per row; argmax with ties going to the lowest index."""
    scores = decision_matrix(model, X)
    return [model.label_map[k] for k in np.argmax(scores, axis=1)]
