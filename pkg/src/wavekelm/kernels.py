"""Kernel specifications, scalar kernel evaluation, and Gram matrices.

Four kernel families are supported:

* ``gauss``    -- K(x, y) = exp(-||x - y||^2 / (2 sigma^2))
* ``poly``     -- K(x, y) = (1 + x . y)^degree
* ``mhw``      -- translation-invariant Mexican Hat wavelet kernel,
                  K(x, y) = prod_d psi((x_d - y_d) / a)
* ``mhw-dot``  -- dot-product wavelet kernel,
                  K(x, y) = prod_d psi((x_d - c) / a) psi((y_d - c) / a)

where psi(x) = (1 - x^2) exp(-x^2 / 2) is the Mexican Hat mother wavelet.

Every entry is computed independently (rows in parallel under numba), with
per-coordinate accumulation into exp(-s/2), so results are deterministic
regardless of thread count and K(x, y) follows the same floating-point
path as K(y, x).  Gram matrices additionally keep the computed upper
triangle and mirror it, so symmetry holds exactly by construction.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigError, ShapeError

try:
    from numba import njit, prange
    from numba.core.errors import NumbaWarning

    # the TBB probe on old TBB builds is noisy but harmless
    warnings.filterwarnings("ignore", message=".*TBB.*", category=NumbaWarning)
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False
    prange = range

__all__ = [
    "KernelFamily",
    "KernelSpec",
    "GramMatrix",
    "mexican_hat_mother",
    "eval_kernel",
    "gram_matrix",
    "cross_kernel_vector",
    "cross_kernel_matrix",
]


class KernelFamily(str, Enum):
    GAUSS = "gauss"
    POLY = "poly"
    MHW_TI = "mhw"
    MHW_DOT = "mhw-dot"

    # kernels depending only on x - y
    @property
    def translation_invariant(self) -> bool:
        return self in (KernelFamily.GAUSS, KernelFamily.MHW_TI)


@dataclass(frozen=True)
class KernelSpec:
    """A kernel family tag plus its hyperparameters.

    Only the fields relevant to ``family`` are read: ``a`` (wavelet
    dilation) for the wavelet kernels, ``sigma`` for the Gauss kernel,
    ``degree`` for the polynomial kernel, ``c_translate`` for the
    dot-product wavelet kernel.
    """

    family: KernelFamily
    a: float = 1.0
    sigma: float = 1.0
    degree: int = 2
    c_translate: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "family", KernelFamily(self.family))
        if self.family in (KernelFamily.MHW_TI, KernelFamily.MHW_DOT):
            if not (np.isfinite(self.a) and self.a > 0):
                raise ConfigError(f"wavelet dilation a must be positive, got {self.a}")
        if self.family is KernelFamily.MHW_DOT and not np.isfinite(self.c_translate):
            raise ConfigError(f"translation c must be finite, got {self.c_translate}")
        if self.family is KernelFamily.GAUSS:
            if not (np.isfinite(self.sigma) and self.sigma > 0):
                raise ConfigError(f"Gauss width sigma must be positive, got {self.sigma}")
        if self.family is KernelFamily.POLY:
            if int(self.degree) != self.degree or self.degree < 1:
                raise ConfigError(f"polynomial degree must be an integer >= 1, got {self.degree}")

    def describe(self) -> str:
        if self.family is KernelFamily.GAUSS:
            return f"gauss(sigma={self.sigma:g})"
        if self.family is KernelFamily.POLY:
            return f"poly(degree={self.degree})"
        if self.family is KernelFamily.MHW_TI:
            return f"mhw(a={self.a:g})"
        return f"mhw-dot(a={self.a:g}, c={self.c_translate:g})"


@dataclass(frozen=True)
class GramMatrix:
    """Pairwise kernel matrix over one sample set.

    ``values`` is symmetric by construction; for the translation-invariant
    families the diagonal is exactly one.
    """

    values: np.ndarray
    spec: KernelSpec


def mexican_hat_mother(x):
    """Mexican Hat mother wavelet psi(x) = (1 - x^2) exp(-x^2 / 2).

    Accepts a scalar or an ndarray; evaluates elementwise.
    """
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ConfigError("mexican_hat_mother requires finite input")
    out = (1.0 - x * x) * np.exp(-0.5 * x * x)
    return float(out) if out.ndim == 0 else out


def _pairwise_mhw_py(X, Y, a):
    n, m, ndim = X.shape[0], Y.shape[0], X.shape[1]
    K = np.empty((n, m))
    for i in prange(n):
        for j in range(m):
            s = 0.0
            p = 1.0
            for d in range(ndim):
                u = (X[i, d] - Y[j, d]) / a
                u2 = u * u
                s += u2
                p *= 1.0 - u2
            K[i, j] = p * math.exp(-0.5 * s)
    return K


def _pairwise_gauss_py(X, Y, sigma):
    n, m, ndim = X.shape[0], Y.shape[0], X.shape[1]
    K = np.empty((n, m))
    denom = 2.0 * sigma * sigma
    for i in prange(n):
        for j in range(m):
            s = 0.0
            for d in range(ndim):
                diff = X[i, d] - Y[j, d]
                s += diff * diff
            K[i, j] = math.exp(-s / denom)
    return K


def _pairwise_poly_py(X, Y, degree):
    n, m, ndim = X.shape[0], Y.shape[0], X.shape[1]
    K = np.empty((n, m))
    for i in prange(n):
        for j in range(m):
            s = 0.0
            for d in range(ndim):
                s += X[i, d] * Y[j, d]
            K[i, j] = (1.0 + s) ** degree
    return K


def _wavelet_features_py(X, a, c):
    n, ndim = X.shape
    g = np.empty(n)
    for i in range(n):
        p = 1.0
        for d in range(ndim):
            u = (X[i, d] - c) / a
            u2 = u * u
            p *= (1.0 - u2) * math.exp(-0.5 * u2)
        g[i] = p
    return g


if HAVE_NUMBA:
    # the row loop parallelizes; entries stay independent, so thread
    # scheduling cannot change any value
    _pairwise_mhw = njit(parallel=True, cache=True)(_pairwise_mhw_py)
    _pairwise_gauss = njit(parallel=True, cache=True)(_pairwise_gauss_py)
    _pairwise_poly = njit(parallel=True, cache=True)(_pairwise_poly_py)
    _wavelet_features = njit(cache=True)(_wavelet_features_py)
else:  # pragma: no cover - numba is a declared dependency
    _pairwise_mhw = _pairwise_mhw_py
    _pairwise_gauss = _pairwise_gauss_py
    _pairwise_poly = _pairwise_poly_py
    _wavelet_features = _wavelet_features_py


def _as_matrix(X, name: str) -> np.ndarray:
    X = np.ascontiguousarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise ShapeError(f"{name} must be a nonempty 2-D matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ShapeError(f"{name} contains non-finite entries")
    return X


def cross_kernel_matrix(spec: KernelSpec, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Dense kernel matrix with entry (i, j) = K(X[i], Y[j])."""
    X = _as_matrix(X, "X")
    Y = _as_matrix(Y, "Y")
    if X.shape[1] != Y.shape[1]:
        raise ShapeError(f"dimension mismatch: {X.shape[1]} vs {Y.shape[1]} columns")
    if spec.family is KernelFamily.MHW_TI:
        return _pairwise_mhw(X, Y, spec.a)
    if spec.family is KernelFamily.GAUSS:
        return _pairwise_gauss(X, Y, spec.sigma)
    if spec.family is KernelFamily.POLY:
        return _pairwise_poly(X, Y, int(spec.degree))
    gx = _wavelet_features(X, spec.a, spec.c_translate)
    gy = _wavelet_features(Y, spec.a, spec.c_translate)
    return np.outer(gx, gy)


def eval_kernel(spec: KernelSpec, x, y) -> float:
    """Scalar kernel value K(x, y) for two same-dimension vectors."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if x.ndim != 1 or y.ndim != 1 or x.shape != y.shape:
        raise ShapeError(f"x and y must be vectors of equal dimension, got {x.shape} and {y.shape}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ShapeError("kernel inputs must be finite")
    return float(cross_kernel_matrix(spec, x[None, :], y[None, :])[0, 0])


def gram_matrix(spec: KernelSpec, X) -> GramMatrix:
    """Kernel matrix of one sample set, entry (i, j) = K(X[i], X[j]).

    The upper triangle is kept and mirrored into the lower one, so the
    result is exactly symmetric.
    """
    X = _as_matrix(X, "X")
    K = cross_kernel_matrix(spec, X, X)
    K = np.triu(K) + np.triu(K, 1).T
    return GramMatrix(values=K, spec=spec)


def cross_kernel_vector(spec: KernelSpec, X, x) -> np.ndarray:
    """Vector with entry i = K(x, X[i])."""
    X = _as_matrix(X, "X")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.ndim != 1 or x.shape[0] != X.shape[1]:
        raise ShapeError(f"x must have dimension {X.shape[1]}, got shape {x.shape}")
    return cross_kernel_matrix(spec, x[None, :], X)[0]
