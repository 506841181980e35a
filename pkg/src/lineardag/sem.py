"""Linear Gaussian SEMs: population covariance, sampling, standardization.

Model: X = B^T X + N with B[i, j] the weight of edge X_i -> X_j and
N ~ N(0, diag(noise_variances)).  All randomness flows through explicit seeds
(numpy's default PCG64 generator); nothing touches global RNG state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Digraph, graph_of_weights, is_acyclic, topological_order

SYMMETRY_RTOL = 1e-12


def check_weight_matrix(b, require_acyclic: bool = False) -> np.ndarray:
    b = np.asarray(b, dtype=float)
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError(f"weight matrix must be square, got shape {b.shape}")
    if b.shape[0] < 1:
        raise ValueError("dimension must be >= 1")
    if not np.all(np.isfinite(b)):
        raise ValueError("weight matrix has non-finite entries")
    if require_acyclic and not is_acyclic(graph_of_weights(b)):
        raise ValueError("weight matrix nonzero pattern is cyclic")
    return b


def check_noise_variances(variances) -> np.ndarray:
    v = np.asarray(variances, dtype=float).ravel()
    if v.size < 1 or not np.all(np.isfinite(v)) or np.any(v <= 0):
        raise ValueError("noise variances must be finite and strictly positive")
    return v


@dataclass(frozen=True)
class Sem:
    """Acyclic weight matrix plus independent Gaussian noise variances."""

    weights: np.ndarray
    noise_variances: np.ndarray

    def __post_init__(self):
        b = check_weight_matrix(self.weights, require_acyclic=True)
        v = check_noise_variances(self.noise_variances)
        if v.size != b.shape[0]:
            raise ValueError(
                f"dimension mismatch: weights are {b.shape[0]}x{b.shape[0]}, "
                f"{v.size} noise variances")
        b = b.copy()
        v = v.copy()
        b.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "weights", b)
        object.__setattr__(self, "noise_variances", v)

    @property
    def d(self) -> int:
        return self.weights.shape[0]

    def graph(self) -> Digraph:
        return graph_of_weights(self.weights)


def check_covariance(sigma) -> np.ndarray:
    s = np.asarray(sigma, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError("covariance must be a square matrix")
    scale = max(1.0, float(np.abs(s).max()))
    if np.abs(s - s.T).max() > SYMMETRY_RTOL * scale:
        raise ValueError("covariance is not symmetric to within 1e-12 relative")
    return s


def population_covariance(sem: Sem) -> np.ndarray:
    """Sigma = (I - B)^{-T} Omega (I - B)^{-1}, symmetric positive definite."""
    m = np.eye(sem.d) - sem.weights
    inv = np.linalg.inv(m)  # dense LU; (I - B) is unimodular for acyclic B
    sigma = inv.T @ (sem.noise_variances[:, None] * inv)
    return 0.5 * (sigma + sigma.T)  # kill roundoff asymmetry


def sample(sem: Sem, n: int, seed) -> np.ndarray:
    """n i.i.d. rows from the SEM by ancestral propagation in topological order."""
    if n < 1:
        raise ValueError("need n >= 1 samples")
    rng = np.random.default_rng(seed)
    noise = rng.normal(size=(n, sem.d)) * np.sqrt(sem.noise_variances)
    order = topological_order(sem.graph())
    x = np.zeros((n, sem.d))
    b = sem.weights
    for j in order:
        pa = np.nonzero(b[:, j])[0]
        x[:, j] = noise[:, j]
        if pa.size:
            x[:, j] += x[:, pa] @ b[pa, j]
    return x


def standardize(data) -> np.ndarray:
    """Rescale each column to sample mean 0, sample variance 1 (1/n convention)."""
    x = np.asarray(data, dtype=float)
    mean = x.mean(axis=0)
    var = x.var(axis=0)  # 1/n normalization, matching the (1/2n) score scaling
    if np.any(var <= 0):
        bad = np.nonzero(var <= 0)[0]
        raise ValueError(f"constant column(s) {bad.tolist()} cannot be standardized")
    return (x - mean) / np.sqrt(var)


def design_from_covariance(sigma) -> np.ndarray:
    """d x d design matrix X with X^T X / n = Sigma exactly (n = d rows).

    Every score in this package depends on the data only through X^T X / n,
    so running a solver on this design reproduces the large-sample limit
    without materializing n = 10^6 rows.
    """
    s = check_covariance(sigma)
    chol = np.linalg.cholesky(s)
    return np.sqrt(s.shape[0]) * chol.T


def standardize_population(sem: Sem) -> tuple[np.ndarray, np.ndarray]:
    """Correlation matrix D Sigma D and rescaled noise variances sigma_i^2 / Var(X_i)."""
    sigma = population_covariance(sem)
    dinv = 1.0 / np.sqrt(np.diag(sigma))
    corr = sigma * np.outer(dinv, dinv)
    rescaled = sem.noise_variances / np.diag(sigma)
    return corr, rescaled
