"""Score functions and sparsity penalties with analytic gradients.

Every data-dependent score is a function of the second-moment matrix
M = X^T X / n alone, so the solver precomputes M once and each evaluation is
O(d^3) regardless of n.  Public functions take the raw n x d data matrix; the
Gram-based kernels are exposed for the solvers.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

RESIDUAL_FLOOR = 1e-12  # guards log of an exactly-interpolated column

SCORE_KINDS = ("least-squares", "golem-ev", "golem-nv", "golem-nv-nonprofiled")
PENALTY_KINDS = ("none", "l1", "scad", "mcp", "l0")


@dataclass(frozen=True)
class PenaltySpec:
    kind: str = "none"
    lam: float = 0.0
    a: float = 3.7  # concavity knob for scad/mcp, 3.7 following common practice

    def __post_init__(self):
        if self.kind not in PENALTY_KINDS:
            raise ValueError(f"unknown penalty kind {self.kind!r}")
        if self.lam < 0:
            raise ValueError("lambda must be >= 0")
        if self.kind == "scad" and self.a <= 2:
            raise ValueError("scad needs a > 2")
        if self.kind == "mcp" and self.a <= 1:
            raise ValueError("mcp needs a > 1")


@dataclass(frozen=True)
class ScoreSpec:
    kind: str = "least-squares"
    penalty: PenaltySpec = field(default_factory=PenaltySpec)
    include_logdet_term: bool = False

    def __post_init__(self):
        if self.kind not in SCORE_KINDS:
            raise ValueError(f"unknown score kind {self.kind!r}")


def gram_matrix(data) -> tuple[np.ndarray, int]:
    x = np.asarray(data, dtype=float)
    if x.ndim != 2:
        raise ValueError("data must be an n x d matrix")
    if not np.all(np.isfinite(x)):
        raise ValueError("data contains non-finite entries")
    n = x.shape[0]
    return x.T @ x / n, n


def _residual_second_moments(b, gram) -> np.ndarray:
    """Diagonal of (I-B)^T M (I-B): per-column mean squared residuals."""
    m = np.eye(b.shape[0]) - b
    return np.einsum("ij,ik,kj->j", m, gram, m)


def least_squares(b, data) -> float:
    """(1/2n) ||X - XB||_F^2."""
    gram, _ = gram_matrix(data)
    return least_squares_gram(np.asarray(b, dtype=float), gram)


def least_squares_gram(b, gram) -> float:
    return 0.5 * float(_residual_second_moments(b, gram).sum())


def least_squares_population(b, sigma) -> float:
    """(1/2) tr((I-B)^T Sigma (I-B)): the large-sample least squares loss."""
    return least_squares_gram(np.asarray(b, dtype=float), np.asarray(sigma, dtype=float))


def golem_objective(b, data, spec: ScoreSpec) -> float:
    """Likelihood part of the unconstrained objective (plus the log-det term
    when requested); the sparsity and acyclicity terms are composed by the
    solver, not here."""
    b = np.asarray(b, dtype=float)
    gram, n = gram_matrix(data)
    return _likelihood_gram(b, gram, n, spec)[0]


def _likelihood_gram(b, gram, n, spec: ScoreSpec, want_grad: bool = False):
    d = b.shape[0]
    m = np.eye(d) - b
    value = 0.0
    grad = np.zeros_like(b) if want_grad else None

    if spec.kind == "least-squares":
        s = np.einsum("ij,ik,kj->j", m, gram, m)
        value = 0.5 * float(s.sum())
        if want_grad:
            grad = -gram @ m
    elif spec.kind == "golem-ev":
        s = np.einsum("ij,ik,kj->j", m, gram, m)
        total = float(s.sum()) * n  # ||X - XB||_F^2
        if total < RESIDUAL_FLOOR:
            warnings.warn("degenerate fit: residual norm underflows the log")
            total = RESIDUAL_FLOOR
        value = 0.5 * d * np.log(total)
        if want_grad:
            grad = -(d / (total / n)) * (gram @ m)
    elif spec.kind == "golem-nv":
        s = np.einsum("ij,ik,kj->j", m, gram, m) * n  # per-column ||.||^2
        if np.any(s < RESIDUAL_FLOOR):
            warnings.warn("degenerate fit: residual column underflows the log")
            s = np.maximum(s, RESIDUAL_FLOOR)
        value = 0.5 * float(np.log(s).sum())
        if want_grad:
            grad = -(gram @ m) / (s / n)
    else:
        raise ValueError(f"score kind {spec.kind!r} needs extra parameters; "
                         "use golem_nv_nonprofiled")

    if spec.include_logdet_term:
        sign, logabsdet = np.linalg.slogdet(m)
        if sign == 0:
            raise ValueError("det(I - B) = 0: log-det term undefined")
        value -= logabsdet
        if want_grad:
            grad += np.linalg.inv(m).T
    return value, grad


def golem_nv_nonprofiled(b, variances, data) -> float:
    """(1/2) sum_i [log sigma_i^2 + ||X_i - X B_i||^2 / (n sigma_i^2)].

    Minimizing over the variances at fixed B recovers the profiled golem-nv
    likelihood up to the additive constant (d/2)(1 - log n).
    """
    b = np.asarray(b, dtype=float)
    variances = np.asarray(variances, dtype=float).ravel()
    if np.any(variances <= 0):
        raise ValueError("variances must be strictly positive")
    gram, n = gram_matrix(data)
    s = _residual_second_moments(b, gram)  # ||.||^2 / n
    return 0.5 * float(np.sum(np.log(variances) + s / variances))


def golem_nv_nonprofiled_grads(b, variances, data):
    """Gradients of golem_nv_nonprofiled in B and in the variances."""
    b = np.asarray(b, dtype=float)
    variances = np.asarray(variances, dtype=float).ravel()
    gram, n = gram_matrix(data)
    m = np.eye(b.shape[0]) - b
    s = np.einsum("ij,ik,kj->j", m, gram, m)
    grad_b = -(gram @ m) / variances
    grad_var = 0.5 * (1.0 / variances - s / variances**2)
    return grad_b, grad_var


def penalty_value_and_grad(w, spec: PenaltySpec):
    """Elementwise penalty p(|w|) and derivative d p(|w|)/dw.

    Subgradient at 0 is taken as 0.  Works on scalars and arrays alike.
    l1:   lam |w|
    scad: lam |w| on |w| <= lam, quadratic blend to the plateau (a+1) lam^2 / 2
    mcp:  lam |w| - w^2 / (2a) up to |w| = a lam, then the plateau a lam^2 / 2
    l0:   lam 1[w != 0], derivative 0 (discrete search only)
    """
    w = np.asarray(w, dtype=float)
    aw = np.abs(w)
    sign = np.sign(w)
    lam, a = spec.lam, spec.a

    if spec.kind == "none" or lam == 0.0:
        value = np.zeros_like(w)
        grad = np.zeros_like(w)
    elif spec.kind == "l1":
        value = lam * aw
        grad = lam * sign
    elif spec.kind == "scad":
        inner = aw <= lam
        outer = aw > a * lam
        mid = ~inner & ~outer
        value = np.where(inner, lam * aw,
                         np.where(mid,
                                  -(aw**2 - 2 * a * lam * aw + lam**2) / (2 * (a - 1)),
                                  (a + 1) * lam**2 / 2))
        dval = np.where(inner, lam,
                        np.where(mid, (a * lam - aw) / (a - 1), 0.0))
        grad = dval * sign
    elif spec.kind == "mcp":
        inner = aw <= a * lam
        value = np.where(inner, lam * aw - w**2 / (2 * a), a * lam**2 / 2)
        grad = np.where(inner, lam - aw / a, 0.0) * sign
    elif spec.kind == "l0":
        value = lam * (w != 0).astype(float)
        grad = np.zeros_like(w)
    else:  # pragma: no cover - guarded by PenaltySpec
        raise ValueError(spec.kind)

    if value.ndim == 0:
        return float(value), float(grad)
    return value, grad


def penalty_total(b, spec: PenaltySpec):
    """Sum of the elementwise penalty over off-diagonal entries, with gradient."""
    b = np.asarray(b, dtype=float)
    value, grad = penalty_value_and_grad(b, spec)
    mask = ~np.eye(b.shape[0], dtype=bool)
    return float(value[mask].sum()), np.where(mask, grad, 0.0)


def score_value_and_grad(b, data, spec: ScoreSpec):
    """Value and analytic gradient of likelihood (+ log-det) + penalty."""
    b = np.asarray(b, dtype=float)
    gram, n = gram_matrix(data)
    value, grad = _likelihood_gram(b, gram, n, spec, want_grad=True)
    pval, pgrad = penalty_total(b, spec.penalty)
    return value + pval, grad + pgrad


def score_gradient(b, data, spec: ScoreSpec) -> np.ndarray:
    return score_value_and_grad(b, data, spec)[1]
