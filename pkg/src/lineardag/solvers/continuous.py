"""Continuous DAG search: quadratic-penalty, soft-penalty, and barrier-path
strategies over the smooth scores, plus thresholding and OLS refitting.

The inner minimizer is scipy's L-BFGS-B over the off-diagonal entries of B
(the diagonal is pinned to zero).  All scores are evaluated through the
second-moment matrix M = X^T X / n, so a solve costs O(d^3) per gradient
evaluation independent of the sample size.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize

from ..constraints import ConstraintSpec, LogdetDomainError, h_value_and_grad
from ..graphs import Digraph, graph_of_weights, is_acyclic
from ..scores import (PenaltySpec, ScoreSpec, _likelihood_gram, gram_matrix,
                      penalty_total)

logger = logging.getLogger("lineardag")

STRATEGIES = ("quadratic-penalty", "soft", "barrier-path")
INIT_KINDS = ("zero", "matrix", "uniform", "perturb-of")


@dataclass(frozen=True)
class InitSpec:
    kind: str = "zero"
    matrix: np.ndarray | None = None  # for matrix / perturb-of
    epsilon: float = 0.0              # for uniform / perturb-of
    restarts: int = 1                 # re-solves for the stochastic kinds, best score kept

    def __post_init__(self):
        if self.kind not in INIT_KINDS:
            raise ValueError(f"unknown init kind {self.kind!r}")
        if self.kind in ("matrix", "perturb-of") and self.matrix is None:
            raise ValueError(f"init kind {self.kind!r} needs a matrix")
        if self.kind in ("uniform", "perturb-of") and self.epsilon <= 0:
            raise ValueError(f"init kind {self.kind!r} needs epsilon > 0")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")


@dataclass(frozen=True)
class SolverSpec:
    strategy: str = "quadratic-penalty"
    score: ScoreSpec = field(default_factory=ScoreSpec)
    constraint: ConstraintSpec = field(default_factory=ConstraintSpec)
    init: InitSpec = field(default_factory=InitSpec)
    soft_lambda2: float = 5.0    # weight of h(B) in the soft strategy
    rho_init: float = 1.0        # quadratic-penalty schedule
    rho_growth: float = 10.0
    max_outer: int = 20          # h shrinks ~4x per rho step; 15 lands at ~2e-8
    tol: float = 1e-8            # h feasibility tolerance
    mu_init: float = 1.0         # barrier-path schedule
    mu_decay: float = 0.1
    barrier_stages: int = 4
    max_inner_iter: int = 500
    gtol: float = 1e-7
    threshold: float = 0.1

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.rho_growth <= 1:
            raise ValueError("rho growth factor must exceed 1")
        if self.tol <= 0:
            raise ValueError("feasibility tolerance must be positive")


@dataclass(frozen=True)
class SolveResult:
    b_raw: np.ndarray            # pre-threshold, may be cyclic within tol
    b_final: np.ndarray          # acyclic, post-threshold
    objective_trace: list        # (outer or inner index, score value, h value)
    score_final: float           # score composition at b_final
    score_raw: float             # same composition at b_raw (pre-threshold)
    h_raw: float
    converged: bool
    message: str = ""

    def graph(self) -> Digraph:
        return graph_of_weights(self.b_final)


class _Objective:
    """Score + penalty (+ constraint term) over the off-diagonal vector."""

    def __init__(self, gram, n, score: ScoreSpec, constraint: ConstraintSpec):
        self.gram = gram
        self.n = n
        self.score = score
        self.constraint = constraint
        d = gram.shape[0]
        self.d = d
        self.offdiag = ~np.eye(d, dtype=bool)

    def to_matrix(self, x):
        b = np.zeros((self.d, self.d))
        b[self.offdiag] = x
        return b

    def to_vector(self, b):
        return np.asarray(b, dtype=float)[self.offdiag]

    def score_parts(self, b):
        value, grad = _likelihood_gram(b, self.gram, self.n, self.score,
                                       want_grad=True)
        pval, pgrad = penalty_total(b, self.score.penalty)
        return value + pval, grad + pgrad

    def h_parts(self, b):
        """h and gradient; +inf outside the logdet domain (cheap guard)."""
        if self.constraint.kind != "logdet":
            return h_value_and_grad(b, self.constraint)
        a = b * b
        m = self.constraint.s * np.eye(self.d) - a
        sign, logabsdet = np.linalg.slogdet(m)
        if sign <= 0:
            return np.inf, None
        value = -float(logabsdet) + self.d * np.log(self.constraint.s)
        if value < -1e-9:  # h >= 0 on the domain; negative means we jumped out
            return np.inf, None
        grad = np.linalg.inv(m).T * (2.0 * b)
        return max(value, 0.0), grad


def _lbfgs(fun, x0, spec: SolverSpec, callback=None):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        res = minimize(
            fun, x0, jac=True, method="L-BFGS-B", callback=callback,
            options={"maxiter": spec.max_inner_iter, "gtol": spec.gtol,
                     "ftol": 1e-12, "maxls": 50, "maxcor": 20})
    return res.x


def _solve_quadratic_penalty(obj: _Objective, x0, spec: SolverSpec):
    trace = []
    rho = spec.rho_init
    x = x0
    h_val = np.inf
    for outer in range(spec.max_outer):
        def fun(xv, rho=rho):
            b = obj.to_matrix(xv)
            sval, sgrad = obj.score_parts(b)
            hval, hgrad = obj.h_parts(b)
            if not np.isfinite(hval):
                return np.inf, np.zeros_like(xv)
            f = sval + 0.5 * rho * hval**2
            g = sgrad + rho * hval * hgrad
            return f, g[obj.offdiag]

        x = _lbfgs(fun, x, spec)
        b = obj.to_matrix(x)
        sval, _ = obj.score_parts(b)
        h_val, _ = obj.h_parts(b)
        trace.append((outer, float(sval), float(h_val)))
        if h_val <= spec.tol:
            break
        rho *= spec.rho_growth
    converged = bool(h_val <= spec.tol)
    return x, trace, converged


def _solve_soft(obj: _Objective, x0, spec: SolverSpec):
    trace = []
    lam2 = spec.soft_lambda2

    def fun(xv):
        b = obj.to_matrix(xv)
        sval, sgrad = obj.score_parts(b)
        hval, hgrad = obj.h_parts(b)
        if not np.isfinite(hval):
            return np.inf, np.zeros_like(xv)
        return sval + lam2 * hval, (sgrad + lam2 * hgrad)[obj.offdiag]

    counter = [0]

    def callback(xk):
        b = obj.to_matrix(xk)
        sval, _ = obj.score_parts(b)
        hval, _ = obj.h_parts(b)
        trace.append((counter[0], float(sval + lam2 * hval), float(hval)))
        counter[0] += 1

    x = _lbfgs(fun, x0, spec, callback=callback)
    return x, trace, True


def _solve_barrier_path(obj: _Objective, x0, spec: SolverSpec):
    """mu * (score + penalty) + h_logdet with mu decreasing geometrically.

    Unlike the quadratic penalty, the barrier leaves a residual h of order
    mu_final at the path end; feasibility comes from the threshold projection,
    so convergence here means the path completed inside the log-det domain.
    """
    barrier = _Objective(obj.gram, obj.n, obj.score,
                         ConstraintSpec("logdet", s=spec.constraint.s
                                        if spec.constraint.kind == "logdet" else 1.0))
    trace = []
    mu = spec.mu_init
    x = x0
    for stage in range(spec.barrier_stages):
        def fun(xv, mu=mu):
            b = barrier.to_matrix(xv)
            hval, hgrad = barrier.h_parts(b)
            if not np.isfinite(hval):
                return np.inf, np.zeros_like(xv)
            sval, sgrad = barrier.score_parts(b)
            return mu * sval + hval, (mu * sgrad + hgrad)[obj.offdiag]

        x = _lbfgs(fun, x, spec)
        b = barrier.to_matrix(x)
        sval, _ = barrier.score_parts(b)
        hval, _ = barrier.h_parts(b)
        trace.append((stage, float(sval), float(hval)))
        mu *= spec.mu_decay
    converged = bool(np.isfinite(trace[-1][2]))
    return x, trace, converged


def _initial_matrices(spec: SolverSpec, d: int, rng):
    init = spec.init
    if init.kind == "zero":
        yield np.zeros((d, d))
    elif init.kind == "matrix":
        yield np.asarray(init.matrix, dtype=float).copy()
    elif init.kind == "uniform":
        for _ in range(init.restarts):
            b0 = rng.uniform(-init.epsilon, init.epsilon, size=(d, d))
            np.fill_diagonal(b0, 0.0)
            yield b0
    elif init.kind == "perturb-of":
        base = np.asarray(init.matrix, dtype=float)
        for _ in range(init.restarts):
            b0 = base + rng.uniform(-init.epsilon, init.epsilon, size=(d, d))
            np.fill_diagonal(b0, 0.0)
            yield b0


def solve(data, spec: SolverSpec, seed=0) -> SolveResult:
    """Run the configured strategy; deterministic given (data, spec, seed)."""
    gram, n = gram_matrix(data)
    d = gram.shape[0]
    obj = _Objective(gram, n, spec.score, spec.constraint)
    rng = np.random.default_rng(seed)

    dispatch = {"quadratic-penalty": _solve_quadratic_penalty,
                "soft": _solve_soft,
                "barrier-path": _solve_barrier_path}[spec.strategy]

    best = None
    for b0 in _initial_matrices(spec, d, rng):
        x, trace, converged = dispatch(obj, obj.to_vector(b0), spec)
        b_raw = obj.to_matrix(x)
        score_raw = _composed_score(obj, spec, b_raw)
        if best is None or score_raw < best[2]:
            best = (b_raw, trace, score_raw, converged)
    b_raw, trace, score_raw, converged = best

    h_raw, _ = obj.h_parts(b_raw)
    b_final = threshold(b_raw, spec.threshold)
    score_final = _composed_score(obj, spec, b_final)
    message = "" if converged else (
        f"h(B) = {h_raw:.3g} above tolerance {spec.tol:g} after "
        f"{spec.max_outer} outer iterations; thresholded projection returned")
    if not converged:
        logger.warning(message)
    return SolveResult(b_raw=b_raw, b_final=b_final, objective_trace=trace,
                       score_final=float(score_final), score_raw=float(score_raw),
                       h_raw=float(h_raw), converged=converged, message=message)


def _composed_score(obj: _Objective, spec: SolverSpec, b) -> float:
    sval, _ = obj.score_parts(b)
    if spec.strategy == "soft":
        hval, _ = obj.h_parts(b)
        sval = sval + spec.soft_lambda2 * (hval if np.isfinite(hval) else 0.0)
    return float(sval)


def threshold(b, tau: float) -> np.ndarray:
    """Zero entries below tau in magnitude, then, if a cycle survives, drop the
    smallest-magnitude remaining entries one at a time until acyclic."""
    if tau < 0:
        raise ValueError("threshold must be >= 0")
    b = np.asarray(b, dtype=float).copy()
    b[np.abs(b) < tau] = 0.0
    np.fill_diagonal(b, 0.0)
    removed = []
    while not is_acyclic(graph_of_weights(b)):
        nz = np.nonzero(b)
        k = np.argmin(np.abs(b[nz]))
        i, j = nz[0][k], nz[1][k]
        removed.append((int(i), int(j), float(b[i, j])))
        b[i, j] = 0.0
    if removed:
        logger.info("threshold repair removed %d edge(s) to restore acyclicity: %s",
                    len(removed), removed)
    return b


def refit_coefficients(g: Digraph, data) -> np.ndarray:
    """OLS coefficients of each variable on its parents in g; zero elsewhere."""
    if not is_acyclic(g):
        raise ValueError("graph must be acyclic")
    x = np.asarray(data, dtype=float)
    b = np.zeros((g.d, g.d))
    for j in range(g.d):
        pa = sorted(g.parents(j))
        if not pa:
            continue
        coef, _, rank, _ = np.linalg.lstsq(x[:, pa], x[:, j], rcond=None)
        if rank < len(pa):
            warnings.warn(f"rank-deficient parent set for node {j}; "
                          "minimum-norm OLS solution used")
        b[pa, j] = coef
    return b


def refit_coefficients_population(g: Digraph, sigma):
    """Population regression on parent sets: returns (B, residual variances),
    with residual variance = Schur complement Sigma_jj - Sigma_j,PA
    Sigma_PA,PA^{-1} Sigma_PA,j."""
    if not is_acyclic(g):
        raise ValueError("graph must be acyclic")
    s = np.asarray(sigma, dtype=float)
    d = g.d
    b = np.zeros((d, d))
    resvar = np.zeros(d)
    for j in range(d):
        pa = sorted(g.parents(j))
        if pa:
            coef = np.linalg.solve(s[np.ix_(pa, pa)], s[pa, j])
            b[pa, j] = coef
            resvar[j] = s[j, j] - s[pa, j] @ coef
        else:
            resvar[j] = s[j, j]
    return b, resvar
