"""Benchmark generators: random graphs, weights, noises, and the two
closed-form constructions used to probe varsortability claims."""

from __future__ import annotations

import itertools

import numpy as np

from .graphs import Digraph, is_acyclic, topological_order
from .sem import Sem, population_covariance


def erdos_renyi_dag(d: int, k: float, seed, exact_count: bool = False) -> Digraph:
    """ER graph with kd expected edges, oriented by a random permutation.

    Expectation mode samples each of the d(d-1)/2 pairs with probability
    p = 2k/(d-1), capped at 1.  Exact mode places round(kd) edges uniformly
    without replacement and errors when that exceeds the number of pairs.
    """
    if d < 2:
        raise ValueError("need d >= 2")
    if k < 0:
        raise ValueError("need k >= 0")
    rng = np.random.default_rng(seed)
    pairs = list(itertools.combinations(range(d), 2))
    if exact_count:
        m = int(round(k * d))
        if m > len(pairs):
            raise ValueError(
                f"cannot place {m} edges among {len(pairs)} node pairs (kd too large)")
        chosen_idx = rng.choice(len(pairs), size=m, replace=False)
        chosen = [pairs[i] for i in chosen_idx]
    else:
        p = min(1.0, 2.0 * k / (d - 1))
        mask = rng.random(len(pairs)) < p
        chosen = [pr for pr, keep in zip(pairs, mask) if keep]
    perm = rng.permutation(d)
    rank = np.empty(d, dtype=int)
    rank[perm] = np.arange(d)
    edges = frozenset(
        (a, b) if rank[a] < rank[b] else (b, a) for a, b in chosen)
    return Digraph(d, edges)


def sample_weights(g: Digraph, alpha: float, seed) -> np.ndarray:
    """Edge weights uniform on [-2a, -0.5a] u [0.5a, 2a]; non-edges zero."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if not is_acyclic(g):
        raise ValueError("graph must be acyclic")
    rng = np.random.default_rng(seed)
    b = np.zeros((g.d, g.d))
    for i, j in sorted(g.edges):
        mag = rng.uniform(0.5 * alpha, 2.0 * alpha)
        b[i, j] = mag if rng.random() < 0.5 else -mag
    return b


def sample_noise_nv(d: int, r: float, seed) -> np.ndarray:
    """Noise variances with ratio exactly r: two random slots get 1 and r,
    the rest are uniform on [1, r]."""
    if d < 2:
        raise ValueError("need d >= 2")
    if r < 1:
        raise ValueError("need r >= 1")
    rng = np.random.default_rng(seed)
    v = rng.uniform(1.0, r, size=d)
    lo, hi = rng.choice(d, size=2, replace=False)
    v[lo] = 1.0
    v[hi] = r
    return v


def varsortable_counterexample(d: int) -> Sem:
    """Fully varsortable SEM whose true DAG loses the least-squares contest.

    Weights (1-indexed): B[d-1, d-2] = 1/2, B[d, d-2] = 3/4, B[d, d-1] = 1/4;
    noise variances (d-2, d-3, ..., 2, 1/10, 1, 1).  The d=3 variant drops the
    leading diagonal block and keeps (1/10, 1, 1).
    """
    if d < 3:
        raise ValueError("construction needs d >= 3")
    b = np.zeros((d, d))
    b[d - 2, d - 3] = 0.5
    b[d - 1, d - 3] = 0.75
    b[d - 1, d - 2] = 0.25
    omega = np.array([float(v) for v in range(d - 2, 1, -1)] + [0.1, 1.0, 1.0])
    return Sem(b, omega)


def cholesky_alternative(sem: Sem) -> tuple[np.ndarray, np.ndarray]:
    """Reversed-order alternative from the Cholesky factor of the covariance.

    With L the lower Cholesky factor of Sigma, returns the strictly upper
    triangular B_hat = I - L^{-T} diag(L_ii) and Omega_hat = diag(L_ii^2),
    which satisfy (I - B_hat)^T Sigma (I - B_hat) = Omega_hat; the population
    least-squares loss of B_hat is tr(Omega_hat) / 2.
    """
    sigma = population_covariance(sem)
    chol = np.linalg.cholesky(sigma)
    omega_hat = np.diag(chol) ** 2
    b_hat = np.eye(sem.d) - np.linalg.solve(chol.T, np.diag(np.sqrt(omega_hat)))
    b_hat[np.tril_indices(sem.d)] = 0.0  # exact zeros below the diagonal
    return b_hat, omega_hat


def low_varsortability_sem(g: Digraph, sigma2: float, seed) -> Sem:
    """Equal-variance SEM on g whose varsortability equals g's v-source.

    Built in topological order.  Edges into a node whose parents are all
    source nodes get weights uniform on [0.5, 2].  Otherwise every edge
    X_i -> X_j gets weight (1/|PA_j|) * sqrt(c_j / Var(X_i)) with
    c_j = u * (min variance among non-source parents - sigma2), u ~ U[0.25, 0.75],
    which keeps each child's variance strictly below its non-source parents'.
    """
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    order = topological_order(g)
    rng = np.random.default_rng(seed)
    d = g.d
    b = np.zeros((d, d))
    cov = np.zeros((d, d))  # running covariance of the variables built so far
    sources = {v for v in range(d) if not g.parents(v)}

    for j in order:
        pa = sorted(g.parents(j))
        if pa:
            non_source_pa = [i for i in pa if i not in sources]
            if not non_source_pa:
                for i in pa:
                    b[i, j] = rng.uniform(0.5, 2.0)
            else:
                gap = min(cov[i, i] for i in non_source_pa) - sigma2
                if gap <= 0:  # excluded by construction; fail loudly if not
                    raise RuntimeError(
                        f"empty weight interval at node {j}: parent variance "
                        f"gap {gap:.3g} <= 0")
                c_j = gap * rng.uniform(0.25, 0.75)
                for i in pa:
                    b[i, j] = np.sqrt(c_j / cov[i, i]) / len(pa)
        w = b[:, j]
        cross = cov @ w  # Cov(X_k, sum_i w_i X_i) over already-built k
        cov[:, j] = cross
        cov[j, :] = cross
        cov[j, j] = w @ cross + sigma2

    sem = Sem(b, np.full(d, float(sigma2)))
    _assert_construction_inequalities(sem, g, sources, sigma2)
    return sem


def _assert_construction_inequalities(sem: Sem, g: Digraph, sources, sigma2):
    """Strict variance orderings the construction guarantees."""
    var = np.diag(population_covariance(sem))
    for i, j in g.edges:
        if i not in sources and not var[j] < var[i]:
            raise RuntimeError(
                f"construction violated Var(child) < Var(non-source parent) "
                f"on edge {i}->{j}")
    descendants = _descendant_sets(g)
    for s in sources:
        for t in descendants[s]:
            if not var[t] > sigma2:
                raise RuntimeError(
                    f"construction violated Var(descendant) > sigma2 for {s}->{t}")


def _descendant_sets(g: Digraph) -> list[set[int]]:
    desc = [set() for _ in range(g.d)]
    for v in reversed(topological_order(g)):
        for c in g.children(v):
            desc[v] |= {c} | desc[c]
    return desc
