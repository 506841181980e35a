"""Diagnostics and structural accuracy metrics: varsortability, v-source,
noise ratios, SHD (DAG and CPDAG), and precision/recall/F1."""

from __future__ import annotations

import itertools
import warnings

import numpy as np

from .graphs import (DEFAULT_PATH_NODE_CAP, Digraph, Pdag, graph_of_weights,
                     path_counts, to_cpdag)
from .sem import Sem, standardize_population

VAR_TIE_RTOL = 1e-9


def varsortability(b, sigma, tie_half: bool = True, tol: float = VAR_TIE_RTOL,
                   max_nodes: int = DEFAULT_PATH_NODE_CAP) -> float:
    """Fraction of directed paths along which marginal variance increases.

    Paths are counted with multiplicity (one per distinct path).  A pair of
    endpoint variances within relative tolerance `tol` counts 1/2 when
    tie_half is set and 0 otherwise.  A graph with no paths returns 1 by
    convention, with a warning.
    """
    g = graph_of_weights(b)
    var = np.diag(np.asarray(sigma, dtype=float))
    if var.size != g.d:
        raise ValueError("covariance dimension does not match the weight matrix")
    counts = path_counts(g, max_nodes=max_nodes)
    total = 0
    increasing = 0.0
    for i in range(g.d):
        for j in range(g.d):
            c = int(counts[i, j])
            if c == 0:
                continue
            total += c
            ratio = var[j] / var[i]
            if ratio > 1.0 + tol:
                increasing += c
            elif tie_half and ratio > 1.0 - tol:
                increasing += 0.5 * c
    if total == 0:
        warnings.warn("graph has no directed paths; varsortability is 1 by convention")
        return 1.0
    return increasing / total


def v_source(g: Digraph, max_nodes: int = DEFAULT_PATH_NODE_CAP) -> float:
    """Fraction of distinct directed paths that start at an in-degree-0 node."""
    counts = path_counts(g, max_nodes=max_nodes)
    total = int(counts.sum())
    if total == 0:
        raise ValueError("graph has no directed paths")
    sources = [v for v in range(g.d) if not g.parents(v)]
    from_sources = int(counts[sources, :].sum()) if sources else 0
    return from_sources / total


def noise_ratio(variances) -> float:
    v = np.asarray(variances, dtype=float).ravel()
    if v.size == 0 or np.any(v <= 0):
        raise ValueError("need strictly positive variances")
    return float(v.max() / v.min())


def standardized_noise_ratio(sem: Sem) -> float:
    """Noise ratio after rescaling every variable to unit marginal variance."""
    _, rescaled = standardize_population(sem)
    return noise_ratio(rescaled)


def shd(est: Digraph, truth: Digraph) -> int:
    """Edge additions + deletions + flips between two DAGs; a flip counts 1."""
    if est.d != truth.d:
        raise ValueError("graphs must have the same node count")
    count = 0
    for i, j in itertools.combinations(range(est.d), 2):
        se = _pair_status(est, i, j)
        st = _pair_status(truth, i, j)
        if se != st:
            count += 1
    return count


def _pair_status(g: Digraph, i: int, j: int) -> str:
    fwd = (i, j) in g.edges
    bwd = (j, i) in g.edges
    if fwd and bwd:
        raise ValueError("graph has a 2-cycle; SHD is defined over DAGs")
    return "ij" if fwd else "ji" if bwd else "none"


def shd_cpdag(est: Pdag, truth: Pdag) -> int:
    """Per unordered pair, 1 if the status (absent / undirected / either
    direction) differs between the two partially directed graphs."""
    if est.d != truth.d:
        raise ValueError("graphs must have the same node count")
    count = 0
    for i, j in itertools.combinations(range(est.d), 2):
        if _pdag_status(est, i, j) != _pdag_status(truth, i, j):
            count += 1
    return count


def _pdag_status(p: Pdag, i: int, j: int) -> str:
    if frozenset((i, j)) in p.undirected:
        return "undirected"
    if (i, j) in p.directed:
        return "ij"
    if (j, i) in p.directed:
        return "ji"
    return "none"


def shd_cpdag_of_dags(est: Digraph, truth: Digraph) -> int:
    return shd_cpdag(to_cpdag(est), to_cpdag(truth))


def f1_recall(est, truth, mode: str = "dag-edges"):
    """(f1, recall, precision) over pairs or directed edges.

    mode 'skeleton': unordered adjacent pairs; 'arrows': directed edges of the
    CPDAGs (Digraph inputs are converted); 'dag-edges': directed edges of the
    DAGs.  Empty-vs-empty convention: all three metrics are 1.
    """
    if mode == "skeleton":
        est_set = _skeleton_set(est)
        truth_set = _skeleton_set(truth)
    elif mode == "arrows":
        est_set = set(_as_pdag(est).directed)
        truth_set = set(_as_pdag(truth).directed)
    elif mode == "dag-edges":
        if not isinstance(est, Digraph) or not isinstance(truth, Digraph):
            raise ValueError("dag-edges mode expects Digraph inputs")
        est_set = set(est.edges)
        truth_set = set(truth.edges)
    else:
        raise ValueError(f"unknown mode {mode!r}")

    tp = len(est_set & truth_set)
    fp = len(est_set - truth_set)
    fn = len(truth_set - est_set)
    if tp == fp == fn == 0:
        return 1.0, 1.0, 1.0
    precision = tp / (tp + fp) if (tp + fp) else 0.0
    recall = tp / (tp + fn) if (tp + fn) else 1.0
    f1 = (2 * precision * recall / (precision + recall)
          if (precision + recall) else 0.0)
    return f1, recall, precision


def _as_pdag(g) -> Pdag:
    return to_cpdag(g) if isinstance(g, Digraph) else g


def _skeleton_set(g) -> set:
    if isinstance(g, Digraph):
        return {frozenset(e) for e in g.edges}
    return set(g.skeleton())
