"""Discrete DAG search over the least-squares score with an L0 penalty:
exhaustive enumeration (small d), greedy hill-climbing, and exact A* order
search.

All three share per-(node, parent-set) local scores computed from the
second-moment matrix by Schur complements and cached, so they accept either a
raw data matrix or a covariance matrix (population mode).
"""

from __future__ import annotations

import heapq
import itertools

import numpy as np

from ..graphs import Digraph, dag_parent_assignments, is_acyclic
from ..scores import gram_matrix

EXHAUSTIVE_MAX_NODES = 6
ASTAR_MAX_NODES = 16
SCORE_TIE_TOL = 1e-12


class LocalScoreCache:
    """local(j, P) = (1/2) * (residual second moment of X_j on X_P) + lam0 |P|."""

    def __init__(self, second_moment: np.ndarray, lambda0: float = 0.0):
        m = np.asarray(second_moment, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("second-moment matrix must be square")
        self.m = m
        self.d = m.shape[0]
        self.lambda0 = float(lambda0)
        self._cache: dict[tuple[int, tuple[int, ...]], float] = {}

    @classmethod
    def from_input(cls, data=None, covariance=None, lambda0: float = 0.0):
        if (data is None) == (covariance is None):
            raise ValueError("pass exactly one of data or covariance")
        if data is not None:
            gram, _ = gram_matrix(data)
        else:
            gram = np.asarray(covariance, dtype=float)
        return cls(gram, lambda0)

    def local(self, j: int, parents: tuple[int, ...]) -> float:
        key = (j, parents)
        val = self._cache.get(key)
        if val is None:
            if parents:
                pa = list(parents)
                sub = self.m[np.ix_(pa, pa)]
                rhs = self.m[pa, j]
                res = self.m[j, j] - rhs @ np.linalg.solve(sub, rhs)
            else:
                res = self.m[j, j]
            val = 0.5 * float(res) + self.lambda0 * len(parents)
            self._cache[key] = val
        return val

    def graph_score(self, g: Digraph) -> float:
        return sum(self.local(j, tuple(sorted(g.parents(j)))) for j in range(self.d))


def dag_score(g: Digraph, data=None, *, covariance=None, lambda0: float = 0.0) -> float:
    """Penalized least-squares score of a DAG with OLS-refit coefficients."""
    cache = LocalScoreCache.from_input(data, covariance, lambda0)
    return cache.graph_score(g)


def _edges_of(parent_sets) -> frozenset[tuple[int, int]]:
    return frozenset((i, j) for j, pa in enumerate(parent_sets) for i in pa)


def _better(cand_score, cand_edges, best_score, best_edges) -> bool:
    """Strictly lower score, else tie broken by fewest edges then lex edge set."""
    tol = SCORE_TIE_TOL * max(1.0, abs(best_score))
    if cand_score < best_score - tol:
        return True
    if cand_score > best_score + tol:
        return False
    ck = (len(cand_edges), sorted(cand_edges))
    bk = (len(best_edges), sorted(best_edges))
    return ck < bk


def exhaustive_search(data=None, *, covariance=None, lambda0: float = 0.0):
    """Score every labeled DAG; returns (best Digraph, best score)."""
    cache = LocalScoreCache.from_input(data, covariance, lambda0)
    d = cache.d
    if d > EXHAUSTIVE_MAX_NODES:
        raise ValueError(
            f"exhaustive search enumerates all DAGs and is bounded at "
            f"d <= {EXHAUSTIVE_MAX_NODES} (got d={d})")
    best_score = np.inf
    best_edges = None
    for parent_sets in dag_parent_assignments(d):
        score = sum(cache.local(j, pa) for j, pa in enumerate(parent_sets))
        edges = _edges_of(parent_sets)
        if best_edges is None or _better(score, edges, best_score, best_edges):
            best_score, best_edges = score, edges
    return Digraph(d, best_edges), float(best_score)


def gds(data=None, *, covariance=None, lambda0: float = 0.01, seed=0,
        restarts: int = 5, max_iter: int = 5000) -> Digraph:
    """Greedy hill-climbing over single-edge insert/delete/reverse moves.

    Starts from the empty graph; accepts the steepest strictly-improving move,
    with ties broken by a seeded random move order; keeps the best of
    `restarts` runs.
    """
    cache = LocalScoreCache.from_input(data, covariance, lambda0)
    d = cache.d
    master = np.random.default_rng(seed)
    best_edges, best_score = None, np.inf
    for _ in range(max(1, restarts)):
        rng = np.random.default_rng(master.integers(2**63))
        edges, score = _gds_single(cache, d, rng, max_iter)
        if best_edges is None or _better(score, edges, best_score, best_edges):
            best_edges, best_score = edges, score
    return Digraph(d, frozenset(best_edges))


def _gds_single(cache: LocalScoreCache, d: int, rng, max_iter: int):
    parents: list[set[int]] = [set() for _ in range(d)]
    col = [cache.local(j, ()) for j in range(d)]

    def creates_cycle(i, j) -> bool:
        # would i -> j close a cycle, i.e. is i reachable from j?
        stack = [j]
        seen = set()
        while stack:
            u = stack.pop()
            if u == i:
                return True
            if u in seen:
                continue
            seen.add(u)
            stack.extend(v for v in range(d) if u in parents[v])
        return False

    edges = set()
    for _ in range(max_iter):
        moves = []
        for i in range(d):
            for j in range(d):
                if i == j:
                    continue
                if (i, j) in edges:
                    moves.append(("del", i, j))
                    if (j, i) not in edges:
                        moves.append(("rev", i, j))
                elif (j, i) not in edges:
                    moves.append(("add", i, j))
        rng.shuffle(moves)

        best_move, best_delta, best_cols = None, -SCORE_TIE_TOL, None
        for move, i, j in moves:
            if move == "add":
                if creates_cycle(i, j):
                    continue
                new_j = cache.local(j, tuple(sorted(parents[j] | {i})))
                delta = new_j - col[j]
                cols = {j: new_j}
            elif move == "del":
                new_j = cache.local(j, tuple(sorted(parents[j] - {i})))
                delta = new_j - col[j]
                cols = {j: new_j}
            else:  # reverse i->j to j->i
                parents[j].discard(i)
                cyclic = creates_cycle(j, i)
                parents[j].add(i)
                if cyclic:
                    continue
                new_j = cache.local(j, tuple(sorted(parents[j] - {i})))
                new_i = cache.local(i, tuple(sorted(parents[i] | {j})))
                delta = (new_j - col[j]) + (new_i - col[i])
                cols = {j: new_j, i: new_i}
            if delta < best_delta:
                best_move, best_delta, best_cols = (move, i, j), delta, cols

        if best_move is None:
            break
        move, i, j = best_move
        if move == "add":
            parents[j].add(i)
            edges.add((i, j))
        elif move == "del":
            parents[j].discard(i)
            edges.discard((i, j))
        else:
            parents[j].discard(i)
            parents[i].add(j)
            edges.discard((i, j))
            edges.add((j, i))
        for k, v in best_cols.items():
            col[k] = v
    return frozenset(edges), float(sum(col))


def astar_search(data=None, *, covariance=None, lambda0: float = 0.01,
                 max_parents: int | None = None) -> Digraph:
    """Exact order search: A* over the lattice of already-placed variable sets.

    g-cost of a set S is the best total local score of ordering S first;
    the admissible (and consistent) heuristic sums each remaining variable's
    unconstrained best parent-set score.  Optimal for the penalized score when
    max_parents >= d - 1; the default cap of 4 bounds the per-node score table
    (and is exact for d <= 5).
    """
    cache = LocalScoreCache.from_input(data, covariance, lambda0)
    d = cache.d
    if d > ASTAR_MAX_NODES:
        raise ValueError(f"A* order search is bounded at d <= {ASTAR_MAX_NODES}")
    cap = min(4 if max_parents is None else max_parents, d - 1)

    full = (1 << d) - 1
    # best parent-set score DP: bps[v][S] over candidate-set bitmasks S
    bps = [np.full(1 << d, np.inf) for _ in range(d)]
    for v in range(d):
        table = bps[v]
        for s_mask in range(1 << d):
            if s_mask & (1 << v):
                continue
            bits = _bits(s_mask)
            best = cache.local(v, tuple(bits)) if len(bits) <= cap else np.inf
            for b in bits:
                prev = table[s_mask & ~(1 << b)]
                if prev < best:
                    best = prev
            table[s_mask] = best
    h_single = [bps[v][full & ~(1 << v)] for v in range(d)]

    g_cost = {0: 0.0}
    parent_state: dict[int, tuple[int, int]] = {}
    start_h = sum(h_single)
    frontier = [(start_h, 0, 0)]  # (f, tiebreak counter, state mask)
    counter = 0
    closed = set()
    while frontier:
        f, _, s_mask = heapq.heappop(frontier)
        if s_mask == full:
            break
        if s_mask in closed:
            continue
        closed.add(s_mask)
        base_g = g_cost[s_mask]
        for v in range(d):
            if s_mask & (1 << v):
                continue
            nxt = s_mask | (1 << v)
            cand = base_g + bps[v][s_mask]
            if cand < g_cost.get(nxt, np.inf):
                g_cost[nxt] = cand
                parent_state[nxt] = (s_mask, v)
                h = sum(h_single[u] for u in range(d) if not nxt & (1 << u))
                counter += 1
                heapq.heappush(frontier, (cand + h, counter, nxt))

    order = []
    s_mask = full
    while s_mask:
        s_mask, v = parent_state[s_mask]
        order.append(v)
    order.reverse()

    edges = set()
    placed = 0
    for v in order:
        pa = _best_parent_set(cache, v, _bits(placed), cap)
        edges.update((p, v) for p in pa)
        placed |= 1 << v
    g = Digraph(d, frozenset(edges))
    assert is_acyclic(g)
    return g


def _bits(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def _best_parent_set(cache: LocalScoreCache, v: int, candidates: list[int],
                     cap: int) -> tuple[int, ...]:
    """Argmin parent set; fewest-then-lexicographic under score ties."""
    best_pa, best = (), cache.local(v, ())
    for size in range(1, min(cap, len(candidates)) + 1):
        for pa in itertools.combinations(sorted(candidates), size):
            s = cache.local(v, pa)
            if s < best - SCORE_TIE_TOL * max(1.0, abs(best)):
                best_pa, best = pa, s
    return best_pa
