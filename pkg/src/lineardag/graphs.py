"""Directed graphs, acyclicity, CPDAGs and path counting.

Nodes are integers ``0..d-1``.  A directed edge ``(i, j)`` means ``X_i -> X_j``,
matching the weight-matrix convention ``B[i, j] != 0  <=>  X_i -> X_j``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

# Path enumeration is exponential in the worst case; graphs above this size
# must opt in explicitly via the max_nodes argument of path_counts().
DEFAULT_PATH_NODE_CAP = 25


class CyclicGraphError(ValueError):
    """Raised when an operation requires a DAG but the input has a cycle."""


class NotExtendableError(ValueError):
    """Raised when a PDAG admits no consistent DAG extension."""


@dataclass(frozen=True)
class Digraph:
    """Directed graph on ``d`` nodes with edge set of ordered pairs."""

    d: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("node count must be >= 1")
        object.__setattr__(self, "edges", frozenset(map(tuple, self.edges)))
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"self-loop on node {i}")
            if not (0 <= i < self.d and 0 <= j < self.d):
                raise ValueError(f"edge ({i}, {j}) out of range for d={self.d}")

    @classmethod
    def from_adjacency(cls, adj) -> "Digraph":
        adj = np.asarray(adj)
        d = adj.shape[0]
        edges = frozenset((int(i), int(j)) for i, j in zip(*np.nonzero(adj)))
        return cls(d, edges)

    def to_adjacency(self) -> np.ndarray:
        adj = np.zeros((self.d, self.d), dtype=int)
        for i, j in self.edges:
            adj[i, j] = 1
        return adj

    def parents(self, j: int) -> set[int]:
        return {i for i, k in self.edges if k == j}

    def children(self, i: int) -> set[int]:
        return {k for h, k in self.edges if h == i}

    def n_edges(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class Pdag:
    """Partially directed graph: directed pairs plus unordered undirected pairs."""

    d: int
    directed: frozenset[tuple[int, int]] = field(default_factory=frozenset)
    undirected: frozenset[frozenset[int]] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "directed", frozenset(map(tuple, self.directed)))
        object.__setattr__(
            self, "undirected", frozenset(frozenset(e) for e in self.undirected)
        )
        for i, j in self.directed:
            if i == j:
                raise ValueError(f"self-loop on node {i}")
            if not (0 <= i < self.d and 0 <= j < self.d):
                raise ValueError(f"edge ({i}, {j}) out of range")
        for e in self.undirected:
            if len(e) != 2:
                raise ValueError(f"undirected edge {set(e)} is not a pair")
            if not all(0 <= v < self.d for v in e):
                raise ValueError(f"undirected edge {set(e)} out of range")
        overlap = {frozenset(e) for e in self.directed} & self.undirected
        if overlap:
            raise ValueError(f"pairs both directed and undirected: {overlap}")

    def skeleton(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(e) for e in self.directed) | self.undirected

    def n_edges(self) -> int:
        return len(self.directed) + len(self.undirected)


def topological_order(g: Digraph) -> list[int]:
    """Kahn's algorithm; raises CyclicGraphError if no order exists."""
    indeg = [0] * g.d
    children = [[] for _ in range(g.d)]
    for i, j in sorted(g.edges):
        indeg[j] += 1
        children[i].append(j)
    frontier = sorted(v for v in range(g.d) if indeg[v] == 0)
    order = []
    while frontier:
        v = frontier.pop(0)
        order.append(v)
        for c in children[v]:
            indeg[c] -= 1
            if indeg[c] == 0:
                frontier.append(c)
        frontier.sort()
    if len(order) != g.d:
        raise CyclicGraphError("graph contains a directed cycle")
    return order


def is_acyclic(g: Digraph) -> bool:
    try:
        topological_order(g)
        return True
    except CyclicGraphError:
        return False


def graph_of_weights(b, tol: float = 0.0) -> Digraph:
    """Digraph of the nonzero pattern of a weight matrix (|entry| > tol)."""
    b = np.asarray(b, dtype=float)
    adj = (np.abs(b) > tol).astype(int)
    np.fill_diagonal(adj, 0)
    return Digraph.from_adjacency(adj)


def _skeleton_and_vstructures(g: Digraph):
    skel = {frozenset(e) for e in g.edges}
    vstructs = set()
    for j in range(g.d):
        pa = sorted(g.parents(j))
        for a, b in itertools.combinations(pa, 2):
            if frozenset((a, b)) not in skel:
                vstructs.add((a, j, b))
    return skel, vstructs


def _meek_closure(d: int, directed: set, undirected: set):
    """Meek rules R1-R4 applied to a fixed point, in place."""

    def adjacent(a, b):
        return (a, b) in directed or (b, a) in directed or frozenset((a, b)) in undirected

    def orient(a, b):
        undirected.discard(frozenset((a, b)))
        directed.add((a, b))

    changed = True
    while changed:
        changed = False
        for e in list(undirected):
            a, b = sorted(e)
            for x, y in ((a, b), (b, a)):
                # R1: z -> x, z not adjacent to y  =>  x -> y
                if any((z, x) in directed and not adjacent(z, y)
                       for z in range(d) if z not in (x, y)):
                    orient(x, y)
                    changed = True
                    break
                # R2: x -> z -> y  =>  x -> y
                if any((x, z) in directed and (z, y) in directed
                       for z in range(d) if z not in (x, y)):
                    orient(x, y)
                    changed = True
                    break
                # R3: x - z1 -> y, x - z2 -> y, z1,z2 non-adjacent  =>  x -> y
                zs = [z for z in range(d) if z not in (x, y)
                      and frozenset((x, z)) in undirected and (z, y) in directed]
                if any(not adjacent(z1, z2) for z1, z2 in itertools.combinations(zs, 2)):
                    orient(x, y)
                    changed = True
                    break
                # R4: x - w, w -> z, z -> y, w,y non-adjacent, x adj z  =>  x -> y
                r4 = False
                for w in range(d):
                    if w in (x, y) or frozenset((x, w)) not in undirected:
                        continue
                    for z in range(d):
                        if z in (x, y, w):
                            continue
                        if ((w, z) in directed and (z, y) in directed
                                and not adjacent(w, y) and adjacent(x, z)):
                            r4 = True
                            break
                    if r4:
                        break
                if r4:
                    orient(x, y)
                    changed = True
                    break
            if changed:
                break


def to_cpdag(g: Digraph) -> Pdag:
    """CPDAG of g's Markov equivalence class.

    Keeps the skeleton, directs the v-structure edges, then closes under the
    Meek orientation rules; every remaining skeleton edge is reversible.
    """
    if not is_acyclic(g):
        raise CyclicGraphError("to_cpdag requires a DAG")
    skel, vstructs = _skeleton_and_vstructures(g)
    directed: set[tuple[int, int]] = set()
    for a, j, b in vstructs:
        directed.add((a, j))
        directed.add((b, j))
    undirected = {e for e in skel
                  if not any((x, y) in directed for x, y in itertools.permutations(e))}
    _meek_closure(g.d, directed, undirected)
    return Pdag(g.d, frozenset(directed), frozenset(undirected))


def pdag_to_dag(p: Pdag) -> Digraph:
    """Consistent DAG extension of a PDAG (Dor-Tarsi procedure).

    Repeatedly finds a node x with no outgoing directed edges whose undirected
    neighbours are adjacent to all of x's other neighbours, orients x's
    undirected edges into x, and removes x.  Lowest-index eligible node first.
    """
    directed = set(p.directed)
    undirected = set(p.undirected)
    result = set(p.directed)
    alive = set(range(p.d))

    def neighbors(x):
        out = set()
        for i, j in directed:
            if i == x:
                out.add(j)
            elif j == x:
                out.add(i)
        for e in undirected:
            if x in e:
                out |= e - {x}
        return out

    def adjacent(a, b):
        return ((a, b) in directed or (b, a) in directed
                or frozenset((a, b)) in undirected)

    while alive:
        found = None
        for x in sorted(alive):
            if any(i == x for i, _ in directed):
                continue  # x has an outgoing directed edge
            und_nb = {next(iter(e - {x})) for e in undirected if x in e}
            if all(adjacent(y, z) for y in und_nb for z in neighbors(x) - {y}):
                found = x
                break
        if found is None:
            raise NotExtendableError("PDAG admits no consistent DAG extension")
        x = found
        for e in [e for e in undirected if x in e]:
            y = next(iter(e - {x}))
            result.add((y, x))
            undirected.remove(e)
        directed = {(i, j) for i, j in directed if x not in (i, j)}
        alive.remove(x)
    out = Digraph(p.d, frozenset(result))
    if not is_acyclic(out):  # cannot happen for a valid extension
        raise NotExtendableError("extension produced a cyclic graph")
    return out


def path_counts(g: Digraph, max_nodes: int = DEFAULT_PATH_NODE_CAP) -> np.ndarray:
    """Matrix whose (i, j) entry counts distinct directed paths from i to j.

    Exact integer arithmetic via powers of the adjacency matrix; a DAG has no
    path longer than d-1 edges so the series is finite.
    """
    if g.d > max_nodes:
        raise ValueError(
            f"path enumeration capped at {max_nodes} nodes (got d={g.d}); "
            "raise max_nodes explicitly if this is intended")
    if not is_acyclic(g):
        raise CyclicGraphError("path counting requires a DAG")
    adj = g.to_adjacency().astype(object)  # python ints: counts can exceed 2**63
    counts = np.zeros((g.d, g.d), dtype=object)
    power = adj.copy()
    for _ in range(g.d - 1):
        counts += power
        power = power @ adj
    return counts


def directed_paths(g: Digraph, max_nodes: int = DEFAULT_PATH_NODE_CAP) -> dict:
    """All distinct directed paths of length >= 1, as {(source, target): count}."""
    counts = path_counts(g, max_nodes=max_nodes)
    return {(i, j): int(counts[i, j])
            for i in range(g.d) for j in range(g.d) if counts[i, j] > 0}


def dag_parent_assignments(d: int):
    """Yield per-node parent tuples of every labeled DAG on d nodes, once each.

    Assigns parent sets node by node, pruning assignments that already close a
    cycle.  Small-d tool (25 DAGs at d=3, 543 at d=4, 29281 at d=5).
    """
    if d > 6:
        raise ValueError("DAG enumeration is bounded at d <= 6")
    others = [[j for j in range(d) if j != v] for v in range(d)]
    choices = [
        [tuple(c) for size in range(d) for c in itertools.combinations(others[v], size)]
        for v in range(d)
    ]
    assignment: list[tuple[int, ...]] = [()] * d
    children: list[set[int]] = [set() for _ in range(d)]

    def closes_cycle(v: int) -> bool:
        # DFS from v along assigned edges; cyclic iff v reaches itself
        stack = list(children[v])
        seen = set()
        while stack:
            u = stack.pop()
            if u == v:
                return True
            if u not in seen:
                seen.add(u)
                stack.extend(children[u])
        return False

    def rec(v: int):
        if v == d:
            yield tuple(assignment)
            return
        for parents in choices[v]:
            assignment[v] = parents
            for p in parents:
                children[p].add(v)
            if not closes_cycle(v):
                yield from rec(v + 1)
            for p in parents:
                children[p].discard(v)
        assignment[v] = ()

    yield from rec(0)


def all_dags(d: int):
    """Every labeled DAG on d nodes as a Digraph, exactly once."""
    for parent_sets in dag_parent_assignments(d):
        yield Digraph(d, frozenset(
            (i, j) for j, pa in enumerate(parent_sets) for i in pa))


def mec_key(g: Digraph):
    """(skeleton, v-structures) pair: equal keys <=> Markov equivalent DAGs."""
    skel, vstructs = _skeleton_and_vstructures(g)
    canon_v = frozenset((min(a, b), j, max(a, b)) for a, j, b in vstructs)
    return frozenset(skel), canon_v
