"""Directed communication graphs, reduced graphs, and solvability conditions.

Agents are numbered 1..n.  All checks in this module are exhaustive over
faulty sets of size <= f, so graph sizes are capped at MAX_CONDITION_N
(the enumeration is exponential in n).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

__all__ = [
    "DiGraph",
    "FaultySet",
    "ReducedGraph",
    "Condition1Result",
    "Condition2Result",
    "Condition2Witness",
    "GraphSizeError",
    "complete",
    "cycle",
    "star_out",
    "from_edges",
    "in_neighbors",
    "enumerate_reduced_graphs",
    "reduced_graph_count",
    "source_component",
    "strongly_connected_components",
    "check_condition1",
    "check_condition2",
]

# Hard cap for the exhaustive condition checks (4^n partitions / 2^n subsets
# per faulty set).  Raised deliberately nowhere: beyond this the checks are
# not desk-scale.
MAX_CONDITION_N = 8


class GraphSizeError(ValueError):
    """An exhaustive condition check was requested on too large a graph."""


@dataclass(frozen=True)
class DiGraph:
    """Directed graph over agents 1..n without self-loops.

    An edge (i, j) means agent i can send to agent j.
    """

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("agent count must be positive")
        if not isinstance(self.edges, frozenset):
            object.__setattr__(self, "edges", frozenset(self.edges))
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"self-loop ({i},{i}) not allowed")
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"edge ({i},{j}) out of range 1..{self.n}")

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(range(1, self.n + 1))

    def in_neighbors(self, i: int) -> frozenset[int]:
        if not 1 <= i <= self.n:
            raise ValueError(f"agent id {i} out of range 1..{self.n}")
        return frozenset(j for (j, k) in self.edges if k == i)

    def out_neighbors(self, i: int) -> frozenset[int]:
        if not 1 <= i <= self.n:
            raise ValueError(f"agent id {i} out of range 1..{self.n}")
        return frozenset(k for (j, k) in self.edges if j == i)


def complete(n: int) -> DiGraph:
    """Complete digraph K_n (all ordered pairs, no self-loops)."""
    return DiGraph(n, frozenset((i, j) for i in range(1, n + 1)
                                for j in range(1, n + 1) if i != j))


def cycle(n: int) -> DiGraph:
    """Directed cycle 1 -> 2 -> ... -> n -> 1."""
    return DiGraph(n, frozenset((i, i % n + 1) for i in range(1, n + 1)))


def star_out(n: int) -> DiGraph:
    """Out-directed star: center 1 sends to every leaf, nothing back."""
    return DiGraph(n, frozenset((1, j) for j in range(2, n + 1)))


def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> DiGraph:
    return DiGraph(n, frozenset(tuple(e) for e in edges))


def in_neighbors(graph: DiGraph, i: int) -> frozenset[int]:
    """Agents with an edge into i."""
    return graph.in_neighbors(i)


@dataclass(frozen=True)
class FaultySet:
    """A set of Byzantine agents together with the tolerated bound f."""

    members: frozenset[int]
    f: int

    def __post_init__(self) -> None:
        if not isinstance(self.members, frozenset):
            object.__setattr__(self, "members", frozenset(self.members))
        if self.f < 0:
            raise ValueError("fault bound f must be nonnegative")
        if len(self.members) > self.f:
            raise ValueError(
                f"{len(self.members)} faulty agents exceed the bound f={self.f}")

    def validate_for(self, graph: DiGraph) -> None:
        for m in self.members:
            if not 1 <= m <= graph.n:
                raise ValueError(f"faulty agent {m} out of range 1..{graph.n}")


@dataclass(frozen=True)
class ReducedGraph:
    """Subgraph after deleting faulty agents and up to f extra in-edges per node."""

    base: DiGraph
    removed_faulty: FaultySet
    removed_edges: Mapping[int, frozenset[int]]  # receiver -> senders dropped
    vertices: tuple[int, ...]
    edges: frozenset[tuple[int, int]]

    def in_neighbors(self, i: int) -> frozenset[int]:
        return frozenset(j for (j, k) in self.edges if k == i)

    def out_neighbors(self, i: int) -> frozenset[int]:
        return frozenset(k for (j, k) in self.edges if j == i)


def _build_reduced(graph: DiGraph, faulty: FaultySet,
                   removed: dict[int, frozenset[int]]) -> ReducedGraph:
    live = tuple(v for v in graph.vertices if v not in faulty.members)
    live_set = set(live)
    edges = frozenset(
        (j, k) for (j, k) in graph.edges
        if j in live_set and k in live_set and j not in removed.get(k, ()))
    return ReducedGraph(graph, faulty, dict(removed), live, edges)


def enumerate_reduced_graphs(graph: DiGraph, faulty: FaultySet) -> list[ReducedGraph]:
    """All reduced graphs: drop faulty agents, then any <= f in-edges per node.

    Deterministic order: per-agent removal subsets by (size, lexicographic),
    combined in ascending agent order.
    """
    faulty.validate_for(graph)
    f = faulty.f
    live = [v for v in graph.vertices if v not in faulty.members]
    live_set = set(live)
    per_agent: list[list[tuple[int, frozenset[int]]]] = []
    for i in live:
        nbrs = sorted(graph.in_neighbors(i) & live_set)
        choices = [(i, frozenset(c))
                   for m in range(0, min(f, len(nbrs)) + 1)
                   for c in itertools.combinations(nbrs, m)]
        per_agent.append(choices)
    out = []
    for combo in itertools.product(*per_agent):
        removed = {i: c for (i, c) in combo if c}
        out.append(_build_reduced(graph, faulty, removed))
    return out


def reduced_graph_count(graph: DiGraph, faulty: FaultySet) -> int:
    """Closed-form |R_F|: product over live agents of sum_{m<=f} C(deg, m)."""
    faulty.validate_for(graph)
    live_set = {v for v in graph.vertices if v not in faulty.members}
    total = 1
    for i in sorted(live_set):
        deg = len(graph.in_neighbors(i) & live_set)
        total *= sum(math.comb(deg, m) for m in range(0, min(faulty.f, deg) + 1))
    return total


# ---------------------------------------------------------------------------
# Strongly connected components and source detection
# ---------------------------------------------------------------------------

def strongly_connected_components(vertices: Iterable[int],
                                  out_adj: Mapping[int, Iterable[int]]
                                  ) -> list[frozenset[int]]:
    """Iterative Tarjan; components in a deterministic order."""
    verts = sorted(vertices)
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    sccs: list[frozenset[int]] = []
    counter = 0

    for root in verts:
        if root in index:
            continue
        work = [(root, iter(sorted(out_adj.get(root, ()))))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(sorted(out_adj.get(w, ())))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                sccs.append(frozenset(comp))
    return sccs


def _out_adjacency(h) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {v: set() for v in h.vertices}
    for (i, j) in h.edges:
        adj[i].add(j)
    return adj


def source_component(h) -> frozenset[int]:
    """Vertices with a directed path to every other vertex; empty if none.

    Computed by condensation: the unique zero-in-degree component of the
    condensation (if unique) reaches every other component in the DAG.
    Accepts a DiGraph or a ReducedGraph.
    """
    verts = list(h.vertices)
    if not verts:
        return frozenset()
    adj = _out_adjacency(h)
    sccs = strongly_connected_components(verts, adj)
    comp_of = {v: idx for idx, comp in enumerate(sccs) for v in comp}
    has_in = [False] * len(sccs)
    for (i, j) in h.edges:
        a, b = comp_of[i], comp_of[j]
        if a != b:
            has_in[b] = True
    roots = [idx for idx, flag in enumerate(has_in) if not flag]
    if len(roots) == 1:
        return sccs[roots[0]]
    return frozenset()


# ---------------------------------------------------------------------------
# Condition 1: every reduced graph has a source component of size
# >= max{f+1, s}, over every faulty set of size <= f.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Condition1Result:
    holds: bool
    bound: int
    # witness on failure: the faulty set and a reduced graph whose source
    # component (also attached) is smaller than the bound
    witness_faulty: FaultySet | None = None
    witness_graph: ReducedGraph | None = None
    witness_source: frozenset[int] | None = None

    def __bool__(self) -> bool:
        return self.holds


def _faulty_subsets(n: int, f: int) -> Iterable[tuple[int, ...]]:
    agents = range(1, n + 1)
    for size in range(0, min(f, n) + 1):
        yield from itertools.combinations(agents, size)


def check_condition1(graph: DiGraph, f: int, s: int) -> Condition1Result:
    """Exhaustive solvability check over all faulty sets of size <= f.

    Direct enumeration of reduced graphs is hopeless already at n=8, so per
    faulty set we search instead for "closable" vertex sets: T is closable
    if every member has at most f live in-neighbors outside T, i.e. a
    reduced graph exists in which nothing outside T can reach T.  A reduced
    graph with source component smaller than the bound exists iff some
    closable T has |T| < bound, or two disjoint closable sets exist (then a
    reduced graph with an empty source exists).  Tests cross-check this
    against brute-force enumeration on small graphs.
    """
    n = graph.n
    if n > MAX_CONDITION_N:
        raise GraphSizeError(
            f"check_condition1 is exhaustive and capped at n<={MAX_CONDITION_N}; got n={n}")
    if not 1 <= s <= n + 1:
        raise ValueError(f"sparsity parameter s={s} outside 1..{n + 1}")
    if f < 0:
        raise ValueError("fault bound f must be nonnegative")
    bound = max(f + 1, s)

    full_in = [0] * (n + 1)  # bitmask of in-neighbors, 1-based agents
    for (i, j) in graph.edges:
        full_in[j] |= 1 << (i - 1)

    for fset in _faulty_subsets(n, f):
        faulty = FaultySet(frozenset(fset), f)
        live = [v for v in graph.vertices if v not in faulty.members]
        live_mask = 0
        for v in live:
            live_mask |= 1 << (v - 1)
        if not live:
            empty = _build_reduced(graph, faulty, {})
            return Condition1Result(False, bound, faulty, empty, frozenset())

        in_live = {v: full_in[v] & live_mask for v in live}

        closable: list[int] = []
        small: int | None = None
        for mask in _submasks_ascending(live_mask):
            if mask == 0:
                continue
            members = [v for v in live if mask >> (v - 1) & 1]
            if all((in_live[v] & ~mask).bit_count() <= f for v in members):
                closable.append(mask)
                if small is None and len(members) <= bound - 1:
                    small = mask
        if small is not None:
            witness = _close_sets(graph, faulty, in_live, [small])
            return Condition1Result(False, bound, faulty, witness,
                                    source_component(witness))
        for a, mask_a in enumerate(closable):
            for mask_b in closable[a + 1:]:
                if mask_a & mask_b == 0:
                    witness = _close_sets(graph, faulty, in_live,
                                          [mask_a, mask_b])
                    return Condition1Result(False, bound, faulty, witness,
                                            source_component(witness))
    return Condition1Result(True, bound)


def _submasks_ascending(live_mask: int) -> Iterable[int]:
    bits = [i for i in range(live_mask.bit_length()) if live_mask >> i & 1]
    order = sorted(range(1 << len(bits)),
                   key=lambda m: (m.bit_count(), m))
    for m in order:
        mask = 0
        for pos, b in enumerate(bits):
            if m >> pos & 1:
                mask |= 1 << b
        yield mask


def _close_sets(graph: DiGraph, faulty: FaultySet,
                in_live: Mapping[int, int], masks: list[int]) -> ReducedGraph:
    """Reduced graph removing, inside each given set, all in-edges from outside it."""
    removed: dict[int, frozenset[int]] = {}
    for mask in masks:
        for v in in_live:
            if mask >> (v - 1) & 1:
                outside = in_live[v] & ~mask
                senders = frozenset(
                    j + 1 for j in range(outside.bit_length()) if outside >> j & 1)
                if senders:
                    removed[v] = senders
    return _build_reduced(graph, faulty, removed)


# ---------------------------------------------------------------------------
# Condition 2: the four-way partition condition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Condition2Witness:
    L: frozenset[int]
    R: frozenset[int]
    C: frozenset[int]
    F: frozenset[int]


@dataclass(frozen=True)
class Condition2Result:
    holds: bool
    witness: Condition2Witness | None = None

    def __bool__(self) -> bool:
        return self.holds


def check_condition2(graph: DiGraph, f: int) -> Condition2Result:
    """Partition check: for every (L, R, C, F) with L, R nonempty and |F| <= f,
    some node of L has >= f+1 in-neighbors in R+C or some node of R has
    >= f+1 in-neighbors in L+C.  4^n enumeration, capped at MAX_CONDITION_N.
    """
    n = graph.n
    if n > MAX_CONDITION_N:
        raise GraphSizeError(
            f"check_condition2 is exhaustive and capped at n<={MAX_CONDITION_N}; got n={n}")
    if f < 0:
        raise ValueError("fault bound f must be nonnegative")

    full_in = [0] * (n + 1)
    for (i, j) in graph.edges:
        full_in[j] |= 1 << (i - 1)

    for fset in _faulty_subsets(n, f):
        rest = [v for v in graph.vertices if v not in fset]
        for colors in itertools.product((0, 1, 2), repeat=len(rest)):
            l_mask = r_mask = c_mask = 0
            for v, c in zip(rest, colors):
                if c == 0:
                    l_mask |= 1 << (v - 1)
                elif c == 1:
                    r_mask |= 1 << (v - 1)
                else:
                    c_mask |= 1 << (v - 1)
            if l_mask == 0 or r_mask == 0:
                continue
            if _partition_ok(rest, colors, full_in, l_mask, r_mask, c_mask, f):
                continue
            return Condition2Result(False, Condition2Witness(
                _mask_to_set(l_mask), _mask_to_set(r_mask),
                _mask_to_set(c_mask), frozenset(fset)))
    return Condition2Result(True, None)


def _partition_ok(rest, colors, full_in, l_mask, r_mask, c_mask, f) -> bool:
    rc = r_mask | c_mask
    lc = l_mask | c_mask
    for v, c in zip(rest, colors):
        if c == 0 and (full_in[v] & rc).bit_count() >= f + 1:
            return True
        if c == 1 and (full_in[v] & lc).bit_count() >= f + 1:
            return True
    return False


def _mask_to_set(mask: int) -> frozenset[int]:
    return frozenset(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)
