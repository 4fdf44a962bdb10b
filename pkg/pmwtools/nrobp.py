#!/usr/bin/env python3

# Copyright (C) 2025 Dustin Darcy <ScarcityHypothesis.org>
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program. If not, see <https://www.gnu.org/licenses/>.

"""
nrobp.py

Nondeterministic read-once branching programs (NROBPs) and the bottleneck
analysis run on them.

A program is a networkx MultiDiGraph with one source and one sink whose edges
carry a 'literal' attribute (a Literal or None). Paths are tuples of edge keys
(u, v, key). The analysis side finds, for each source-sink path, cut vertices
whose through-paths all fix a common set of variables positive, and counts how
many distinct such cut tuples a program needs.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np

import pmwtools
from pmwtools.cnf_core import Literal, LiteralSet, ModelSet, arrow
from pmwtools.core_graphs import max_degree
from pmwtools.errors import PreconditionError, VerificationError, check_cap
from pmwtools.matching_width import Matching, as_matching, max_matching_across_cut, witnessing_matching_exact

EdgeKey = Tuple[int, int, int]
NrobpPath = Tuple[EdgeKey, ...]

LOCATIONS = ("within", "before", "after")


class Nrobp:
    """A single-source, single-sink DAG with optionally literal-labelled edges."""

    def __init__(self, graph: nx.MultiDiGraph, source: int, sink: int, variables: Iterable[int]):
        self.graph = graph
        self.source = source
        self.sink = sink
        self.variables = frozenset(variables)
        self._validation: Optional["ValidationReport"] = None
        self._neg_cache: Dict[Tuple[str, int], FrozenSet[int]] = {}

    @classmethod
    def from_edges(cls, edges: Iterable[Tuple], source: int, sink: int,
                   variables: Optional[Iterable[int]] = None) -> "Nrobp":
        """
        Build a program from (u, v) or (u, v, literal) tuples.

        Variables default to the variables appearing on the labels.
        """
        G = nx.MultiDiGraph()
        G.add_node(source)
        G.add_node(sink)
        seen = set()
        for edge in edges:
            u, v = edge[0], edge[1]
            literal = edge[2] if len(edge) > 2 else None
            if literal is not None:
                literal = Literal(*literal)
                seen.add(literal.var)
            G.add_edge(u, v, literal=literal)
        return cls(G, source, sink, seen if variables is None else variables)

    def __repr__(self) -> str:
        return (f"Nrobp(nodes={self.num_nodes}, edges={self.num_edges}, "
                f"source={self.source}, sink={self.sink}, vars={len(self.variables)})")

    @property
    def num_nodes(self) -> int:
        return self.graph.number_of_nodes()

    @property
    def num_edges(self) -> int:
        return self.graph.number_of_edges()

    def literal(self, edge: EdgeKey) -> Optional[Literal]:
        u, v, key = edge
        return self.graph.edges[u, v, key]["literal"]

    def edge_list(self) -> List[Tuple[int, int, int, Optional[Literal]]]:
        """Edges sorted by (u, v, key) with their literal."""
        return [(u, v, k, d["literal"]) for u, v, k, d in sorted(self.graph.edges(keys=True, data=True),
                                                                   key=lambda e: e[:3])]

    def out_edges(self, u: int) -> List[EdgeKey]:
        return sorted(self.graph.out_edges(u, keys=True))

    def copy(self) -> "Nrobp":
        return Nrobp(self.graph.copy(), self.source, self.sink, self.variables)


# -----------------------------
# Validation
# -----------------------------
class ValidationProblem(NamedTuple):
    clause: str
    message: str
    witness: Tuple = ()


@dataclass
class ValidationReport:
    """Outcome of validate(); before/after hold the variable sets seen on either side of each node."""
    problems: List[ValidationProblem] = field(default_factory=list)
    before: Dict[int, FrozenSet[int]] = field(default_factory=dict)
    after: Dict[int, FrozenSet[int]] = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return not self.problems

    def clauses(self) -> Set[str]:
        return {p.clause for p in self.problems}


def validate(Z: Nrobp) -> ValidationReport:
    """
    Check the structural and read-once conditions of Z.

    Reports acyclicity, a single source and sink, labels within the declared
    variables, no variable read twice on a path, equal variable sets on all
    paths into (and out of) every node, and uniformity at the sink. The
    variable sets come from a dynamic program over a topological order, so no
    path is enumerated.
    """
    if Z._validation is not None:
        return Z._validation
    report = ValidationReport()
    G = Z.graph

    if not nx.is_directed_acyclic_graph(G):
        cycle = tuple(nx.find_cycle(G))
        report.problems.append(ValidationProblem("acyclic", "program contains a cycle", cycle))
        Z._validation = report
        return report

    sources = sorted(v for v in G.nodes if G.in_degree(v) == 0)
    sinks = sorted(v for v in G.nodes if G.out_degree(v) == 0)
    if sources != [Z.source]:
        report.problems.append(ValidationProblem("source", f"in-degree-0 nodes {sources}, declared {Z.source}",
                                                 tuple(sources)))
    if sinks != [Z.sink]:
        report.problems.append(ValidationProblem("sink", f"out-degree-0 nodes {sinks}, declared {Z.sink}",
                                                 tuple(sinks)))
    for u, v, k, literal in Z.edge_list():
        if literal is not None and literal.var not in Z.variables:
            report.problems.append(ValidationProblem("labels", f"edge ({u}, {v}) reads undeclared variable "
                                                               f"{literal.var}", ((u, v, k),)))
    if report.problems:
        Z._validation = report
        return report

    order = list(nx.lexicographical_topological_sort(G))
    before, before_path = _side_sets(Z, order, forward=True, report=report)
    after, _ = _side_sets(Z, list(reversed(order)), forward=False, report=report)
    report.before, report.after = before, after

    if before[Z.sink] != Z.variables:
        missing = sorted(Z.variables - before[Z.sink])
        report.problems.append(ValidationProblem("uniform", f"path misses variables {missing}",
                                                 before_path[Z.sink]))
    Z._validation = report
    return report


def _side_sets(Z: Nrobp, order: List[int], forward: bool,
               report: ValidationReport) -> Tuple[Dict[int, FrozenSet[int]], Dict[int, NrobpPath]]:
    """Variables read on the paths from the source into each node (or from each node to the sink)."""
    G = Z.graph
    start = Z.source if forward else Z.sink
    sets: Dict[int, FrozenSet[int]] = {start: frozenset()}
    paths: Dict[int, NrobpPath] = {start: ()}
    side = "before" if forward else "after"
    for v in order:
        if v == start:
            continue
        incident = sorted(G.in_edges(v, keys=True)) if forward else sorted(G.out_edges(v, keys=True))
        for edge in incident:
            w = edge[0] if forward else edge[1]
            literal = Z.literal(edge)
            walk = paths[w] + (edge,) if forward else (edge,) + paths[w]
            candidate = sets[w]
            if literal is not None:
                if forward and literal.var in candidate:
                    report.problems.append(ValidationProblem("read_once", f"variable {literal.var} read twice",
                                                             walk))
                candidate = candidate | {literal.var}
            if v not in sets:
                sets[v], paths[v] = candidate, walk
            elif sets[v] != candidate:
                report.problems.append(ValidationProblem(
                    "samevar", f"paths {side} node {v} read {sorted(sets[v])} and {sorted(candidate)}",
                    (paths[v], walk)))
    return sets, paths


def require_valid(Z: Nrobp) -> ValidationReport:
    report = validate(Z)
    if not report.valid:
        first = report.problems[0]
        raise PreconditionError(f"Invalid program: {first.clause}: {first.message}", clause=first.clause,
                                witness=first.witness)
    return report


# -----------------------------
# Paths and semantics
# -----------------------------
def path_counts(Z: Nrobp, to_sink: bool = True) -> Dict[int, int]:
    """Number of paths from each node to the sink (or from the source to each node)."""
    G = Z.graph
    order = list(nx.topological_sort(G))
    counts: Dict[int, int] = {}
    if to_sink:
        for v in reversed(order):
            counts[v] = 1 if v == Z.sink else sum(counts[w] for _, w in G.out_edges(v))
    else:
        for v in order:
            counts[v] = 1 if v == Z.source else sum(counts[w] for w, _ in G.in_edges(v))
    return counts


def count_paths(Z: Nrobp) -> int:
    return path_counts(Z)[Z.source]


def enumerate_paths(Z: Nrobp, cap: Optional[int] = None) -> Iterator[NrobpPath]:
    """Every source-sink path, depth first with edges in (u, v, key) order."""
    if cap is None:
        cap = pmwtools.DEFAULT_CAP_PATHS
    check_cap("path", cap, count_paths(Z))
    stack = [(Z.source, ())]
    while stack:
        node, path = stack.pop()
        if node == Z.sink:
            yield path
            continue
        for edge in reversed(Z.out_edges(node)):
            stack.append((edge[1], path + (edge,)))


def sample_paths(Z: Nrobp, count: int, rng: np.random.Generator) -> List[NrobpPath]:
    """Source-sink paths drawn uniformly at random (with replacement)."""
    counts = path_counts(Z)
    paths = []
    for _ in range(count):
        node, path = Z.source, []
        while node != Z.sink:
            edges = Z.out_edges(node)
            weights = np.array([counts[e[1]] for e in edges], dtype=float)
            edge = edges[int(rng.choice(len(edges), p=weights / weights.sum()))]
            path.append(edge)
            node = edge[1]
        paths.append(tuple(path))
    return paths


def path_nodes(Z: Nrobp, path: NrobpPath) -> List[int]:
    return [Z.source] + [v for _, v, _ in path]


def path_assignment(Z: Nrobp, path: NrobpPath) -> LiteralSet:
    """A(P): the literals on the path."""
    return LiteralSet(lit for lit in (Z.literal(e) for e in path) if lit is not None)


def represented_function(Z: Nrobp, cap: Optional[int] = None) -> ModelSet:
    """
    The set of A(P) over all source-sink paths, by dynamic programming over nodes.

    Raises:
        PreconditionError: Z is not a valid program.
        CapExceededError: Z has more paths than cap.
    """
    if cap is None:
        cap = pmwtools.DEFAULT_CAP_PATHS
    require_valid(Z)
    check_cap("path", cap, count_paths(Z))
    G = Z.graph
    partial: Dict[int, Set[FrozenSet[Literal]]] = {Z.source: {frozenset()}}
    for v in nx.topological_sort(G):
        if v == Z.source:
            continue
        gathered: Set[FrozenSet[Literal]] = set()
        for edge in G.in_edges(v, keys=True):
            literal = Z.literal(edge)
            for prefix in partial[edge[0]]:
                gathered.add(prefix | {literal} if literal is not None else prefix)
        partial[v] = gathered
    return ModelSet(Z.variables, (LiteralSet(lits) for lits in partial[Z.sink]))


def function_by_enumeration(Z: Nrobp, cap: Optional[int] = None) -> ModelSet:
    """The represented function read straight off the enumerated paths."""
    return ModelSet(Z.variables, (path_assignment(Z, P) for P in enumerate_paths(Z, cap)))


def build_order_nrobp(F: ModelSet, order: Optional[Sequence[int]] = None, logger=None) -> Nrobp:
    """
    Layered program reading the variables in order, with one node per distinct residual function.

    Layer i holds the sets of value-suffixes that agree on the first i
    variables; equal suffix sets share a node. The source is 0 and the sink is
    the single node of the last layer.
    """
    if logger is None:
        logger = logging.getLogger("nrobp")
    if len(F) == 0:
        raise PreconditionError("Cannot build a program for an empty function", clause="non_empty")
    order = tuple(sorted(F.variables)) if order is None else tuple(order)
    if len(order) != len(F.variables) or set(order) != F.variables:
        raise PreconditionError("Order must be a permutation of the function's variables", clause="order")

    G = nx.MultiDiGraph()
    root = frozenset(tuple(m.value(v) for v in order) for m in F)
    layer = {root: 0}
    G.add_node(0)
    next_id = 1
    for depth, var in enumerate(order):
        following: Dict[FrozenSet[Tuple[bool, ...]], int] = {}
        for residual, node in layer.items():
            for value in (True, False):
                child = frozenset(rest[1:] for rest in residual if rest[0] == value)
                if not child:
                    continue
                if child not in following:
                    following[child] = next_id
                    G.add_node(next_id)
                    next_id += 1
                G.add_edge(node, following[child], literal=Literal(var, value))
        layer = following
    sink = next(iter(layer.values()))
    Z = Nrobp(G, 0, sink, F.variables)
    logger.debug(f"Built order program {Z} for {len(F)} models")
    return Z


def drop_edge_label(Z: Nrobp, edge: EdgeKey) -> Nrobp:
    """Copy of Z with the literal on edge removed."""
    mutated = Z.copy()
    u, v, key = edge
    mutated.graph.edges[u, v, key]["literal"] = None
    return mutated


def relabel_edge(Z: Nrobp, edge: EdgeKey, literal: Optional[Literal]) -> Nrobp:
    """Copy of Z with the literal on edge replaced."""
    mutated = Z.copy()
    u, v, key = edge
    mutated.graph.edges[u, v, key]["literal"] = literal
    return mutated


# -----------------------------
# Separation and fixed sets
# -----------------------------
def separates(Z: Nrobp, v: int, X: Iterable[int], Y: Iterable[int], logger=None) -> bool:
    """True iff X is read before v and Y after v on every path through v, or the other way round."""
    if logger is None:
        logger = logging.getLogger("nrobp")
    report = require_valid(Z)
    if v not in report.before:
        raise PreconditionError(f"Node {v} is not on any source-sink path", clause="on_path", witness=v)
    X, Y = frozenset(X), frozenset(Y)
    before, after = report.before[v], report.after[v]
    stray = (X | Y) - (before | after)
    if stray:
        logger.debug(f"Variables {sorted(stray)} are read on neither side of node {v}")
        return False
    return (X <= before and Y <= after) or (Y <= before and X <= after)


def _negative_vars(Z: Nrobp, u: int, side: str) -> FrozenSet[int]:
    """Variables read negatively on some path into u ('before') or out of u ('after')."""
    key = (side, u)
    cached = Z._neg_cache.get(key)
    if cached is not None:
        return cached
    G = Z.graph
    if side == "before":
        region = nx.ancestors(G, u) | {u}
        edges = (e for e in G.edges(keys=True) if e[1] in region)
    else:
        region = nx.descendants(G, u) | {u}
        edges = (e for e in G.edges(keys=True) if e[0] in region)
    result = frozenset(lit.var for lit in (Z.literal(e) for e in edges) if lit is not None and not lit.positive)
    Z._neg_cache[key] = result
    return result


def _walk(Z: Nrobp, a: int, b: int) -> NrobpPath:
    nodes = nx.shortest_path(Z.graph, a, b)
    return tuple((x, y, min(Z.graph[x][y])) for x, y in zip(nodes, nodes[1:]))


def _negative_edge(Z: Nrobp, var: int, u: int, side: str) -> EdgeKey:
    G = Z.graph
    region = (nx.ancestors(G, u) | {u}) if side == "before" else (nx.descendants(G, u) | {u})
    for e in sorted(G.edges(keys=True)):
        lit = Z.literal(e)
        if lit is not None and lit.var == var and not lit.positive:
            if (side == "before" and e[1] in region) or (side == "after" and e[0] in region):
                return e
    raise VerificationError(f"No negative {var} edge on the {side} side of {u}")


def fixed_set(Z: Nrobp, u: int, M: Iterable[Tuple[int, int]], G: Optional[nx.Graph] = None) -> FrozenSet[int]:
    """
    One end of every matching edge that is positive on every source-sink path through u.

    Every edge of M must be separated by u. For each edge the end read before u
    is taken when no path into u reads it negatively, otherwise the end read
    after u when no path out of u reads it negatively. When both ends can be
    falsified the two half paths join into a source-sink path whose assignment
    falsifies the edge clause, which means the represented function is not a
    subset of phi(G); that path is raised as the witness.

    Args:
        Z: A valid program.
        u: A node of Z.
        M: A matching over G.
        G: When given, every edge of M must be an edge of G.

    Returns:
        The chosen ends.
    """
    report = require_valid(Z)
    if u not in report.before:
        raise PreconditionError(f"Node {u} is not on any source-sink path", clause="on_path", witness=u)
    before, after = report.before[u], report.after[u]
    chosen = set()
    for a, b in sorted(as_matching(M)):
        if G is not None and not G.has_edge(a, b):
            raise PreconditionError(f"({a}, {b}) is not an edge of the graph", clause="matching")
        if a in before and b in after:
            early, late = a, b
        elif b in before and a in after:
            early, late = b, a
        else:
            raise PreconditionError(f"Edge ({a}, {b}) is not separated by node {u}", clause="separation",
                                    witness=(a, b))
        if early not in _negative_vars(Z, u, "before"):
            chosen.add(early)
        elif late not in _negative_vars(Z, u, "after"):
            chosen.add(late)
        else:
            e1 = _negative_edge(Z, early, u, "before")
            e2 = _negative_edge(Z, late, u, "after")
            witness = _walk(Z, Z.source, e1[0]) + (e1,) + _walk(Z, e1[1], u) + \
                _walk(Z, u, e2[0]) + (e2,) + _walk(Z, e2[1], Z.sink)
            raise PreconditionError(f"Both ends of ({a}, {b}) are falsified on a path through {u}: "
                                    f"the program accepts {path_assignment(Z, witness)}",
                                    clause="subset_of_phi", witness=witness)
    return frozenset(chosen)


def paths_through(Z: Nrobp, nodes: Iterable[int], cap: Optional[int] = None) -> List[NrobpPath]:
    nodes = set(nodes)
    return [P for P in enumerate_paths(Z, cap) if nodes <= set(path_nodes(Z, P))]


# -----------------------------
# Single bottleneck
# -----------------------------
def labelled_positions(Z: Nrobp, path: NrobpPath) -> List[int]:
    """Indices into path of the labelled edges."""
    return [i for i, e in enumerate(path) if Z.literal(e) is not None]


def path_order(Z: Nrobp, path: NrobpPath) -> Tuple[int, ...]:
    """The variables in the order the path reads them."""
    return tuple(Z.literal(path[i]).var for i in labelled_positions(Z, path))


def split_vertex(Z: Nrobp, path: NrobpPath, split: int) -> int:
    """The node right after the split-th labelled edge (the source for split 0)."""
    if split == 0:
        return Z.source
    return path[labelled_positions(Z, path)[split - 1]][1]


@dataclass
class SingleBottleneckReport:
    """Per-path cut vertices, their fixed sets and the checks on the resulting cover of F."""
    model_count: int
    path_vertices: List[int]
    fixed_sets: Dict[int, FrozenSet[int]]
    shares: Dict[int, int]
    matching_sizes: List[int]
    covering_holds: bool
    union_bound_holds: bool
    extensional_holds: bool
    on_path_holds: bool

    @property
    def cut(self) -> FrozenSet[int]:
        return frozenset(self.fixed_sets)

    @property
    def q(self) -> int:
        return len(self.fixed_sets)

    @property
    def passed(self) -> bool:
        return self.covering_holds and self.union_bound_holds and self.extensional_holds and self.on_path_holds


def _require_graph_variables(Z: Nrobp, G: nx.Graph) -> None:
    if Z.variables != frozenset(G.nodes):
        raise PreconditionError("Program variables must be exactly the graph vertices", clause="variables",
                                witness=sorted(Z.variables ^ frozenset(G.nodes)))


def single_bottleneck(Z: Nrobp, G: nx.Graph, cap: Optional[int] = None, logger=None) -> SingleBottleneckReport:
    """
    Pick one cut vertex per source-sink path and cover F by the sub-functions they fix.

    The cut vertex of P follows the largest witnessing matching over P's
    variable order (smallest split on ties); its fixed set is computed from
    that matching. Each cut vertex keeps the largest fixed set found for it.
    """
    if logger is None:
        logger = logging.getLogger("nrobp")
    require_valid(Z)
    _require_graph_variables(Z, G)
    F = represented_function(Z, cap)
    paths = list(enumerate_paths(Z, cap))

    path_vertices, sizes = [], []
    fixed: Dict[int, FrozenSet[int]] = {}
    on_path = True
    witness_cache: Dict[Tuple[int, ...], Tuple[int, Matching]] = {}
    for P in paths:
        order = path_order(Z, P)
        if order not in witness_cache:
            W = witnessing_matching_exact(G, Z.variables, order)
            witness_cache[order] = (W.split, W.matching)
        split, matching = witness_cache[order]
        a = split_vertex(Z, P, split)
        on_path &= a in path_nodes(Z, P)
        U = fixed_set(Z, a, matching, G)
        if a not in fixed or len(U) > len(fixed[a]):
            fixed[a] = U
        path_vertices.append(a)
        sizes.append(len(matching))

    shares = {a: len(arrow(F, LiteralSet.positive(U))) for a, U in fixed.items()}
    covered = set()
    extensional = True
    for P, a in zip(paths, path_vertices):
        A = path_assignment(Z, P)
        U = fixed[a]
        extensional &= U <= A.positive_vars()
        covered.add(A)
    union = set()
    for U in fixed.values():
        union.update(arrow(F, LiteralSet.positive(U)))
    covering = union == set(F) and covered == set(F)
    report = SingleBottleneckReport(len(F), path_vertices, fixed, shares, sizes, covering,
                                    sum(shares.values()) >= len(F), extensional, on_path)
    logger.info(f"Single bottleneck: {len(paths)} paths, {report.q} cut vertices, "
                f"passed={report.passed}")
    return report


# -----------------------------
# Characteristic tuples
# -----------------------------
def block_sizes(n: int, q: Optional[int] = None) -> List[int]:
    """
    Variable counts of the blocks a path is cut into.

    Without q, blocks have ceil(sqrt(n)) variables and a short last block is
    merged into the one before it. With q, the n variables are split into q
    blocks whose sizes differ by at most one, larger blocks first.
    """
    if n < 1:
        raise PreconditionError("Cannot split a path without variables", clause="n")
    if q is None:
        s = math.isqrt(n - 1) + 1
        sizes = [s] * (n // s)
        rest = n - s * len(sizes)
        if rest:
            if sizes:
                sizes[-1] += rest
            else:
                sizes.append(rest)
        return sizes
    if not 1 <= q <= n:
        raise PreconditionError(f"Block count must be in 1..{n}, got {q}", clause="q")
    base, extra = divmod(n, q)
    return [base + 1] * extra + [base] * (q - extra)


@dataclass
class CharacteristicTuple:
    """Cut vertices of one path, one per variable block, with the variables they fix."""
    path: NrobpPath
    components: Tuple[int, ...]
    blocks: List[Tuple[int, int]]
    splits: List[int]
    locations: List[str]
    matchings: List[Matching]
    fixed_parts: List[FrozenSet[int]]
    edge_multiplicity_holds: bool
    cover_holds: bool
    seven_holds: bool

    @property
    def q(self) -> int:
        return len(self.components)

    @property
    def U(self) -> FrozenSet[int]:
        return frozenset().union(*self.fixed_parts) if self.fixed_parts else frozenset()

    @property
    def matched_edges(self) -> FrozenSet[Tuple[int, int]]:
        return frozenset().union(*self.matchings) if self.matchings else frozenset()


def characteristic_tuple(Z: Nrobp, G: nx.Graph, path: NrobpPath, q: Optional[int] = None) -> CharacteristicTuple:
    """
    Split a path into variable blocks and pick one cut vertex per block.

    Args:
        Z: A valid program whose function is a subset of phi(G).
        G: The graph; its vertices are the program's variables.
        path: A source-sink path of Z.
        q: Number of blocks; ceil(sqrt(n))-sized blocks when omitted.

    Returns:
        The tuple. Inside block i a prefix of its variables with the largest
        cut matching to the rest of G is chosen (smallest prefix on ties); the
        matching edges are grouped by where their other end is read (inside
        the block after the prefix, before the block, after the block), the
        largest group is kept (ties in that order) and the cut vertex is the
        end of the prefix, the start of the block or the end of the block
        accordingly.
    """
    require_valid(Z)
    _require_graph_variables(Z, G)
    positions = labelled_positions(Z, path)
    order = path_order(Z, path)
    n = len(order)
    sizes = block_sizes(n, q)

    nodes = path_nodes(Z, path)
    components, blocks, splits, locations, matchings, parts = [], [], [], [], [], []
    lo = 0
    for i, size in enumerate(sizes):
        hi = lo + size
        start_node = Z.source if i == 0 else path[positions[lo - 1]][1]
        end_node = Z.sink if i == len(sizes) - 1 else path[positions[hi - 1]][1]
        start_idx = 0 if i == 0 else positions[lo - 1] + 1
        end_idx = len(nodes) - 1 if i == len(sizes) - 1 else positions[hi - 1] + 1
        blocks.append((start_idx, end_idx))

        block_vars = order[lo:hi]
        best_t, best = 1, None
        for t in range(1, size + 1):
            M = max_matching_across_cut(G, block_vars[:t])
            if best is None or len(M) > len(best):
                best_t, best = t, M
        prefix = frozenset(block_vars[:best_t])
        groups = {"within": set(block_vars[best_t:]), "before": set(order[:lo]), "after": set(order[hi:])}
        classified = {loc: frozenset(e for e in best if (e[1] if e[0] in prefix else e[0]) in groups[loc])
                      for loc in LOCATIONS}
        popular = max(LOCATIONS, key=lambda loc: (len(classified[loc]), -LOCATIONS.index(loc)))
        if popular == "within":
            a = path[positions[lo + best_t - 1]][1]
        elif popular == "before":
            a = start_node
        else:
            a = end_node
        M_i = classified[popular]
        components.append(a)
        splits.append(best_t)
        locations.append(popular)
        matchings.append(M_i)
        parts.append(fixed_set(Z, a, M_i, G))
        lo = hi

    multiplicity: Dict[Tuple[int, int], int] = {}
    for M in matchings:
        for e in M:
            multiplicity[e] = multiplicity.get(e, 0) + 1
    union_edges = len(multiplicity)
    U = frozenset().union(*parts) if parts else frozenset()
    return CharacteristicTuple(path, tuple(components), blocks, splits, locations, matchings, parts,
                               all(c <= 2 for c in multiplicity.values()),
                               len(U) * max_degree(G) >= union_edges,
                               7 * len(U) >= union_edges)


@dataclass
class BottleneckCensus:
    """All characteristic tuples of a program and the counting checks on them."""
    q: int
    tuples: Dict[Tuple[int, ...], FrozenSet[int]]
    components: List[FrozenSet[int]]
    tuple_models: Dict[Tuple[int, ...], int]
    model_count: int
    exhaustive: bool
    covering_holds: bool
    extensional_holds: bool
    chain_holds: bool
    product_holds: bool
    multiplicity_holds: bool
    cover_holds: bool
    seven_holds: bool
    max_matched: int = 0

    @property
    def mu(self) -> int:
        return max((len(B) for B in self.components), default=0)

    @property
    def tp(self) -> int:
        return len(self.tuples)

    @property
    def largest_tuple_share(self) -> int:
        return max(self.tuple_models.values(), default=0)

    @property
    def passed(self) -> bool:
        return (self.covering_holds and self.extensional_holds and self.chain_holds and self.product_holds
                and self.multiplicity_holds and self.cover_holds and self.seven_holds)


def bottleneck_census(Z: Nrobp, G: nx.Graph, q: Optional[int] = None, cap: Optional[int] = None,
                      sample: Optional[int] = None, seed: int = 0, logger=None) -> BottleneckCensus:
    """
    Characteristic tuples of every source-sink path and the bounds they feed.

    Args:
        Z: A valid program over the vertices of G.
        G: The graph.
        q: Block count passed to characteristic_tuple.
        cap: Path cap for exhaustive enumeration.
        sample: When the program has more paths than cap, analyse this many
            uniformly sampled paths instead (the covering identity is then not
            checked and exhaustive is False).
        seed: Seed for sampling.
        logger: Optional logger.

    Returns:
        The census. F_a is the set of assignments of paths through every
        component of tuple a; each must carry U_a positively, the F_a must
        cover F, |F| <= max |F_a| * |TP| and |TP| <= prod |B_i| <= mu^q.
    """
    if logger is None:
        logger = logging.getLogger("nrobp")
    if cap is None:
        cap = pmwtools.DEFAULT_CAP_PATHS
    require_valid(Z)
    total = count_paths(Z)
    exhaustive = total <= cap
    if exhaustive:
        paths = list(enumerate_paths(Z, cap))
    elif sample:
        logger.warning(f"Program has {total} paths (cap {cap}); sampling {sample} paths, results are not exhaustive")
        paths = sample_paths(Z, sample, np.random.default_rng(seed))
    else:
        check_cap("path", cap, total)

    membership: Dict[int, int] = {}
    assignments = []
    for index, P in enumerate(paths):
        for v in set(path_nodes(Z, P)):
            membership[v] = membership.get(v, 0) | (1 << index)
        assignments.append(path_assignment(Z, P))

    tuples: Dict[Tuple[int, ...], Set[int]] = {}
    multiplicity = cover = seven = True
    max_matched = 0
    block_count = 0
    for P in paths:
        ct = characteristic_tuple(Z, G, P, q)
        block_count = ct.q
        tuples.setdefault(ct.components, set()).update(ct.U)
        multiplicity &= ct.edge_multiplicity_holds
        cover &= ct.cover_holds
        seven &= ct.seven_holds
        max_matched = max(max_matched, len(ct.matched_edges))

    tuple_models: Dict[Tuple[int, ...], int] = {}
    covered: Set[LiteralSet] = set()
    extensional = True
    for comps, U in tuples.items():
        mask = ~0
        for v in comps:
            mask &= membership.get(v, 0)
        through = {assignments[i] for i in range(len(paths)) if mask >> i & 1}
        extensional &= all(U <= A.positive_vars() for A in through)
        tuple_models[comps] = len(through)
        covered.update(through)

    components = [frozenset(c[i] for c in tuples) for i in range(block_count)]
    F_size = len(set(assignments))
    covering = covered == set(assignments) if exhaustive else True
    product = 1
    for B in components:
        product *= len(B)
    mu = max((len(B) for B in components), default=0)
    census = BottleneckCensus(
        q=block_count,
        tuples={k: frozenset(v) for k, v in tuples.items()},
        components=components,
        tuple_models=tuple_models,
        model_count=F_size,
        exhaustive=exhaustive,
        covering_holds=covering,
        extensional_holds=extensional,
        chain_holds=F_size <= max(tuple_models.values(), default=0) * len(tuples),
        product_holds=len(tuples) <= product <= mu ** block_count,
        multiplicity_holds=multiplicity,
        cover_holds=cover,
        seven_holds=seven,
        max_matched=max_matched,
    )
    logger.info(f"Census: {len(paths)} paths, |TP|={census.tp}, mu={census.mu}, q={census.q}, "
                f"passed={census.passed}")
    return census
