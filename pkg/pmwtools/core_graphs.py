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
core_graphs.py

Graph primitives for the tree-of-copies construction:
- complete rooted ternary trees and the tr() height function
- the product graph T(H) with dense vertex ids (node * |V(H)| + index)
- occupancy, roles and homogeneous nodes
- the G_k instance family and its tree decomposition, plus a verifier
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Set, Tuple

import networkx as nx

from pmwtools.errors import PreconditionError

# -----------------------------
# Ternary trees
# -----------------------------
def ternary_node_count(height: int) -> int:
    """Number of nodes of the complete rooted ternary tree of the given height."""
    return (3 ** (height + 1) - 1) // 2


class TernaryTree:
    """
    Complete rooted ternary tree in breadth-first numbering.

    The root is 0 and the children of v are 3v+1, 3v+2, 3v+3, so child
    index 0 is always the lowest id.
    """

    def __init__(self, height: int):
        if height < 0:
            raise PreconditionError(f"Tree height must be non-negative, got {height}", clause="height")
        self.height = height
        self.graph = nx.balanced_tree(3, height)
        self.root = 0
        self.num_nodes = self.graph.number_of_nodes()
        self._subtree_cache: Dict[int, FrozenSet[int]] = {}

    def __repr__(self) -> str:
        return f"TernaryTree(height={self.height}, nodes={self.num_nodes})"

    def children(self, v: int) -> List[int]:
        first = 3 * v + 1
        if first >= self.num_nodes:
            return []
        return [first, first + 1, first + 2]

    def parent(self, v: int) -> Optional[int]:
        return None if v == self.root else (v - 1) // 3

    def is_leaf(self, v: int) -> bool:
        return 3 * v + 1 >= self.num_nodes

    def depth(self, v: int) -> int:
        d = 0
        while v != self.root:
            v = (v - 1) // 3
            d += 1
        return d

    def subtree_height(self, v: int) -> int:
        return self.height - self.depth(v)

    def subtree_nodes(self, v: int) -> FrozenSet[int]:
        """All nodes of the subtree rooted at v (v included)."""
        cached = self._subtree_cache.get(v)
        if cached is not None:
            return cached
        nodes = []
        frontier = [v]
        while frontier:
            nodes.extend(frontier)
            frontier = [c for u in frontier for c in self.children(u)]
        result = frozenset(nodes)
        self._subtree_cache[v] = result
        return result

    def path(self, u: int, v: int) -> List[int]:
        """The unique tree path from u to v."""
        return nx.shortest_path(self.graph, u, v)


def build_ternary_tree(height: int) -> TernaryTree:
    return TernaryTree(height)


def tr(x: int) -> int:
    """Largest h such that the height-h complete ternary tree has at most x nodes."""
    if x < 1:
        raise PreconditionError(f"tr() is defined for x >= 1, got {x}", clause="x")
    h = 0
    while ternary_node_count(h + 1) <= x:
        h += 1
    return h


# -----------------------------
# Product graphs
# -----------------------------
@dataclass(frozen=True)
class RolePartition:
    """
    A vertex subset V split into V1 and V2.

    Vertices in V1 have role 1, in V2 role 2, everything else role 0.
    """
    v1: FrozenSet[int]
    v2: FrozenSet[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "v1", frozenset(self.v1))
        object.__setattr__(self, "v2", frozenset(self.v2))
        if self.v1 & self.v2:
            raise PreconditionError("Role sets V1 and V2 must be disjoint", clause="disjoint",
                                    witness=sorted(self.v1 & self.v2))

    @property
    def vertices(self) -> FrozenSet[int]:
        return self.v1 | self.v2

    def role(self, vertex: int) -> int:
        if vertex in self.v1:
            return 1
        if vertex in self.v2:
            return 2
        return 0


class Occupancy(NamedTuple):
    occupied: FrozenSet[int]
    complete: FrozenSet[int]


class ProductGraph:
    """
    The graph T(H): one copy of H per tree node plus index-aligned tree edges.

    Vertex (node, i) has dense id node * p + i where p = |V(H)|.
    """

    def __init__(self, tree: TernaryTree, pattern: nx.Graph, graph: nx.Graph):
        self.tree = tree
        self.pattern = pattern
        self.graph = graph
        self.p = pattern.number_of_nodes()

    def __repr__(self) -> str:
        return (f"ProductGraph(height={self.tree.height}, |V(H)|={self.p}, "
                f"|V|={self.graph.number_of_nodes()}, |E|={self.graph.number_of_edges()})")

    def vertex_id(self, node: int, index: int) -> int:
        return node * self.p + index

    def address(self, vertex: int) -> Tuple[int, int]:
        """Inverse of vertex_id: (tree node, H-index)."""
        return divmod(vertex, self.p)

    def node_of(self, vertex: int) -> int:
        return vertex // self.p

    def copy_vertices(self, node: int) -> range:
        return range(node * self.p, (node + 1) * self.p)

    def region_vertices(self, region: Iterable[int]) -> FrozenSet[int]:
        """All product vertices whose tree node lies in region."""
        return frozenset(v for node in region for v in self.copy_vertices(node))

    def all_vertices(self) -> FrozenSet[int]:
        return frozenset(self.graph.nodes)


def _normalize_pattern(H: nx.Graph) -> nx.Graph:
    if H.number_of_nodes() == 0:
        raise PreconditionError("Pattern graph H must be non-empty", clause="empty_pattern")
    if not nx.is_connected(H):
        raise PreconditionError("Pattern graph H must be connected", clause="connected_pattern")
    if set(H.nodes) != set(range(H.number_of_nodes())):
        H = nx.convert_node_labels_to_integers(H, ordering="sorted")
    return H


def build_product_graph(T: TernaryTree, H: nx.Graph) -> ProductGraph:
    """Build T(H) for a ternary tree T and a connected, non-empty pattern H."""
    H = _normalize_pattern(H)
    p = H.number_of_nodes()
    G = nx.Graph()
    G.add_nodes_from(range(T.num_nodes * p))
    for node in range(T.num_nodes):
        base = node * p
        G.add_edges_from((base + i, base + j) for i, j in H.edges)
    for u, v in T.graph.edges:
        G.add_edges_from((u * p + i, v * p + i) for i in range(p))
    return ProductGraph(T, H, G)


def occupied_set(P: ProductGraph, V: Iterable[int], region: Optional[Iterable[int]] = None) -> Occupancy:
    """
    Tree nodes whose copy meets V, and which of those copies lie entirely in V.

    region restricts the answer to a set of tree nodes (a subtree or T minus a subtree).
    """
    V = frozenset(V)
    counts: Dict[int, int] = {}
    for vertex in V:
        node = P.node_of(vertex)
        counts[node] = counts.get(node, 0) + 1
    if region is not None:
        allowed = frozenset(region)
        counts = {node: c for node, c in counts.items() if node in allowed}
    occupied = frozenset(counts)
    complete = frozenset(node for node, c in counts.items() if c == P.p)
    return Occupancy(occupied, complete)


def homogeneous_nodes(P: ProductGraph, R: RolePartition, region: Optional[Iterable[int]] = None) -> FrozenSet[int]:
    """Tree nodes whose whole copy of H carries a single role."""
    nodes = range(P.tree.num_nodes) if region is None else region
    result = set()
    for node in nodes:
        roles = {R.role(v) for v in P.copy_vertices(node)}
        if len(roles) == 1:
            result.add(node)
    return frozenset(result)


# -----------------------------
# G_k instances
# -----------------------------
def gk_pattern_size(k: int, logger=None) -> int:
    """
    Number of pattern (path) vertices used for parameter k.

    The G_k family starts at k = 8. Values 4 <= k < 8 are accepted as an
    extension giving granularity p = 1, which the constructive trials use;
    they are noted in the log.
    """
    if logger is None:
        logger = logging.getLogger("core_graphs")
    if not isinstance(k, int) or k < 4:
        raise PreconditionError(f"k must be an integer of at least 4, got {k}", clause="k")
    if k < 8:
        logger.info(f"k={k} is below the G_k range k >= 8; building the p={k // 4} extension")
    if k % 4 != 0:
        logger.warning(f"k={k} is not a multiple of 4; using p={k // 4} and a path of {2 * (k // 4)} vertices")
    return 2 * (k // 4)


def build_gk_instance(k: int, height: int, logger=None) -> ProductGraph:
    """T(H) with H a path of k/2 vertices over the complete ternary tree of the given height."""
    if logger is None:
        logger = logging.getLogger("core_graphs")
    size = gk_pattern_size(k, logger)
    P = build_product_graph(TernaryTree(height), nx.path_graph(size))
    logger.debug(f"Built G_k instance k={k} height={height}: {P}")
    return P


@dataclass
class TreeDecomposition:
    """Bags indexed by id plus the tree connecting them."""
    bags: Dict[int, FrozenSet[int]]
    tree: nx.Graph = field(default_factory=nx.Graph)

    @property
    def width(self) -> int:
        if not self.bags:
            return -1
        return max(len(bag) for bag in self.bags.values()) - 1


def gk_tree_decomposition(P: ProductGraph) -> TreeDecomposition:
    """One bag per tree node holding its own copy of H and its parent's copy."""
    expected_edges = P.tree.num_nodes * P.pattern.number_of_edges() + P.tree.graph.number_of_edges() * P.p
    if (P.graph.number_of_nodes() != P.tree.num_nodes * P.p
            or P.graph.number_of_edges() != expected_edges):
        raise PreconditionError("Graph does not have the product structure of its tree and pattern",
                                clause="product_structure")
    bags = {}
    for node in range(P.tree.num_nodes):
        bag = set(P.copy_vertices(node))
        parent = P.tree.parent(node)
        if parent is not None:
            bag.update(P.copy_vertices(parent))
        bags[node] = frozenset(bag)
    tree = nx.Graph()
    tree.add_nodes_from(bags)
    tree.add_edges_from(P.tree.graph.edges)
    return TreeDecomposition(bags, tree)


class DecompositionReport(NamedTuple):
    valid: bool
    problems: List[str]


def verify_tree_decomposition(G: nx.Graph, td: TreeDecomposition) -> DecompositionReport:
    """Check the three tree decomposition conditions independently of how td was built."""
    problems = []
    if td.tree.number_of_nodes() == 0 or not nx.is_tree(td.tree):
        problems.append("decomposition graph is not a tree")
    if set(td.tree.nodes) != set(td.bags):
        problems.append("bag ids do not match decomposition tree nodes")

    holders: Dict[int, Set[int]] = {v: set() for v in G.nodes}
    for bag_id, bag in td.bags.items():
        for v in bag:
            if v not in holders:
                problems.append(f"bag {bag_id} contains unknown vertex {v}")
                continue
            holders[v].add(bag_id)

    for v, bag_ids in holders.items():
        if not bag_ids:
            problems.append(f"vertex {v} is in no bag")
        elif td.tree.number_of_nodes() and not nx.is_connected(td.tree.subgraph(bag_ids)):
            problems.append(f"bags containing vertex {v} are not connected")

    for u, v in G.edges:
        if not holders.get(u, set()) & holders.get(v, set()):
            problems.append(f"edge ({u}, {v}) is not covered by any bag")

    return DecompositionReport(not problems, problems)


def max_degree(G: nx.Graph) -> int:
    return max((d for _, d in G.degree), default=0)
