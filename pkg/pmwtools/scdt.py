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
scdt.py

Solution-counting decision trees (SCDTs) for small CNFs and model sets.

Every internal node branches on the next variable of a fixed order and every
edge carries the exact rational weight |F^u|_l| / |F^u|, where F^u is the
function restricted to the literals on the root-to-u path. The module also
holds the forcing bookkeeping for phi(G) trees and the exact checks of the
path-weight bounds built on it.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

import networkx as nx

import pmwtools
from pmwtools.cnf_core import (Cnf, Literal, LiteralSet, ModelSet, count_models, enumerate_models,
                               independent_no_common_neighbor_subset, phi_of_graph, primal_graph)
from pmwtools.core_graphs import max_degree
from pmwtools.errors import PreconditionError, check_cap
from pmwtools.reports import CheckReport


@dataclass
class ScdtNode:
    node_id: int
    assignment: LiteralSet
    model_count: int
    depth: int
    parent: Optional[int] = None
    var: Optional[int] = None
    children: Dict[bool, int] = field(default_factory=dict)

    @property
    def is_leaf(self) -> bool:
        return self.var is None


class Scdt:
    """
    A solution-counting decision tree.

    Nodes live in a list indexed by id (root 0); edges are kept in a networkx
    DiGraph with 'literal' and 'weight' attributes. graph is the graph whose
    phi the tree counts, or None for an arbitrary CNF.
    """

    def __init__(self, variables: Iterable[int], order: Sequence[int], graph: Optional[nx.Graph] = None):
        self.variables = frozenset(variables)
        self.order = tuple(order)
        self.graph = graph
        self.nodes: List[ScdtNode] = []
        self.tree = nx.DiGraph()
        self.root = 0
        self._forced_cache: Dict[int, FrozenSet[int]] = {}
        self._family_memo: Dict[Tuple[int, FrozenSet[int]], Fraction] = {}

    def __repr__(self) -> str:
        return f"Scdt(vars={len(self.variables)}, models={self.num_models}, nodes={len(self.nodes)})"

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def num_models(self) -> int:
        return self.nodes[self.root].model_count if self.nodes else 0

    def add_node(self, assignment: LiteralSet, model_count: int, depth: int, parent: Optional[int]) -> int:
        node_id = len(self.nodes)
        self.nodes.append(ScdtNode(node_id, assignment, model_count, depth, parent))
        self.tree.add_node(node_id)
        return node_id

    def add_edge(self, parent: int, child: int, literal: Literal) -> None:
        weight = Fraction(self.nodes[child].model_count, self.nodes[parent].model_count)
        self.nodes[parent].children[literal.positive] = child
        self.tree.add_edge(parent, child, literal=literal, weight=weight)

    def weight(self, u: int, v: int) -> Fraction:
        return self.tree.edges[u, v]["weight"]

    def literal(self, u: int, v: int) -> Literal:
        return self.tree.edges[u, v]["literal"]

    def leaves(self) -> List[int]:
        return [node.node_id for node in self.nodes if node.is_leaf]

    def edges(self) -> Iterator[Tuple[int, int, Literal, Fraction]]:
        """Edges in node-id order as (parent, child, literal, weight)."""
        for u, v in sorted(self.tree.edges):
            data = self.tree.edges[u, v]
            yield u, v, data["literal"], data["weight"]

    def require_graph(self) -> nx.Graph:
        if self.graph is None:
            raise PreconditionError("Forcing bookkeeping needs the graph whose phi the tree counts",
                                    clause="graph")
        return self.graph


# -----------------------------
# Construction
# -----------------------------
def build_scdt(F: Union[Cnf, ModelSet], order: Optional[Sequence[int]] = None, graph: Optional[nx.Graph] = None,
               cap: Optional[int] = None, logger=None) -> Scdt:
    """
    Build the full SCDT of F branching in the given variable order.

    Args:
        F: A CNF or an explicit model set.
        order: A permutation of Var(F); ascending variable id when omitted.
        graph: The graph G with F contained in phi(G). Derived from the CNF
            when F is a monotone 2-CNF; required for forcing-based checks.
        cap: Largest number of variables accepted.
        logger: Optional logger.

    Returns:
        The tree, with one leaf per model of F.
    """
    if logger is None:
        logger = logging.getLogger("scdt")
    if cap is None:
        cap = pmwtools.DEFAULT_SCDT_VAR_CAP

    if isinstance(F, Cnf):
        check_cap("scdt-variable", cap, F.num_vars)
        if graph is None and F.is_monotone_2cnf():
            graph = primal_graph(F)
        models = enumerate_models(F)
    else:
        check_cap("scdt-variable", cap, len(F.variables))
        models = F
    if len(models) == 0:
        raise PreconditionError("Cannot build a decision tree for an unsatisfiable function", clause="satisfiable")

    order = tuple(sorted(models.variables)) if order is None else tuple(order)
    if len(order) != len(models.variables) or set(order) != models.variables:
        raise PreconditionError("Order must be a permutation of the function's variables", clause="order")

    t = Scdt(models.variables, order, graph)
    _grow(t, list(models), LiteralSet(), 0, None)
    logger.debug(f"Built {t} for order {order}")
    return t


def _grow(t: Scdt, models: List[LiteralSet], assignment: LiteralSet, depth: int, parent: Optional[int]) -> int:
    node_id = t.add_node(assignment, len(models), depth, parent)
    if depth == len(t.order):
        return node_id
    var = t.order[depth]
    t.nodes[node_id].var = var
    for positive in (True, False):
        part = [m for m in models if m.value(var) == positive]
        if part:
            literal = Literal(var, positive)
            child = _grow(t, part, assignment | LiteralSet([literal]), depth + 1, node_id)
            t.add_edge(node_id, child, literal)
    return node_id


# -----------------------------
# Paths and weights
# -----------------------------
def root_leaf_paths(t: Scdt, u: Optional[int] = None) -> Iterator[List[int]]:
    """Every path from u (default the root) down to a leaf, as node lists, positive branch first."""
    start = t.root if u is None else u
    stack = [[start]]
    while stack:
        path = stack.pop()
        node = t.nodes[path[-1]]
        if node.is_leaf:
            yield path
            continue
        for positive in (False, True):
            child = node.children.get(positive)
            if child is not None:
                stack.append(path + [child])


def path_weight(t: Scdt, path: Sequence[int]) -> Fraction:
    """Product of the edge weights along path."""
    weight = Fraction(1)
    for u, v in zip(path, path[1:]):
        if not t.tree.has_edge(u, v):
            raise PreconditionError(f"({u}, {v}) is not an edge of the tree", clause="path")
        weight *= t.weight(u, v)
    return weight


def path_literals(t: Scdt, path: Sequence[int]) -> LiteralSet:
    return LiteralSet(t.literal(u, v) for u, v in zip(path, path[1:]))


def forced_positive(G: nx.Graph, assignment: LiteralSet) -> FrozenSet[int]:
    """Unassigned variables with a neighbour that occurs negatively in assignment."""
    forced = set()
    for x in assignment.negative_vars():
        forced.update(y for y in G.neighbors(x) if assignment.value(y) is None)
    return frozenset(forced)


def free_neighbors(G: nx.Graph, assignment: LiteralSet, x: int) -> FrozenSet[int]:
    """N^u(x): neighbours of x that are neither assigned nor forced by assignment."""
    forced = forced_positive(G, assignment)
    return frozenset(y for y in G.neighbors(x) if assignment.value(y) is None and y not in forced)


def node_forced(t: Scdt, u: int) -> FrozenSet[int]:
    cached = t._forced_cache.get(u)
    if cached is None:
        cached = forced_positive(t.require_graph(), t.nodes[u].assignment)
        t._forced_cache[u] = cached
    return cached


def node_free_neighbors(t: Scdt, u: int, x: int) -> FrozenSet[int]:
    G = t.require_graph()
    assignment = t.nodes[u].assignment
    forced = node_forced(t, u)
    return frozenset(y for y in G.neighbors(x) if assignment.value(y) is None and y not in forced)


def c_d(d: int) -> Fraction:
    """1 - 2^-(2d+1)."""
    if d < 0:
        raise PreconditionError(f"Degree must be non-negative, got {d}", clause="degree")
    return 1 - Fraction(1, 2 ** (2 * d + 1))


def alpha(t: Scdt, u: int, S: Iterable[int]) -> Fraction:
    """Product over x in S of c_{|N^u(x)|}."""
    result = Fraction(1)
    for x in S:
        result *= c_d(len(node_free_neighbors(t, u, x)))
    return result


def _log2_inverse_c(d: int) -> float:
    return (2 * d + 1) - math.log2(2 ** (2 * d + 1) - 1)


def b_d(d: int) -> float:
    """(d+1) / log2(1/c_d), the reading under which b_d > 1."""
    return (d + 1) / _log2_inverse_c(d)


def b_d_literal(d: int) -> float:
    """log2(1/c_d) / (d+1), the literal reading of 2^b_d = (1/c_d)^(1/(d+1))."""
    return _log2_inverse_c(d) / (d + 1)


def weight_of_path_family(t: Scdt, u: int, S: Iterable[int], method: str = "direct") -> Fraction:
    """
    Total weight of the paths from u to a leaf whose literals contain S positively.

    Args:
        t: The tree.
        u: Start node.
        S: Variables required positive.
        method: 'direct' sums explicit paths; 'recursive' uses the structural
            case split on the label of each node (memoized per tree).

    Returns:
        The exact weight; zero when some element of S is already assigned at u.
    """
    S = frozenset(S)
    if not 0 <= u < len(t.nodes):
        raise PreconditionError(f"Node {u} is not in the tree", clause="node")
    assignment = t.nodes[u].assignment
    if any(assignment.value(x) is not None for x in S):
        return Fraction(0)
    if method == "direct":
        return _family_direct(t, u, S)
    if method == "recursive":
        return _family_recursive(t, u, S)
    raise PreconditionError(f"Unknown method {method!r}", clause="method")


def _family_direct(t: Scdt, u: int, S: FrozenSet[int]) -> Fraction:
    total = Fraction(0)
    stack = [(u, Fraction(1), 0)]
    while stack:
        node_id, weight, hits = stack.pop()
        node = t.nodes[node_id]
        if node.is_leaf:
            if hits == len(S):
                total += weight
            continue
        for positive, child in node.children.items():
            if node.var in S and not positive:
                continue
            gained = 1 if positive and node.var in S else 0
            stack.append((child, weight * t.weight(node_id, child), hits + gained))
    return total


def _family_recursive(t: Scdt, u: int, S: FrozenSet[int]) -> Fraction:
    key = (u, S)
    cached = t._family_memo.get(key)
    if cached is not None:
        return cached

    node = t.nodes[u]
    vp = node.children.get(True)
    vn = node.children.get(False)
    if node.is_leaf:
        value = Fraction(1) if not S else Fraction(0)
    elif node.var in S:
        value = t.weight(u, vp) * _family_recursive(t, vp, S - {node.var}) if vp is not None else Fraction(0)
    elif vp is None or vn is None:
        child = vp if vp is not None else vn
        value = t.weight(u, child) * _family_recursive(t, child, S)
    else:
        p = t.weight(u, vp)
        # under the negative literal every neighbour of the label is forced true
        rest = S - set(t.graph.neighbors(node.var)) if t.graph is not None else S
        value = p * _family_recursive(t, vp, S) + (1 - p) * _family_recursive(t, vn, rest)

    t._family_memo[key] = value
    return value


# -----------------------------
# Exact checks
# -----------------------------
def verify_correctcount(t: Scdt, instance: str = "") -> CheckReport:
    """Every root-leaf path has weight 1/|F| and the weights leaving every node sum to 1."""
    report = CheckReport("correctcount")
    tally = report.tally(instance)
    target = Fraction(1, t.num_models)
    leaves = 0
    for path in root_leaf_paths(t):
        leaves += 1
        w = path_weight(t, path)
        tally.check("path_weight", w == target, w, target, f"path {path}")
    tally.check("leaf_count", leaves == t.num_models, leaves, t.num_models)
    for node in t.nodes:
        if node.is_leaf:
            continue
        total = sum((t.weight(node.node_id, c) for c in node.children.values()), Fraction(0))
        tally.check("weight_sum", total == 1, total, 1, f"node {node.node_id}")
    return tally.close()


def verify_largeportion_treeweights(t: Scdt, instance: str = "") -> CheckReport:
    """
    Branch weights at every internal node whose label is not forced.

    positive in [1/2, 1 - (1/2)^(|N^u(x)|+1)] and negative in [(1/2)^(|N^u(x)|+1), 1/2].
    """
    report = CheckReport("largeportion_treeweights")
    tally = report.tally(instance)
    for node in t.nodes:
        if node.is_leaf or node.var in node_forced(t, node.node_id):
            continue
        vp = node.children.get(True)
        vn = node.children.get(False)
        if not tally.check("unforced_branches", vp is not None and vn is not None, len(node.children), 2,
                           f"node {node.node_id} label {node.var}"):
            continue
        low = Fraction(1, 2 ** (len(node_free_neighbors(t, node.node_id, node.var)) + 1))
        p = t.weight(node.node_id, vp)
        q = t.weight(node.node_id, vn)
        tally.check("positive_weight", Fraction(1, 2) <= p <= 1 - low, p, f"[1/2, {1 - low}]",
                    f"node {node.node_id}")
        tally.check("negative_weight", low <= q <= Fraction(1, 2), q, f"[{low}, 1/2]", f"node {node.node_id}")
    return tally.close()


class MaintreeResult(NamedTuple):
    lhs: Fraction
    rhs: Fraction
    passed: bool
    gap: Fraction


def hypothesis_problems(t: Scdt, u: int, S: Iterable[int], strict: bool = True) -> List[str]:
    """Reasons S is not admissible at u; empty when it is."""
    G = t.require_graph()
    S = sorted(set(S))
    problems = []
    stray = [x for x in S if x not in t.variables]
    if stray:
        problems.append(f"{stray} are not variables")
        return problems
    for a, b in combinations(S, 2):
        if G.has_edge(a, b):
            problems.append(f"{a} and {b} are adjacent")
        elif strict and set(G.neighbors(a)) & set(G.neighbors(b)):
            problems.append(f"{a} and {b} have a common neighbour")
    forced = node_forced(t, u)
    problems.extend(f"{x} is forced at node {u}" for x in S if x in forced)
    return problems


def verify_maintree(t: Scdt, u: int, S: Iterable[int], strict: bool = True) -> MaintreeResult:
    """Check weight(P^u(S)) <= alpha^u(S) exactly, raising PreconditionError if S is not admissible."""
    S = frozenset(S)
    problems = hypothesis_problems(t, u, S, strict)
    if problems:
        raise PreconditionError(f"S={sorted(S)} violates the hypothesis at node {u}: {'; '.join(problems)}",
                                clause="maintree_hypothesis", witness=problems)
    lhs = weight_of_path_family(t, u, S, method="recursive")
    rhs = alpha(t, u, S)
    return MaintreeResult(lhs, rhs, lhs <= rhs, rhs - lhs)


def admissible_subsets(t: Scdt, u: int, max_size: int, strict: bool = True) -> Iterator[FrozenSet[int]]:
    """Subsets of the unassigned, unforced variables at u of size <= max_size that satisfy the hypothesis."""
    G = t.require_graph()
    assignment = t.nodes[u].assignment
    forced = node_forced(t, u)
    candidates = sorted(v for v in t.variables if assignment.value(v) is None and v not in forced)
    for size in range(max_size + 1):
        for S in combinations(candidates, size):
            ok = True
            for a, b in combinations(S, 2):
                if G.has_edge(a, b) or (strict and set(G.neighbors(a)) & set(G.neighbors(b))):
                    ok = False
                    break
            if ok:
                yield frozenset(S)


def sweep_maintree(t: Scdt, max_size: int = 3, strict: bool = True, cross_check: bool = True,
                   instance: str = "") -> CheckReport:
    """
    Check the path-family bound for every node and every admissible S.

    With cross_check the recursive weight is also compared to the direct sum.
    """
    check = "maintree" if strict else "maintree_lax"
    report = CheckReport(check)
    tally = report.tally(instance)
    for node in t.nodes:
        for S in admissible_subsets(t, node.node_id, max_size, strict):
            result = verify_maintree(t, node.node_id, S, strict)
            detail = f"node {node.node_id} S={sorted(S)}"
            tally.check(check, result.passed, result.lhs, result.rhs, detail)
            if cross_check:
                direct = weight_of_path_family(t, node.node_id, S, method="direct")
                tally.check("family_recursion", direct == result.lhs, result.lhs, direct, detail)
    return tally.close()


def sweep_supporting_bounds(t: Scdt, max_size: int = 3, instance: str = "") -> CheckReport:
    """
    Instance checks of the three inequalities the path-family bound is assembled from.

    decreasing_alpha: alpha^v(S) <= alpha^u(S) along every tree edge.
    direct_weight: p * alpha^vp(S - {x}) <= alpha^u(S) when the label x is in S.
    neighbour_weight: p * alpha^vp(S) + (1-p) * alpha^vn(S - {y}) <= alpha^u(S)
        when the label is a neighbour of y in S.
    """
    G = t.require_graph()
    report = CheckReport("supporting_bounds")
    tally = report.tally(instance)
    for node in t.nodes:
        u = node.node_id
        for S in admissible_subsets(t, u, max_size, strict=True):
            a_u = alpha(t, u, S)
            for child in node.children.values():
                a_v = alpha(t, child, S)
                tally.check("decreasing_alpha", a_v <= a_u, a_v, a_u, f"edge {u}->{child} S={sorted(S)}")
            if node.is_leaf or node.var in node_forced(t, u):
                continue
            vp = node.children.get(True)
            vn = node.children.get(False)
            x = node.var
            if x in S and vp is not None:
                lhs = t.weight(u, vp) * alpha(t, vp, S - {x})
                tally.check("direct_weight", lhs <= a_u, lhs, a_u, f"node {u} S={sorted(S)}")
            if x not in S and vp is not None and vn is not None:
                p = t.weight(u, vp)
                for y in sorted(S & set(G.neighbors(x))):
                    lhs = p * alpha(t, vp, S) + (1 - p) * alpha(t, vn, S - {y})
                    tally.check("neighbour_weight", lhs <= a_u, lhs, a_u, f"node {u} S={sorted(S)} y={y}")
    return tally.close()


# -----------------------------
# Counting bound on whole graphs
# -----------------------------
@dataclass
class ManyVarsReport:
    """Exact comparison of |phi(G) <- U| against |phi(G)| / 2^(|U|/b_d)."""
    num_vars: int
    max_degree: int
    size_u: int
    count_phi: int
    count_arrow: int
    holds: bool
    slack: float
    b_d: float
    literal_b_d: float
    literal_holds: bool
    proof_route: Dict[str, Dict[str, object]] = field(default_factory=dict)

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.count_arrow, self.count_phi)


def verify_manyvars1(G: nx.Graph, U: Iterable[int], cap: Optional[int] = None, logger=None) -> ManyVarsReport:
    """
    Count phi(G) and phi(G) <- U exhaustively and compare with the degree-based bound.

    The bound holds iff ratio^(d+1) <= c_d^|U|, which is checked exactly. The
    proof route through an independent subset S of U is checked for both
    subset modes as |phi <- S| / |phi| <= c_d^|S|.

    Args:
        G: Graph without isolated vertices.
        U: Vertices required positive.
        cap: Model-count cap on |V(G)|.
        logger: Optional logger.

    Returns:
        A ManyVarsReport with exact counts and the log2 slack.
    """
    if logger is None:
        logger = logging.getLogger("scdt")
    U = frozenset(U)
    missing = sorted(U - set(G.nodes))
    if missing:
        raise PreconditionError(f"Vertices {missing} are not in the graph", clause="subset")
    phi = phi_of_graph(G)
    d = max_degree(G)
    c = c_d(d)
    count_phi = count_models(phi, cap=cap)
    count_arrow = count_models(phi, LiteralSet.positive(U), cap=cap)
    ratio = Fraction(count_arrow, count_phi)

    holds = ratio ** (d + 1) <= c ** len(U)
    gap_bits = math.log2(count_phi) - math.log2(count_arrow)
    slack = gap_bits - len(U) / b_d(d)
    literal_holds = gap_bits >= len(U) / b_d_literal(d)

    route = {}
    for mode, strict in (("independent", False), ("no_common_neighbor", True)):
        S = independent_no_common_neighbor_subset(G, U, strict=strict)
        count_s = count_models(phi, LiteralSet.positive(S), cap=cap)
        ratio_s = Fraction(count_s, count_phi)
        route[mode] = {
            "size_s": len(S),
            "ratio_s": ratio_s,
            "bound": c ** len(S),
            "holds": ratio_s <= c ** len(S),
        }

    logger.debug(f"manyvars1 n={G.number_of_nodes()} d={d} |U|={len(U)}: ratio={ratio} holds={holds} "
                 f"slack={slack:.4f}")
    return ManyVarsReport(G.number_of_nodes(), d, len(U), count_phi, count_arrow, holds, slack,
                          b_d(d), b_d_literal(d), literal_holds, route)
