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
constructive.py

Constructive witnessing matchings on product graphs T(H).

Every builder here works on a region of the ternary tree: either the
complete subtree under some node, or such a subtree with one of its own
subtrees cut away. All regions are connected, so the tree path between two
region nodes stays inside the region.

Builders:
- matching_from_role_path: one role-changing edge per H-index along a tree path
- matching_goodpart3: role-crossing matching on a fully occupied region
- matching_goodpart1: V-to-outside matching on a partially occupied region
- perfpart_witness: balanced witnessing matching under full occupancy
- minimal_largest_subtree_sequence: descend into largest subtrees until p nodes are lost
- mwmain_witness: witnessing matching of size p * floor((tr(|OC|) - tr(p)) / 2)
"""

import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Optional, Sequence, Tuple

from pmwtools.core_graphs import ProductGraph, RolePartition, homogeneous_nodes, occupied_set, tr
from pmwtools.errors import PreconditionError, VerificationError
from pmwtools.matching_width import Matching, WitnessingMatching, as_matching


def _region(P: ProductGraph, root: Optional[int], cut: Optional[int] = None) -> FrozenSet[int]:
    root = P.tree.root if root is None else root
    nodes = P.tree.subtree_nodes(root)
    if cut is not None:
        nodes = nodes - P.tree.subtree_nodes(cut)
    return nodes


def _check_pattern(P: ProductGraph, needed: int, p: int) -> None:
    if p < 1:
        raise PreconditionError(f"p must be at least 1, got {p}", clause="p")
    if P.p < needed:
        raise PreconditionError(f"|V(H)| = {P.p} is smaller than {needed}", clause="pattern_size")


def _role_changing_copy_edge(P: ProductGraph, node: int, role) -> Optional[Tuple[int, int]]:
    """An edge of the copy H^node whose ends have different roles, if any."""
    base = node * P.p
    for i, j in P.pattern.edges:
        if role(base + i) != role(base + j):
            return base + i, base + j
    return None


# -----------------------------
# Role paths
# -----------------------------
def matching_from_role_path(P: ProductGraph, u: int, v: int, idxs: Iterable[int], R: RolePartition) -> Matching:
    """
    Walk the tree path u..v once per H-index and take the first role-changing edge.

    Edges for different indices live in different index layers, so they never share an end.
    """
    idxs = sorted(set(idxs))
    path = P.tree.path(u, v)
    edges = []
    for i in idxs:
        column = [P.vertex_id(node, i) for node in path]
        if R.role(column[0]) == R.role(column[-1]):
            raise PreconditionError(f"Index {i} has the same role at tree nodes {u} and {v}",
                                    clause="role_differs", witness=i)
        for a, b in zip(column, column[1:]):
            if R.role(a) != R.role(b):
                edges.append((a, b))
                break
    return as_matching(edges)


# -----------------------------
# Occupancy checks
# -----------------------------
def matching_goodpart3(P: ProductGraph, V: Iterable[int], V1: Iterable[int], V2: Iterable[int], p: int,
                       region: Optional[Iterable[int]] = None) -> Matching:
    """
    Matching of size at least p whose edges join vertices of different roles.

    Args:
        P: Product graph
        V: Vertex set, fully occupying the region
        V1, V2: Partition of V
        p: Target size
        region: Tree nodes to work in (default: the whole tree)

    Returns:
        A matching inside the region's copies, every edge role-crossing
    """
    region = frozenset(range(P.tree.num_nodes)) if region is None else frozenset(region)
    R = RolePartition(V1, V2)
    V = frozenset(V)
    _check_pattern(P, 2 * p, p)
    if R.vertices != V:
        raise PreconditionError("V1 and V2 must partition V", clause="partition")
    if len(region) < p:
        raise PreconditionError(f"Region has {len(region)} nodes, fewer than p={p}", clause="tree_size")
    if occupied_set(P, V, region).occupied != region:
        raise PreconditionError("V must occupy every node of the region", clause="full_occupancy")
    total = len(region) * P.p
    for name, part in (("V1", R.v1), ("V2", R.v2)):
        if len(part) > total - p * p:
            raise PreconditionError(f"|{name}| = {len(part)} exceeds {total} - p^2", clause="balanced")

    homogeneous = homogeneous_nodes(P, R, region)
    mixed = sorted(region - homogeneous)
    if len(mixed) >= p:
        edges = []
        for node in mixed:
            edge = _role_changing_copy_edge(P, node, R.role)
            if edge is None:
                raise VerificationError(f"Non-homogeneous copy {node} has no role-changing edge")
            edges.append(edge)
        return as_matching(edges)

    u = min(homogeneous)
    role_u = R.role(P.vertex_id(u, 0))
    other = 3 - role_u
    for v in sorted(homogeneous):
        if R.role(P.vertex_id(v, 0)) == other:
            return matching_from_role_path(P, u, v, range(P.p), R)

    for w in sorted(region):
        outside = [i for i in range(P.p) if R.role(P.vertex_id(w, i)) != role_u]
        if len(outside) >= p:
            return matching_from_role_path(P, u, w, outside, R)
    raise VerificationError("No copy has p vertices outside the dominant role")


def matching_goodpart1(P: ProductGraph, V: Iterable[int], p: int,
                       region: Optional[Iterable[int]] = None) -> Matching:
    """Matching of size at least p whose edges join V to vertices outside V."""
    region = frozenset(range(P.tree.num_nodes)) if region is None else frozenset(region)
    V = frozenset(V)
    _check_pattern(P, p, p)
    occupancy = occupied_set(P, V, region)
    if len(occupancy.occupied) < p:
        raise PreconditionError(f"Only {len(occupancy.occupied)} occupied nodes, need p={p}", clause="occupancy")
    empty = region - occupancy.occupied
    if not empty:
        raise PreconditionError("Every region node is occupied", clause="unoccupied_node")

    R = RolePartition(V)
    if not occupancy.complete:
        edges = []
        for node in sorted(occupancy.occupied):
            edge = _role_changing_copy_edge(P, node, R.role)
            if edge is None:
                raise VerificationError(f"Incomplete copy {node} has no edge leaving V")
            edges.append(edge)
        return as_matching(edges)
    return matching_from_role_path(P, min(occupancy.complete), min(empty), range(P.p), R)


# -----------------------------
# Witnessing matchings
# -----------------------------
def _filtered(SV: Sequence[int], keep: FrozenSet[int]) -> Tuple[int, ...]:
    return tuple(v for v in SV if v in keep)


def _check_permutation(SV: Sequence[int], V: FrozenSet[int]) -> None:
    if len(SV) != len(V) or set(SV) != V:
        raise PreconditionError("SV must be a permutation of V", clause="permutation")


def perfpart_witness(P: ProductGraph, V: Iterable[int], SV: Sequence[int], p: int,
                     root: Optional[int] = None, logger=None) -> WitnessingMatching:
    """
    Balanced witnessing matching of size at least p * (tr(|T|) - tr(p)) under full occupancy.

    T is the complete subtree under root. Balanced means |V(T(H))| - |SV_i| >= p^2
    for both sides of the split.
    """
    if logger is None:
        logger = logging.getLogger("constructive")
    root = P.tree.root if root is None else root
    region = _region(P, root)
    V = frozenset(V)
    SV = tuple(SV)
    _check_pattern(P, 2 * p, p)
    _check_permutation(SV, V)
    if not V <= P.region_vertices(region):
        raise PreconditionError("V must lie inside the subtree", clause="subset")
    if len(region) < p:
        raise PreconditionError(f"Subtree has {len(region)} nodes, fewer than p={p}", clause="tree_size")
    if occupied_set(P, V, region).occupied != region:
        raise PreconditionError("V must occupy every node of the subtree", clause="full_occupancy")

    height = P.tree.subtree_height(root)
    total = len(region) * P.p

    if height - tr(p) <= 1:
        t = (len(SV) + 1) // 2
        M = matching_goodpart3(P, V, SV[:t], SV[t:], p, region)
        result = WitnessingMatching(M, SV, t)
    else:
        children = P.tree.children(root)
        position = {v: i for i, v in enumerate(SV)}
        parts = []
        for child in children:
            Vc = V & P.region_vertices(P.tree.subtree_nodes(child))
            Wc = perfpart_witness(P, Vc, _filtered(SV, Vc), p, child, logger)
            if Wc.split == 0:
                raise VerificationError(f"Subtree {child} returned an empty prefix")
            parts.append((position[Wc.prefix[-1]], child, Wc))
        parts.sort()
        _, middle, W_mid = parts[1]
        t = parts[1][0] + 1
        star = _region(P, root, cut=middle)
        V_star = V & P.region_vertices(star)
        first = frozenset(SV[:t])
        M_star = matching_goodpart3(P, V_star, V_star & first, V_star - first, p, star)
        result = WitnessingMatching(W_mid.matching | M_star, SV, t)

    bound = p * (height - tr(p))
    if result.size < bound:
        raise VerificationError(f"perfpart matching of size {result.size} below bound {bound}", witness=result)
    for side in (result.prefix, result.suffix):
        if total - len(side) < p * p:
            raise VerificationError(f"Unbalanced split: |side| = {len(side)}, |V(T(H))| = {total}", witness=result)
    logger.debug(f"perfpart root={root} height={height}: size {result.size} >= {bound}, split {result.split}")
    return result


@dataclass(frozen=True)
class SubtreeSequence:
    """Roots of T_1..T_q, their occupancy sizes, and the induced vertex sets V_1..V_q."""
    roots: Tuple[int, ...]
    occupied_sizes: Tuple[int, ...]
    vertex_sets: Tuple[FrozenSet[int], ...]

    @property
    def q(self) -> int:
        return len(self.roots)

    @property
    def last_root(self) -> int:
        return self.roots[-1]


def minimal_largest_subtree_sequence(P: ProductGraph, V: Iterable[int], p: int,
                                     root: Optional[int] = None) -> SubtreeSequence:
    """
    Descend into the most occupied child (lowest index on ties) until at least p
    occupied nodes have been left behind, stopping at the first such subtree.
    """
    root = P.tree.root if root is None else root
    V = frozenset(V) & P.region_vertices(P.tree.subtree_nodes(root))
    occupied = occupied_set(P, V).occupied
    if len(occupied) <= p:
        raise PreconditionError(f"|OC| = {len(occupied)} must exceed p={p}", clause="occupancy")

    roots, sizes, sets = [root], [len(occupied)], [V]
    current = root
    while sizes[0] - sizes[-1] < p:
        children = P.tree.children(current)
        if not children:
            raise VerificationError("Reached a leaf before losing p occupied nodes")
        scores = [len(occupied & P.tree.subtree_nodes(c)) for c in children]
        current = children[scores.index(max(scores))]
        subtree = P.tree.subtree_nodes(current)
        roots.append(current)
        sizes.append(len(occupied & subtree))
        sets.append(sets[-1] & P.region_vertices(subtree))
    return SubtreeSequence(tuple(roots), tuple(sizes), tuple(sets))


def mwmain_witness(P: ProductGraph, V: Iterable[int], SV: Sequence[int], p: int,
                   root: Optional[int] = None, logger=None) -> WitnessingMatching:
    """
    Witnessing matching for SV of size at least p * floor((x - tr(p)) / 2), x = tr(|OC(T, V)|).

    Args:
        P: Product graph T(H) with H connected and |V(H)| >= 2p
        V: Vertex set inside the subtree under root
        SV: Permutation of V
        p: Matching granularity
        root: Root of the complete subtree to work in (default: tree root)
        logger: Optional logger

    Returns:
        WitnessingMatching whose split indexes into SV
    """
    if logger is None:
        logger = logging.getLogger("constructive")
    root = P.tree.root if root is None else root
    region = _region(P, root)
    V = frozenset(V)
    SV = tuple(SV)
    _check_pattern(P, 2 * p, p)
    _check_permutation(SV, V)
    if not V <= P.region_vertices(region):
        raise PreconditionError("V must lie inside the subtree", clause="subset")
    occupancy = occupied_set(P, V, region)
    if len(occupancy.occupied) < p:
        raise PreconditionError(f"|OC| = {len(occupancy.occupied)} is below p={p}", clause="occupancy")

    x = tr(len(occupancy.occupied))
    gap = x - tr(p)
    bound = p * (max(gap, 0) // 2)

    if gap < 2:
        result = WitnessingMatching(frozenset(), SV, 0)
    elif occupancy.occupied == region:
        result = perfpart_witness(P, V, SV, p, root, logger)
    elif gap < 4:
        result = WitnessingMatching(matching_goodpart1(P, V, p, region), SV, 0)
    else:
        sequence = minimal_largest_subtree_sequence(P, V, p, root)
        q_root = sequence.last_root
        V_q = sequence.vertex_sets[-1]
        SV_q = _filtered(SV, V_q)
        W_q = mwmain_witness(P, V_q, SV_q, p, q_root, logger)

        rest = _region(P, root, cut=q_root)
        V_rest = V & P.region_vertices(rest)
        if occupied_set(P, V_rest, rest).occupied == rest:
            raise VerificationError("Region outside the last subtree is fully occupied")
        M_rest = matching_goodpart1(P, V_rest, p, rest)

        if W_q.split == 0:
            t = 0
        else:
            t = SV.index(W_q.prefix[-1]) + 1
        result = WitnessingMatching(W_q.matching | M_rest, SV, t)

    if result.size < bound:
        raise VerificationError(f"mwmain matching of size {result.size} below bound {bound}", witness=result)
    logger.debug(f"mwmain root={root} |OC|={len(occupancy.occupied)} x={x}: size {result.size} >= {bound}")
    return result


def mwmain_bound(P: ProductGraph, V: Iterable[int], p: int, root: Optional[int] = None) -> int:
    """The guaranteed size p * floor((tr(|OC|) - tr(p)) / 2), clamped at 0."""
    region = _region(P, root)
    occupied = occupied_set(P, V, region).occupied
    if not occupied:
        return 0
    return p * (max(tr(len(occupied)) - tr(p), 0) // 2)
