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
definition_checks.py

Definition-level checkers that share no code with the constructions they check.
Each returns a list of human-readable problems; an empty list means the object
satisfies the definition.
"""

from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

import networkx as nx

from pmwtools.errors import check_cap

DEFINITION_CAP = 8


def matching_problems(G: nx.Graph, pairs: Iterable[Tuple[int, int]]) -> List[str]:
    """Every pair is an edge of G and no vertex is used twice."""
    problems = []
    seen = {}
    for u, v in pairs:
        if not G.has_edge(u, v):
            problems.append(f"({u}, {v}) is not an edge")
        for x in (u, v):
            if x in seen:
                problems.append(f"vertex {x} used by ({u}, {v}) and {seen[x]}")
            seen[x] = (u, v)
    return problems


def witnessing_problems(G: nx.Graph, V: Iterable[int], order: Sequence[int], split: int,
                        pairs: Iterable[Tuple[int, int]]) -> List[str]:
    """The matching is valid and every edge is supported by order[:split] / order[split:]."""
    pairs = list(pairs)
    V = set(V)
    problems = matching_problems(G, pairs)
    if sorted(order) != sorted(V) or len(set(order)) != len(order):
        problems.append("order is not a permutation of V")
    first = set(order[:split])
    second = set(order[split:])
    for u, v in pairs:
        crosses = (u in first and v in second) or (u in second and v in first)
        leaves = (u in V and v not in V) or (v in V and u not in V)
        if not (crosses or leaves):
            problems.append(f"({u}, {v}) is not supported by split {split}")
    return problems


def role_crossing_problems(v1: Iterable[int], v2: Iterable[int], pairs: Iterable[Tuple[int, int]]) -> List[str]:
    """Both ends of every edge have different roles (V1, V2, or neither)."""
    v1, v2 = set(v1), set(v2)

    def role(x):
        return 1 if x in v1 else 2 if x in v2 else 0

    return [f"({u}, {v}) joins two vertices of role {role(u)}" for u, v in pairs if role(u) == role(v)]


def in_out_problems(V: Iterable[int], pairs: Iterable[Tuple[int, int]]) -> List[str]:
    """Every edge has exactly one end in V."""
    V = set(V)
    return [f"({u}, {v}) does not leave V" for u, v in pairs if (u in V) == (v in V)]


def _prefix_cut(G: nx.Graph, prefix: FrozenSet[int]) -> int:
    cut = nx.Graph()
    cut.add_edges_from((u, v) for u, v in G.edges if (u in prefix) != (v in prefix))
    return len(nx.max_weight_matching(cut, maxcardinality=True))


def pmw_by_permutations(G: nx.Graph, V: Iterable[int], cap: int = DEFINITION_CAP,
                        cache: Dict[FrozenSet[int], int] = None) -> int:
    """
    Partial matching width straight from the definition.

    Permutations are grown one vertex at a time so that orders sharing a
    prefix share its cut; a branch stops once its worst prefix already reaches
    the best complete permutation. Cut matchings use the general blossom
    matcher on the cut graph.
    """
    V = sorted(set(V))
    check_cap("definition", cap, len(V))
    if cache is None:
        cache = {}

    def cut(prefix: FrozenSet[int]) -> int:
        if prefix not in cache:
            cache[prefix] = _prefix_cut(G, prefix)
        return cache[prefix]

    best: List[int] = []

    def extend(prefix: FrozenSet[int], remaining: Tuple[int, ...], worst: int) -> None:
        if best and worst >= best[0]:
            return
        if not remaining:
            best[:] = [worst]
            return
        for i, v in enumerate(remaining):
            grown = prefix | {v}
            extend(grown, remaining[:i] + remaining[i + 1:], max(worst, cut(grown)))

    extend(frozenset(), tuple(V), cut(frozenset()))
    return best[0]
