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
tests/test_constructive.py

Tests for the constructive witnessing matchings on G_k instances.
"""

from unittest import mock

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pmwtools.constructive import (
    matching_from_role_path,
    matching_goodpart1,
    matching_goodpart3,
    minimal_largest_subtree_sequence,
    mwmain_bound,
    mwmain_witness,
    perfpart_witness,
)
from pmwtools.core_graphs import (RolePartition, TernaryTree, build_gk_instance, build_product_graph, occupied_set,
                                  tr)
from pmwtools.definition_checks import (
    in_out_problems,
    matching_problems,
    role_crossing_problems,
    witnessing_problems,
)
from pmwtools.errors import PreconditionError

P_GRANULARITY = 2


@pytest.fixture(scope="module")
def g8_h1():
    return build_gk_instance(8, 1)


@pytest.fixture(scope="module")
def g8_h2():
    return build_gk_instance(8, 2)


def test_role_path_takes_first_role_change(g8_h1):
    P = g8_h1
    R = RolePartition(v1=P.copy_vertices(1))
    M = matching_from_role_path(P, 1, 2, range(P.p), R)
    assert M == frozenset((i, 4 + i) for i in range(4))
    assert not matching_problems(P.graph, M)


def test_role_path_needs_different_end_roles(g8_h1):
    P = g8_h1
    R = RolePartition(v1=P.copy_vertices(1))
    with pytest.raises(PreconditionError) as excinfo:
        matching_from_role_path(P, 2, 3, [0], R)
    assert excinfo.value.clause == "role_differs"


def test_goodpart3_on_fully_occupied_tree(g8_h1):
    P = g8_h1
    V = sorted(P.graph.nodes)
    V1, V2 = V[:8], V[8:]
    M = matching_goodpart3(P, V, V1, V2, P_GRANULARITY)
    assert len(M) >= P_GRANULARITY
    assert not matching_problems(P.graph, M)
    assert not role_crossing_problems(V1, V2, M)


def test_goodpart3_rejects_unbalanced_split(g8_h1):
    P = g8_h1
    V = sorted(P.graph.nodes)
    with pytest.raises(PreconditionError) as excinfo:
        matching_goodpart3(P, V, V[:15], V[15:], P_GRANULARITY)
    assert excinfo.value.clause == "balanced"


def test_goodpart3_rejects_small_pattern():
    P = build_product_graph(TernaryTree(1), nx.path_graph(3))
    V = sorted(P.graph.nodes)
    with pytest.raises(PreconditionError) as excinfo:
        matching_goodpart3(P, V, V[:6], V[6:], P_GRANULARITY)
    assert excinfo.value.clause == "pattern_size"


def test_goodpart1_partial_copies(g8_h1):
    P = g8_h1
    V = [P.vertex_id(0, 0), P.vertex_id(1, 0)]
    M = matching_goodpart1(P, V, P_GRANULARITY)
    assert M == frozenset({(0, 1), (4, 5)})
    assert not in_out_problems(V, M)


def test_goodpart1_complete_copy_walks_to_empty_node(g8_h1):
    P = g8_h1
    V = list(P.copy_vertices(1))
    M = matching_goodpart1(P, V, 1)
    assert len(M) == P.p
    assert not in_out_problems(V, M)
    assert not matching_problems(P.graph, M)


def test_goodpart1_needs_enough_occupied_nodes(g8_h1):
    P = g8_h1
    with pytest.raises(PreconditionError) as excinfo:
        matching_goodpart1(P, list(P.copy_vertices(1)), P_GRANULARITY)
    assert excinfo.value.clause == "occupancy"


def test_perfpart_height_one(g8_h1):
    P = g8_h1
    V = sorted(P.graph.nodes)
    W = perfpart_witness(P, V, V, P_GRANULARITY)
    assert W.split == 8
    assert W.size >= P_GRANULARITY
    assert not witnessing_problems(P.graph, V, W.order, W.split, W.matching)


def test_perfpart_requires_full_occupancy(g8_h1):
    P = g8_h1
    V = list(range(12))
    with pytest.raises(PreconditionError) as excinfo:
        perfpart_witness(P, V, V, P_GRANULARITY)
    assert excinfo.value.clause == "full_occupancy"


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_perfpart_height_two_random_orders(seed):
    P = build_gk_instance(8, 2)
    V = sorted(P.graph.nodes)
    SV = [int(v) for v in np.random.default_rng(seed).permutation(V)]
    W = perfpart_witness(P, V, SV, P_GRANULARITY)
    assert W.size >= 2 * P_GRANULARITY
    assert not witnessing_problems(P.graph, V, W.order, W.split, W.matching)


def test_subtree_sequence_descends_to_largest_child(g8_h2):
    P = g8_h2
    seq = minimal_largest_subtree_sequence(P, P.graph.nodes, P_GRANULARITY)
    assert seq.roots == (0, 1)
    assert seq.occupied_sizes == (13, 4)
    assert seq.q == 2
    assert seq.vertex_sets[-1] == P.region_vertices(P.tree.subtree_nodes(1))


def test_subtree_sequence_needs_more_than_p_nodes(g8_h1):
    P = g8_h1
    with pytest.raises(PreconditionError):
        minimal_largest_subtree_sequence(P, list(P.copy_vertices(0)), P_GRANULARITY)


def test_mwmain_small_tree_gives_empty_matching(g8_h1):
    P = g8_h1
    V = sorted(P.graph.nodes)
    W = mwmain_witness(P, V, V, P_GRANULARITY)
    assert mwmain_bound(P, V, P_GRANULARITY) == 0
    assert W.size == 0


def test_mwmain_full_tree_meets_bound(g8_h2):
    P = g8_h2
    V = sorted(P.graph.nodes)
    W = mwmain_witness(P, V, V, P_GRANULARITY)
    assert mwmain_bound(P, V, P_GRANULARITY) == P_GRANULARITY
    assert W.size >= P_GRANULARITY
    assert not witnessing_problems(P.graph, V, W.order, W.split, W.matching)


def test_mwmain_rejects_too_few_occupied_nodes(g8_h1):
    P = g8_h1
    with pytest.raises(PreconditionError) as excinfo:
        mwmain_witness(P, [0], [0], P_GRANULARITY)
    assert excinfo.value.clause == "occupancy"


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1), st.floats(min_value=0.05, max_value=1.0))
def test_mwmain_random_subsets_height_three(seed, density):
    P = build_gk_instance(8, 3)
    rng = np.random.default_rng(seed)
    V = [v for v in sorted(P.graph.nodes) if rng.random() < density]
    if len(occupied_set(P, V).occupied) < P_GRANULARITY:
        V = sorted(P.graph.nodes)
    SV = [int(v) for v in rng.permutation(V)]
    W = mwmain_witness(P, V, SV, P_GRANULARITY)
    assert W.size >= mwmain_bound(P, V, P_GRANULARITY)
    assert not witnessing_problems(P.graph, V, W.order, W.split, W.matching)


@pytest.fixture(scope="module")
def height_five():
    return {k: build_gk_instance(k, 5) for k in (4, 8)}


def partial_vertex_set(P, seed):
    """Occupy most but not all tree nodes, each with a random non-empty part of its copy."""
    rng = np.random.default_rng(seed)
    density = rng.uniform(0.5, 0.9)
    V = []
    for node in range(P.tree.num_nodes - 1):
        if rng.random() < density:
            copy = list(P.copy_vertices(node))
            V.extend([v for v in copy if rng.random() < 0.5] or [copy[0]])
    return V, rng


@pytest.mark.parametrize("k", [4, 8])
@pytest.mark.parametrize("seed", range(10))
def test_mwmain_recursion_on_height_five(height_five, k, seed):
    P = height_five[k]
    p = k // 4
    V, rng = partial_vertex_set(P, seed)
    occupied = occupied_set(P, V).occupied
    assert tr(len(occupied)) - tr(p) >= 4
    assert occupied != frozenset(range(P.tree.num_nodes))
    SV = [int(v) for v in rng.permutation(V)]
    with mock.patch("pmwtools.constructive.minimal_largest_subtree_sequence",
                    wraps=minimal_largest_subtree_sequence) as sequence:
        W = mwmain_witness(P, V, SV, p)
    assert sequence.called
    assert W.size >= mwmain_bound(P, V, p) > 0
    assert not witnessing_problems(P.graph, V, W.order, W.split, W.matching)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1), st.sampled_from([3, 4, 5]), st.sampled_from([1, 2]))
def test_subtree_sequence_keeps_a_third_and_leaves_room(seed, height, p):
    P = build_gk_instance(8, height)
    V, _ = partial_vertex_set(P, seed)
    occupied = occupied_set(P, V).occupied
    if len(occupied) <= p:
        return
    seq = minimal_largest_subtree_sequence(P, V, p)
    sizes = seq.occupied_sizes
    assert sizes[0] == len(occupied)
    assert sizes[0] - sizes[-1] >= p
    assert all(sizes[0] - size < p for size in sizes[:-1])
    assert 3 * sizes[-1] >= sizes[0] - p
    rest = frozenset(range(P.tree.num_nodes)) - P.tree.subtree_nodes(seq.last_root)
    assert rest
    if occupied != frozenset(range(P.tree.num_nodes)):
        assert not rest <= occupied
