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
tests/test_graph_core.py

Tests for ternary trees, product graphs, G_k instances and tree decompositions.
"""

import logging

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from pmwtools.core_graphs import (
    RolePartition,
    TernaryTree,
    TreeDecomposition,
    build_gk_instance,
    build_product_graph,
    gk_tree_decomposition,
    homogeneous_nodes,
    max_degree,
    occupied_set,
    ternary_node_count,
    tr,
    verify_tree_decomposition,
)
from pmwtools.errors import PreconditionError


def test_ternary_node_counts():
    assert [ternary_node_count(h) for h in range(4)] == [1, 4, 13, 40]
    for h in range(4):
        assert TernaryTree(h).num_nodes == ternary_node_count(h)


def test_ternary_tree_numbering():
    T = TernaryTree(2)
    assert T.children(0) == [1, 2, 3]
    assert T.children(1) == [4, 5, 6]
    assert T.children(4) == []
    assert T.parent(5) == 1
    assert T.parent(0) is None
    assert T.depth(12) == 2
    assert T.subtree_height(2) == 1
    assert T.subtree_nodes(3) == frozenset({3, 10, 11, 12})
    assert T.path(4, 7) == [4, 1, 0, 2, 7]


def test_negative_height_rejected():
    with pytest.raises(PreconditionError):
        TernaryTree(-1)


def test_tr_small_values():
    assert tr(1) == 0
    assert tr(3) == 0
    assert tr(4) == 1
    assert tr(12) == 1
    assert tr(13) == 2
    assert tr(40) == 3
    with pytest.raises(PreconditionError):
        tr(0)


@given(st.integers(min_value=1, max_value=5000))
def test_tr_is_largest_fitting_height(x):
    h = tr(x)
    assert ternary_node_count(h) <= x
    assert ternary_node_count(h + 1) > x


def test_product_graph_structure():
    T = TernaryTree(1)
    P = build_product_graph(T, nx.path_graph(3))
    assert P.p == 3
    assert P.graph.number_of_nodes() == 12
    # 4 copies of a path with 2 edges, 3 tree edges with 3 aligned copies each
    assert P.graph.number_of_edges() == 4 * 2 + 3 * 3
    assert P.vertex_id(2, 1) == 7
    assert P.address(7) == (2, 1)
    assert P.graph.has_edge(P.vertex_id(0, 2), P.vertex_id(3, 2))
    assert not P.graph.has_edge(P.vertex_id(1, 0), P.vertex_id(2, 0))
    assert list(P.copy_vertices(1)) == [3, 4, 5]


def test_product_graph_requires_connected_pattern():
    H = nx.Graph()
    H.add_nodes_from([0, 1])
    with pytest.raises(PreconditionError) as excinfo:
        build_product_graph(TernaryTree(0), H)
    assert excinfo.value.clause == "connected_pattern"


def test_gk_instance_sizes():
    P = build_gk_instance(8, 1)
    assert P.p == 4
    assert P.graph.number_of_nodes() == 16
    assert P.graph.number_of_edges() == 24
    assert max_degree(P.graph) == 5


def test_gk_instance_rejects_small_k():
    with pytest.raises(PreconditionError):
        build_gk_instance(3, 1)


def test_gk_instance_warns_on_k_not_multiple_of_four(caplog):
    with caplog.at_level(logging.WARNING):
        P = build_gk_instance(6, 0, logging.getLogger("core_graphs"))
    assert P.p == 2
    assert "not a multiple of 4" in caplog.text


def test_gk_instance_below_eight_is_logged_extension(caplog):
    with caplog.at_level(logging.INFO, logger="core_graphs"):
        P = build_gk_instance(4, 1)
    assert P.p == 2
    assert P.graph.number_of_nodes() == 8
    assert "below the G_k range" in caplog.text
    caplog.clear()
    with caplog.at_level(logging.INFO, logger="core_graphs"):
        build_gk_instance(8, 0)
    assert "below the G_k range" not in caplog.text


def test_occupied_set_and_complete_nodes():
    P = build_gk_instance(8, 1)
    V = list(P.copy_vertices(1)) + [P.vertex_id(2, 0)]
    occ = occupied_set(P, V)
    assert occ.occupied == frozenset({1, 2})
    assert occ.complete == frozenset({1})
    assert occupied_set(P, V, region=[2, 3]).occupied == frozenset({2})


def test_homogeneous_nodes():
    P = build_gk_instance(8, 1)
    R = RolePartition(v1=P.copy_vertices(1), v2=[P.vertex_id(2, 0)])
    homogeneous = homogeneous_nodes(P, R)
    assert 1 in homogeneous
    assert 2 not in homogeneous
    assert {0, 3} <= homogeneous
    with pytest.raises(PreconditionError):
        RolePartition(v1=[1, 2], v2=[2])


@pytest.mark.parametrize("height", [0, 1, 2])
def test_gk_tree_decomposition_is_valid(height):
    P = build_gk_instance(8, height)
    td = gk_tree_decomposition(P)
    report = verify_tree_decomposition(P.graph, td)
    assert report.valid, report.problems
    assert td.width == (3 if height == 0 else 7)


def test_verify_tree_decomposition_reports_uncovered_edge():
    G = nx.path_graph(3)
    tree = nx.Graph()
    tree.add_edge(0, 1)
    td = TreeDecomposition({0: frozenset({0, 1}), 1: frozenset({2})}, tree)
    report = verify_tree_decomposition(G, td)
    assert not report.valid
    assert any("edge (1, 2)" in problem for problem in report.problems)


def test_verify_tree_decomposition_reports_disconnected_bags():
    G = nx.path_graph(2)
    tree = nx.path_graph(3)
    td = TreeDecomposition({0: frozenset({0, 1}), 1: frozenset(), 2: frozenset({0})}, tree)
    report = verify_tree_decomposition(G, td)
    assert not report.valid
    assert any("vertex 0" in problem for problem in report.problems)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2), st.integers(min_value=1, max_value=4))
def test_product_graph_edge_count(height, size):
    T = TernaryTree(height)
    P = build_product_graph(T, nx.path_graph(size))
    assert P.graph.number_of_edges() == T.num_nodes * (size - 1) + (T.num_nodes - 1) * size
