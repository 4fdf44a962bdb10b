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
tests/test_scdt.py

Tests for solution-counting decision trees and the exact weight bounds on them.
"""

from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pmwtools.cnf_core import ModelSet, count_models, phi_of_graph, random_cnf
from pmwtools.errors import CapExceededError, PreconditionError
from pmwtools.scdt import (
    alpha,
    b_d,
    b_d_literal,
    build_scdt,
    c_d,
    forced_positive,
    free_neighbors,
    path_literals,
    path_weight,
    root_leaf_paths,
    sweep_maintree,
    sweep_supporting_bounds,
    verify_correctcount,
    verify_largeportion_treeweights,
    verify_maintree,
    verify_manyvars1,
    weight_of_path_family,
)
from tests.common import assignment, path3, single_edge


@st.composite
def connected_graphs(draw, max_nodes=5):
    """A random connected graph: a random spanning tree plus extra edges."""
    n = draw(st.integers(min_value=2, max_value=max_nodes))
    G = nx.Graph()
    G.add_nodes_from(range(n))
    for v in range(1, n):
        G.add_edge(v, draw(st.integers(min_value=0, max_value=v - 1)))
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=n))
    G.add_edges_from((u, v) for u, v in extra if u != v)
    return G


def test_edge_tree_weights():
    t = build_scdt(phi_of_graph(single_edge()))
    assert t.num_models == 3
    assert len(t) == 6
    root = t.nodes[t.root]
    assert root.var == 0
    assert t.weight(0, root.children[True]) == Fraction(2, 3)
    assert t.weight(0, root.children[False]) == Fraction(1, 3)
    assert len(t.leaves()) == 3


def test_paths_and_literals():
    t = build_scdt(phi_of_graph(single_edge()))
    paths = list(root_leaf_paths(t))
    assert len(paths) == 3
    literal_sets = {path_literals(t, path) for path in paths}
    assert assignment(x0=False, x1=True) in literal_sets
    assert all(path_weight(t, path) == Fraction(1, 3) for path in paths)
    with pytest.raises(PreconditionError):
        path_weight(t, [0, 0])


def test_build_rejects_bad_order_and_unsat():
    phi = phi_of_graph(path3())
    with pytest.raises(PreconditionError) as excinfo:
        build_scdt(phi, order=[0, 1])
    assert excinfo.value.clause == "order"
    with pytest.raises(PreconditionError):
        build_scdt(ModelSet([0, 1], []))
    with pytest.raises(CapExceededError):
        build_scdt(phi, cap=2)


def test_constants():
    assert c_d(0) == Fraction(1, 2)
    assert c_d(1) == Fraction(7, 8)
    assert c_d(2) == Fraction(31, 32)
    assert b_d(0) == pytest.approx(1.0)
    assert b_d_literal(0) == pytest.approx(1.0)
    assert b_d(3) > 1
    assert b_d(3) * b_d_literal(3) == pytest.approx(1.0)
    with pytest.raises(PreconditionError):
        c_d(-1)


def test_forcing_bookkeeping():
    G = path3()
    assert forced_positive(G, assignment(x1=False)) == frozenset({0, 2})
    assert forced_positive(G, assignment(x1=True)) == frozenset()
    assert free_neighbors(G, assignment(x0=False), 1) == frozenset({2})
    assert free_neighbors(G, assignment(), 1) == frozenset({0, 2})


def test_maintree_on_edge_and_path():
    t = build_scdt(phi_of_graph(single_edge()))
    result = verify_maintree(t, 0, {0})
    assert result.lhs == Fraction(2, 3)
    assert result.rhs == Fraction(7, 8)
    assert result.passed
    t3 = build_scdt(phi_of_graph(path3()))
    result = verify_maintree(t3, 0, {0})
    assert result.lhs == Fraction(3, 5)
    assert result.rhs == Fraction(7, 8)
    assert alpha(t3, 0, {1}) == Fraction(31, 32)


def test_maintree_rejects_adjacent_set():
    t = build_scdt(phi_of_graph(single_edge()))
    with pytest.raises(PreconditionError) as excinfo:
        verify_maintree(t, 0, {0, 1})
    assert excinfo.value.clause == "maintree_hypothesis"


def test_maintree_strict_rejects_common_neighbour():
    t = build_scdt(phi_of_graph(path3()))
    with pytest.raises(PreconditionError):
        verify_maintree(t, 0, {0, 2})
    assert verify_maintree(t, 0, {0, 2}, strict=False).lhs == Fraction(2, 5)


def test_path_family_zero_when_assigned():
    t = build_scdt(phi_of_graph(path3()))
    child = t.nodes[0].children[True]
    assert weight_of_path_family(t, child, {0}) == 0
    with pytest.raises(PreconditionError):
        weight_of_path_family(t, 0, {0}, method="bogus")


def test_manyvars_on_path():
    report = verify_manyvars1(path3(), [0])
    assert report.count_phi == 5
    assert report.count_arrow == 3
    assert report.ratio == Fraction(3, 5)
    assert report.max_degree == 2
    assert report.holds
    assert report.proof_route["no_common_neighbor"]["holds"]
    with pytest.raises(PreconditionError):
        verify_manyvars1(path3(), [9])


@settings(max_examples=40, deadline=None)
@given(connected_graphs(), st.randoms(use_true_random=False))
def test_tree_checks_on_random_graphs(G, random):
    order = sorted(G.nodes)
    random.shuffle(order)
    t = build_scdt(phi_of_graph(G), order, graph=G)
    assert t.num_models == count_models(phi_of_graph(G))
    for report in (verify_correctcount(t), verify_largeportion_treeweights(t),
                   sweep_maintree(t, max_size=3), sweep_supporting_bounds(t, max_size=3)):
        assert report.passed, [str(row.to_dict()) for row in report.failures]


@settings(max_examples=40, deadline=None)
@given(connected_graphs(), st.data())
def test_recursive_family_weight_matches_direct(G, data):
    t = build_scdt(phi_of_graph(G), graph=G)
    u = data.draw(st.integers(min_value=0, max_value=len(t) - 1))
    S = data.draw(st.lists(st.sampled_from(sorted(G.nodes)), unique=True, max_size=3))
    assert weight_of_path_family(t, u, S, "recursive") == weight_of_path_family(t, u, S, "direct")


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=7), st.integers(min_value=1, max_value=10),
       st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_correctcount_on_random_cnfs(num_vars, num_clauses, seed):
    cnf = random_cnf(num_vars, num_clauses, np.random.default_rng(seed))
    if count_models(cnf) == 0:
        return
    t = build_scdt(cnf, order=list(reversed(range(num_vars))))
    assert verify_correctcount(t).passed


@settings(max_examples=30, deadline=None)
@given(connected_graphs(max_nodes=8), st.data())
def test_manyvars_bound_on_random_graphs(G, data):
    U = data.draw(st.lists(st.sampled_from(sorted(G.nodes)), unique=True))
    report = verify_manyvars1(G, U)
    assert report.holds
    assert report.slack >= -1e-9
    assert report.proof_route["no_common_neighbor"]["holds"]


def test_every_root_leaf_path_is_a_model():
    G = nx.cycle_graph(4)
    phi = phi_of_graph(G)
    t = build_scdt(phi)
    seen = set()
    for path in root_leaf_paths(t):
        literals = path_literals(t, path)
        assert phi.satisfied_by(literals)
        seen.add(literals)
    assert len(seen) == count_models(phi) == 7
