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
tests/test_nrobp.py

Tests for branching program validation, semantics, separation, fixed sets and
the bottleneck analyses.
"""

import dataclasses
import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pmwtools.cnf_core import Literal, LiteralSet, ModelSet, enumerate_models, phi_of_graph
from pmwtools.errors import CapExceededError, PreconditionError
from pmwtools.nrobp import (
    Nrobp,
    block_sizes,
    bottleneck_census,
    build_order_nrobp,
    characteristic_tuple,
    count_paths,
    drop_edge_label,
    enumerate_paths,
    fixed_set,
    function_by_enumeration,
    path_assignment,
    relabel_edge,
    represented_function,
    require_valid,
    sample_paths,
    separates,
    single_bottleneck,
    validate,
)
from tests.common import assignment, single_edge


@pytest.fixture
def edge_program():
    """Order program for phi of a single edge: nodes 0 -> {1, 2} -> 3."""
    return build_order_nrobp(enumerate_models(phi_of_graph(single_edge())))


@st.composite
def graph_and_subfunction(draw, max_nodes=5):
    """A connected graph, a non-empty subset of the models of phi(G) and a variable order."""
    n = draw(st.integers(min_value=2, max_value=max_nodes))
    G = nx.Graph()
    G.add_nodes_from(range(n))
    for v in range(1, n):
        G.add_edge(v, draw(st.integers(min_value=0, max_value=v - 1)))
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=n))
    G.add_edges_from((u, v) for u, v in extra if u != v)
    phi = enumerate_models(phi_of_graph(G))
    keep = draw(st.lists(st.booleans(), min_size=len(phi), max_size=len(phi)))
    models = [m for m, k in zip(phi.models, keep) if k] or [phi.models[-1]]
    order = draw(st.permutations(range(n)))
    return G, ModelSet(phi.variables, models), list(order)


def test_order_program_shape(edge_program):
    Z = edge_program
    assert Z.num_nodes == 4
    assert Z.num_edges == 4
    assert (Z.source, Z.sink) == (0, 3)
    assert validate(Z).valid
    assert count_paths(Z) == 3
    assert [lit for *_, lit in Z.edge_list()] == [
        Literal(0, True), Literal(0, False), Literal(1, True), Literal(1, False), Literal(1, True)]


def test_semantics_agree(edge_program):
    F = enumerate_models(phi_of_graph(single_edge()))
    assert represented_function(edge_program) == F
    assert function_by_enumeration(edge_program) == F


def test_enumeration_order(edge_program):
    paths = list(enumerate_paths(edge_program))
    assert [path_assignment(edge_program, P) for P in paths] == [
        assignment(x0=True, x1=True),
        assignment(x0=True, x1=False),
        assignment(x0=False, x1=True),
    ]


def test_path_cap(edge_program):
    with pytest.raises(CapExceededError):
        represented_function(edge_program, cap=2)
    with pytest.raises(CapExceededError):
        list(enumerate_paths(edge_program, cap=2))


def test_sample_paths_are_paths(edge_program):
    all_paths = set(enumerate_paths(edge_program))
    sampled = sample_paths(edge_program, 20, np.random.default_rng(0))
    assert len(sampled) == 20
    assert set(sampled) <= all_paths


def test_validation_catches_dropped_label(edge_program):
    report = validate(drop_edge_label(edge_program, (0, 1, 0)))
    assert not report.valid
    assert "samevar" in report.clauses()
    # the original program keeps its cached report
    assert validate(edge_program).valid


def test_validation_catches_double_read(edge_program):
    report = validate(relabel_edge(edge_program, (2, 3, 0), Literal(0, True)))
    assert "read_once" in report.clauses()


def test_validation_structure_problems():
    cyclic = Nrobp.from_edges([(0, 1, (0, True)), (1, 0, (1, True))], 0, 1)
    assert validate(cyclic).clauses() == {"acyclic"}
    two_sinks = Nrobp.from_edges([(0, 1, (0, True)), (0, 2, (0, False))], 0, 1)
    assert "sink" in validate(two_sinks).clauses()
    undeclared = Nrobp.from_edges([(0, 1, (5, True))], 0, 1, variables=[0])
    assert validate(undeclared).clauses() == {"labels"}
    with pytest.raises(PreconditionError) as excinfo:
        require_valid(undeclared)
    assert excinfo.value.clause == "labels"


def test_from_edges_collects_variables():
    Z = Nrobp.from_edges([(0, 1, (2, True)), (1, 2), (2, 3, (4, False))], 0, 3)
    assert Z.variables == frozenset({2, 4})
    assert validate(Z).valid
    assert represented_function(Z).models == (assignment(x2=True, x4=False),)


def test_build_order_program_checks_input():
    with pytest.raises(PreconditionError):
        build_order_nrobp(ModelSet([0], []))
    with pytest.raises(PreconditionError):
        build_order_nrobp(ModelSet([0, 1], [assignment(x0=True, x1=True)]), order=[0])


def test_separates(edge_program):
    Z = edge_program
    assert separates(Z, 1, [0], [1])
    assert separates(Z, 1, [1], [0])
    assert not separates(Z, 0, [0], [1])
    with pytest.raises(PreconditionError):
        separates(Z, 99, [0], [1])


def test_fixed_set_takes_unfalsified_end(edge_program):
    G = single_edge()
    assert fixed_set(edge_program, 1, [(0, 1)], G) == frozenset({0})
    assert fixed_set(edge_program, 2, [(0, 1)], G) == frozenset({1})


def test_fixed_set_preconditions(edge_program):
    with pytest.raises(PreconditionError) as excinfo:
        fixed_set(edge_program, 0, [(0, 1)])
    assert excinfo.value.clause == "separation"
    G = nx.Graph()
    G.add_nodes_from([0, 1])
    with pytest.raises(PreconditionError) as excinfo:
        fixed_set(edge_program, 1, [(0, 1)], G)
    assert excinfo.value.clause == "matching"


def test_fixed_set_reports_falsifying_path():
    everything = ModelSet([0, 1], [LiteralSet(dict(zip([0, 1], values)))
                                   for values in itertools.product([False, True], repeat=2)])
    Z = build_order_nrobp(everything)
    with pytest.raises(PreconditionError) as excinfo:
        fixed_set(Z, 1, [(0, 1)])
    assert excinfo.value.clause == "subset_of_phi"
    assert path_assignment(Z, excinfo.value.witness) == assignment(x0=False, x1=False)


def test_block_sizes():
    assert block_sizes(16) == [4, 4, 4, 4]
    assert block_sizes(10) == [4, 6]
    assert block_sizes(1) == [1]
    assert block_sizes(10, 3) == [4, 3, 3]
    assert sum(block_sizes(23)) == 23
    with pytest.raises(PreconditionError):
        block_sizes(4, 5)
    with pytest.raises(PreconditionError):
        block_sizes(0)


def test_single_bottleneck_on_edge(edge_program):
    report = single_bottleneck(edge_program, single_edge())
    assert report.passed
    assert report.model_count == 3
    assert report.cut == frozenset({1, 2})
    assert report.fixed_sets == {1: frozenset({0}), 2: frozenset({1})}
    assert report.shares == {1: 2, 2: 2}


def test_single_bottleneck_requires_matching_variables(edge_program):
    with pytest.raises(PreconditionError) as excinfo:
        single_bottleneck(edge_program, nx.path_graph(3))
    assert excinfo.value.clause == "variables"


def test_characteristic_tuple_on_edge(edge_program):
    G = single_edge()
    P = next(enumerate_paths(edge_program))
    ct = characteristic_tuple(edge_program, G, P, q=1)
    assert ct.components == (1,)
    assert ct.locations == ["within"]
    assert ct.splits == [1]
    assert ct.U == frozenset({0})
    assert ct.edge_multiplicity_holds and ct.cover_holds and ct.seven_holds


def test_census_on_edge(edge_program):
    census = bottleneck_census(edge_program, single_edge())
    assert census.passed
    assert census.exhaustive
    assert census.q == 1
    assert census.tp == 2
    assert census.mu == 2
    assert census.model_count == 3


def test_census_verdict_includes_seven_bound(edge_program):
    census = bottleneck_census(edge_program, single_edge())
    assert census.seven_holds
    weakened = dataclasses.replace(census, seven_holds=False)
    assert weakened.cover_holds
    assert not weakened.passed


def test_census_sampling_when_over_cap(edge_program):
    census = bottleneck_census(edge_program, single_edge(), cap=2, sample=5)
    assert not census.exhaustive
    assert census.extensional_holds
    with pytest.raises(CapExceededError):
        bottleneck_census(edge_program, single_edge(), cap=2)


@settings(max_examples=40, deadline=None)
@given(graph_and_subfunction())
def test_program_analyses_on_subfunctions(case):
    G, F, order = case
    Z = build_order_nrobp(F, order)
    assert validate(Z).valid
    assert represented_function(Z) == F
    single = single_bottleneck(Z, G)
    assert single.passed
    census = bottleneck_census(Z, G)
    assert census.passed
    assert census.tp <= census.mu ** census.q
    for P, a in zip(enumerate_paths(Z), single.path_vertices):
        assert characteristic_tuple(Z, G, P, q=1).components == (a,)
