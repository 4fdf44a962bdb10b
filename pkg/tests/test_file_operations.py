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
tests/test_file_operations.py

Tests for the plain-text readers and writers.
"""

from fractions import Fraction

import pytest

from pmwtools.cnf_core import Cnf, Literal, enumerate_models, phi_of_graph
from pmwtools.core_graphs import build_gk_instance, gk_tree_decomposition, verify_tree_decomposition
from pmwtools.errors import PreconditionError
from pmwtools.file_operations import (
    read_csv,
    read_dimacs,
    read_edge_list,
    read_models,
    read_nrobp,
    read_td,
    read_vertex_list,
    write_csv,
    write_dimacs,
    write_edge_list,
    write_models,
    write_nrobp,
    write_scdt,
    write_td,
)
from pmwtools.nrobp import build_order_nrobp, represented_function
from pmwtools.scdt import build_scdt
from tests.common import TempTestDir, path3, single_edge


@pytest.fixture
def gk_small():
    return build_gk_instance(8, 1)


def test_edge_list_round_trip(gk_small):
    G = gk_small.graph
    with TempTestDir() as tmp:
        H = read_edge_list(write_edge_list(G, tmp.path("g.edges")))
    assert sorted(H.nodes) == sorted(G.nodes)
    assert {frozenset(e) for e in H.edges} == {frozenset(e) for e in G.edges}


def test_edge_list_comments_and_isolated_vertices():
    with TempTestDir() as tmp:
        G = read_edge_list(tmp.write("g.edges", "# a path with a spare vertex\n4 2\n0 1\n\n1 2\n"))
    assert G.number_of_nodes() == 4
    assert G.degree(3) == 0


@pytest.mark.parametrize("text", [
    "3 1\n0 5\n",
    "3 2\n0 1\n",
    "3 1\n0\n",
    "x y\n",
])
def test_malformed_edge_lists(text):
    with TempTestDir() as tmp:
        path = tmp.write("bad.edges", text)
        with pytest.raises(PreconditionError) as excinfo:
            read_edge_list(path)
    assert excinfo.value.clause == "format"


def test_edge_list_rejects_self_loops():
    with TempTestDir() as tmp:
        path = tmp.write("loop.edges", "3 2\n0 1\n2 2\n")
        with pytest.raises(PreconditionError) as excinfo:
            read_edge_list(path)
    assert excinfo.value.clause == "self_loop"
    assert excinfo.value.witness == 3


def test_empty_edge_list():
    with TempTestDir() as tmp:
        with pytest.raises(PreconditionError):
            read_edge_list(tmp.write("empty.edges", "# nothing\n"))


def test_vertex_list():
    with TempTestDir() as tmp:
        assert read_vertex_list(tmp.write("v.txt", "3 1\n2\n")) == [3, 1, 2]
        with pytest.raises(PreconditionError):
            read_vertex_list(tmp.write("bad.txt", "1 two\n"))


def test_dimacs_round_trip():
    cnf = phi_of_graph(path3())
    with TempTestDir() as tmp:
        path = write_dimacs(cnf, tmp.path("phi.cnf"), comments=["phi of P3"])
        with open(path, encoding="utf-8") as f:
            lines = f.read().splitlines()
        back = read_dimacs(path)
    assert lines[0] == "c phi of P3"
    assert lines[1] == "p cnf 3 2"
    assert back == cnf


def test_dimacs_requires_dense_variables():
    cnf = Cnf(frozenset({0, 2}), ((Literal(0, True), Literal(2, True)),))
    with TempTestDir() as tmp:
        with pytest.raises(PreconditionError) as excinfo:
            write_dimacs(cnf, tmp.path("phi.cnf"))
    assert excinfo.value.clause == "dense_variables"


@pytest.mark.parametrize("text", [
    "1 2 0\n",
    "p cnf 2 1\n1 3 0\n",
    "p cnf 2 2\n1 2 0\n",
    "p cnf 2 1\n1 x 0\n",
])
def test_malformed_dimacs(text):
    with TempTestDir() as tmp:
        path = tmp.write("bad.cnf", text)
        with pytest.raises(PreconditionError):
            read_dimacs(path)


def test_td_round_trip(gk_small):
    td = gk_tree_decomposition(gk_small)
    n = gk_small.graph.number_of_nodes()
    with TempTestDir() as tmp:
        back, declared = read_td(write_td(td, n, tmp.path("g.td")))
    assert declared == n
    assert back.width == td.width == 7
    assert {i + 1: bag for i, bag in td.bags.items()} == back.bags
    assert verify_tree_decomposition(gk_small.graph, back).valid


def test_td_header_mismatch():
    with TempTestDir() as tmp:
        path = tmp.write("bad.td", "s td 2 2 2\nb 1 1 2\n")
        with pytest.raises(PreconditionError) as excinfo:
            read_td(path)
    assert "bags" in str(excinfo.value)


def test_nrobp_round_trip():
    Z = build_order_nrobp(enumerate_models(phi_of_graph(single_edge())))
    with TempTestDir() as tmp:
        back = read_nrobp(write_nrobp(Z, tmp.path("phi.nrobp")))
    assert (back.source, back.sink) == (Z.source, Z.sink)
    assert back.edge_list() == Z.edge_list()
    assert represented_function(back) == represented_function(Z)


def test_nrobp_header_checks():
    with TempTestDir() as tmp:
        with pytest.raises(PreconditionError):
            read_nrobp(tmp.write("a.nrobp", "0 1 +0\n"))
        with pytest.raises(PreconditionError):
            read_nrobp(tmp.write("b.nrobp", "nrobp 2 2 0 1 1\n0 1 +0\n"))


def test_models_round_trip():
    F = enumerate_models(phi_of_graph(path3()))
    with TempTestDir() as tmp:
        back = read_models(write_models(F, tmp.path("models.txt")))
    assert back == F
    assert len(back) == 5


def test_scdt_dump():
    t = build_scdt(phi_of_graph(single_edge()))
    with TempTestDir() as tmp:
        with open(write_scdt(t, tmp.path("tree.scdt")), encoding="utf-8") as f:
            rows = [line.split() for line in f.read().splitlines()]
    assert len(rows) == len(list(t.edges()))
    assert all(len(row) == 4 for row in rows)
    assert sum(Fraction(row[3]) for row in rows if row[0] == "0") == 1


def test_csv_round_trip():
    rows = [{"check": "cut", "passed": True, "lhs": 2}, {"check": "cover", "passed": False}]
    with TempTestDir() as tmp:
        back = read_csv(write_csv(rows, tmp.path("out", "report.csv")))
        empty = read_csv(write_csv([], tmp.path("empty.csv"), fieldnames=["check"]))
    assert back == [{"check": "cut", "passed": "True", "lhs": "2"},
                    {"check": "cover", "passed": "False", "lhs": ""}]
    assert empty == []
