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
file_operations.py

Reading and writing the plain-text formats used by pmwtools:
- edge lists ("n m" header, 0-based "u v" lines)
- DIMACS CNF (variables 0..n-1 written as 1..n)
- PACE-style tree decompositions (.td, 1-based)
- NROBP programs, model lists and SCDT edge dumps
- CSV reports
"""

import csv
import logging
import os
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from pmwtools.cnf_core import Cnf, Literal, LiteralSet, ModelSet
from pmwtools.core_graphs import TreeDecomposition
from pmwtools.errors import PreconditionError
from pmwtools.nrobp import Nrobp
from pmwtools.scdt import Scdt


# -----------------------------
# Path Handling Functions
# -----------------------------
def ensure_directory(path: str) -> str:
    """Create path (and parents) if needed and return it."""
    if path:
        os.makedirs(path, exist_ok=True)
    return path


def _write_lines(path: str, lines: Iterable[str]) -> str:
    directory = os.path.dirname(path)
    if directory:
        ensure_directory(directory)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for line in lines:
            f.write(line)
            f.write("\n")
    logging.getLogger("file_operations").debug(f"Wrote {path}")
    return path


def _content_lines(path: str, comment: str = "c") -> List[Tuple[int, List[str]]]:
    """Non-empty, non-comment lines of a file as (line number, tokens)."""
    result = []
    with open(path, "r", encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            tokens = line.split()
            if not tokens or tokens[0] == comment:
                continue
            result.append((number, tokens))
    return result


def _format_error(path: str, number: int, message: str, clause: str = "format") -> PreconditionError:
    return PreconditionError(f"{path}:{number}: {message}", clause=clause, witness=number)


def _dense(variables: Iterable[int], what: str) -> int:
    variables = sorted(variables)
    if variables != list(range(len(variables))):
        raise PreconditionError(f"{what} variables must be exactly 0..n-1", clause="dense_variables")
    return len(variables)


# -----------------------------
# Graphs
# -----------------------------
def write_edge_list(G: nx.Graph, path: str) -> str:
    n = _dense(G.nodes, "Graph")
    edges = sorted((min(u, v), max(u, v)) for u, v in G.edges)
    return _write_lines(path, [f"{n} {len(edges)}"] + [f"{u} {v}" for u, v in edges])


def read_edge_list(path: str) -> nx.Graph:
    lines = _content_lines(path, comment="#")
    if not lines:
        raise PreconditionError(f"{path}: empty edge list", clause="format")
    number, header = lines[0]
    try:
        n, m = int(header[0]), int(header[1])
        G = nx.Graph()
        G.add_nodes_from(range(n))
        for number, tokens in lines[1:]:
            u, v = int(tokens[0]), int(tokens[1])
            if not (0 <= u < n and 0 <= v < n):
                raise _format_error(path, number, f"vertex out of range 0..{n - 1}")
            if u == v:
                raise _format_error(path, number, f"self-loop on vertex {u}", clause="self_loop")
            G.add_edge(u, v)
    except (IndexError, ValueError) as e:
        if isinstance(e, PreconditionError):
            raise
        raise _format_error(path, number, f"malformed line ({e})")
    if G.number_of_edges() != m:
        raise PreconditionError(f"{path}: header declares {m} edges, found {G.number_of_edges()}", clause="format")
    return G


def read_vertex_list(path: str) -> List[int]:
    """Whitespace-separated vertex ids, in file order."""
    with open(path, "r", encoding="utf-8") as f:
        try:
            return [int(token) for token in f.read().split()]
        except ValueError as e:
            raise PreconditionError(f"{path}: not a vertex list ({e})", clause="format")


# -----------------------------
# DIMACS CNF
# -----------------------------
def write_dimacs(cnf: Cnf, path: str, comments: Sequence[str] = ()) -> str:
    n = _dense(cnf.variables, "CNF")
    lines = [f"c {text}" for text in comments]
    lines.append(f"p cnf {n} {len(cnf.clauses)}")
    for clause in cnf.clauses:
        tokens = [str(lit.var + 1) if lit.positive else str(-(lit.var + 1)) for lit in clause]
        lines.append(" ".join(tokens + ["0"]))
    return _write_lines(path, lines)


def read_dimacs(path: str) -> Cnf:
    lines = _content_lines(path)
    if not lines or lines[0][1][:2] != ["p", "cnf"]:
        raise PreconditionError(f"{path}: missing 'p cnf' header", clause="format")
    number, header = lines[0]
    try:
        n, m = int(header[2]), int(header[3])
    except (IndexError, ValueError):
        raise _format_error(path, number, "malformed header")
    clauses, current = [], []
    for number, tokens in lines[1:]:
        for token in tokens:
            try:
                value = int(token)
            except ValueError:
                raise _format_error(path, number, f"bad literal {token!r}")
            if value == 0:
                clauses.append(tuple(current))
                current = []
            elif abs(value) > n:
                raise _format_error(path, number, f"literal {value} outside 1..{n}")
            else:
                current.append(Literal(abs(value) - 1, value > 0))
    if current:
        clauses.append(tuple(current))
    if len(clauses) != m:
        raise PreconditionError(f"{path}: header declares {m} clauses, found {len(clauses)}", clause="format")
    return Cnf(frozenset(range(n)), tuple(clauses))


# -----------------------------
# Tree decompositions
# -----------------------------
def write_td(td: TreeDecomposition, num_vertices: int, path: str) -> str:
    ids = {bag_id: i for i, bag_id in enumerate(sorted(td.bags), start=1)}
    lines = [f"s td {len(ids)} {td.width + 1} {num_vertices}"]
    for bag_id in sorted(td.bags):
        members = " ".join(str(v + 1) for v in sorted(td.bags[bag_id]))
        lines.append(f"b {ids[bag_id]} {members}".rstrip())
    for a, b in sorted((min(ids[x], ids[y]), max(ids[x], ids[y])) for x, y in td.tree.edges):
        lines.append(f"{a} {b}")
    return _write_lines(path, lines)


def read_td(path: str) -> Tuple[TreeDecomposition, int]:
    """Returns the decomposition (0-based vertices, 1-based bag ids) and the declared vertex count."""
    lines = _content_lines(path)
    if not lines or lines[0][1][:2] != ["s", "td"]:
        raise PreconditionError(f"{path}: missing 's td' header", clause="format")
    number, header = lines[0]
    try:
        num_bags, declared_width, n = int(header[2]), int(header[3]), int(header[4])
        bags: Dict[int, frozenset] = {}
        tree = nx.Graph()
        for number, tokens in lines[1:]:
            if tokens[0] == "b":
                bags[int(tokens[1])] = frozenset(int(t) - 1 for t in tokens[2:])
            else:
                tree.add_edge(int(tokens[0]), int(tokens[1]))
    except (IndexError, ValueError) as e:
        raise _format_error(path, number, f"malformed line ({e})")
    tree.add_nodes_from(bags)
    td = TreeDecomposition(bags, tree)
    if len(bags) != num_bags:
        raise PreconditionError(f"{path}: header declares {num_bags} bags, found {len(bags)}", clause="format")
    if td.width + 1 != declared_width:
        raise PreconditionError(f"{path}: header declares bag size {declared_width}, found {td.width + 1}",
                                clause="format")
    return td, n


# -----------------------------
# Programs, models, trees
# -----------------------------
def write_nrobp(Z: Nrobp, path: str) -> str:
    n = _dense(Z.variables, "Program")
    edges = Z.edge_list()
    lines = [f"nrobp {Z.num_nodes} {len(edges)} {Z.source} {Z.sink} {n}"]
    for u, v, _, literal in edges:
        lines.append(f"{u} {v}" if literal is None else f"{u} {v} {literal}")
    return _write_lines(path, lines)


def read_nrobp(path: str) -> Nrobp:
    lines = _content_lines(path, comment="#")
    if not lines or lines[0][1][0] != "nrobp":
        raise PreconditionError(f"{path}: missing 'nrobp' header", clause="format")
    number, header = lines[0]
    try:
        num_nodes, num_edges, source, sink, n = (int(t) for t in header[1:6])
        G = nx.MultiDiGraph()
        G.add_nodes_from([source, sink])
        for number, tokens in lines[1:]:
            literal = Literal.parse(tokens[2]) if len(tokens) > 2 else None
            G.add_edge(int(tokens[0]), int(tokens[1]), literal=literal)
    except (IndexError, ValueError) as e:
        raise _format_error(path, number, f"malformed line ({e})")
    if G.number_of_nodes() != num_nodes or G.number_of_edges() != num_edges:
        raise PreconditionError(f"{path}: header declares {num_nodes} nodes / {num_edges} edges, found "
                                f"{G.number_of_nodes()} / {G.number_of_edges()}", clause="format")
    return Nrobp(G, source, sink, range(n))


def write_models(models: ModelSet, path: str) -> str:
    return _write_lines(path, (str(m) for m in models))


def read_models(path: str, variables: Optional[Iterable[int]] = None) -> ModelSet:
    """One assignment per line; variables default to those of the first model."""
    models = []
    for number, tokens in _content_lines(path, comment="#"):
        try:
            models.append(LiteralSet(Literal.parse(t) for t in tokens))
        except ValueError as e:
            raise _format_error(path, number, str(e))
    if variables is None:
        variables = models[0].variables if models else ()
    return ModelSet(variables, models)


def write_scdt(t: Scdt, path: str) -> str:
    lines = [f"{u} {v} {literal} {weight.numerator}/{weight.denominator}" for u, v, literal, weight in t.edges()]
    return _write_lines(path, lines)


# -----------------------------
# Reports
# -----------------------------
def write_csv(rows: Sequence[Dict[str, Any]], path: str, fieldnames: Optional[Sequence[str]] = None) -> str:
    """Write dict rows; columns default to the keys of the first row, in order."""
    if fieldnames is None:
        fieldnames = list(rows[0].keys()) if rows else []
    directory = os.path.dirname(path)
    if directory:
        ensure_directory(directory)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k, "") for k in fieldnames})
    logging.getLogger("file_operations").debug(f"Wrote {len(rows)} rows to {path}")
    return path


def read_csv(path: str) -> List[Dict[str, str]]:
    with open(path, "r", encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))
