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
cnf_core.py

Literal sets, CNFs, explicit model sets and the exhaustive model-counting oracle.

Variables are non-negative integers (graph vertex ids). Model sets are kept
sorted lexicographically by variable id with false before true, which is also
the order in which the counting oracle enumerates assignments.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

import pmwtools
from pmwtools.core_graphs import build_gk_instance, max_degree
from pmwtools.errors import PreconditionError, check_cap

ENUMERATION_CHUNK = 1 << 16


class Literal(NamedTuple):
    var: int
    positive: bool = True

    def __neg__(self) -> "Literal":
        return Literal(self.var, not self.positive)

    def __str__(self) -> str:
        return f"{'+' if self.positive else '-'}{self.var}"

    @classmethod
    def parse(cls, token: str) -> "Literal":
        """Parse a '+v' / '-v' token (a bare 'v' is positive)."""
        token = token.strip()
        if token.startswith("-"):
            return cls(int(token[1:]), False)
        return cls(int(token.lstrip("+")), True)


class LiteralSet:
    """
    A consistent set of literals, viewed as a (partial) assignment.

    Immutable and hashable; construction rejects a variable with both polarities.
    """

    __slots__ = ("_values", "_hash")

    def __init__(self, literals: Union[Iterable[Literal], Mapping[int, bool]] = ()):
        values: Dict[int, bool] = {}
        items = literals.items() if isinstance(literals, Mapping) else literals
        for var, positive in items:
            positive = bool(positive)
            if values.get(var, positive) != positive:
                raise PreconditionError(f"Variable {var} occurs with both polarities", clause="consistent",
                                        witness=var)
            values[var] = positive
        self._values = values
        self._hash = hash(frozenset(values.items()))

    @classmethod
    def positive(cls, variables: Iterable[int]) -> "LiteralSet":
        return cls({v: True for v in variables})

    @property
    def variables(self) -> FrozenSet[int]:
        return frozenset(self._values)

    def value(self, var: int) -> Optional[bool]:
        return self._values.get(var)

    def literals(self) -> FrozenSet[Literal]:
        return frozenset(Literal(v, b) for v, b in self._values.items())

    def positive_vars(self) -> FrozenSet[int]:
        return frozenset(v for v, b in self._values.items() if b)

    def negative_vars(self) -> FrozenSet[int]:
        return frozenset(v for v, b in self._values.items() if not b)

    def items(self):
        return self._values.items()

    def issubset(self, other: "LiteralSet") -> bool:
        return all(other._values.get(v) == b for v, b in self._values.items())

    def __le__(self, other: "LiteralSet") -> bool:
        return self.issubset(other)

    def __or__(self, other: "LiteralSet") -> "LiteralSet":
        merged = dict(self._values)
        for v, b in other._values.items():
            if merged.get(v, b) != b:
                raise PreconditionError(f"Variable {v} occurs with both polarities", clause="consistent", witness=v)
            merged[v] = b
        return LiteralSet(merged)

    def __contains__(self, literal: Literal) -> bool:
        return self._values.get(literal.var) == literal.positive

    def __len__(self) -> int:
        return len(self._values)

    def __iter__(self) -> Iterator[Literal]:
        for v in sorted(self._values):
            yield Literal(v, self._values[v])

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, LiteralSet) and self._values == other._values

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"LiteralSet({{{', '.join(str(lit) for lit in self)}}})"

    def __str__(self) -> str:
        return " ".join(str(lit) for lit in self)

    def sort_key(self) -> Tuple[bool, ...]:
        """Lexicographic key by variable id with False < True."""
        return tuple(self._values[v] for v in sorted(self._values))


def project(S: LiteralSet, V: Iterable[int]) -> LiteralSet:
    """The part of S over the variables V (which must all be assigned by S)."""
    V = frozenset(V)
    stray = V - S.variables
    if stray:
        raise PreconditionError(f"Variables {sorted(stray)} are not assigned by S", clause="subset")
    return LiteralSet({v: S.value(v) for v in V})


@dataclass(frozen=True)
class Cnf:
    """Clause list over an explicit variable set."""
    variables: FrozenSet[int]
    clauses: Tuple[Tuple[Literal, ...], ...]
    metadata: Dict[str, Any] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", frozenset(self.variables))
        object.__setattr__(self, "clauses", tuple(tuple(Literal(*lit) for lit in c) for c in self.clauses))
        stray = {lit.var for c in self.clauses for lit in c} - self.variables
        if stray:
            raise PreconditionError(f"Clause variables {sorted(stray)} are not declared", clause="variables")

    @property
    def num_vars(self) -> int:
        return len(self.variables)

    def is_monotone_2cnf(self) -> bool:
        return all(len(c) == 2 and all(lit.positive for lit in c) for c in self.clauses)

    def satisfied_by(self, assignment: LiteralSet) -> bool:
        return all(any(lit in assignment for lit in c) for c in self.clauses)


class ModelSet:
    """
    A Boolean function given by its satisfying assignments.

    Every member is total over the same variable set; members are deduplicated
    and kept in canonical order.
    """

    def __init__(self, variables: Iterable[int], models: Iterable[LiteralSet] = ()):
        self.variables = frozenset(variables)
        unique = set()
        for m in models:
            if m.variables != self.variables:
                raise PreconditionError("Model is not total over the function's variables", clause="total",
                                        witness=m)
            unique.add(m)
        self.models: Tuple[LiteralSet, ...] = tuple(sorted(unique, key=LiteralSet.sort_key))
        self._members = frozenset(self.models)

    def __len__(self) -> int:
        return len(self.models)

    def __iter__(self) -> Iterator[LiteralSet]:
        return iter(self.models)

    def __contains__(self, assignment: LiteralSet) -> bool:
        return assignment in self._members

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, ModelSet) and self.variables == other.variables and self._members == other._members

    def __hash__(self) -> int:
        return hash((self.variables, self._members))

    def __repr__(self) -> str:
        return f"ModelSet(vars={len(self.variables)}, models={len(self.models)})"

    def issubset(self, other: "ModelSet") -> bool:
        return self.variables == other.variables and self._members <= other._members

    def union(self, other: "ModelSet") -> "ModelSet":
        if self.variables != other.variables:
            raise PreconditionError("Cannot union functions over different variables", clause="variables")
        return ModelSet(self.variables, self._members | other._members)


# -----------------------------
# CNF construction
# -----------------------------
def phi_of_graph(G: nx.Graph) -> Cnf:
    """The monotone 2-CNF with one clause (u or v) per edge of G."""
    isolated = sorted(nx.isolates(G))
    if isolated:
        raise PreconditionError(f"Graph has isolated vertices {isolated}", clause="isolated", witness=isolated)
    loops = list(nx.selfloop_edges(G))
    if loops:
        raise PreconditionError("Graph has self-loops", clause="self_loop", witness=loops)
    edges = sorted({(min(u, v), max(u, v)) for u, v in G.edges})
    clauses = tuple((Literal(u, True), Literal(v, True)) for u, v in edges)
    return Cnf(frozenset(G.nodes), clauses)


def primal_graph(cnf: Cnf) -> nx.Graph:
    """Variables as vertices, an edge between any two variables sharing a clause."""
    G = nx.Graph()
    G.add_nodes_from(cnf.variables)
    for clause in cnf.clauses:
        vars_ = sorted({lit.var for lit in clause})
        G.add_edges_from((a, b) for i, a in enumerate(vars_) for b in vars_[i + 1:])
    return G


def build_phi_k(k: int, height: int, logger=None) -> Cnf:
    """
    phi(G) for the G_k instance, with size metadata.

    The instance-size threshold |V(G)| >= k^(2 c1) is not enforced; the metadata
    reports the largest c1 for which it holds.
    """
    if logger is None:
        logger = logging.getLogger("cnf_core")
    P = build_gk_instance(k, height, logger)
    cnf = phi_of_graph(P.graph)
    n = P.graph.number_of_nodes()
    cnf.metadata.update({
        "k": k,
        "height": height,
        "p": k // 4,
        "num_vars": n,
        "num_clauses": len(cnf.clauses),
        "max_degree": max_degree(P.graph),
        "c1_threshold": math.log(n) / (2 * math.log(k)) if n > 1 else 0.0,
    })
    logger.debug(f"Built phi_k for k={k} height={height}: {n} vars, {len(cnf.clauses)} clauses")
    return cnf


def independent_no_common_neighbor_subset(G: nx.Graph, U: Iterable[int], strict: bool = False) -> FrozenSet[int]:
    """
    Greedy subset of U, lowest degree first.

    The default mode only requires pairwise non-adjacency (size >= |U|/(d+1));
    strict mode also forbids common neighbours (size >= |U|/(d^2+1)).
    """
    U = sorted(set(U), key=lambda v: (G.degree(v), v))
    chosen = []
    blocked = set()
    for u in U:
        if u in blocked:
            continue
        chosen.append(u)
        blocked.add(u)
        neighbours = set(G.neighbors(u))
        blocked.update(neighbours)
        if strict:
            for w in neighbours:
                blocked.update(G.neighbors(w))
    return frozenset(chosen)


# -----------------------------
# Exhaustive counting
# -----------------------------
def _satisfied_chunks(cnf: Cnf, assumptions: LiteralSet, cap: int) -> Iterator[Tuple[List[int], np.ndarray, np.ndarray, np.ndarray]]:
    """
    Yield (free variables, assignment indices, satisfied mask, bit matrix) chunk by chunk.

    Index bit (n-1-j) holds the value of free variable j, so increasing indices
    follow the canonical model order.
    """
    stray = assumptions.variables - cnf.variables
    if stray:
        raise PreconditionError(f"Assumed variables {sorted(stray)} are not in the CNF", clause="subset")
    free = sorted(cnf.variables - assumptions.variables)
    n = len(free)
    check_cap("model-count", cap, n)
    column = {v: j for j, v in enumerate(free)}

    residual = []
    for clause in cnf.clauses:
        if any(lit in assumptions for lit in clause):
            continue
        open_lits = [(column[lit.var], lit.positive) for lit in clause if lit.var in column]
        residual.append(open_lits)

    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    total = 1 << n
    for start in range(0, total, ENUMERATION_CHUNK):
        idx = np.arange(start, min(start + ENUMERATION_CHUNK, total), dtype=np.int64)
        bits = ((idx[:, None] >> shifts) & 1).astype(bool) if n else np.zeros((len(idx), 0), dtype=bool)
        sat = np.ones(len(idx), dtype=bool)
        for open_lits in residual:
            clause_sat = np.zeros(len(idx), dtype=bool)
            for j, positive in open_lits:
                clause_sat |= bits[:, j] if positive else ~bits[:, j]
            sat &= clause_sat
            if not sat.any():
                break
        yield free, idx, sat, bits


def count_models(cnf: Cnf, assumptions: Optional[LiteralSet] = None, cap: Optional[int] = None) -> int:
    """
    Exact number of models of cnf that contain assumptions.

    Counts |cnf <- S| without materializing the models.
    """
    if cap is None:
        cap = pmwtools.DEFAULT_CAP_MODELS
    assumptions = assumptions or LiteralSet()
    return sum(int(sat.sum()) for _, _, sat, _ in _satisfied_chunks(cnf, assumptions, cap))


def enumerate_models(cnf: Cnf, cap: Optional[int] = None) -> ModelSet:
    """All models of cnf, in canonical order."""
    if cap is None:
        cap = pmwtools.DEFAULT_CAP_MODELS
    models = []
    for free, _, sat, bits in _satisfied_chunks(cnf, LiteralSet(), cap):
        for row in bits[sat]:
            models.append(LiteralSet(dict(zip(free, (bool(b) for b in row)))))
    return ModelSet(cnf.variables, models)


def as_model_set(F: Union[ModelSet, Cnf], cap: Optional[int] = None) -> ModelSet:
    return F if isinstance(F, ModelSet) else enumerate_models(F, cap)


def _check_stray(F: ModelSet, S: LiteralSet) -> None:
    stray = S.variables - F.variables
    if stray:
        raise PreconditionError(f"Variables {sorted(stray)} are not variables of F", clause="subset")


def restrict(F: Union[ModelSet, Cnf], S: LiteralSet, cap: Optional[int] = None) -> ModelSet:
    """F|_S: models of F containing S, with S's variables removed."""
    F = as_model_set(F, cap)
    _check_stray(F, S)
    rest = F.variables - S.variables
    return ModelSet(rest, (project(m, rest) for m in F if S <= m))


def arrow(F: Union[ModelSet, Cnf], S: LiteralSet, cap: Optional[int] = None) -> ModelSet:
    """F <- S: the models of F that contain S."""
    F = as_model_set(F, cap)
    _check_stray(F, S)
    return ModelSet(F.variables, (m for m in F if S <= m))


def projection(F: Union[ModelSet, Cnf], V: Iterable[int], cap: Optional[int] = None) -> ModelSet:
    """Proj(F, V): every model of F cut down to the variables V."""
    F = as_model_set(F, cap)
    V = frozenset(V)
    if not V <= F.variables:
        raise PreconditionError(f"Variables {sorted(V - F.variables)} are not variables of F", clause="subset")
    return ModelSet(V, (project(m, V) for m in F))


def projection_ratio_holds(F: ModelSet, V: Iterable[int]) -> bool:
    """|Proj(F, Var(F) - V)| * 2^|V| >= |F|."""
    V = frozenset(V)
    kept = projection(F, F.variables - V)
    return len(kept) * (1 << len(V)) >= len(F)


def random_model_set(variables: Sequence[int], rng: np.random.Generator, density: float = 0.5) -> ModelSet:
    """A random non-empty function over the given variables."""
    variables = sorted(variables)
    n = len(variables)
    keep = rng.random(1 << n) < density
    if not keep.any():
        keep[rng.integers(1 << n)] = True
    models = []
    for idx in np.flatnonzero(keep):
        models.append(LiteralSet({v: bool(idx >> (n - 1 - j) & 1) for j, v in enumerate(variables)}))
    return ModelSet(variables, models)


def random_cnf(num_vars: int, num_clauses: int, rng: np.random.Generator, max_width: int = 3) -> Cnf:
    """A random CNF over variables 0..num_vars-1 with clauses of width 1..max_width."""
    clauses = []
    for _ in range(num_clauses):
        width = int(rng.integers(1, min(max_width, num_vars) + 1))
        vars_ = rng.choice(num_vars, size=width, replace=False)
        clauses.append(tuple(Literal(int(v), bool(rng.integers(2))) for v in sorted(vars_)))
    return Cnf(frozenset(range(num_vars)), tuple(clauses))
