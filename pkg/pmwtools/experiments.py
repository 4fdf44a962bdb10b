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
experiments.py

Batch drivers behind the verify_bounds.py commands:
- instance generation (graph, CNF, tree decomposition, program, models)
- the pmw / scdt / nrobp verification suites
- the bottleneck census over approximants of phi
- calibration of the constants the bounds leave unnamed

Randomness always comes from numpy generators seeded with seed + trial index,
and trial results are merged in trial order.
"""

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

import pmwtools
from pmwtools.cnf_core import (Literal, LiteralSet, ModelSet, arrow, count_models, enumerate_models, phi_of_graph,
                               projection_ratio_holds, random_cnf, random_model_set, restrict)
from pmwtools.config import ExperimentConfig
from pmwtools.constructive import mwmain_bound, mwmain_witness, perfpart_witness
from pmwtools.core_graphs import (ProductGraph, build_gk_instance, gk_tree_decomposition, occupied_set, tr,
                                  verify_tree_decomposition)
from pmwtools.definition_checks import (DEFINITION_CAP, in_out_problems, matching_problems, pmw_by_permutations,
                                        witnessing_problems)
from pmwtools.errors import PreconditionError, VerificationError
from pmwtools.file_operations import (ensure_directory, write_dimacs, write_edge_list, write_models, write_nrobp,
                                      write_td)
from pmwtools.matching_width import (min_witnessing_size, pmw_exact, pmw_table,
                                     witness_to_prefix, witnessing_matching_exact)
from pmwtools.nrobp import (Nrobp, bottleneck_census, build_order_nrobp, drop_edge_label, enumerate_paths,
                            fixed_set, function_by_enumeration, path_assignment, path_nodes, relabel_edge,
                            represented_function, single_bottleneck, validate)
from pmwtools.reports import CheckReport
from pmwtools.scdt import (build_scdt, sweep_maintree, sweep_supporting_bounds, verify_correctcount,
                           verify_largeportion_treeweights, verify_manyvars1)

if pmwtools.TQDM_AVAILABLE:
    from tqdm import tqdm

SUITES = ("pmw", "scdt", "nrobp", "all")


# -----------------------------
# Shared helpers
# -----------------------------
def run_trials(func: Callable[[int, int], Any], trials: int, seed: int, threads: int = 1,
               show_progress: bool = False, desc: str = "Trials") -> List[Any]:
    """
    Run func(trial_index, trial_seed) for every trial on a thread pool.

    Results come back in trial order whatever the completion order.
    """
    results: Dict[int, Any] = {}
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        futures = {pool.submit(func, i, seed + i): i for i in range(trials)}
        completed = as_completed(futures)
        iterator = tqdm(completed, desc=desc, total=trials) if show_progress and pmwtools.TQDM_AVAILABLE else completed
        for future in iterator:
            results[futures[future]] = future.result()
    return [results[i] for i in range(trials)]


def _progress(items, show_progress: bool, desc: str):
    items = list(items)
    return tqdm(items, desc=desc) if show_progress and pmwtools.TQDM_AVAILABLE else items


def atlas_graphs(max_nodes: int, connected: bool = True, min_nodes: int = 2) -> Iterator[nx.Graph]:
    """Graphs of the networkx atlas (at most 7 vertices) in atlas order, without isolated vertices when connected."""
    for G in nx.graph_atlas_g():
        n = G.number_of_nodes()
        if n < min_nodes or n > max_nodes:
            continue
        if connected and not nx.is_connected(G):
            continue
        yield G


def random_degree_bounded_graph(n: int, max_degree: int, rng: np.random.Generator,
                                edge_factor: float = 1.5) -> nx.Graph:
    """Random graph on 0..n-1 without isolated vertices and with maximum degree <= max_degree."""
    if n < 2 or max_degree < 1:
        raise PreconditionError("Need at least two vertices and max_degree >= 1", clause="graph_size")
    G = nx.Graph()
    G.add_nodes_from(range(n))
    for v in rng.permutation(n):
        v = int(v)
        if G.degree(v) > 0:
            continue
        candidates = [u for u in range(n) if u != v and G.degree(u) < max_degree]
        if not candidates:
            raise PreconditionError(f"Cannot attach vertex {v} within degree {max_degree}", clause="degree")
        G.add_edge(v, int(rng.choice(candidates)))
    for _ in range(int(edge_factor * n)):
        u, v = (int(x) for x in rng.choice(n, size=2, replace=False))
        if G.degree(u) < max_degree and G.degree(v) < max_degree:
            G.add_edge(u, v)
    return G


def approximant(F: ModelSet, ratio: float, rng: np.random.Generator, mode: str = "uniform") -> ModelSet:
    """
    Keep floor(ratio * |F|) models of F.

    uniform keeps a uniformly random subset; concentrated picks a random
    quarter of the variables and keeps the models setting all of them true
    first, so the survivors lean on one fixed set.
    """
    keep = math.floor(ratio * len(F))
    if keep < 1:
        raise PreconditionError(f"Ratio {ratio} leaves no models of {len(F)}", clause="empty_approximant")
    models = list(F)
    if mode == "uniform":
        chosen = sorted(rng.choice(len(models), size=keep, replace=False))
        return ModelSet(F.variables, (models[i] for i in chosen))
    if mode == "concentrated":
        variables = sorted(F.variables)
        W = frozenset(int(v) for v in rng.choice(variables, size=max(1, len(variables) // 4), replace=False))
        shuffled = [models[i] for i in rng.permutation(len(models))]
        ranked = sorted(shuffled, key=lambda m: not W <= m.positive_vars())
        return ModelSet(F.variables, ranked[:keep])
    raise PreconditionError(f"Unknown deletion mode {mode!r}", clause="mode")


def random_vertex_set(P: ProductGraph, rng: np.random.Generator, full: bool, min_nodes: int = 1) -> List[int]:
    """Random V on a product graph; with full every tree node gets at least one vertex."""
    num_nodes = P.tree.num_nodes
    if full:
        nodes = list(range(num_nodes))
    else:
        size = int(rng.integers(min(min_nodes, num_nodes), num_nodes + 1))
        nodes = sorted(int(x) for x in rng.choice(num_nodes, size=size, replace=False))
    V = []
    for node in nodes:
        copy = list(P.copy_vertices(node))
        chosen = [v for v in copy if rng.random() < 0.5]
        if not chosen:
            chosen = [copy[int(rng.integers(len(copy)))]]
        V.extend(chosen)
    return V


# -----------------------------
# pmw suite
# -----------------------------
def check_pmw_graph(G: nx.Graph, name: str, witness_max_nodes: int, report: CheckReport) -> None:
    """Oracle agreement and the witnessing-matching relation for every vertex subset of a small graph."""
    tally = report.tally(name)
    n = G.number_of_nodes()
    table = pmw_table(G, cap=n)
    cuts: Dict[frozenset, int] = {}
    supported: Dict[frozenset, int] = {}
    with_witness = n <= witness_max_nodes
    for V, width in table.items():
        if len(V) <= DEFINITION_CAP:
            reference = pmw_by_permutations(G, V, cache=cuts)
            tally.check("pmw_oracle", width == reference, width, reference, f"V={sorted(V)}")
        if with_witness:
            k = min_witnessing_size(G, V, cap=len(V), cache=supported)
            tally.check("witness_width", (k + 1) // 2 <= width <= k, width, f"[{(k + 1) // 2}, {k}]",
                        f"V={sorted(V)}")
    if with_witness and n:
        V = frozenset(G.nodes)
        W = witnessing_matching_exact(G, V, sorted(V))
        k = min_witnessing_size(G, V, cap=n, cache=supported)
        problems = witnessing_problems(G, V, W.order, W.split, W.matching)
        tally.check("witness_exact", W.size >= k and not problems, W.size, k, "; ".join(problems[:3]))
    tally.close()


def _full_pmw_trial(index: int, seed: int, config: ExperimentConfig) -> CheckReport:
    """Every vertex subset of one seeded random graph beyond the atlas."""
    rng = np.random.default_rng(seed)
    report = CheckReport("pmw")
    density = float(rng.uniform(0.2, 0.7))
    G = nx.gnp_random_graph(config.pmw_full_nodes, density, seed=int(rng.integers(2 ** 31)))
    check_pmw_graph(G, f"full{index}", config.witness_max_nodes, report)
    return report


def _random_pmw_trial(index: int, seed: int, report_name: str) -> CheckReport:
    rng = np.random.default_rng(seed)
    report = CheckReport(report_name)
    n = int(rng.integers(6, 9))
    G = nx.gnp_random_graph(n, 0.4, seed=int(rng.integers(2 ** 31)))
    size = int(rng.integers(1, min(n, 7) + 1))
    V = sorted(int(v) for v in rng.choice(n, size=size, replace=False))
    tally = report.tally(f"random{index}")
    width = pmw_exact(G, V)
    reference = pmw_by_permutations(G, V, cap=8)
    tally.check("pmw_oracle", width == reference, width, reference, f"n={n} V={V}")

    SV = [int(v) for v in rng.permutation(V)]
    W = witnessing_matching_exact(G, V, SV)
    problems = witnessing_problems(G, V, W.order, W.split, W.matching)
    tally.check("witness_definition", not problems, len(problems), 0, "; ".join(problems))
    prefix, M = witness_to_prefix(W, G, V, SV)
    problems = matching_problems(G, M) + in_out_problems(prefix, M)
    tally.check("witness_to_prefix", 2 * len(M) >= W.size and not problems, len(M), W.size,
                f"prefix {list(prefix)} {'; '.join(problems)}")
    tally.close()
    return report


def _constructive_trial(index: int, seed: int, config: ExperimentConfig) -> CheckReport:
    rng = np.random.default_rng(seed)
    report = CheckReport("constructive")
    k = (4, 8)[index % 2]
    height = int(rng.integers(1, config.constructive_max_height + 1))
    P = build_gk_instance(k, height)
    p = k // 4
    full = bool(rng.random() < 0.5)
    V = random_vertex_set(P, rng, full, min_nodes=p)
    SV = [int(v) for v in rng.permutation(V)]
    name = f"k{k}h{height}t{index}"
    tally = report.tally(name)
    try:
        W = mwmain_witness(P, V, SV, p)
        bound = mwmain_bound(P, V, p)
        tally.check("mwmain_bound", W.size >= bound, W.size, bound)
        problems = witnessing_problems(P.graph, V, W.order, W.split, W.matching)
        tally.check("mwmain_definition", not problems, len(problems), 0, "; ".join(problems[:3]))
        if full and P.tree.num_nodes >= p:
            W = perfpart_witness(P, V, SV, p)
            bound = p * (height - tr(p))
            tally.check("perfpart_bound", W.size >= bound, W.size, bound)
            total = P.graph.number_of_nodes()
            balanced = min(total - W.split, total - (len(SV) - W.split)) >= p * p
            tally.check("perfpart_balanced", balanced, W.split, len(SV))
            problems = witnessing_problems(P.graph, V, W.order, W.split, W.matching)
            tally.check("perfpart_definition", not problems, len(problems), 0, "; ".join(problems[:3]))
    except VerificationError as e:
        tally.check("constructive_guarantee", False, None, None, str(e))
    return tally.close()


def run_pmw_suite(config: ExperimentConfig, logger=None) -> CheckReport:
    """Oracle agreement on atlas graphs, random spot checks and the constructive guarantees."""
    if logger is None:
        logger = logging.getLogger("experiments")
    report = CheckReport("pmw")
    graphs = list(atlas_graphs(config.pmw_max_nodes, connected=False, min_nodes=1))
    logger.info(f"pmw suite: {len(graphs)} atlas graphs with at most {config.pmw_max_nodes} vertices")
    for index, G in enumerate(_progress(graphs, config.show_progress, "Atlas graphs")):
        check_pmw_graph(G, f"atlas{index}", config.witness_max_nodes, report)
    if config.pmw_full_graphs:
        logger.info(f"pmw suite: {config.pmw_full_graphs} random graphs on {config.pmw_full_nodes} vertices, every V")
    for part in run_trials(lambda i, s: _full_pmw_trial(i, s, config), config.pmw_full_graphs, config.seed,
                           config.threads, config.show_progress, "Full random graphs"):
        report.merge(part)

    for part in run_trials(lambda i, s: _random_pmw_trial(i, s, "pmw"), config.pmw_random_graphs, config.seed,
                           config.threads, config.show_progress, "Random graphs"):
        report.merge(part)
    for part in run_trials(lambda i, s: _constructive_trial(i, s, config), config.constructive_samples,
                           config.seed, config.threads, config.show_progress, "Constructive"):
        report.merge(part)
    logger.info(str(report))
    return report


# -----------------------------
# scdt suite
# -----------------------------
def variable_orders(variables: Sequence[int], count: int, rng: np.random.Generator) -> List[Tuple[int, ...]]:
    """Ascending, descending, then random orders until count distinct ones are found (or all are used)."""
    base = sorted(variables)
    orders = [tuple(base)]
    if count > 1 and len(base) > 1:
        orders.append(tuple(reversed(base)))
    limit = math.factorial(len(base))
    attempts = 0
    while len(orders) < min(count, limit) and attempts < 100 * count:
        candidate = tuple(int(v) for v in rng.permutation(base))
        if candidate not in orders:
            orders.append(candidate)
        attempts += 1
    return orders[:count]


def check_scdt_graph(G: nx.Graph, name: str, orders: Sequence[Tuple[int, ...]], max_size: int,
                     report: CheckReport, extended: bool = False) -> int:
    """
    All tree checks for phi(G) in each order.

    With extended the strict path-family sweep is cross-checked against the
    recursive computation and the independent-only sweep also runs; the
    return value counts its bound failures (always 0 otherwise).
    """
    phi = phi_of_graph(G)
    lax_failures = 0
    for j, order in enumerate(orders):
        t = build_scdt(phi, order, graph=G)
        instance = f"{name}o{j}"
        report.merge(verify_correctcount(t, instance))
        report.merge(verify_largeportion_treeweights(t, instance))
        report.merge(sweep_maintree(t, max_size, strict=True, cross_check=extended, instance=instance))
        report.merge(sweep_supporting_bounds(t, max_size, instance))
        if extended:
            lax = sweep_maintree(t, max_size, strict=False, cross_check=False, instance=instance)
            lax_failures += sum(1 for row in lax.failures if row.detail.startswith("node"))
    return lax_failures


def _random_cnf_trial(index: int, seed: int, config: ExperimentConfig) -> CheckReport:
    rng = np.random.default_rng(seed)
    report = CheckReport("correctcount")
    for _ in range(50):
        n = int(rng.integers(2, config.scdt_random_max_vars + 1))
        cnf = random_cnf(n, int(rng.integers(1, 2 * n)), rng)
        if count_models(cnf) > 0:
            break
    else:
        return report
    for j, order in enumerate(variable_orders(cnf.variables, config.scdt_orders, rng)):
        report.merge(verify_correctcount(build_scdt(cnf, order), f"cnf{index}o{j}"))
    return report


def _manyvars_trial(index: int, seed: int, config: ExperimentConfig) -> Tuple[CheckReport, float]:
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, config.manyvars_max_nodes + 1))
    G = random_degree_bounded_graph(n, config.manyvars_max_degree, rng)
    U = [int(v) for v in rng.choice(n, size=int(rng.integers(0, n + 1)), replace=False)]
    result = verify_manyvars1(G, U, cap=config.cap_models)
    report = CheckReport("manyvars1")
    name = f"graph{index}"
    report.add("manyvars1", result.holds, name, result.ratio, f"c_d^(|U|/(d+1)), d={result.max_degree}",
               f"n={n} |U|={len(U)} slack={result.slack:.6f}")
    route = result.proof_route["no_common_neighbor"]
    report.add("manyvars1_route", route["holds"], name, route["ratio_s"], route["bound"], f"|S|={route['size_s']}")
    return report, result.slack


def run_scdt_suite(config: ExperimentConfig, logger=None) -> CheckReport:
    """Exact tree checks on atlas graphs and random CNFs plus the counting bound on random graphs."""
    if logger is None:
        logger = logging.getLogger("experiments")
    report = CheckReport("scdt")
    rng = np.random.default_rng(config.seed)
    graphs = list(atlas_graphs(config.scdt_max_nodes))
    logger.info(f"scdt suite: {len(graphs)} connected atlas graphs, {config.scdt_orders} orders each")
    lax_failures = 0
    for index, G in enumerate(_progress(graphs, config.show_progress, "Decision trees")):
        orders = variable_orders(G.nodes, config.scdt_orders, rng)
        lax_failures += check_scdt_graph(G, f"atlas{index}", orders, config.maintree_max_size, report,
                                         config.scdt_extended)

    for part in run_trials(lambda i, s: _random_cnf_trial(i, s, config), config.scdt_random_cnfs, config.seed,
                           config.threads, config.show_progress, "Random CNFs"):
        report.merge(part)

    slacks = []
    for part, slack in run_trials(lambda i, s: _manyvars_trial(i, s, config), config.manyvars_graphs,
                                  config.seed, config.threads, config.show_progress, "Counting bound"):
        report.merge(part)
        slacks.append(slack)
    if slacks:
        report.summary.update({
            "slack_min": float(np.min(slacks)),
            "slack_median": float(np.median(slacks)),
            "slack_max": float(np.max(slacks)),
        })
    if config.scdt_extended:
        report.summary["maintree_lax_failures"] = lax_failures
    if lax_failures:
        logger.warning(f"Independent-only subsets broke the path-family bound {lax_failures} times")
    logger.info(str(report))
    return report


# -----------------------------
# nrobp suite
# -----------------------------
def _semantics_trial(index: int, seed: int, config: ExperimentConfig) -> CheckReport:
    rng = np.random.default_rng(seed)
    report = CheckReport("nrobp_semantics")
    tally = report.tally(f"function{index}")
    n = int(rng.integers(1, config.nrobp_max_vars + 1))
    F = random_model_set(list(range(n)), rng, density=float(rng.uniform(0.1, 0.9)))
    order = [int(v) for v in rng.permutation(n)]
    Z = build_order_nrobp(F, order)
    tally.check("build_valid", validate(Z).valid, None, None, str(validate(Z).clauses()))
    tally.check("round_trip", represented_function(Z, config.cap_paths) == F, None, None)
    tally.check("enumeration_oracle", function_by_enumeration(Z, config.cap_paths) == F, None, None)

    V = [int(v) for v in rng.choice(n, size=int(rng.integers(0, n + 1)), replace=False)]
    tally.check("projection_size", projection_ratio_holds(F, V), None, None, f"V={V}")
    S = LiteralSet({v: bool(rng.integers(2)) for v in V})
    tally.check("arrow_restrict_count", len(arrow(F, S)) == len(restrict(F, S)), len(arrow(F, S)),
                len(restrict(F, S)), f"S={S}")
    if V:
        smaller = LiteralSet({v: S.value(v) for v in V[:-1]})
        tally.check("arrow_monotone", arrow(F, S).issubset(arrow(F, smaller)), None, None, f"S={S}")

    labelled = [(u, v, k) for u, v, k, lit in Z.edge_list() if lit is not None]
    u, v, k = labelled[int(rng.integers(len(labelled)))]
    tally.check("mutation_drop_caught", not validate(drop_edge_label(Z, (u, v, k))).valid, None, None,
                f"edge ({u}, {v})")
    if n > 1:
        current = Z.literal((u, v, k)).var
        other = int(rng.choice([x for x in range(n) if x != current]))
        mutated = relabel_edge(Z, (u, v, k), Literal(other, True))
        tally.check("mutation_relabel_caught", not validate(mutated).valid, None, None, f"edge ({u}, {v})")
    return tally.close()


def check_fixed_sets(Z: Nrobp, G: nx.Graph, name: str, report: CheckReport, cap: Optional[int] = None) -> None:
    """For every node, fixed sets of single separated edges and of a greedy separated matching hold on all through-paths."""
    tally = report.tally(name)
    validation = validate(Z)
    paths = list(enumerate_paths(Z, cap))
    assignments = [path_assignment(Z, P) for P in paths]
    nodes_on = [set(path_nodes(Z, P)) for P in paths]
    for u in sorted(Z.graph.nodes):
        before, after = validation.before[u], validation.after[u]
        separated = sorted((min(a, b), max(a, b)) for a, b in G.edges
                           if (a in before and b in after) or (b in before and a in after))
        greedy, used = [], set()
        for a, b in separated:
            if a not in used and b not in used:
                greedy.append((a, b))
                used.update((a, b))
        candidates = [[e] for e in separated] + ([greedy] if len(greedy) > 1 else []) + [[]]
        through = [assignments[i] for i in range(len(paths)) if u in nodes_on[i]]
        for M in candidates:
            try:
                X = fixed_set(Z, u, M, G)
            except PreconditionError as e:
                tally.check("fixed_set", False, None, None, f"node {u} M={M}: {e}")
                continue
            ok = len(X) == len(M) and all(X <= A.positive_vars() for A in through)
            tally.check("fixed_set", ok, sorted(X), f"{len(through)} paths", f"node {u} M={M}")
    tally.close()


def phi_program(G: nx.Graph, ratio: float = 1.0, rng: Optional[np.random.Generator] = None, mode: str = "uniform",
                order: Optional[Sequence[int]] = None) -> Tuple[ModelSet, ModelSet, Nrobp]:
    """phi(G), an approximant of it and the order-built program for the approximant."""
    phi_models = enumerate_models(phi_of_graph(G))
    F = phi_models if ratio >= 1 else approximant(phi_models, ratio, rng or np.random.default_rng(0), mode)
    return phi_models, F, build_order_nrobp(F, order)


def census_row(census, k: int, height: int, ratio: float, mode: str, trial: int, seed: int,
               phi_count: int) -> Dict[str, Any]:
    q = census.q
    return {
        "k": k, "height": height, "ratio": ratio, "mode": mode, "trial": trial, "seed": seed,
        "phi_models": phi_count, "f_models": census.model_count, "q": q, "tp": census.tp, "mu": census.mu,
        "components": " ".join(str(len(B)) for B in census.components),
        "largest_f_a": census.largest_tuple_share,
        "max_u": max((len(U) for U in census.tuples.values()), default=0),
        "min_u": min((len(U) for U in census.tuples.values()), default=0),
        "max_matched": census.max_matched,
        "tp_root_q": f"{census.tp ** (1 / q):.6f}" if q else "",
        "exhaustive": census.exhaustive,
        "covering": census.covering_holds, "extensional": census.extensional_holds,
        "chain": census.chain_holds, "product": census.product_holds,
        "multiplicity": census.multiplicity_holds, "cover": census.cover_holds, "seven": census.seven_holds,
        "passed": census.passed,
    }


def run_nrobp_suite(config: ExperimentConfig, logger=None) -> CheckReport:
    """Program semantics on random functions, fixed sets on phi programs and the census on G_k instances."""
    if logger is None:
        logger = logging.getLogger("experiments")
    report = CheckReport("nrobp")
    for part in run_trials(lambda i, s: _semantics_trial(i, s, config), config.nrobp_functions, config.seed,
                           config.threads, config.show_progress, "Programs"):
        report.merge(part)

    rng = np.random.default_rng(config.seed)
    small = list(atlas_graphs(4))
    for index, G in enumerate(_progress(small, config.show_progress, "Fixed sets")):
        for ratio in (1.0, 0.5):
            _, F, Z = phi_program(G, ratio, rng, config.mode)
            check_fixed_sets(Z, G, f"atlas{index}r{ratio}", report, config.cap_paths)

    base = build_gk_instance(8, 0)
    _, _, Z = phi_program(base.graph)
    single = single_bottleneck(Z, base.graph, config.cap_paths)
    report.add("single_bottleneck", single.passed, "G8h0", single.q, single.model_count)

    for height in config.census_heights:
        P = build_gk_instance(config.k, height)
        for ratio in config.census_ratios:
            phi_models, F, Z = phi_program(P.graph, ratio, rng, config.mode)
            census = bottleneck_census(Z, P.graph, config.q, config.cap_paths)
            row = census_row(census, config.k, height, ratio, config.mode, 0, config.seed, len(phi_models))
            instance = f"k{config.k}h{height}r{ratio}"
            for check in ("covering", "extensional", "chain", "product", "multiplicity", "cover", "seven"):
                report.add(f"census_{check}", bool(row[check]), instance, None, None,
                           f"|F|={row['f_models']} |TP|={row['tp']} mu={row['mu']} q={row['q']}")
    logger.info(str(report))
    return report


def run_suite(name: str, config: ExperimentConfig, logger=None) -> CheckReport:
    """Run one suite by name ('all' runs every suite)."""
    if logger is None:
        logger = logging.getLogger("experiments")
    runners = {"pmw": run_pmw_suite, "scdt": run_scdt_suite, "nrobp": run_nrobp_suite}
    if name not in SUITES:
        raise PreconditionError(f"Unknown suite {name!r}; choose from {', '.join(SUITES)}", clause="suite")
    if name != "all":
        return runners[name](config, logger)
    report = CheckReport("all")
    for suite in ("pmw", "scdt", "nrobp"):
        part = runners[suite](config, logger)
        report.merge(part, prefix=suite)
        report.summary.update({f"{suite}_{k}": v for k, v in part.summary.items()})
    return report


# -----------------------------
# Census, generation, calibration
# -----------------------------
def run_census(config: ExperimentConfig, logger=None) -> List[Dict[str, Any]]:
    """One census row per (ratio, trial) on the configured G_k instance."""
    if logger is None:
        logger = logging.getLogger("experiments")
    P = build_gk_instance(config.k, config.height, logger)
    phi_models = enumerate_models(phi_of_graph(P.graph), cap=config.cap_models)
    logger.info(f"Census on k={config.k} height={config.height}: |phi|={len(phi_models)}")

    def trial(index: int, seed: int) -> List[Dict[str, Any]]:
        rng = np.random.default_rng(seed)
        rows = []
        for ratio in config.ratios:
            F = phi_models if ratio >= 1 else approximant(phi_models, ratio, rng, config.mode)
            Z = build_order_nrobp(F)
            census = bottleneck_census(Z, P.graph, config.q, config.cap_paths, logger=logger)
            rows.append(census_row(census, config.k, config.height, ratio, config.mode, index, seed,
                                   len(phi_models)))
        return rows

    rows = []
    for part in run_trials(trial, config.trials, config.seed, config.threads, config.show_progress, "Census"):
        rows.extend(part)
    return rows


def run_generate(config: ExperimentConfig, out_dir: str, with_nrobp: bool = False, logger=None) -> List[str]:
    """Write the G_k instance, its CNF and tree decomposition, and optionally models and a program."""
    if logger is None:
        logger = logging.getLogger("experiments")
    ensure_directory(out_dir)
    P = build_gk_instance(config.k, config.height, logger)
    td = gk_tree_decomposition(P)
    check = verify_tree_decomposition(P.graph, td)
    if not check.valid:
        raise VerificationError(f"Generated decomposition is invalid: {check.problems[:3]}")
    phi = phi_of_graph(P.graph)
    n = P.graph.number_of_nodes()
    written = [
        write_edge_list(P.graph, os.path.join(out_dir, "graph.edges")),
        write_dimacs(phi, os.path.join(out_dir, "phi.cnf"),
                     comments=[f"phi(G_k) k={config.k} height={config.height}"]),
        write_td(td, n, os.path.join(out_dir, "graph.td")),
    ]
    if n <= config.cap_models:
        models = enumerate_models(phi, cap=config.cap_models)
        written.append(write_models(models, os.path.join(out_dir, "models.txt")))
        if with_nrobp:
            written.append(write_nrobp(build_order_nrobp(models), os.path.join(out_dir, "phi.nrobp")))
    else:
        logger.warning(f"{n} variables exceed the model cap {config.cap_models}; skipping models and program")
    logger.info(f"Wrote {len(written)} files to {out_dir}")
    return written


def run_calibration(config: ExperimentConfig, logger=None) -> List[Dict[str, Any]]:
    """
    Measured stand-ins for the unnamed constants.

    mainptv rows: k*log2|V| / L where L is the prefix cut matching obtained
    from the constructive witnessing matching; c2_emp is their maximum.
    manyvars1 rows: the log2 slack of the counting bound on random graphs.
    """
    if logger is None:
        logger = logging.getLogger("experiments")
    P = build_gk_instance(config.k, config.height, logger)
    p = config.k // 4

    def mainptv_trial(index: int, seed: int) -> Dict[str, Any]:
        rng = np.random.default_rng(seed)
        V = random_vertex_set(P, rng, full=bool(rng.random() < 0.5), min_nodes=p)
        SV = [int(v) for v in rng.permutation(V)]
        W = mwmain_witness(P, V, SV, p)
        prefix, M = witness_to_prefix(W, P.graph, V, SV)
        L = len(M)
        ratio = config.k * math.log2(len(V)) / L if L > 0 and len(V) > 1 else None
        return {"kind": "mainptv", "trial": index, "seed": seed, "size_v": len(V),
                "occupied": len(occupied_set(P, V).occupied), "witness": W.size, "prefix_matching": L,
                "value": "" if ratio is None else f"{ratio:.6f}"}

    def slack_trial(index: int, seed: int) -> Dict[str, Any]:
        report, slack = _manyvars_trial(index, seed, config)
        return {"kind": "manyvars1_slack", "trial": index, "seed": seed, "size_v": "", "occupied": "",
                "witness": "", "prefix_matching": "", "value": f"{slack:.6f}",
                "passed": report.passed}

    rows = run_trials(mainptv_trial, config.trials, config.seed, config.threads, config.show_progress, "mainptv")
    values = [float(r["value"]) for r in rows if r["value"] != ""]
    rows.append({"kind": "c2_emp", "trial": "", "seed": config.seed, "value": f"{max(values):.6f}" if values else ""})
    slack_rows = run_trials(slack_trial, config.trials, config.seed, config.threads, config.show_progress, "slack")
    rows.extend(slack_rows)
    slacks = [float(r["value"]) for r in slack_rows]
    if slacks:
        rows.append({"kind": "slack_summary", "trial": "", "seed": config.seed,
                     "value": f"min={min(slacks):.6f} median={float(np.median(slacks)):.6f} max={max(slacks):.6f}"})
    logger.info(f"Calibration: {len(rows)} rows")
    return rows


CALIBRATION_FIELDS = ["kind", "trial", "seed", "size_v", "occupied", "witness", "prefix_matching", "value", "passed"]
