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
verify_bounds.py

Command-line front end for pmwtools: generate G_k instances, run the
invariant suites, take the bottleneck census, compute matching widths of
single inputs and measure the calibration constants.

Commands:
- generate: write graph.edges, phi.cnf, graph.td (and models / program files)
- verify: run the pmw, scdt or nrobp suites (or all of them)
- census: characteristic-tuple census of phi and its approximants
- pmw: exact width, witnessing matching or constructive witness for one input
- calibrate: empirical constants for the constructive and counting bounds

Exit codes: 0 success, 1 a check failed, 2 bad input, 3 a brute-force cap
was exceeded, 130 interrupted.
"""

import os
import sys
import argparse
import logging
import time

try:
    import pmwtools
    from pmwtools import config as pmw_config
    from pmwtools import experiments
    from pmwtools import file_operations as fops
except ImportError:
    print("Error: pmwtools package not found in the current directory or PYTHONPATH.")
    print("Make sure the pmwtools package is in the same directory as this script.")
    sys.exit(1)

from pmwtools.errors import CapExceededError, PmwToolsError, PreconditionError, VerificationError
from pmwtools.matching_width import max_matching_across_cut, pmw_order, witnessing_matching_exact
from pmwtools.constructive import mwmain_bound, mwmain_witness

# Import colorama and initialize it for ANSI color support on Windows
try:
    from colorama import init, Fore, Style
    init(autoreset=True)
except ImportError:
    # If colorama is not installed, define dummy color codes.
    class Fore:
        RED = ""
        GREEN = ""
        YELLOW = ""
    class Style:
        RESET_ALL = ""

VERSION = "0.1.0"

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_CAP = 3
EXIT_INTERRUPTED = 130


def common_arguments():
    """Flags shared by every command."""
    parser = argparse.ArgumentParser(add_help=False)

    instance_group = parser.add_argument_group('Instance')
    instance_group.add_argument("--k", type=int,
                        help="Pattern parameter k of G_k (default: 8)")
    instance_group.add_argument("--height", type=int,
                        help="Height of the ternary tree (default: 1)")
    instance_group.add_argument("--ratio", type=float, action="append", dest="ratios",
                        help="Approximant size as a fraction of |phi| (can be specified multiple times)")
    instance_group.add_argument("--mode", choices=list(pmw_config.DELETION_MODES),
                        help="How approximants drop models (default: uniform)")
    instance_group.add_argument("--q", type=int,
                        help="Number of blocks per path in the census (default: about sqrt(n))")

    processing_group = parser.add_argument_group('Processing Controls')
    processing_group.add_argument("--seed", type=int,
                        help=f"Random seed (default: {pmwtools.DEFAULT_SEED})")
    processing_group.add_argument("--trials", type=int,
                        help="Number of random trials (default: 1)")
    processing_group.add_argument("--threads", type=int,
                        help="Worker threads for independent trials (default: 1)")
    processing_group.add_argument("--cap-perms", type=int,
                        help=f"Largest vertex set the exact width oracles permute (default: {pmwtools.DEFAULT_CAP_PERMS})")
    processing_group.add_argument("--cap-models", type=int,
                        help=f"Most variables the model counter enumerates (default: {pmwtools.DEFAULT_CAP_MODELS})")
    processing_group.add_argument("--cap-paths", type=int,
                        help=f"Most source-sink paths enumerated per program (default: {pmwtools.DEFAULT_CAP_PATHS})")
    processing_group.add_argument("--config",
                        help="YAML file with configuration keys")

    output_group = parser.add_argument_group('Output and Logging')
    output_group.add_argument("--out",
                        help="Output directory for generated files and CSV reports")
    output_group.add_argument("-v", "--verbosity", action="count", default=0,
                        help="Increase output verbosity (can be used multiple times)")
    output_group.add_argument("--progress", action="store_true", default=None,
                        help="Show progress bars during long runs (default: True)")
    output_group.add_argument("--no-progress", action="store_false", dest="progress",
                        help="Don't show progress bars")
    output_group.add_argument("--log-file",
                        help="Write log output to a file as well as the console")
    return parser


def parse_arguments(argv=None):
    """Parse command line arguments."""
    common = common_arguments()
    parser = argparse.ArgumentParser(
        description="Generate and verify matching-width and branching-program bounds on small instances.",
        epilog="Example: verify_bounds.py verify --suite all --out ./results -v"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    generate = commands.add_parser("generate", parents=[common],
                        help="Write a G_k instance, phi(G_k) and a tree decomposition")
    generate.add_argument("--nrobp", action="store_true",
                        help="Also write a branching program for phi")

    verify = commands.add_parser("verify", parents=[common], help="Run the invariant suites")
    verify.add_argument("--suite", choices=list(experiments.SUITES), default="all",
                        help="Suite to run (default: all)")
    verify.add_argument("--extended", action="store_true", default=None,
                        help="Also cross-check path-family weights and sweep independent-only subsets (slower)")

    commands.add_parser("census", parents=[common], help="Characteristic-tuple census of phi(G_k)")

    pmw = commands.add_parser("pmw", parents=[common], help="Matching width of a single input")
    pmw.add_argument("what", choices=["exact", "witness", "mwmain"],
                        help="exact: width and an optimal order; witness: largest witnessing matching of an order; "
                             "mwmain: constructive witnessing matching on G_k")
    pmw.add_argument("--graph",
                        help="Edge-list file (for mwmain, checked against the G_k instance)")
    pmw.add_argument("--vertices",
                        help="File of vertex ids (default: every vertex)")
    pmw.add_argument("--order",
                        help="File with a permutation of the vertex set (default: ascending)")
    pmw.add_argument("--p", type=int,
                        help="Matching granularity for mwmain (default: k/4)")

    commands.add_parser("calibrate", parents=[common], help="Measure the empirical constants")

    return parser.parse_args(argv)


def setup_logging(verbosity, log_file=None):
    """Configure logging based on verbosity level."""
    log_level = logging.WARNING
    if verbosity == 1:
        log_level = logging.INFO
    elif verbosity >= 2:
        log_level = logging.DEBUG
    pmwtools.setup_logging(log_level, log_file)
    return logging.getLogger("verify_bounds")


def config_from_arguments(args, logger):
    """Build the experiment configuration (flags over YAML over environment)."""
    cli_values = {
        "seed": args.seed,
        "k": args.k,
        "height": args.height,
        "cap_perms": args.cap_perms,
        "cap_models": args.cap_models,
        "cap_paths": args.cap_paths,
        "ratios": args.ratios,
        "mode": args.mode,
        "q": args.q,
        "trials": args.trials,
        "threads": args.threads,
        "out_dir": args.out,
        "show_progress": args.progress,
        "scdt_extended": getattr(args, "extended", None),
    }
    config = pmw_config.build_config(cli_values, args.config, logger=logger)
    config.apply_defaults()
    logger.debug(f"Configuration: {config.to_dict()}")
    return config


def report_error(code, exc):
    """One machine-readable line on stderr."""
    message = " ".join(str(exc).split())
    print(f"error: code={code} kind={type(exc).__name__} message={message}", file=sys.stderr)
    return code


def print_status(label, passed):
    if passed:
        print(f"{Fore.GREEN}PASS{Style.RESET_ALL} {label}")
    else:
        print(f"{Fore.RED}FAIL{Style.RESET_ALL} {label}")


def emit_rows(rows, out_dir, filename, fieldnames=None):
    """Write rows to out_dir/filename, or print them as CSV when no directory is set."""
    if out_dir:
        path = fops.write_csv(rows, os.path.join(out_dir, filename), fieldnames)
        print(f"Wrote {len(rows)} rows to {path}")
        return
    import csv
    if fieldnames is None:
        fieldnames = list(rows[0].keys()) if rows else []
    writer = csv.DictWriter(sys.stdout, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: row.get(k, "") for k in fieldnames})


def print_matching(matching):
    for u, v in sorted(matching):
        print(f"{u} {v}")


# -----------------------------
# Commands
# -----------------------------
def cmd_generate(args, config, logger):
    out_dir = config.out_dir
    if not out_dir:
        raise PreconditionError("generate needs --out DIR", clause="out")
    written = experiments.run_generate(config, out_dir, with_nrobp=args.nrobp, logger=logger)
    for path in written:
        print(path)
    return EXIT_OK


def cmd_verify(args, config, logger):
    report = experiments.run_suite(args.suite, config, logger)
    if config.out_dir:
        rows = [row.to_dict() for row in report.rows]
        path = fops.write_csv(rows, os.path.join(config.out_dir, f"verify_{args.suite}.csv"),
                              ["check", "instance", "lhs", "rhs", "passed", "detail"])
        logger.info(f"Wrote {len(rows)} rows to {path}")
    for check, count in sorted(report.counts().items()):
        failed = sum(1 for row in report.failures if row.check == check)
        print_status(f"{check} ({count} rows, {failed} failed)", failed == 0)
    for key, value in sorted(report.summary.items()):
        print(f"  {key}: {value}")
    for row in report.failures[:20]:
        print(f"  {Fore.YELLOW}{row.check}{Style.RESET_ALL} {row.instance}: {row.lhs} vs {row.rhs} {row.detail}")
    print_status(str(report), report.passed)
    if not report.passed:
        logger.error(f"Suite {args.suite} failed {len(report.failures)} checks")
        return EXIT_FAILED
    return EXIT_OK


def cmd_census(args, config, logger):
    rows = experiments.run_census(config, logger)
    emit_rows(rows, config.out_dir, "census.csv")
    failed = [row for row in rows if not row["passed"]]
    if failed:
        logger.error(f"{len(failed)} of {len(rows)} census rows failed")
        return EXIT_FAILED
    return EXIT_OK


def _read_vertices(args, G):
    if args.vertices:
        return fops.read_vertex_list(args.vertices)
    return sorted(G.nodes)


def _read_order(args, V):
    if not args.order:
        return sorted(set(V))
    order = fops.read_vertex_list(args.order)
    if len(order) != len(set(V)) or set(order) != set(V):
        raise PreconditionError(f"{args.order}: not a permutation of the vertex set", clause="permutation")
    return order


def cmd_pmw(args, config, logger):
    if args.what == "mwmain":
        P = pmwtools.build_gk_instance(config.k, config.height, logger)
        if args.graph:
            G = fops.read_edge_list(args.graph)
            if set(map(tuple, map(sorted, G.edges))) != set(map(tuple, map(sorted, P.graph.edges))):
                raise PreconditionError(f"{args.graph} is not the G_k instance for k={config.k} "
                                        f"height={config.height}", clause="graph")
        V = _read_vertices(args, P.graph)
        SV = _read_order(args, V)
        p = args.p if args.p is not None else config.k // 4
        W = mwmain_witness(P, V, SV, p, logger=logger)
        print(f"witness {W.size}")
        print(f"bound {mwmain_bound(P, V, p)}")
        print(f"split {W.split}")
        print_matching(W.matching)
        return EXIT_OK

    if not args.graph:
        raise PreconditionError(f"pmw {args.what} needs --graph FILE", clause="graph")
    G = fops.read_edge_list(args.graph)
    V = _read_vertices(args, G)

    if args.what == "exact":
        value, order = pmw_order(G, V, config.cap_perms)
        best_split, best = 0, frozenset()
        for t in range(len(order) + 1):
            M = max_matching_across_cut(G, order[:t])
            if len(M) > len(best):
                best_split, best = t, M
        print(f"pmw {value}")
        print("order " + " ".join(str(v) for v in order))
        print(f"split {best_split}")
        print_matching(best)
        return EXIT_OK

    SV = _read_order(args, V)
    W = witnessing_matching_exact(G, V, SV)
    print(f"witness {W.size}")
    print(f"split {W.split}")
    print_matching(W.matching)
    return EXIT_OK


def cmd_calibrate(args, config, logger):
    rows = experiments.run_calibration(config, logger)
    emit_rows(rows, config.out_dir, "calibration.csv", experiments.CALIBRATION_FIELDS)
    return EXIT_OK


COMMANDS = {
    "generate": cmd_generate,
    "verify": cmd_verify,
    "census": cmd_census,
    "pmw": cmd_pmw,
    "calibrate": cmd_calibrate,
}


def main(argv=None):
    """Main entry point for the script."""
    start_time = time.time()
    args = parse_arguments(argv)

    logger = setup_logging(args.verbosity, args.log_file)
    logger.info(f"Starting verify_bounds.py version {VERSION}: {args.command}")

    try:
        config = config_from_arguments(args, logger)
        code = COMMANDS[args.command](args, config, logger)
    except CapExceededError as e:
        logger.error(f"Cap exceeded: {e}")
        return report_error(EXIT_CAP, e)
    except PreconditionError as e:
        logger.error(f"Invalid input ({e.clause}): {e}")
        return report_error(EXIT_USAGE, e)
    except VerificationError as e:
        logger.error(f"Verification failed: {e}")
        return report_error(EXIT_FAILED, e)
    except (OSError, PmwToolsError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return report_error(EXIT_USAGE, e)

    logger.info(f"Total execution time: {time.time() - start_time:.2f} seconds")
    return code


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("\nOperation cancelled by user.")
        sys.exit(EXIT_INTERRUPTED)
