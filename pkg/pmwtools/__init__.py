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
__init__.py

Export the public functions of the pmwtools package.
"""

import logging

# Export version info
__version__ = '0.1.0'

try:
    from tqdm import tqdm
    TQDM_AVAILABLE = True
except ImportError:
    TQDM_AVAILABLE = False

try:
    import yaml
    YAML_AVAILABLE = True
except ImportError:
    YAML_AVAILABLE = False

# Constants defined centrally (brute-force caps; see config.py for overrides)
DEFAULT_CAP_PERMS = 9          # vertices permuted by the exact width oracles
DEFAULT_CAP_MODELS = 26        # variables enumerated by the model counter
DEFAULT_CAP_PATHS = 100000     # source-sink paths enumerated in a program
DEFAULT_SCDT_VAR_CAP = 14      # variables of a CNF turned into a decision tree
DEFAULT_SEED = 0

# Errors and reports
from pmwtools.errors import (
    PmwToolsError,
    PreconditionError,
    CapExceededError,
    VerificationError,
    check_cap
)
from pmwtools.reports import CheckRow, CheckReport

# Graph core
from pmwtools.core_graphs import (
    TernaryTree,
    ProductGraph,
    RolePartition,
    TreeDecomposition,
    build_ternary_tree,
    build_product_graph,
    build_gk_instance,
    gk_tree_decomposition,
    verify_tree_decomposition,
    occupied_set,
    homogeneous_nodes,
    ternary_node_count,
    tr
)

# Matching width
from pmwtools.matching_width import (
    WitnessingMatching,
    max_matching_across_cut,
    pmw_exact,
    pmw_order,
    pmw_table,
    witnessing_matching_exact,
    min_witnessing_size,
    witness_to_prefix
)
from pmwtools.constructive import (
    matching_from_role_path,
    matching_goodpart1,
    matching_goodpart3,
    perfpart_witness,
    minimal_largest_subtree_sequence,
    mwmain_witness,
    mwmain_bound
)
from pmwtools.definition_checks import pmw_by_permutations

# CNFs and counting
from pmwtools.cnf_core import (
    Literal,
    LiteralSet,
    Cnf,
    ModelSet,
    phi_of_graph,
    primal_graph,
    project,
    projection,
    restrict,
    arrow,
    count_models,
    enumerate_models,
    build_phi_k,
    independent_no_common_neighbor_subset
)

# Decision trees
from pmwtools.scdt import (
    Scdt,
    build_scdt,
    path_weight,
    weight_of_path_family,
    alpha,
    c_d,
    b_d,
    verify_correctcount,
    verify_maintree,
    verify_largeportion_treeweights,
    verify_manyvars1
)

# Branching programs
from pmwtools.nrobp import (
    Nrobp,
    validate,
    represented_function,
    build_order_nrobp,
    separates,
    fixed_set,
    single_bottleneck,
    characteristic_tuple,
    bottleneck_census
)


def setup_logging(level=logging.INFO, log_file=None):
    """Configure logging for the pmwtools package."""
    if log_file:
        logging.basicConfig(
            level=level,
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S',
            filename=log_file,
            filemode='w'
        )
        # Also log to console
        console = logging.StreamHandler()
        console.setLevel(level)
        formatter = logging.Formatter('%(levelname)s: %(message)s')
        console.setFormatter(formatter)
        logging.getLogger('').addHandler(console)
    else:
        logging.basicConfig(
            level=level,
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )

    return logging.getLogger('pmwtools')
