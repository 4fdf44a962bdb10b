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
tests/common.py

Common utilities and functions for pmwtools tests.
Provides small instance builders, helpers to run the command-line script,
and the test decorator used by the standalone runner.
"""

import os
import sys
import shutil
import tempfile
import time
import subprocess
import logging
from functools import wraps
from typing import Any, Dict, List, Optional, Tuple

import networkx as nx

# Ensure parent directory is in path so we can import the package
parent_dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if parent_dir not in sys.path:
    sys.path.insert(0, parent_dir)

from pmwtools.cnf_core import LiteralSet
from pmwtools.config import ENV_OVERRIDES

# Constants
SCRIPT_NAME = "verify_bounds.py"

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    datefmt='%Y-%m-%d %H:%M:%S'
)
logger = logging.getLogger("pmw_tests")


def print_header(message: str) -> str:
    """Print a formatted header for test sections."""
    header = "\n" + "=" * 80 + f"\n {message}\n" + "=" * 80
    print(header)
    return header


def run_command(cmd: List[str], verbose: bool = True, env: Optional[Dict[str, str]] = None) -> Tuple[int, str, str]:
    """Run a command and return (returncode, stdout, stderr)."""
    if verbose:
        print(f"\nRunning command: {' '.join(cmd)}")
    start_time = time.time()
    process = subprocess.run(cmd, stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True, env=env)
    elapsed_time = time.time() - start_time
    if verbose:
        print(f"Command completed in {elapsed_time:.2f} seconds with exit code {process.returncode}")
        if process.stdout:
            print("\nSTDOUT:")
            print(process.stdout[:1000] + ("..." if len(process.stdout) > 1000 else ""))
        if process.stderr:
            print("\nSTDERR:")
            print(process.stderr[:1000] + ("..." if len(process.stderr) > 1000 else ""))
    return process.returncode, process.stdout, process.stderr


def run_verify_bounds(args: List[str], verbose: bool = True,
                      env: Optional[Dict[str, str]] = None) -> Tuple[int, str, str]:
    """Run verify_bounds.py with the given arguments."""
    script_path = os.path.join(parent_dir, SCRIPT_NAME)
    if not os.path.exists(script_path):
        logger.error(f"Script {script_path} not found")
        return 1, "", f"Script {script_path} not found"
    if env is None:
        env = dict(os.environ)
        for var in ENV_OVERRIDES:
            env.pop(var, None)
    return run_command([sys.executable, script_path] + list(args), verbose=verbose, env=env)


class TempTestDir:
    """Context manager for creating and cleaning up temporary test directories."""
    def __init__(self, prefix: str = "pmwtools_test_", keep_files: bool = False):
        self.prefix = prefix
        self.keep_files = keep_files or bool(os.environ.get("KEEP_TEST_FILES"))
        self.temp_dir = None

    def __enter__(self) -> 'TempTestDir':
        self.temp_dir = tempfile.mkdtemp(prefix=self.prefix)
        logger.debug(f"Created temporary directory: {self.temp_dir}")
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if not self.keep_files and self.temp_dir:
            try:
                shutil.rmtree(self.temp_dir)
                logger.debug(f"Removed temporary directory: {self.temp_dir}")
            except Exception as e:
                logger.warning(f"Failed to remove temporary directory {self.temp_dir}: {e}")

    def path(self, *parts: str) -> str:
        """Path inside the temporary directory."""
        return os.path.join(self.temp_dir, *parts)

    def write(self, name: str, text: str) -> str:
        target = self.path(name)
        with open(target, "w", encoding="utf-8") as f:
            f.write(text)
        return target


# -----------------------------
# Small instances
# -----------------------------
def single_edge() -> nx.Graph:
    return nx.path_graph(2)


def path3() -> nx.Graph:
    return nx.path_graph(3)


def triangle() -> nx.Graph:
    return nx.complete_graph(3)


def assignment(**values: bool) -> LiteralSet:
    """LiteralSet from keyword arguments x0=True, x3=False, ..."""
    return LiteralSet({int(name[1:]): value for name, value in values.items()})


class TestResult:
    """Container for test results."""
    __test__ = False

    def __init__(self, name: str, success: bool, returncode: int = 0, stdout: str = "", stderr: str = "",
                 details: Dict[str, Any] = None):
        self.name = name
        self.success = success
        self.returncode = returncode
        self.stdout = stdout
        self.stderr = stderr
        self.details = details or {}
        self.timestamp = time.time()

    def to_dict(self) -> Dict[str, Any]:
        """Convert test result to dictionary."""
        return {
            "name": self.name,
            "success": self.success,
            "returncode": self.returncode,
            "stdout_length": len(self.stdout),
            "stderr_length": len(self.stderr),
            "details": self.details,
            "timestamp": self.timestamp,
            "time": time.ctime(self.timestamp)
        }

    def __str__(self) -> str:
        status = "PASSED" if self.success else "FAILED"
        return f"Test {self.name}: {status} (returncode={self.returncode})"


def pmw_test(name: str = None):
    """
    Decorator for slow end-to-end tests that prints a header and the elapsed time.

    Failures propagate as exceptions so that pytest and the standalone runner
    both see them.
    """
    def decorator(test_func):
        computed_test_name = name if name is not None else test_func.__name__

        @wraps(test_func)
        def wrapper(*args, **kwargs):
            print_header(f"Running test: {computed_test_name}")
            start_time = time.time()
            test_func(*args, **kwargs)
            logger.info(f"{computed_test_name} finished in {time.time() - start_time:.2f} seconds")

        wrapper.test_name = computed_test_name
        return wrapper

    # Handle the case where the decorator is used without parameters
    if callable(name):
        func = name
        name = None
        return decorator(func)

    return decorator
