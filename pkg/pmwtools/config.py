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
config.py

Experiment configuration: built-in defaults, environment overrides, an optional
YAML file and command-line flags, applied in that order (later wins).
"""

import dataclasses
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional

import pmwtools
from pmwtools.errors import PreconditionError

ENV_OVERRIDES = {
    "PMWTOOLS_CAP_PERMS": "cap_perms",
    "PMWTOOLS_CAP_MODELS": "cap_models",
    "PMWTOOLS_CAP_PATHS": "cap_paths",
    "PMWTOOLS_SEED": "seed",
}

DELETION_MODES = ("uniform", "concentrated")


@dataclass
class ExperimentConfig:
    """Every knob of the generators and verification suites."""
    seed: int = pmwtools.DEFAULT_SEED
    k: int = 8
    height: int = 1
    cap_perms: int = pmwtools.DEFAULT_CAP_PERMS
    cap_models: int = pmwtools.DEFAULT_CAP_MODELS
    cap_paths: int = pmwtools.DEFAULT_CAP_PATHS
    scdt_var_cap: int = pmwtools.DEFAULT_SCDT_VAR_CAP
    ratios: List[float] = field(default_factory=lambda: [1.0])
    mode: str = "uniform"
    q: Optional[int] = None
    trials: int = 1
    threads: int = 1
    out_dir: Optional[str] = None
    show_progress: bool = True

    # pmw suite
    pmw_max_nodes: int = 7
    witness_max_nodes: int = 8
    pmw_full_graphs: int = 30
    pmw_full_nodes: int = 8
    pmw_random_graphs: int = 20
    constructive_samples: int = 350
    constructive_max_height: int = 5

    # scdt suite
    scdt_max_nodes: int = 7
    scdt_extended: bool = False
    scdt_random_cnfs: int = 100
    scdt_random_max_vars: int = 12
    scdt_orders: int = 3
    maintree_max_size: int = 3
    manyvars_graphs: int = 200
    manyvars_max_nodes: int = 20
    manyvars_max_degree: int = 7

    # nrobp suite
    nrobp_functions: int = 100
    nrobp_max_vars: int = 6
    census_heights: List[int] = field(default_factory=lambda: [0, 1])
    census_ratios: List[float] = field(default_factory=lambda: [1.0, 0.5, 0.125])

    def validate(self) -> "ExperimentConfig":
        """Raise PreconditionError on an unusable setting; returns self."""
        for name in ("cap_perms", "cap_models", "cap_paths", "scdt_var_cap", "trials", "threads"):
            if getattr(self, name) < 1:
                raise PreconditionError(f"{name} must be positive, got {getattr(self, name)}", clause=name)
        for ratio in list(self.ratios) + list(self.census_ratios):
            if not 0 < ratio <= 1:
                raise PreconditionError(f"ratio must be in (0, 1], got {ratio}", clause="ratio")
        if self.k < 4:
            raise PreconditionError(f"k must be at least 4, got {self.k}", clause="k")
        if self.height < 0:
            raise PreconditionError(f"height must be non-negative, got {self.height}", clause="height")
        if self.mode not in DELETION_MODES:
            raise PreconditionError(f"mode must be one of {DELETION_MODES}, got {self.mode!r}", clause="mode")
        return self

    def apply_defaults(self) -> None:
        """Make the configured caps the package-wide defaults."""
        pmwtools.DEFAULT_CAP_PERMS = self.cap_perms
        pmwtools.DEFAULT_CAP_MODELS = self.cap_models
        pmwtools.DEFAULT_CAP_PATHS = self.cap_paths
        pmwtools.DEFAULT_SCDT_VAR_CAP = self.scdt_var_cap

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)

    def update(self, values: Mapping[str, Any], source: str = "override") -> "ExperimentConfig":
        """Set known fields from values, ignoring None; unknown keys are an error."""
        known = {f.name: f for f in dataclasses.fields(self)}
        for key, value in values.items():
            if key not in known:
                raise PreconditionError(f"Unknown configuration key {key!r} in {source}", clause="config_key")
            if value is None:
                continue
            current = getattr(self, key)
            if isinstance(current, bool):
                value = value if isinstance(value, bool) else str(value).lower() in ("1", "true", "yes", "on")
            elif isinstance(current, int) and not isinstance(value, bool):
                value = int(value)
            elif isinstance(current, list) and not isinstance(value, list):
                value = [value]
            setattr(self, key, value)
        return self


def env_overrides(environ: Optional[Mapping[str, str]] = None) -> Dict[str, int]:
    """Configuration values taken from PMWTOOLS_* environment variables."""
    environ = os.environ if environ is None else environ
    values = {}
    for var, key in ENV_OVERRIDES.items():
        raw = environ.get(var)
        if raw is None or raw == "":
            continue
        try:
            values[key] = int(raw)
        except ValueError:
            raise PreconditionError(f"{var} must be an integer, got {raw!r}", clause="env")
    return values


def load_yaml_config(path: str) -> Dict[str, Any]:
    """Read a YAML mapping of configuration keys."""
    if not pmwtools.YAML_AVAILABLE:
        raise PreconditionError("PyYAML is required for --config files", clause="yaml")
    import yaml
    with open(path, "r", encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise PreconditionError(f"{path}: configuration must be a mapping", clause="yaml")
    return data


def build_config(cli_values: Optional[Mapping[str, Any]] = None, yaml_path: Optional[str] = None,
                 environ: Optional[Mapping[str, str]] = None, logger=None) -> ExperimentConfig:
    """
    Assemble a configuration.

    Args:
        cli_values: Flag values; None entries mean "not given".
        yaml_path: Optional YAML file.
        environ: Environment mapping (defaults to os.environ).
        logger: Optional logger.

    Returns:
        A validated ExperimentConfig.
    """
    if logger is None:
        logger = logging.getLogger("config")
    config = ExperimentConfig()
    env = env_overrides(environ)
    if env:
        logger.debug(f"Environment overrides: {env}")
    config.update(env, "environment")
    if yaml_path:
        config.update(load_yaml_config(yaml_path), yaml_path)
        logger.debug(f"Loaded configuration from {yaml_path}")
    if cli_values:
        config.update(cli_values, "command line")
    return config.validate()
