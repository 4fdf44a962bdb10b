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
errors.py

Exception hierarchy shared by all pmwtools modules.

- PreconditionError: an operation was called outside its contract
- CapExceededError: an exhaustive computation would exceed a configured cap
- VerificationError: an internal guarantee failed (a bug, not bad input)
"""

from typing import Any, Optional


class PmwToolsError(Exception):
    """Base class for all pmwtools errors."""


class PreconditionError(PmwToolsError, ValueError):
    """Raised when an input violates an operation's precondition."""

    def __init__(self, message: str, clause: Optional[str] = None, witness: Any = None):
        super().__init__(message)
        self.clause = clause
        self.witness = witness


class CapExceededError(PmwToolsError):
    """Raised when enumeration would go beyond a brute-force cap."""

    def __init__(self, cap_name: str, limit: int, requested: int):
        super().__init__(f"{cap_name} cap exceeded: requested {requested}, limit {limit}")
        self.cap_name = cap_name
        self.limit = limit
        self.requested = requested


class VerificationError(PmwToolsError, AssertionError):
    """Raised when a constructed object fails a guarantee it must satisfy."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


def check_cap(cap_name: str, limit: int, requested: int) -> None:
    """Raise CapExceededError if requested is above limit."""
    if requested > limit:
        raise CapExceededError(cap_name, limit, requested)
