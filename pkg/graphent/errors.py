#!/usr/bin/python3

# Copyright (c) 2025 Humanitarian OpenStreetMap Team
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Affero General Public License as
# published by the Free Software Foundation, either version 3 of the
# License, or (at your option) any later version.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Affero General Public License for more details.

# You should have received a copy of the GNU Affero General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.

"""Exceptions raised by graphent."""

from typing import Optional


class GraphentError(Exception):
    """Base class for every error raised by this package."""


class GraphError(GraphentError, ValueError):
    """The graph itself is invalid, duplicate names or unknown endpoints."""


class GraphSyntaxError(GraphError):
    """A graph file could not be parsed."""

    def __init__(self, message: str, lineno: Optional[int] = None):
        """Init the GraphSyntaxError object.

        Args:
            message (str): What went wrong
            lineno (int): The 1-based line of the offending statement
        """
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class PreconditionError(GraphentError, ValueError):
    """An operation was called outside of its domain."""


class CapExceeded(GraphentError, RuntimeError):
    """An exhaustive enumeration grew past its configured cap."""


class CheckFailure(GraphentError):
    """Two independent computations disagreed."""


class UsageError(GraphentError, ValueError):
    """The command line could not be parsed."""
