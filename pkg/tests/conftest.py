# Copyright (c) 2025 Humanitarian OpenStreetMap Team
#
# This file is part of graphent.
#
#     graphent is free software: you can redistribute it and/or modify
#     it under the terms of the GNU General Public License as published by
#     the Free Software Foundation, either version 3 of the License, or
#     (at your option) any later version.
#
#     graphent is distributed in the hope that it will be useful,
#     but WITHOUT ANY WARRANTY; without even the implied warranty of
#     MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
#     GNU General Public License for more details.
#
#     You should have received a copy of the GNU General Public License
#     along with graphent.  If not, see <https:#www.gnu.org/licenses/>.
#
"""Configuration and fixtures for PyTest."""

import logging
import sys

import pytest

from graphent.config import reset_settings
from graphent.oracle import random_graph
from graphent.zoo import Zoo

logging.basicConfig(
    level="DEBUG",
    format=(
        "%(asctime)s.%(msecs)03d [%(levelname)s] "
        "%(name)s | %(funcName)s:%(lineno)d | %(message)s"
    ),
    datefmt="%y-%m-%d %H:%M:%S",
    stream=sys.stdout,
)

log = logging.getLogger(__name__)

# Seeds of the random corpus shared by the property tests
CORPUS_SEEDS = range(200)


@pytest.fixture(autouse=True)
def fresh_settings():
    """Every test starts from the bundled defaults."""
    reset_settings()
    yield
    reset_settings()


@pytest.fixture(scope="session")
def zoo():
    """The bundled example graphs."""
    return Zoo()


@pytest.fixture(scope="session")
def corpus():
    """Random graphs with at most 4 vertices and 6 edges."""
    return [random_graph(seed, 4, 6) for seed in CORPUS_SEEDS]
