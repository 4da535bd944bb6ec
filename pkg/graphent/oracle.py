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

"""Brute force ground truth on small graphs.

Paths are enumerated one labelled edge sequence at a time, and the
lambda mu* basis of each Leavitt layer is counted from those lists,
never from a matrix. The randomized checks compare these counts with
the closed formulas.
"""

import argparse
import concurrent.futures
import logging
import sys
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from cpuinfo import get_cpu_info

from graphent.config import resolve
from graphent.cycles import canonical_cycle, enumerate_cycles
from graphent.errors import CapExceeded, PreconditionError
from graphent.graph import Edge, Graph, adjacency_matrix, to_text
from graphent.leavitt import leavitt_quotient_dim
from graphent.spectral import mat_pow, norm_11

# Instantiate logger
log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PathList:
    """Every path of one length.

    Paths are tuples of edge names. The trivial paths of length 0 are
    one-element tuples holding the vertex name.
    """

    length: int
    paths: tuple

    def __len__(self) -> int:
        return len(self.paths)


@dataclass(frozen=True)
class BasisCount:
    """Size of one Leavitt layer, counted pair by pair."""

    k: int
    count: int
    designated: dict


@dataclass(frozen=True)
class Mismatch:
    """A disagreement found by the randomized checks."""

    seed: int
    check: str
    k: int
    expected: int
    found: int
    graph: Graph

    def describe(self) -> str:
        """A human readable report, the graph in the text format."""
        return (
            f"seed {self.seed}: {self.check} at k={self.k}, "
            f"expected {self.expected}, found {self.found}\n{to_text(self.graph)}"
        )


def path_range(g: Graph, path: tuple, length: int) -> str:
    """The vertex a path ends at."""
    if length == 0:
        return path[0]
    return g.edge_map[path[-1]].range


def path_source(g: Graph, path: tuple, length: int) -> str:
    """The vertex a path starts from."""
    if length == 0:
        return path[0]
    return g.edge_map[path[0]].source


def _levels(g: Graph, kmax: int, cap: int) -> list:
    """PathList objects for every length 0..kmax, each extending the last."""
    levels = [PathList(0, tuple((v,) for v in g.vertices))]
    current = [(e.name,) for e in g.edges]
    for n in range(1, kmax + 1):
        if n > 1:
            following = list()
            for path in current:
                for e in g.out_edges(g.edge_map[path[-1]].range):
                    following.append(path + (e.name,))
                if len(following) > cap:
                    log.error(f"More than {cap} paths of length {n}")
                    raise CapExceeded(f"More than {cap} paths of length {n}")
            current = following
        levels.append(PathList(n, tuple(current)))
    return levels


def enum_paths(g: Graph, n: int, cap: Optional[int] = None) -> PathList:
    """Every labelled path of length exactly n.

    Args:
        g (Graph): The graph
        n (int): The length, 0 giving the vertices
        cap (int): Abort past this many paths, oracle:max_paths if None

    Returns:
        (PathList): the paths
    """
    if n < 0:
        raise PreconditionError(f"Path length must be nonnegative, not {n}")
    return _levels(g, n, resolve(cap, "oracle:max_paths"))[-1]


def path_counts(g: Graph, paths: PathList) -> Counter:
    """How many listed paths run between each (source, range) pair."""
    return Counter(
        (path_source(g, p, paths.length), path_range(g, p, paths.length))
        for p in paths.paths
    )


def designated_edges(g: Graph, rule: str = "least") -> dict:
    """Pick one outgoing edge name at every vertex that is not a sink.

    Args:
        g (Graph): The graph
        rule (str): least or greatest edge name

    Returns:
        (dict): vertex to edge name
    """
    if rule not in ("least", "greatest"):
        raise PreconditionError(f"Unknown designation rule {rule}")
    pick = min if rule == "least" else max
    return {
        v: pick(e.name for e in g.out_edges(v)) for v in g.vertices if g.out_edges(v)
    }


def _rejected(g: Graph, designated: dict, lam: tuple, mu: tuple, i: int, j: int):
    """True for lambda' f, mu' f with f designated at its source."""
    if i == 0 or j == 0 or lam[-1] != mu[-1]:
        return False
    last = lam[-1]
    return designated.get(g.edge_map[last].source) == last


def _check_k(k: int):
    limit = resolve(None, "oracle:max_k")
    if k < 0 or k > limit:
        raise PreconditionError(f"k must be between 0 and {limit}, not {k}")


def _groups(g: Graph, levels: list) -> list:
    """Per length, how many paths share each (range, last edge)."""
    return [
        Counter(
            (path_range(g, p, level.length), p[-1] if level.length else None)
            for p in level.paths
        )
        for level in levels
    ]


def _count_pairs(g: Graph, groups: list, designated: dict, k: int) -> int:
    """Admitted pairs of layer k, matching groups of lambdas and mus."""
    count = 0
    for i in range(k + 1):
        left, right = groups[i], groups[k - i]
        right_by_range = Counter()
        for (vertex, _), m in right.items():
            right_by_range[vertex] += m
        for (vertex, last), m in left.items():
            count += m * right_by_range[vertex]
            if last is not None and designated.get(g.edge_map[last].source) == last:
                count -= m * right.get((vertex, last), 0)
    return count


def count_basis(
    g: Graph, k: int, designate: str = "least", cap: Optional[int] = None
) -> BasisCount:
    """Count the admitted lambda mu* pairs with l(lambda) + l(mu) = k.

    Pairs need r(lambda) = r(mu). A pair is rejected when both end with
    the same designated edge f, so lambda = lambda' f and mu = mu' f.
    Paths are grouped by range and last edge, and each group of lambdas
    is matched against the mus it may pair with.

    Args:
        g (Graph): The graph
        k (int): The layer, at most oracle:max_k
        designate (str): least or greatest edge name at each vertex
        cap (int): path enumeration cap, oracle:max_paths if None

    Returns:
        (BasisCount): the count and the designated edges
    """
    _check_k(k)
    designated = designated_edges(g, designate)
    levels = _levels(g, k, resolve(cap, "oracle:max_paths"))
    count = _count_pairs(g, _groups(g, levels), designated, k)
    log.debug(f"Layer {k} has {count} basis elements")
    return BasisCount(k, count, designated)


def enum_basis(g: Graph, k: int, designate: str = "least") -> list:
    """List the admitted (lambda, mu) pairs of layer k one by one."""
    _check_k(k)
    cap = resolve(None, "oracle:max_pairs")
    designated = designated_edges(g, designate)
    pairs = list()
    for i in range(k + 1):
        lefts = enum_paths(g, i)
        rights = enum_paths(g, k - i)
        for lam in lefts.paths:
            end = path_range(g, lam, i)
            for mu in rights.paths:
                if path_range(g, mu, k - i) != end:
                    continue
                if _rejected(g, designated, lam, mu, i, k - i):
                    continue
                pairs.append((lam, mu))
                if len(pairs) > cap:
                    raise CapExceeded(f"More than {cap} basis pairs")
    return pairs


def enum_cycles_naive(g: Graph) -> list:
    """List simple cycles by plain depth first search.

    Each cycle is found once, from its vertex of lowest index.
    """
    found = list()
    for start in g.vertices:
        floor = g.index[start]

        def walk(vertex: str, path: tuple, seen: frozenset):
            for e in g.out_edges(vertex):
                if e.range == start:
                    found.append(canonical_cycle(g, path + (e.name,)))
                elif g.index[e.range] > floor and e.range not in seen:
                    walk(e.range, path + (e.name,), seen | {e.range})

        walk(start, (), frozenset([start]))

    found.sort(key=lambda c: (c.edges, c.length))
    return found


def random_graph(seed: int, max_v: int, max_e: int) -> Graph:
    """A reproducible random multigraph.

    The generator is numpy's default_rng(seed) (PCG64). It draws the
    vertex count n from [1, max_v], then the edge count m from
    [0, max_e], then an m x 2 array of endpoints from [0, n). Vertices
    are v1..vn and edge i runs from row i's first to its second entry.

    Args:
        seed (int): The seed
        max_v (int): Most vertices, at least 1
        max_e (int): Most edges

    Returns:
        (Graph): the graph, named after the seed
    """
    if max_v < 1:
        raise PreconditionError("Random graphs need at least one vertex")
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, max_v + 1))
    m = int(rng.integers(0, max_e + 1))
    ends = rng.integers(0, n, size=(m, 2))
    vertices = tuple(f"v{i + 1}" for i in range(n))
    edges = tuple(
        Edge(f"e{i + 1}", vertices[int(s)], vertices[int(r)])
        for i, (s, r) in enumerate(ends)
    )
    return Graph(vertices, edges, f"seed{seed}")


def check_graph(g: Graph, max_k: int, seed: int = -1) -> list:
    """Compare every brute force count on g with its formula.

    Args:
        g (Graph): The graph
        max_k (int): Largest layer and path length to compare
        seed (int): Recorded in any mismatch

    Returns:
        (list): Mismatch objects, empty when everything agrees
    """
    _check_k(max_k)
    mismatches = list()
    matrix = adjacency_matrix(g)
    levels = _levels(g, max_k, resolve(None, "oracle:max_paths"))
    groups = _groups(g, levels)
    designations = {rule: designated_edges(g, rule) for rule in ("least", "greatest")}
    for k in range(max_k + 1):
        expected = norm_11(mat_pow(matrix, k))
        found = len(levels[k])
        if found != expected:
            mismatches.append(Mismatch(seed, "paths", k, expected, found, g))

        expected = leavitt_quotient_dim(g, k)
        for rule, designated in designations.items():
            found = _count_pairs(g, groups, designated, k)
            if found != expected:
                check = f"basis/{rule}"
                mismatches.append(Mismatch(seed, check, k, expected, found, g))

    fast, slow = enumerate_cycles(g), enum_cycles_naive(g)
    if fast != slow:
        mismatches.append(Mismatch(seed, "cycles", 0, len(slow), len(fast), g))
    return mismatches


def _check_seed(job: tuple) -> list:
    seed, max_v, max_e, max_k = job
    return check_graph(random_graph(seed, max_v, max_e), max_k, seed)


def cores() -> int:
    """Number of CPU cores to spread the randomized checks over."""
    return get_cpu_info()["count"]


def check_random(
    seed: int,
    trials: int,
    max_v: int = 4,
    max_e: int = 6,
    max_k: int = 8,
    jobs: int = 1,
    progress: Optional[Callable] = None,
) -> list:
    """Run check_graph() on random graphs for seeds seed..seed+trials-1.

    Args:
        seed (int): The first seed
        trials (int): How many graphs
        max_v (int): Most vertices per graph
        max_e (int): Most edges per graph
        max_k (int): Largest layer compared
        jobs (int): worker processes, 1 runs in this process
        progress (Callable): called once per finished graph

    Returns:
        (list): every Mismatch, in seed order
    """
    jobs_list = [(s, max_v, max_e, max_k) for s in range(seed, seed + trials)]
    mismatches = list()
    if jobs <= 1:
        results = map(_check_seed, jobs_list)
        for result in results:
            mismatches.extend(result)
            if progress:
                progress()
    else:
        log.debug(f"Dispatching {trials} graphs to {jobs} processes")
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as executor:
            for result in executor.map(_check_seed, jobs_list, chunksize=8):
                mismatches.extend(result)
                if progress:
                    progress()

    log.info(f"Checked {trials} graphs, {len(mismatches)} mismatches")
    return mismatches


def main():
    """This main function lets this module be run standalone by a bash script."""
    parser = argparse.ArgumentParser(
        prog="oracle",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description="Compare brute force counts with the formulas",
        epilog="""
        This should only be run standalone for debugging purposes.
        """,
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="verbose output")
    parser.add_argument("-s", "--seed", type=int, default=0, help="First seed")
    parser.add_argument("-t", "--trials", type=int, default=20, help="Graphs")
    args = parser.parse_args()

    # if verbose, dump to the terminal.
    if args.verbose:
        log.setLevel(logging.DEBUG)
        ch = logging.StreamHandler(sys.stdout)
        ch.setLevel(logging.DEBUG)
        formatter = logging.Formatter(
            "%(threadName)10s - %(name)s - %(levelname)s - %(message)s"
        )
        ch.setFormatter(formatter)
        log.addHandler(ch)

    for mismatch in check_random(args.seed, args.trials):
        print(mismatch.describe())


if __name__ == "__main__":
    """This is just a hook so this file can be run standalone during development."""
    main()
