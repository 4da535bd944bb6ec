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

"""Cycles, the exclusive cycle condition and the dimensions they decide.

A graph satisfies the exclusive cycle condition when any two distinct
cycles share no vertex. Under it the reachability relation between
cycles is a DAG, and the longest chains in that DAG give the
Gelfand-Kirillov dimensions of the path and Leavitt path algebras.
"""

import argparse
import itertools
import logging
import math
import sys
from dataclasses import dataclass
from typing import Optional, Union

import networkx as nx

from graphent.config import resolve
from graphent.errors import CapExceeded, PreconditionError
from graphent.graph import Graph, load_graph, to_networkx

# Instantiate logger
log = logging.getLogger(__name__)

# A dimension, either a natural number or math.inf
Dimension = Union[int, float]


@dataclass(frozen=True, order=True)
class Cycle:
    """A simple cycle stored in its least rotation.

    Args:
        edges (tuple): edge names e1..em, rotated to the least tuple
        vertices (tuple): the source of each edge, in the same order
    """

    edges: tuple
    vertices: tuple

    @property
    def length(self) -> int:
        """Number of edges."""
        return len(self.edges)

    @property
    def vertex_set(self) -> frozenset:
        """The vertices the cycle passes through."""
        return frozenset(self.vertices)


@dataclass(frozen=True)
class ExcResult:
    """Outcome of the exclusive cycle test, truthy when it holds."""

    holds: bool
    witness: Optional[tuple] = None

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class CycleChainReport:
    """Cycles of a graph with their chain statistics.

    d1 and d2 are None when the exclusive cycle condition fails.
    """

    cycles: tuple
    exc: bool
    d1: Optional[int]
    d2: Optional[int]
    exits: tuple
    witness: Optional[tuple] = None


def canonical_cycle(g: Graph, edges) -> Cycle:
    """Rotate a closed edge sequence to its least rotation.

    Args:
        g (Graph): The graph the edges belong to
        edges (Sequence[str]): edge names forming a simple cycle

    Returns:
        (Cycle): the canonical form
    """
    edges = tuple(edges)
    best = min(edges[i:] + edges[:i] for i in range(len(edges)))
    vertices = tuple(g.edge_map[e].source for e in best)
    return Cycle(best, vertices)


def enumerate_cycles(g: Graph, cap: Optional[int] = None) -> list:
    """List every simple cycle once.

    Vertex cycles come from Johnson's algorithm in networkx, then every
    choice among parallel edges gives its own edge cycle.

    Args:
        g (Graph): The graph
        cap (int): Abort past this many cycles, cycles:max_cycles if None

    Returns:
        (list): Cycle objects sorted by edge names, then length
    """
    cap = resolve(cap, "cycles:max_cycles")

    simple = nx.DiGraph()
    simple.add_nodes_from(g.vertices)
    parallel = dict()
    for e in g.edges:
        simple.add_edge(e.source, e.range)
        parallel.setdefault((e.source, e.range), []).append(e.name)

    cycles = list()
    for nodes in nx.simple_cycles(simple):
        hops = [
            parallel[(nodes[i], nodes[(i + 1) % len(nodes)])]
            for i in range(len(nodes))
        ]
        for choice in itertools.product(*hops):
            cycles.append(canonical_cycle(g, choice))
            if len(cycles) > cap:
                log.error(f"More than {cap} cycles in {g.name or 'graph'}")
                raise CapExceeded(f"More than {cap} simple cycles")

    cycles.sort(key=lambda c: (c.edges, c.length))
    log.debug(f"Found {len(cycles)} cycles")
    return cycles


def has_cycle(g: Graph) -> bool:
    """True when the graph has a closed path of positive length."""
    return not nx.is_directed_acyclic_graph(to_networkx(g))


def cycle_exits(g: Graph, c: Cycle) -> list:
    """The edges leaving a vertex of the cycle that are not on it."""
    on_cycle = set(c.edges)
    return [
        e.name
        for v in c.vertices
        for e in g.out_edges(v)
        if e.name not in on_cycle
    ]


def satisfies_exc(g: Graph, cycles: Optional[list] = None) -> ExcResult:
    """Decide whether distinct cycles are pairwise vertex disjoint.

    Args:
        g (Graph): The graph
        cycles (list): Precomputed enumerate_cycles(g), if any

    Returns:
        (ExcResult): truthy when the condition holds, else it carries
            two cycles sharing a vertex
    """
    if cycles is None:
        cycles = enumerate_cycles(g)

    owner = dict()
    for c in cycles:
        for v in c.vertices:
            if v in owner:
                return ExcResult(False, (owner[v], c))
            owner[v] = c
    return ExcResult(True)


def _chain_lengths(g: Graph, cycles: list, exits: tuple) -> tuple:
    """Longest chain, and longest chain ending in a cycle with an exit."""
    if not cycles:
        return 0, 0

    graph = to_networkx(g)
    dag = nx.DiGraph()
    dag.add_nodes_from(range(len(cycles)))
    for i, c in enumerate(cycles):
        reach = set()
        for v in c.vertices:
            reach |= nx.descendants(graph, v)
        for j, other in enumerate(cycles):
            if i != j and reach & other.vertex_set:
                dag.add_edge(i, j)

    if not nx.is_directed_acyclic_graph(dag):
        log.error("Cycle reachability is not acyclic")
        raise PreconditionError("Cycles are mutually reachable")

    best = dict()
    for node in nx.topological_sort(dag):
        best[node] = 1 + max((best[p] for p in dag.predecessors(node)), default=0)

    d1 = max(best.values())
    d2 = max((best[i] for i in best if exits[i]), default=0)
    return d1, d2


def chain_stats(g: Graph) -> CycleChainReport:
    """Chain statistics d1 and d2 of a graph satisfying the condition.

    Args:
        g (Graph): The graph

    Returns:
        (CycleChainReport): cycles, exits, d1 and d2
    """
    cycles = enumerate_cycles(g)
    exc = satisfies_exc(g, cycles)
    if not exc:
        log.error("Chain statistics need pairwise disjoint cycles")
        raise PreconditionError("The graph has two cycles sharing a vertex")

    exits = tuple(bool(cycle_exits(g, c)) for c in cycles)
    d1, d2 = _chain_lengths(g, cycles, exits)
    return CycleChainReport(tuple(cycles), True, d1, d2, exits)


def cycle_report(g: Graph) -> CycleChainReport:
    """Like chain_stats(), but for any graph."""
    cycles = enumerate_cycles(g)
    exc = satisfies_exc(g, cycles)
    exits = tuple(bool(cycle_exits(g, c)) for c in cycles)
    if not exc:
        return CycleChainReport(tuple(cycles), False, None, None, exits, exc.witness)
    d1, d2 = _chain_lengths(g, cycles, exits)
    return CycleChainReport(tuple(cycles), True, d1, d2, exits)


def gk_dim_leavitt(g: Graph) -> Dimension:
    """GK dimension of the Leavitt path algebra, max(2 d1 - 1, 2 d2)."""
    report = cycle_report(g)
    if not report.exc:
        return math.inf
    if not report.cycles:
        return 0
    return max(2 * report.d1 - 1, 2 * report.d2)


def gk_dim_path(g: Graph) -> Dimension:
    """GK dimension of the path algebra, the longest chain d1."""
    report = cycle_report(g)
    if not report.exc:
        return math.inf
    return report.d1


def _paths_ending(g: Graph) -> Optional[dict]:
    """Number of paths ending at each vertex, None when there is a cycle."""
    graph = to_networkx(g)
    if not nx.is_directed_acyclic_graph(graph):
        return None
    ends = dict()
    for v in nx.topological_sort(graph):
        ends[v] = 1 + sum(ends[e.source] for e in g.in_edges(v))
    return ends


def dim_path_algebra(g: Graph) -> Dimension:
    """Total number of paths, vertices included, or inf with a cycle."""
    ends = _paths_ending(g)
    if ends is None:
        return math.inf
    return sum(ends.values())


def dim_leavitt_algebra(g: Graph) -> Dimension:
    """Sum over the sinks of the squared number of paths ending there."""
    ends = _paths_ending(g)
    if ends is None:
        return math.inf
    return sum(ends[v] ** 2 for v in g.vertices if not g.out_edges(v))


def main():
    """This main function lets this module be run standalone by a bash script."""
    parser = argparse.ArgumentParser(
        prog="cycles",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description="List the cycles of a graph file",
        epilog="""
        This should only be run standalone for debugging purposes.
        """,
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="verbose output")
    parser.add_argument("-i", "--infile", required=True, help="Input graph file")
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

    graph = load_graph(args.infile)
    report = cycle_report(graph)
    for c, has_exit in zip(report.cycles, report.exits):
        print(f"{' '.join(c.edges)}{'  (exit)' if has_exit else ''}")
    print(f"EXC: {report.exc}, d1 = {report.d1}, d2 = {report.d2}")


if __name__ == "__main__":
    """This is just a hook so this file can be run standalone during development."""
    main()
