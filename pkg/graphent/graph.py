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

"""Finite directed multigraphs, their file formats and transforms.

A graph keeps its vertices in first-appearance order, which fixes the
row and column order of the adjacency matrix. Parallel edges and loops
are kept individually so every path has its own edge labels.
"""

import argparse
import json
import logging
import re
import sys
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Union

import networkx as nx
import numpy as np

from graphent.errors import GraphError, GraphSyntaxError, PreconditionError

# Instantiate logger
log = logging.getLogger(__name__)

# Suffix marking the ghost edge e* of an edge e
GHOST = "*"

_NAME = r"[\w.']+"
_VERTEX_RE = re.compile(rf"^({_NAME})$")
_EDGE_RE = re.compile(
    rf"^({_NAME})\s*->\s*({_NAME})(?:\s*\[\s*([\w.'*]+)\s*\])?$"
)


@dataclass(frozen=True, order=True)
class Edge:
    """A named edge from source to range."""

    name: str
    source: str
    range: str


@dataclass(frozen=True)
class VertexClass:
    """Sinks, sources and regular vertices of a graph."""

    sinks: frozenset
    sources: frozenset
    regular: frozenset


@dataclass(frozen=True)
class Graph:
    """An immutable finite directed multigraph.

    Args:
        vertices (tuple): distinct vertex names, in matrix order
        edges (tuple): Edge objects, or (name, source, range) triples
        name (str): a label for reports, ignored by comparisons
    """

    vertices: tuple = ()
    edges: tuple = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        vertices = tuple(self.vertices)
        edges = tuple(e if isinstance(e, Edge) else Edge(*e) for e in self.edges)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)

        if len(set(vertices)) != len(vertices):
            dups = sorted({v for v in vertices if vertices.count(v) > 1})
            log.error(f"Duplicate vertex names {dups}")
            raise GraphError(f"Duplicate vertex names {dups}")

        names = [e.name for e in edges]
        if len(set(names)) != len(names):
            dups = sorted({n for n in names if names.count(n) > 1})
            log.error(f"Duplicate edge names {dups}")
            raise GraphError(f"Duplicate edge names {dups}")

        known = set(vertices)
        for e in edges:
            for end in (e.source, e.range):
                if end not in known:
                    log.error(f"Edge {e.name} uses undeclared vertex {end}")
                    raise GraphError(f"Edge {e.name} uses undeclared vertex {end}")

    @cached_property
    def index(self) -> dict:
        """Map each vertex name to its row in the adjacency matrix."""
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def _outgoing(self) -> dict:
        out = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.source].append(e)
        return {v: tuple(edges) for v, edges in out.items()}

    @cached_property
    def _incoming(self) -> dict:
        into = {v: [] for v in self.vertices}
        for e in self.edges:
            into[e.range].append(e)
        return {v: tuple(edges) for v, edges in into.items()}

    @cached_property
    def edge_map(self) -> dict:
        """Map each edge name to its Edge."""
        return {e.name: e for e in self.edges}

    def out_edges(self, vertex: str) -> tuple:
        """The edges leaving vertex, in file order."""
        return self._outgoing[vertex]

    def in_edges(self, vertex: str) -> tuple:
        """The edges entering vertex, in file order."""
        return self._incoming[vertex]

    @property
    def order(self) -> int:
        """Number of vertices."""
        return len(self.vertices)

    @property
    def size(self) -> int:
        """Number of edges."""
        return len(self.edges)

    def is_empty(self) -> bool:
        """True for the graph with no vertices."""
        return not self.vertices

    def canonical(self) -> "Graph":
        """The same graph with its edges sorted by name."""
        return Graph(self.vertices, tuple(sorted(self.edges)), self.name)


def parse_graph(text: str, name: str = "") -> Graph:
    """Parse the line oriented text format.

    Statements are separated by newlines or semicolons. `v` or `v;`
    declares a vertex, `a -> b` or `a -> b [label]` an edge, and `#`
    starts a comment. Unlabelled edges are named e1, e2, ... skipping any
    name already used as a label.

    Args:
        text (str): The file contents
        name (str): A label for the graph

    Returns:
        (Graph): The parsed graph
    """
    vertices = list()
    declared = set()
    explicit = set()
    edges = list()

    def use(vertex: str):
        if vertex not in declared:
            declared.add(vertex)
            vertices.append(vertex)

    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        for statement in line.split(";"):
            statement = statement.strip()
            if not statement:
                continue
            if match := _EDGE_RE.match(statement):
                source, target, label = match.groups()
                use(source)
                use(target)
                edges.append((lineno, label, source, target))
            elif match := _VERTEX_RE.match(statement):
                vertex = match.group(1)
                # declaring a vertex already used by an edge is fine
                if vertex in explicit:
                    log.error(f"Vertex {vertex} declared twice")
                    raise GraphSyntaxError(f"duplicate vertex {vertex}", lineno)
                explicit.add(vertex)
                use(vertex)
            else:
                log.error(f"Can't parse '{statement}' on line {lineno}")
                raise GraphSyntaxError(f"can't parse '{statement}'", lineno)

    labels = dict()
    for lineno, label, _, _ in edges:
        if label is None:
            continue
        if label in labels:
            log.error(f"Edge name {label} used twice")
            raise GraphSyntaxError(f"duplicate edge name {label}", lineno)
        labels[label] = lineno

    named = list()
    counter = 0
    for _, label, source, target in edges:
        if label is None:
            counter += 1
            while f"e{counter}" in labels:
                counter += 1
            label = f"e{counter}"
        named.append(Edge(label, source, target))

    graph = Graph(tuple(vertices), tuple(named), name)
    log.debug(f"Parsed {graph.order} vertices and {graph.size} edges")
    return graph


def parse_json(data: Union[str, dict], name: str = "") -> Graph:
    """Parse the JSON form of a graph.

    Args:
        data (str, dict): JSON text, or the already decoded object
        name (str): A label for the graph

    Returns:
        (Graph): The parsed graph
    """
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as e:
            log.error(f"Invalid JSON graph: {e}")
            raise GraphSyntaxError(f"invalid JSON: {e.msg}", e.lineno) from e

    if not isinstance(data, dict) or "vertices" not in data:
        raise GraphError("A JSON graph needs a 'vertices' list")

    try:
        edges = tuple(
            Edge(str(e["name"]), str(e["source"]), str(e["range"]))
            for e in data.get("edges", [])
        )
    except (KeyError, TypeError) as e:
        log.error(f"Edge entries need name, source and range: {e}")
        raise GraphError("Edge entries need name, source and range") from e

    return Graph(tuple(str(v) for v in data["vertices"]), edges, name)


def serialize_graph(g: Graph) -> str:
    """The canonical JSON form, with edges sorted by name."""
    data = {
        "vertices": list(g.vertices),
        "edges": [
            {"name": e.name, "source": e.source, "range": e.range}
            for e in sorted(g.edges)
        ],
    }
    return json.dumps(data, indent=2)


def to_text(g: Graph) -> str:
    """The text form, readable by parse_graph()."""
    lines = list()
    if g.name:
        lines.append(f"# {g.name}")
    lines.extend(f"{v};" for v in g.vertices)
    lines.extend(f"{e.source} -> {e.range} [{e.name}]" for e in g.edges)
    return "\n".join(lines) + "\n"


def load_graph(path: Union[str, Path]) -> Graph:
    """Read a graph file, JSON when the suffix is .json.

    Args:
        path (str, Path): The graph file

    Returns:
        (Graph): The parsed graph, named after the file
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json":
        graph = parse_json(text, path.stem)
    else:
        graph = parse_graph(text, path.stem)
    log.info(f"Loaded {path}: {graph.order} vertices, {graph.size} edges")
    return graph


def adjacency_matrix(g: Graph) -> np.ndarray:
    """A_E as an object array of Python ints, rows are sources."""
    n = g.order
    matrix = np.zeros((n, n), dtype=object)
    for e in g.edges:
        matrix[g.index[e.source], g.index[e.range]] += 1
    return matrix


def from_matrix(matrix, name: str = "") -> Graph:
    """Build a graph with vertices v1..vn from a square count matrix.

    Args:
        matrix (array-like): nonnegative integer entries, rows are sources
        name (str): A label for the graph

    Returns:
        (Graph): one edge per unit of each entry, named e1, e2, ...
    """
    matrix = np.asarray(matrix, dtype=object)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise GraphError(f"Expected a square matrix, got shape {matrix.shape}")
    n = matrix.shape[0]
    vertices = tuple(f"v{i + 1}" for i in range(n))
    edges = list()
    for i in range(n):
        for j in range(n):
            count = int(matrix[i, j])
            if count < 0:
                raise GraphError(f"Negative entry at ({i}, {j})")
            for _ in range(count):
                edges.append(Edge(f"e{len(edges) + 1}", vertices[i], vertices[j]))
    return Graph(vertices, tuple(edges), name)


def extended_graph(g: Graph) -> Graph:
    """Add the reversed ghost edge e* of every edge e."""
    ghosts = tuple(Edge(f"{e.name}{GHOST}", e.range, e.source) for e in g.edges)
    return Graph(g.vertices, g.edges + ghosts, g.name)


def opposite_graph(g: Graph) -> Graph:
    """Reverse every edge."""
    edges = tuple(Edge(e.name, e.range, e.source) for e in g.edges)
    return Graph(g.vertices, edges, g.name)


def vertex_classes(g: Graph) -> VertexClass:
    """Split the vertices into sinks, sources and regular vertices."""
    sinks = frozenset(v for v in g.vertices if not g.out_edges(v))
    sources = frozenset(v for v in g.vertices if not g.in_edges(v))
    regular = frozenset(g.vertices) - sinks
    return VertexClass(sinks, sources, regular)


def eliminate(g: Graph, remove: Iterable[str]) -> Graph:
    """Remove a set of sinks and sources with every edge touching them.

    Args:
        g (Graph): The graph
        remove (Iterable[str]): Vertices to drop, each a sink or a source

    Returns:
        (Graph): The graph without those vertices
    """
    remove = frozenset(remove)
    unknown = remove - set(g.vertices)
    if unknown:
        raise GraphError(f"Unknown vertices {sorted(unknown)}")

    classes = vertex_classes(g)
    allowed = classes.sinks | classes.sources
    if not remove <= allowed:
        bad = sorted(remove - allowed)
        log.error(f"Only sinks and sources can be eliminated, not {bad}")
        raise PreconditionError(f"{bad} are neither sinks nor sources")

    vertices = tuple(v for v in g.vertices if v not in remove)
    edges = tuple(
        e for e in g.edges if e.source not in remove and e.range not in remove
    )
    return Graph(vertices, edges, g.name)


def trim(g: Graph) -> Graph:
    """Eliminate sinks and sources until none are left."""
    current = g
    while True:
        classes = vertex_classes(current)
        remove = classes.sinks | classes.sources
        if not remove:
            return current
        log.debug(f"Trimming {sorted(remove)}")
        current = eliminate(current, remove)


def to_networkx(g: Graph) -> nx.MultiDiGraph:
    """A MultiDiGraph with one keyed edge per graph edge."""
    graph = nx.MultiDiGraph()
    graph.add_nodes_from(g.vertices)
    for e in g.edges:
        graph.add_edge(e.source, e.range, key=e.name)
    return graph


def components(g: Graph) -> list:
    """The weakly connected components, ordered by their first vertex."""
    parts = list()
    for members in nx.weakly_connected_components(to_networkx(g)):
        first = min(g.index[v] for v in members)
        parts.append((first, members))
    parts.sort(key=lambda part: part[0])

    result = list()
    for number, (_, members) in enumerate(parts, start=1):
        vertices = tuple(v for v in g.vertices if v in members)
        edges = tuple(e for e in g.edges if e.source in members)
        label = f"{g.name}#{number}" if g.name else ""
        result.append(Graph(vertices, edges, label))
    return result


def _rename_apart(names: Iterable[str], taken: set) -> dict:
    renamed = dict()
    for name in names:
        new = name
        while new in taken:
            new += "'"
        taken.add(new)
        renamed[name] = new
    return renamed


def disjoint_union(a: Graph, b: Graph) -> Graph:
    """Place b next to a, priming any of b's names that clash with a."""
    vmap = _rename_apart(b.vertices, set(a.vertices))
    emap = _rename_apart((e.name for e in b.edges), {e.name for e in a.edges})
    edges = tuple(Edge(emap[e.name], vmap[e.source], vmap[e.range]) for e in b.edges)
    name = "+".join(n for n in (a.name, b.name) if n)
    return Graph(a.vertices + tuple(vmap.values()), a.edges + edges, name)


def rose(petals: int) -> Graph:
    """R_n, one vertex with n loops."""
    edges = tuple(Edge(f"e{i}", "v", "v") for i in range(1, petals + 1))
    return Graph(("v",), edges, f"rose{petals}")


def cycle(length: int) -> Graph:
    """C_n, the cycle v1 -> v2 -> ... -> vn -> v1."""
    if length < 1:
        raise PreconditionError("A cycle needs at least one vertex")
    vertices = tuple(f"v{i}" for i in range(1, length + 1))
    edges = tuple(
        Edge(f"e{i}", vertices[i - 1], vertices[i % length])
        for i in range(1, length + 1)
    )
    return Graph(vertices, edges, f"cycle{length}")


def line(length: int) -> Graph:
    """A_n, the path v1 -> v2 -> ... -> vn."""
    vertices = tuple(f"v{i}" for i in range(1, length + 1))
    edges = tuple(
        Edge(f"e{i}", vertices[i - 1], vertices[i]) for i in range(1, length)
    )
    return Graph(vertices, edges, f"line{length}")


def main():
    """This main function lets this module be run standalone by a bash script."""
    parser = argparse.ArgumentParser(
        prog="graph",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description="Parse a graph file and show its structure",
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
    classes = vertex_classes(graph)
    print(f"Vertices: {', '.join(graph.vertices)}")
    print(f"Sinks: {sorted(classes.sinks)}, sources: {sorted(classes.sources)}")
    print(adjacency_matrix(graph))
    print(f"Trimmed: {', '.join(trim(graph).vertices) or '(empty)'}")


if __name__ == "__main__":
    """This is just a hook so this file can be run standalone during development."""
    main()
