#!/usr/bin/python3

# Copyright (c) 2025 Humanitarian OpenStreetMap Team
#
# This file is part of graphent.
#
#     This is free software: you can redistribute it and/or modify
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

import json
import os
from collections import Counter

import numpy as np
import pytest

# Find the other files for this project
import graphent as ge
from graphent.errors import GraphError, GraphSyntaxError, PreconditionError
from graphent.graph import (
    Edge,
    Graph,
    adjacency_matrix,
    components,
    cycle,
    disjoint_union,
    eliminate,
    extended_graph,
    from_matrix,
    line,
    load_graph,
    opposite_graph,
    parse_graph,
    parse_json,
    rose,
    serialize_graph,
    to_networkx,
    to_text,
    trim,
    vertex_classes,
)

rootdir = ge.__path__[0]
if os.path.basename(rootdir) == "graphent":
    rootdir = "./tests/"


def test_parse_fibonacci():
    g = parse_graph("v1; v2; v1 -> v2; v2 -> v1; v2 -> v2")
    assert g.vertices == ("v1", "v2")
    assert g.size == 3
    assert [e.name for e in g.edges] == ["e1", "e2", "e3"]
    assert adjacency_matrix(g).tolist() == [[0, 1], [1, 1]]


def test_parse_single_vertex():
    g = parse_graph("v")
    assert g.vertices == ("v",)
    assert g.size == 0


def test_parse_syntax_error_line():
    with pytest.raises(GraphSyntaxError) as error:
        parse_graph("v1; v2\nv1 -> v2\nv1 ->")
    assert error.value.lineno == 3
    assert "line 3" in str(error.value)


def test_parse_implicit_vertices_and_comments():
    g = parse_graph("# header\nb -> a  # trailing\na -> c [x]\n")
    assert g.vertices == ("b", "a", "c")
    assert g.edge_map["x"] == Edge("x", "a", "c")


def test_auto_names_skip_labels():
    g = parse_graph("a -> b [e1]\nb -> a\nb -> b")
    assert [e.name for e in g.edges] == ["e1", "e2", "e3"]


def test_duplicates_rejected(caplog):
    with pytest.raises(GraphSyntaxError):
        parse_graph("a; a")
    with pytest.raises(GraphSyntaxError) as info:
        parse_graph("a -> b [x]\nb -> a [x]")
    assert info.value.lineno == 2
    assert "Edge name x used twice" in caplog.text
    with pytest.raises(GraphError):
        Graph(("a",), (("e", "a", "b"),))
    # declaring a vertex after an edge used it is fine
    assert parse_graph("a -> b\nb;").vertices == ("a", "b")


def test_load_text_and_json():
    g = load_graph(f"{rootdir}/fibonacci.graph")
    assert g.name == "fibonacci"
    assert adjacency_matrix(g).tolist() == [[0, 1], [1, 1]]

    fork = load_graph(f"{rootdir}/fork.json")
    assert fork.vertices == ("u", "v", "w")
    assert vertex_classes(fork).sinks == frozenset({"v", "w"})

    with pytest.raises(GraphSyntaxError):
        load_graph(f"{rootdir}/broken.graph")


def test_json_round_trip():
    g = parse_graph("b; a\nb -> a [z]\na -> b [y]\na -> a [x]")
    again = parse_json(serialize_graph(g))
    assert again.vertices == g.vertices
    assert Counter(again.edges) == Counter(g.edges)
    names = [e["name"] for e in json.loads(serialize_graph(g))["edges"]]
    assert names == ["x", "y", "z"]


def test_text_round_trip():
    g = extended_graph(parse_graph("v1; v2; v1 -> v2; v2 -> v1; v2 -> v2"))
    again = parse_graph(to_text(g))
    assert again == g


def test_parse_json_errors():
    with pytest.raises(GraphSyntaxError):
        parse_json("{not json")
    with pytest.raises(GraphError):
        parse_json({"edges": []})
    with pytest.raises(GraphError):
        parse_json({"vertices": ["a"], "edges": [{"name": "e"}]})


def test_adjacency_examples():
    assert adjacency_matrix(rose(4)).tolist() == [[4]]
    assert adjacency_matrix(parse_graph("a; b; c")).tolist() == [[0] * 3] * 3


def test_extended_and_opposite():
    for g in (rose(1), cycle(4), parse_graph("u -> v\nu -> w\nv -> v")):
        matrix = adjacency_matrix(g)
        assert np.array_equal(adjacency_matrix(extended_graph(g)), matrix + matrix.T)
        assert np.array_equal(adjacency_matrix(opposite_graph(g)), matrix.T)
        twice = opposite_graph(opposite_graph(g))
        assert np.array_equal(adjacency_matrix(twice), matrix)

    hat = extended_graph(rose(1))
    assert hat.order == 1 and hat.size == 2
    assert "e1*" in hat.edge_map
    empty = parse_graph("a; b")
    assert extended_graph(empty) == empty


def test_cycle_extended_is_circulant():
    matrix = adjacency_matrix(extended_graph(cycle(5)))
    for i in range(5):
        assert matrix[i, (i + 1) % 5] == 1
        assert matrix[i, (i - 1) % 5] == 1
        assert sum(matrix[i, :]) == 2


def test_vertex_classes():
    classes = vertex_classes(line(4))
    assert classes.sources == frozenset({"v1"})
    assert classes.sinks == frozenset({"v4"})
    assert classes.regular == frozenset({"v1", "v2", "v3"})

    classes = vertex_classes(rose(3))
    assert not classes.sinks and not classes.sources

    classes = vertex_classes(parse_graph("x"))
    assert classes.sinks == classes.sources == frozenset({"x"})


def test_sink_rows_source_columns(corpus):
    for g in corpus:
        matrix = adjacency_matrix(g)
        classes = vertex_classes(g)
        for v in classes.sinks:
            assert not any(matrix[g.index[v], :])
        for v in classes.sources:
            assert not any(matrix[:, g.index[v]])


def test_eliminate(zoo):
    assert eliminate(line(2), {"v2"}).vertices == ("v1",)
    g = zoo.getGraph("tail-and-loop")
    smaller = eliminate(g, {"5"})
    assert "5" not in smaller.vertices
    assert all("5" not in (e.source, e.range) for e in smaller.edges)
    assert smaller.size == g.size - 1
    assert eliminate(g, set()) == g
    with pytest.raises(PreconditionError):
        eliminate(g, {"2"})


def test_trim(zoo):
    assert trim(line(5)).is_empty()
    assert trim(rose(3)) == rose(3)
    g = zoo.getGraph("tail-and-loop")
    assert trim(g).vertices == tuple(zoo.expected("tail-and-loop")["trimmed"])


def test_components():
    two = disjoint_union(rose(2), rose(3))
    assert two.order == 2 and two.size == 5
    assert len(components(two)) == 2
    assert len(components(cycle(4))) == 1
    assert len(components(parse_graph("a; b; c"))) == 3


def test_disjoint_union_block_diagonal():
    union = disjoint_union(cycle(2), cycle(3))
    matrix = adjacency_matrix(union)
    assert matrix.shape == (5, 5)
    assert np.array_equal(matrix[:2, :2], adjacency_matrix(cycle(2)))
    assert np.array_equal(matrix[2:, 2:], adjacency_matrix(cycle(3)))
    assert not any(matrix[:2, 2:].flatten()) and not any(matrix[2:, :2].flatten())

    g = rose(2)
    assert disjoint_union(g, Graph()) == g


def test_components_rebuild(corpus):
    for g in corpus[:50]:
        parts = components(g)
        rebuilt = Graph()
        for part in parts:
            rebuilt = disjoint_union(rebuilt, part)
        assert sorted(rebuilt.vertices) == sorted(g.vertices)
        assert Counter(rebuilt.edges) == Counter(g.edges)


def test_from_matrix_and_networkx():
    g = from_matrix([[0, 2], [1, 0]])
    assert g.vertices == ("v1", "v2")
    assert g.size == 3
    assert adjacency_matrix(g).tolist() == [[0, 2], [1, 0]]
    graph = to_networkx(g)
    assert graph.number_of_edges() == 3
    assert graph.has_edge("v1", "v2", key="e2")
    with pytest.raises(GraphError):
        from_matrix([[1, 2, 3]])


if __name__ == "__main__":
    print("--- test_parse_fibonacci() ---")
    test_parse_fibonacci()
    print("--- test_text_round_trip() ---")
    test_text_round_trip()
    print("--- test_extended_and_opposite() ---")
    test_extended_and_opposite()
    print("--- done() ---")
