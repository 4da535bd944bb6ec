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

import pytest

from graphent.cycles import enumerate_cycles
from graphent.errors import CapExceeded, PreconditionError
from graphent.graph import adjacency_matrix, cycle, line, parse_graph, rose
from graphent.leavitt import leavitt_quotient_dim
from graphent.oracle import (
    Mismatch,
    check_graph,
    check_random,
    count_basis,
    designated_edges,
    enum_basis,
    enum_cycles_naive,
    enum_paths,
    path_counts,
    random_graph,
)
from graphent.spectral import mat_pow, norm_11


def test_enum_paths_examples():
    assert len(enum_paths(rose(2), 3)) == 8
    fib = parse_graph("v1; v2; v1 -> v2; v2 -> v1; v2 -> v2")
    assert len(enum_paths(fib, 4)) == 13
    assert len(enum_paths(fib, 4)) == norm_11(mat_pow(adjacency_matrix(fib), 4))
    assert len(enum_paths(line(3), 5)) == 0
    assert enum_paths(line(3), 0).paths == (("v1",), ("v2",), ("v3",))
    with pytest.raises(PreconditionError):
        enum_paths(rose(1), -1)


def test_paths_follow_edges(zoo):
    g = zoo.getGraph("wheel")
    paths = enum_paths(g, 4)
    assert len(set(paths.paths)) == len(paths)
    for path in paths.paths:
        for e, f in zip(path, path[1:]):
            assert g.edge_map[e].range == g.edge_map[f].source


def test_path_counts_match_matrix(zoo):
    g = zoo.getGraph("linked-pairs")
    power = mat_pow(adjacency_matrix(g), 5)
    counts = path_counts(g, enum_paths(g, 5))
    for (s, r), m in counts.items():
        assert power[g.index[s], g.index[r]] == m
    assert sum(counts.values()) == norm_11(power)


def test_count_basis_roses_and_cycles():
    for n in range(1, 5):
        assert count_basis(rose(n), 2).count == 3 * n * n - 1
        assert count_basis(rose(n), 3).count == 4 * n**3 - 2 * n
    for n in range(2, 6):
        assert count_basis(cycle(n), 2).count == 2 * n
        assert count_basis(cycle(n), 7).count == 2 * n
    assert count_basis(rose(3), 0).count == 1


def test_designation_does_not_matter(zoo):
    for name in zoo.names():
        g = zoo.getGraph(name)
        for k in range(6):
            least = count_basis(g, k, "least")
            greatest = count_basis(g, k, "greatest")
            assert least.count == greatest.count == leavitt_quotient_dim(g, k)


def test_designated_edges():
    assert designated_edges(rose(3)) == {"v": "e1"}
    assert designated_edges(rose(3), "greatest") == {"v": "e3"}
    assert designated_edges(line(2)) == {"v1": "e1"}
    with pytest.raises(PreconditionError):
        designated_edges(rose(3), "random")


def test_enum_basis_matches_count(corpus):
    for g in corpus[:40]:
        for k in range(5):
            pairs = enum_basis(g, k)
            assert len(pairs) == count_basis(g, k).count
            assert len(set(pairs)) == len(pairs)


def test_k_limit():
    with pytest.raises(PreconditionError):
        count_basis(rose(2), 11)
    with pytest.raises(PreconditionError):
        count_basis(rose(2), -1)


def test_path_cap():
    with pytest.raises(CapExceeded):
        enum_paths(rose(3), 5, cap=100)
    with pytest.raises(CapExceeded):
        count_basis(rose(3), 6, cap=100)


def test_random_graph():
    assert random_graph(5, 4, 6) == random_graph(5, 4, 6)
    g = random_graph(5, 4, 6)
    assert g.name == "seed5"
    assert 1 <= g.order <= 4 and g.size <= 6
    assert random_graph(11, 3, 0).size == 0
    sizes = {random_graph(seed, 4, 6).order for seed in range(60)}
    assert sizes == {1, 2, 3, 4}
    with pytest.raises(PreconditionError):
        random_graph(0, 0, 3)


def test_naive_cycles(zoo, corpus):
    g = zoo.getGraph("wheel")
    assert enum_cycles_naive(g) == enumerate_cycles(g)
    for g in corpus[:100]:
        assert enum_cycles_naive(g) == enumerate_cycles(g)


def test_check_graph_clean(zoo):
    for name in zoo.names():
        assert check_graph(zoo.getGraph(name), 6) == []


def test_oracle_equivalence():
    assert check_random(0, 200, max_v=4, max_e=6, max_k=8) == []


def test_oracle_processes():
    ticks = list()
    mismatches = check_random(300, 16, jobs=2, progress=lambda: ticks.append(1))
    assert mismatches == []
    assert len(ticks) == 16


def test_mismatch_describe():
    mismatch = Mismatch(7, "paths", 3, 8, 9, rose(2))
    text = mismatch.describe()
    assert text.startswith("seed 7: paths at k=3, expected 8, found 9")
    assert "v -> v [e1]" in text


if __name__ == "__main__":
    print("--- test_enum_paths_examples() ---")
    test_enum_paths_examples()
    print("--- test_count_basis_roses_and_cycles() ---")
    test_count_basis_roses_and_cycles()
    print("--- done() ---")
