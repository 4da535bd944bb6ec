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

import math

import pytest
from pydantic import ValidationError

from graphent.classify import (
    analyze,
    classify,
    classify_extended,
    classify_leavitt,
    cycle_summary,
    is_cycle,
    is_rose,
)
from graphent.graph import cycle, disjoint_union, line, parse_graph, rose
from graphent.schemas import GrowthTriple, parse_report

GOLDEN = (1 + math.sqrt(5)) / 2


def test_line_is_finite():
    for n in range(1, 6):
        path, leavitt = classify(line(n))
        assert path.growth_class == leavitt.growth_class == 0
        assert (path.dimension, path.gkdim, path.entropy) == (n * (n + 1) // 2, 0, 0)
        assert leavitt.dimension == n * n
        assert leavitt.entropy_method == "growth-trichotomy"


def test_cycle_is_polynomial():
    path, leavitt = classify(cycle(4))
    assert path.growth_class == leavitt.growth_class == 1
    assert path.dimension == "inf" and path.gkdim == 1
    assert leavitt.gkdim == 1
    assert leavitt.entropy == 0
    assert leavitt.entropy_method == "closed-form"
    assert classify_leavitt(rose(1)).entropy_method == "closed-form"


def test_roses():
    path, leavitt = classify(rose(3))
    assert path.growth_class == 2
    assert path.entropy == pytest.approx(math.log(3), abs=1e-9)
    assert path.entropy_method == "spectral-exact"
    assert leavitt.entropy_method == "closed-form"
    assert leavitt.entropy == pytest.approx(math.log(3), abs=1e-12)
    assert leavitt.gkdim == "inf"


def test_fibonacci_estimate(zoo):
    leavitt = classify_leavitt(zoo.getGraph("fibonacci"))
    assert leavitt.growth_class == 2
    assert leavitt.entropy_method == "countpaths-estimate"
    lower, upper = leavitt.entropy_bounds
    assert lower == pytest.approx(math.log(GOLDEN), abs=1e-9)
    assert upper > lower
    assert abs(leavitt.entropy - math.log(GOLDEN)) < 0.02


def test_linked_pairs(zoo):
    path, leavitt = classify(zoo.getGraph("linked-pairs"), k_max=40)
    assert path.gkdim == 2
    assert leavitt.gkdim == 3
    assert path.growth_class == 1


def test_extended():
    triple = classify_extended(cycle(3))
    assert triple.algebra == "extended"
    assert triple.growth_class == 2
    assert triple.entropy == pytest.approx(math.log(2), abs=1e-9)
    assert classify_extended(line(1)).growth_class == 0


def test_shapes():
    assert is_rose(rose(4)) and is_rose(parse_graph("v"))
    assert not is_rose(cycle(2))
    assert is_cycle(cycle(5)) and is_cycle(rose(1))
    assert not is_cycle(disjoint_union(cycle(2), cycle(3)))
    assert not is_cycle(line(3))
    assert not is_cycle(parse_graph(""))


def test_triple_validator():
    with pytest.raises(ValidationError):
        GrowthTriple(
            algebra="path",
            dimension=3,
            gkdim=0,
            entropy=0.5,
            entropy_method="spectral-exact",
            growth_class=0,
        )
    with pytest.raises(ValidationError):
        GrowthTriple(
            algebra="leavitt",
            dimension="inf",
            gkdim="inf",
            entropy=0.0,
            entropy_method="closed-form",
            growth_class=1,
        )
    triple = GrowthTriple.model_validate(
        {
            "algebra": "path",
            "dimension": "inf",
            "gkdim": 2,
            "entropy": 0.0,
            "entropy_method": "spectral-exact",
            "class": 1,
        }
    )
    assert triple.growth_class == 1
    assert set(triple.model_dump(by_alias=True)) == {
        "algebra",
        "dimension",
        "gkdim",
        "entropy",
        "entropy_method",
        "entropy_bounds",
        "class",
    }


def test_cycle_summary(zoo):
    summary = cycle_summary(zoo.getGraph("linked-pairs"))
    assert summary.exc
    assert (summary.d1, summary.d2) == (2, 1)
    assert [c.has_exit for c in summary.cycles].count(True) == 1
    summary = cycle_summary(zoo.getGraph("fibonacci"))
    assert not summary.exc and len(summary.witness) == 2


def test_analyze_empty():
    report = analyze(parse_graph(""), k_max=10)
    assert report.graph.vertices == []
    assert report.path.growth_class == report.leavitt.growth_class == 0
    assert report.leavitt_estimate.h_last == 0
    assert report.cycles.cycles == []


def test_analyze_report_reads_back(zoo):
    report = analyze(zoo.getGraph("wheel"), k_max=60)
    assert report.graph.name == "wheel"
    assert report.graph.sinks == report.graph.sources == []
    assert report.leavitt.entropy == report.leavitt_estimate.h_ratio
    again = parse_report(report.model_dump_json(by_alias=True))
    assert again == report

    report = analyze(zoo.getGraph("tail-and-loop"), k_max=60)
    assert report.graph.sources == ["5"]
    assert parse_report(report.model_dump_json(by_alias=True)) == report


if __name__ == "__main__":
    print("--- test_line_is_finite() ---")
    test_line_is_finite()
    print("--- test_roses() ---")
    test_roses()
    print("--- done() ---")
