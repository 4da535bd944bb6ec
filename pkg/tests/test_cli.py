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

# Find the other files for this project
import graphent as ge
from graphent.__version__ import __version__
from graphent.cli import dashboard, run
from graphent.graph import parse_graph
from graphent.leavitt import read_csv
from graphent.schemas import parse_report

rootdir = ge.__path__[0]
if os.path.basename(rootdir) == "graphent":
    rootdir = "./tests/"


def test_entropy_path(capsys):
    assert run(["entropy", "path", f"{rootdir}/fibonacci.graph"]) == 0
    assert capsys.readouterr().out == "0.481212\n"

    assert run(["--digits", "10", "entropy", "path", "zoo:fibonacci"]) == 0
    assert capsys.readouterr().out == "0.4812118251\n"


def test_entropy_json(capsys):
    assert run(["entropy", "extended", "zoo:wheel", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["graph"] == "wheel"
    assert data["method"] == "spectral-exact"
    assert data["entropy"] > 0.834115


def test_entropy_leavitt(capsys):
    assert run(["entropy", "leavitt", "zoo:wheel", "--kmax", "50"]) == 0
    assert capsys.readouterr().out.strip().endswith("(countpaths-estimate)")


def test_gkdim(capsys):
    assert run(["gkdim", "path", "zoo:linked-pairs"]) == 0
    assert capsys.readouterr().out == "2\n"
    assert run(["gkdim", "leavitt", "zoo:fibonacci"]) == 0
    assert capsys.readouterr().out == "inf\n"


def test_classify_empty(capsys):
    assert run(["classify", f"{rootdir}/empty.graph", "--format", "json"]) == 0
    triples = json.loads(capsys.readouterr().out)
    assert [t["algebra"] for t in triples] == ["path", "extended", "leavitt"]
    assert all(t["class"] == 0 for t in triples)


def test_classify_table(capsys):
    assert run(["classify", "zoo:fibonacci", "--kmax", "40"]) == 0
    out = capsys.readouterr().out
    assert "spectral-exact" in out
    assert "countpaths-estimate" in out


def test_analyze_json(capsys):
    assert run(["analyze", "zoo:wheel", "--kmax", "50", "--format", "json"]) == 0
    report = parse_report(capsys.readouterr().out)
    assert report.path.growth_class == 2
    assert report.leavitt.entropy_method == "countpaths-estimate"
    assert report.leavitt_estimate.k_max == 50


def test_analyze_table(capsys):
    assert run(["analyze", f"{rootdir}/linked_pairs.graph", "--kmax", "30"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("Graph: linked_pairs (4 vertices, 6 edges)")
    assert "EXC: yes" in out
    assert "d1 = 2, d2 = 1" in out


def test_cycles(capsys):
    assert run(["cycles", "zoo:fibonacci"]) == 0
    out = capsys.readouterr().out
    assert "EXC: no" in out
    assert "Witness: " in out


def test_trim_and_components(capsys, tmp_path):
    assert run(["trim", "zoo:tail-and-loop"]) == 0
    assert parse_graph(capsys.readouterr().out).vertices == ("1", "2", "4")

    path = tmp_path / "two.graph"
    path.write_text("a -> a\nb -> b\n")
    assert run(["components", str(path), "--format", "json"]) == 0
    parts = json.loads(capsys.readouterr().out)
    assert [p["vertices"] for p in parts] == [["a"], ["b"]]


def test_leavitt_seq(capsys, tmp_path):
    path = tmp_path / "wheel.csv"
    assert run(["leavitt-seq", "zoo:wheel", "--kmax", "20", "--csv", str(path)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("h_20 = ")
    assert "ratio_20 = " in out
    frame = read_csv(path)
    assert len(frame) == 21
    assert frame["q_k"][0] == 4


def test_leavitt_seq_acyclic_json(capsys, tmp_path):
    path = tmp_path / "line.graph"
    path.write_text("1 -> 2\n2 -> 3\n")
    assert run(["leavitt-seq", str(path), "--kmax", "10", "--format", "json"]) == 0

    def strict(token):
        raise ValueError(f"not JSON: {token}")

    data = json.loads(capsys.readouterr().out, parse_constant=strict)
    assert data["h_last"] is None
    assert data["ratio"] is None
    assert data["q_last_digits"] == 1


def test_seq(capsys):
    cubes = f"{rootdir}/cubes.txt"
    assert run(["seq", "entropy", "--seq-file", cubes]) == 0
    assert capsys.readouterr().out == "0.690776\n"

    assert run(["seq", "gk", "--seq-file", cubes]) == 0
    assert 3 < float(capsys.readouterr().out) < 4

    assert run(["seq", "scale", "2", "--seq-file", cubes, "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["base"] == 0
    assert data["quotient"][:3] == [4, 32, 108]

    assert run(["seq", "subsample", "--seq-file", cubes]) == 1


def test_zoo(capsys):
    assert run(["zoo"]) == 0
    out = capsys.readouterr().out
    for name in ("fibonacci", "linked-pairs", "wheel"):
        assert name in out
    assert run(["zoo", "wheel"]) == 0
    assert "1 -> 2" in capsys.readouterr().out
    assert run(["zoo", "nothing"]) == 1
    assert run(["entropy", "path", "zoo:nothing"]) == 1


def test_oracle_check(capsys):
    assert run(["oracle-check", "--trials", "5", "--jobs", "1"]) == 0
    assert "Checked 5 graphs, 0 mismatches" in capsys.readouterr().out


def test_dashboard(capsys):
    rows = dashboard(1000)
    assert [row.graph for row in rows] == [
        "linked-pairs",
        "petals-2-3",
        "petals-3-2",
        "tail-and-loop",
        "wheel",
    ]
    for row in rows:
        assert row.within, f"{row.graph} differs by {row.gap}"

    assert run(["dashboard", "--kmax", "100", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert len(data) == 5


def test_bad_input(capsys):
    assert run(["entropy", "path", f"{rootdir}/broken.graph"]) == 1
    assert "line 3" in capsys.readouterr().err
    assert run(["entropy", "path", f"{rootdir}/missing.graph"]) == 1
    assert run(["entropy", "path", "zoo:wheel", "--bogus"]) == 1
    assert run([]) == 1
    assert run(["--digits", "20", "entropy", "path", "zoo:wheel"]) == 1
    assert run(["--tol", "0", "entropy", "path", "zoo:wheel"]) == 1


def test_config_flag(capsys):
    config = f"{rootdir}/unknown.yaml"
    assert run(["--config", config, "entropy", "path", "zoo:wheel"]) == 1
    assert "Unknown setting" in capsys.readouterr().err

    config = f"{rootdir}/overrides.json"
    assert run(["entropy", "path", "zoo:fibonacci", "--config", config]) == 0
    assert capsys.readouterr().out == "0.481211825\n"


def test_cap_exits_2(capsys, tmp_path):
    path = tmp_path / "tight.yaml"
    path.write_text("cycles:\n  max_cycles: 1\n")
    assert run(["cycles", "zoo:wheel", "--config", str(path)]) == 2
    assert "check failed" in capsys.readouterr().err
    # settings are back to the defaults afterwards
    assert run(["cycles", "zoo:wheel"]) == 0


def test_version(capsys):
    assert run(["--version"]) == 0
    assert __version__ in capsys.readouterr().out


if __name__ == "__main__":
    print("--- test_version() ---")
    run(["--version"])
    print("--- done() ---")
