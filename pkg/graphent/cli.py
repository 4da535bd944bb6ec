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

"""The graphent command line.

Exit status is 0 on success, 1 for bad input (unreadable or invalid
graph files, bad flags, operations used outside their domain) and 2
when an internal check fails or an enumeration cap is hit.
"""

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import pandas as pd
from progress.bar import Bar
from pydantic import ValidationError

from graphent.__version__ import __version__
from graphent.classify import (
    analyze,
    classify,
    classify_extended,
    classify_leavitt,
    cycle_summary,
)
from graphent.config import reset_settings, settings
from graphent.cycles import gk_dim_leavitt, gk_dim_path
from graphent.errors import (
    CapExceeded,
    CheckFailure,
    GraphError,
    PreconditionError,
    UsageError,
)
from graphent.filtration import (
    entropy_of,
    gk_dim_of,
    matrix_scale,
    read_sequence,
    subsample,
)
from graphent.graph import Graph, components, load_graph, serialize_graph, to_text
from graphent.graph import trim as trim_graph
from graphent.leavitt import entropy_leavitt_estimate, leavitt_sequence, write_csv
from graphent.oracle import check_random, cores
from graphent.schemas import DashboardRow, EntropyValue, to_count
from graphent.spectral import entropy_extended, entropy_path
from graphent.zoo import Zoo

# Instantiate logger
log = logging.getLogger(__name__)

# Largest gap tolerated by the dashboard comparison
DASHBOARD_GAP = 0.01


class _Parser(argparse.ArgumentParser):
    """Raise on bad usage instead of exiting, so run() picks the status."""

    def error(self, message: str):
        raise UsageError(message)


def _common() -> argparse.ArgumentParser:
    # SUPPRESS lets these flags appear before or after the subcommand
    common = _Parser(add_help=False)
    common.add_argument(
        "--format", choices=["table", "json"], default=argparse.SUPPRESS
    )
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS)
    common.add_argument("--digits", type=int, default=argparse.SUPPRESS)
    common.add_argument(
        "--config", default=argparse.SUPPRESS, help="YAML or JSON settings file"
    )
    common.add_argument(
        "-v", "--verbose", action="store_true", default=argparse.SUPPRESS
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    """The argument parser for every subcommand."""
    common = _common()
    parser = _Parser(
        prog="graphent",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description="Dimension, GK dimension and entropy of graph algebras",
        parents=[common],
        epilog="""
        Graph arguments are text or JSON graph files, or zoo:NAME for a
        bundled example graph. Use `graphent zoo` to list them.
        """,
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def command(name: str, summary: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, help=summary, parents=[common])

    cmd = command("analyze", "Full report on one graph")
    cmd.add_argument("graph")
    cmd.add_argument("--kmax", type=int, help="Leavitt horizon")

    cmd = command("entropy", "Entropy of one algebra")
    cmd.add_argument("algebra", choices=["path", "extended", "leavitt"])
    cmd.add_argument("graph")
    cmd.add_argument("--kmax", type=int, help="Leavitt horizon")

    cmd = command("gkdim", "GK dimension of one algebra")
    cmd.add_argument("algebra", choices=["path", "leavitt"])
    cmd.add_argument("graph")

    cmd = command("classify", "Growth triples and classes")
    cmd.add_argument("graph")
    cmd.add_argument("--kmax", type=int, help="Leavitt horizon")

    cmd = command("cycles", "Cycles, exits, Condition (EXC) and chains")
    cmd.add_argument("graph")

    cmd = command("trim", "Remove sinks and sources until none are left")
    cmd.add_argument("graph")

    cmd = command("components", "Weakly connected components")
    cmd.add_argument("graph")

    cmd = command("leavitt-seq", "Leavitt layer dimensions q_1..q_kmax")
    cmd.add_argument("graph")
    cmd.add_argument("--kmax", type=int, help="Last layer")
    cmd.add_argument("--csv", help="Write the series to this CSV file")

    cmd = command("oracle-check", "Compare formulas with brute force counts")
    cmd.add_argument("--seed", type=int, default=0, help="First seed")
    cmd.add_argument("--trials", type=int, default=200, help="Random graphs")
    cmd.add_argument("--max-vertices", type=int, default=4)
    cmd.add_argument("--max-edges", type=int, default=6)
    cmd.add_argument("--max-k", type=int, default=8)
    cmd.add_argument("--jobs", type=int, help="Worker processes, one per core")
    cmd.add_argument("--progress", action="store_true", help="Show a bar")

    cmd = command("seq", "Growth of a dimension sequence")
    cmd.add_argument("op", choices=["entropy", "gk", "subsample", "scale"])
    cmd.add_argument("param", type=int, nargs="?", help="K or N")
    cmd.add_argument("--seq-file", required=True, help="CSV or integer list")

    cmd = command("zoo", "List the bundled graphs or print one")
    cmd.add_argument("name", nargs="?")

    cmd = command("dashboard", "Leavitt and path entropies side by side")
    cmd.add_argument("--kmax", type=int, help="Leavitt horizon")

    return parser


def _fmt(value, digits: int) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, int):
        return str(value)
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{digits}g}"


def _load(target: str) -> Graph:
    """A graph file, or zoo:NAME."""
    if target.startswith("zoo:"):
        name = target[4:]
        graph = Zoo().getGraph(name)
        if graph is None:
            raise GraphError(f"{name} is not a bundled graph")
        return graph
    return load_graph(target)


def _table(rows: list, digits: int) -> str:
    frame = pd.DataFrame(
        [{key: _fmt(value, digits) for key, value in row.items()} for row in rows]
    )
    return frame.to_string(index=False)


def _json(data):
    print(json.dumps(data, indent=2, allow_nan=False))


def _finite(value: float):
    """None for -inf and nan, which JSON can't carry."""
    return value if math.isfinite(value) else None


def _triple_row(triple) -> dict:
    return {
        "algebra": triple.algebra,
        "dimension": triple.dimension,
        "gkdim": triple.gkdim,
        "entropy": triple.entropy,
        "method": triple.entropy_method,
        "class": triple.growth_class,
    }


def do_analyze(args, fmt: str, digits: int) -> int:
    """Print the full report."""
    g = _load(args.graph)
    report = analyze(g, args.kmax)
    if fmt == "json":
        print(report.model_dump_json(by_alias=True, indent=2))
        return 0

    summary = report.graph
    size = f"{len(summary.vertices)} vertices, {summary.edges} edges"
    print(f"Graph: {summary.name} ({size})")
    print(f"\tsinks: {' '.join(summary.sinks) or '-'}")
    print(f"\tsources: {' '.join(summary.sources) or '-'}")
    print("")
    triples = [report.path, report.extended, report.leavitt]
    print(_table([_triple_row(t) for t in triples], digits))
    print("")
    cycles = report.cycles
    print(f"Cycles: {len(cycles.cycles)}, EXC: {_fmt(cycles.exc, digits)}")
    if cycles.exc:
        print(f"\td1 = {cycles.d1}, d2 = {cycles.d2}")
    estimate = report.leavitt_estimate
    lower = _fmt(estimate.entropy_path, digits)
    upper = _fmt(estimate.entropy_extended, digits)
    print(f"Leavitt at k = {estimate.k_max}:")
    print(f"\th = {_fmt(estimate.h_last, digits)}")
    print(f"\tratio = {_fmt(estimate.h_ratio, digits)}")
    print(f"\tbounds = [{lower}, {upper}]")
    print(f"\tsandwich {'ok' if estimate.sandwich_ok else 'violated'}")
    return 0


def do_entropy(args, fmt: str, digits: int) -> int:
    """Print the entropy of one algebra."""
    g = _load(args.graph)
    if args.algebra == "path":
        entropy, method = entropy_path(g), "spectral-exact"
    elif args.algebra == "extended":
        entropy, method = entropy_extended(g), "spectral-exact"
    else:
        triple = classify_leavitt(g, args.kmax)
        entropy, method = triple.entropy, triple.entropy_method

    if fmt == "json":
        value = EntropyValue(
            graph=g.name, algebra=args.algebra, entropy=entropy, method=method
        )
        print(value.model_dump_json(indent=2))
    elif method == "spectral-exact":
        print(_fmt(entropy, digits))
    else:
        print(f"{_fmt(entropy, digits)} ({method})")
    return 0


def do_gkdim(args, fmt: str, digits: int) -> int:
    """Print the GK dimension of one algebra."""
    g = _load(args.graph)
    value = gk_dim_path(g) if args.algebra == "path" else gk_dim_leavitt(g)
    if fmt == "json":
        _json({"graph": g.name, "algebra": args.algebra, "gkdim": to_count(value)})
    else:
        print(_fmt(value, digits))
    return 0


def do_classify(args, fmt: str, digits: int) -> int:
    """Print the triples of KE, its extension and the Leavitt algebra."""
    g = _load(args.graph)
    path, leavitt = classify(g, args.kmax)
    triples = [path, classify_extended(g), leavitt]
    if fmt == "json":
        _json([t.model_dump(mode="json", by_alias=True) for t in triples])
    else:
        print(_table([_triple_row(t) for t in triples], digits))
    return 0


def do_cycles(args, fmt: str, digits: int) -> int:
    """Print the cycle report."""
    g = _load(args.graph)
    summary = cycle_summary(g)
    if fmt == "json":
        print(summary.model_dump_json(indent=2))
        return 0

    for entry in summary.cycles:
        marker = "exit" if entry.has_exit else "no exit"
        route = " -> ".join(entry.vertices)
        print(f"{' '.join(entry.edges)}\t({route})\t{marker}")
    print(f"EXC: {_fmt(summary.exc, digits)}")
    if summary.exc:
        print(f"d1 = {summary.d1}, d2 = {summary.d2}")
    elif summary.witness:
        print(f"Witness: {' / '.join(' '.join(c) for c in summary.witness)}")
    return 0


def do_trim(args, fmt: str, digits: int) -> int:
    """Print the trimmed graph."""
    trimmed = trim_graph(_load(args.graph))
    if fmt == "json":
        print(serialize_graph(trimmed))
    else:
        print(to_text(trimmed), end="")
    return 0


def do_components(args, fmt: str, digits: int) -> int:
    """Print each weakly connected component."""
    parts = components(_load(args.graph))
    if fmt == "json":
        _json([json.loads(serialize_graph(part)) for part in parts])
        return 0
    for part in parts:
        print(to_text(part), end="")
    return 0


def do_leavitt_seq(args, fmt: str, digits: int) -> int:
    """Compute the layers, optionally writing the CSV series."""
    seq = leavitt_sequence(_load(args.graph), args.kmax)
    if args.csv:
        write_csv(seq, args.csv)
    last, ratio = seq.h[-1], seq.ratio(seq.k_max)
    if fmt == "json":
        summary = {
            "graph": seq.graph.name,
            "k_max": seq.k_max,
            "h_last": _finite(last),
            "ratio": _finite(ratio),
            "q_last_digits": len(str(seq.q[-1])),
        }
        _json(summary)
    else:
        print(f"h_{seq.k_max} = {_fmt(last, digits)}")
        print(f"ratio_{seq.k_max} = {_fmt(ratio, digits)}")
    return 0


def do_oracle_check(args, fmt: str, digits: int) -> int:
    """Randomized comparison of the formulas with brute force counts."""
    jobs = args.jobs if args.jobs else cores()
    bar = None
    if args.progress:
        bar = Bar("Checking", max=args.trials)
    try:
        mismatches = check_random(
            args.seed,
            args.trials,
            args.max_vertices,
            args.max_edges,
            args.max_k,
            jobs,
            bar.next if bar else None,
        )
    finally:
        if bar:
            bar.finish()

    if fmt == "json":
        found = [
            {
                "seed": m.seed,
                "check": m.check,
                "k": m.k,
                "expected": m.expected,
                "found": m.found,
                "graph": json.loads(serialize_graph(m.graph)),
            }
            for m in mismatches
        ]
        _json({"seed": args.seed, "trials": args.trials, "mismatches": found})
    else:
        for mismatch in mismatches:
            print(mismatch.describe())
        print(f"Checked {args.trials} graphs, {len(mismatches)} mismatches")
    if mismatches:
        raise CheckFailure(f"{len(mismatches)} formulas disagree with brute force")
    return 0


def do_seq(args, fmt: str, digits: int) -> int:
    """Estimate or transform a dimension sequence."""
    seq = read_sequence(args.seq_file)
    if args.op in ("subsample", "scale") and args.param is None:
        raise UsageError(f"seq {args.op} needs a parameter")

    if args.op == "entropy":
        value = entropy_of(seq)
    elif args.op == "gk":
        value = gk_dim_of(seq)
    else:
        if args.op == "subsample":
            seq = subsample(seq, args.param)
        else:
            seq = matrix_scale(seq, args.param)
        if fmt == "json":
            _json({"base": seq.base, "quotient": list(seq.quotient)})
        else:
            print(seq.base)
            for q in seq.quotient:
                print(q)
        return 0

    if fmt == "json":
        if math.isinf(value):
            value = to_count(value)
        _json({"op": args.op, "terms": len(seq), "value": value})
    else:
        print(_fmt(value, digits))
    return 0


def do_zoo(args, fmt: str, digits: int) -> int:
    """List the bundled graphs, or print one in the text format."""
    zoo = Zoo()
    if args.name:
        graph = zoo.getGraph(args.name)
        if graph is None:
            raise GraphError(f"{args.name} is not a bundled graph")
        if fmt == "json":
            print(serialize_graph(graph))
        else:
            print(to_text(graph), end="")
        return 0

    if fmt == "json":
        _json({name: zoo.entries[name] for name in zoo.names()})
    else:
        for name in zoo.names():
            print(f"{name}\t{zoo.entries[name].get('description', '')}")
    return 0


def dashboard(k_max=None) -> list:
    """Leavitt ratio estimates against the exact path algebra entropy.

    The two agree in every bundled example within DASHBOARD_GAP, which
    is not proven in general, so this is a report rather than a test.

    Args:
        k_max (int): Leavitt horizon, leavitt:k_max if None

    Returns:
        (list): DashboardRow objects in zoo order
    """
    zoo = Zoo()
    rows = list()
    for name in zoo.names(dashboard=True):
        estimate = entropy_leavitt_estimate(zoo.getGraph(name), k_max)
        gap = abs(estimate.ratio_h - estimate.entropy_path)
        if gap >= DASHBOARD_GAP:
            log.warning(f"{name}: Leavitt and path entropies differ by {gap}")
        rows.append(
            DashboardRow(
                graph=name,
                k_max=estimate.k_max,
                h_ratio=estimate.ratio_h,
                entropy_path=estimate.entropy_path,
                gap=gap,
                within=gap < DASHBOARD_GAP,
            )
        )
    return rows


def do_dashboard(args, fmt: str, digits: int) -> int:
    """Print the dashboard."""
    rows = dashboard(args.kmax)
    if fmt == "json":
        _json([row.model_dump() for row in rows])
    else:
        print(_table([row.model_dump() for row in rows], digits))
    return 0


COMMANDS = {
    "analyze": do_analyze,
    "entropy": do_entropy,
    "gkdim": do_gkdim,
    "classify": do_classify,
    "cycles": do_cycles,
    "trim": do_trim,
    "components": do_components,
    "leavitt-seq": do_leavitt_seq,
    "oracle-check": do_oracle_check,
    "seq": do_seq,
    "zoo": do_zoo,
    "dashboard": do_dashboard,
}


def _verbose():
    root = logging.getLogger("graphent")
    root.setLevel(logging.DEBUG)
    ch = logging.StreamHandler(sys.stdout)
    ch.setLevel(logging.DEBUG)
    formatter = logging.Formatter(
        "%(threadName)10s - %(name)s - %(levelname)s - %(message)s"
    )
    ch.setFormatter(formatter)
    root.addHandler(ch)


def _configure(args) -> tuple:
    """Apply --config, --tol and --digits, returning the format and digits."""
    reset_settings()
    config = settings()
    if getattr(args, "config", None):
        path = Path(args.config)
        if path.suffix == ".json":
            config.parseJson(str(path))
        else:
            config.parseYaml(str(path))
    if getattr(args, "tol", None) is not None:
        if args.tol <= 0:
            raise PreconditionError(f"--tol must be positive, not {args.tol}")
        config.set("spectral:tol", args.tol)
    if getattr(args, "digits", None) is not None:
        if not 1 <= args.digits <= 15:
            raise UsageError(f"--digits must be in 1..15, not {args.digits}")
        config.set("report:digits", args.digits)
    return getattr(args, "format", "table"), config.get("report:digits")


def run(argv: list) -> int:
    """Run one command, returning the exit status.

    Args:
        argv (list): The arguments, without the program name

    Returns:
        (int): 0 on success, 1 for bad input, 2 for a failed check
    """
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "verbose", False):
            _verbose()
        fmt, digits = _configure(args)
        return COMMANDS[args.command](args, fmt, digits)
    except SystemExit as e:
        # --help and --version
        return e.code or 0
    except (CheckFailure, CapExceeded, ValidationError) as e:
        print(f"graphent: check failed: {e}", file=sys.stderr)
        return 2
    except (GraphError, PreconditionError, UsageError, OSError) as e:
        log.debug(f"{type(e).__name__}: {e}")
        print(f"graphent: error: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        # Unknown settings in a --config file
        print(f"graphent: error: {e}", file=sys.stderr)
        return 1
    finally:
        reset_settings()


def main():
    """Entry point for the graphent console script."""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    """This is just a hook so this file can be run standalone during development."""
    main()
