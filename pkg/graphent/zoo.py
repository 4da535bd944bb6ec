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

import argparse
import logging
import sys
from typing import Optional

import yaml

# Find the other files for this project
import graphent as ge
from graphent.graph import Graph, parse_graph, to_text

rootdir = ge.__path__[0]

# Instantiate logger
log = logging.getLogger(__name__)


class Zoo(object):
    def __init__(self):
        # find the path to the bundled example graphs
        filespec = f"{rootdir}/zoo.yaml"
        try:
            file = open(filespec, "rb").read()
        except Exception as e:
            log.error(f"Couldn't open {filespec}: {e}")
            raise
        self.entries = dict()
        for entry in yaml.safe_load(file):
            [[k, v]] = entry.items()
            self.entries[k] = v

    def dump(self):
        for name, entry in self.entries.items():
            print(f"Graph: {name}")
            print(f"\t{entry.get('description', '')}")
            for key, value in entry.get("expected", {}).items():
                print(f"\t{key}: {value}")
            print("")

    def names(self, dashboard: bool = False) -> list:
        """The bundled graph names, optionally only the dashboard ones."""
        return [
            name
            for name, entry in self.entries.items()
            if not dashboard or entry.get("dashboard", False)
        ]

    def getGraph(self, name: str) -> Optional[Graph]:  # noqa N802
        """Parse one bundled graph, None when the name is unknown."""
        entry = self.entries.get(name.lower())
        if entry is None:
            return None
        return parse_graph(entry["graph"], name.lower())

    def expected(self, name: str) -> dict:
        """The values recorded for a bundled graph."""
        return dict(self.entries.get(name.lower(), {}).get("expected", {}))


def main():
    # Command Line options
    parser = argparse.ArgumentParser()
    parser.add_argument("-v", "--verbose", action="store_true", help="verbose output")
    parser.add_argument("-g", "--graph", help="Print one graph in the text format")
    parser.add_argument(
        "-l", "--list", action="store_true", help="List all bundled graphs"
    )
    args = parser.parse_args()

    if len(sys.argv) <= 1:
        parser.print_help()
        quit()

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

    zoo = Zoo()
    if args.list:
        zoo.dump()
        quit()

    if args.graph:
        graph = zoo.getGraph(args.graph)
        if not graph:
            log.error(f"{args.graph} is not bundled! Use the -l option to list them")
            quit()
        print(to_text(graph), end="")


if __name__ == "__main__":
    main()
