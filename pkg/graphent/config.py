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

"""YAML and JSON settings parsing into a flat `section:key` config."""

import argparse
import json
import logging
import os
import sys
from io import BytesIO
from pathlib import Path
from typing import Any, Optional, Union

import flatdict
import yaml

# Find the other files for this project
import graphent as ge

rootdir = ge.__path__[0]

# Instantiate logger
log = logging.getLogger(__name__)


class AnalysisConfig(object):
    """Tunable limits and tolerances shared by every analysis."""

    def __init__(self, defaults: bool = True):
        """Init the AnalysisConfig object.

        Args:
            defaults (bool): Load the bundled graphent.yaml first
        """
        self.config = dict()
        if defaults:
            self.parseYaml(f"{rootdir}/graphent.yaml")

    def parseYaml(self, config: Union[str, BytesIO]):  # noqa N802
        """Merge a YAML settings file into the current config.

        Args:
            config (str, BytesIO): the file or BytesIO object to read.

        Returns:
            config (dict): The flattened config data.
        """
        data = self.load_yaml(config)
        self._merge(data)
        return self.config

    @staticmethod
    def load_yaml(config: Union[str, BytesIO]):
        """Load YAML data from a file.

        Args:
            config (str, BytesIO): The disk or memory file to read.

        Returns:
            data (dict): The loaded YAML data.
        """
        if isinstance(config, (str, Path)):
            with open(config, "r") as file:
                return yaml.safe_load(file) or dict()
        elif isinstance(config, BytesIO):
            return yaml.safe_load(config.getvalue()) or dict()
        else:
            log.error(f"Unsupported config format: {config}")
            raise ValueError(f"Invalid config {config}")

    def parseJson(self, config: Union[str, BytesIO]):  # noqa N802
        """Merge a JSON settings file into the current config.

        Args:
            config (str, BytesIO): the file or BytesIO object to read.

        Returns:
            config (dict): the flattened config data
        """
        if isinstance(config, (str, Path)):
            with open(config, "r") as config_file:
                data = json.load(config_file)
        elif isinstance(config, BytesIO):
            config.seek(0)
            data = json.load(config)
        else:
            log.error(f"Unsupported config format: {config}")
            raise ValueError(f"Invalid config {config}")

        self._merge(data)
        return self.config

    def _merge(self, data: dict):
        """Flatten nested settings and overlay them on the current values.

        Args:
            data (dict): Nested settings, sections holding keys

        Returns:
            None
        """
        if not isinstance(data, dict):
            log.error(f"Settings must be a mapping, not {type(data).__name__}")
            raise ValueError(f"Invalid settings {data}")

        flat = dict(flatdict.FlatDict(data).items())
        # The very first file defines the known keys
        if not self.config:
            self.config = flat
            log.debug(f"Loaded {len(self.config)} default settings")
            return

        for key, value in flat.items():
            self.set(key, value)

    def get(self, key: str, default: Any = None):
        """Look up a flattened `section:key` setting.

        Args:
            key (str): The setting, for example spectral:tol
            default (Any): Returned when the key is missing

        Returns:
            (Any): The setting
        """
        return self.config.get(key, default)

    def set(self, key: str, value: Any):
        """Override one setting, keeping the type of the bundled default.

        Args:
            key (str): The setting, for example spectral:tol
            value (Any): The new value
        """
        if key not in self.config:
            log.error(f"Unknown setting {key}")
            raise ValueError(f"Unknown setting {key}")
        current = self.config[key]
        if isinstance(current, bool):
            value = bool(value)
        elif isinstance(current, float):
            value = float(value)
        elif isinstance(current, int):
            value = int(value)
        log.debug(f"Setting {key} to {value}")
        self.config[key] = value

    def dump(self):
        """Dump the contents of the config for debugging purposes."""
        print("Dumping AnalysisConfig class")
        for key, value in sorted(self.config.items()):
            print(f"\t{key} = {value}")


_settings: Optional[AnalysisConfig] = None


def settings() -> AnalysisConfig:
    """The process wide settings, created on first use.

    Returns:
        (AnalysisConfig): the bundled defaults plus $GRAPHENT_CONFIG
    """
    global _settings
    if _settings is None:
        _settings = AnalysisConfig()
        overlay = os.getenv("GRAPHENT_CONFIG")
        if overlay:
            log.info(f"Loading settings from {overlay}")
            _settings.parseYaml(overlay)
    return _settings


def reset_settings():
    """Drop any overrides so the next settings() call starts fresh."""
    global _settings
    _settings = None


def resolve(value: Any, key: str):
    """Use an explicit argument, or fall back to the configured setting.

    Args:
        value (Any): The caller's value, None when not given
        key (str): The flattened setting to use instead

    Returns:
        (Any): value, or the setting
    """
    if value is not None:
        return value
    return settings().get(key)


def main():
    """This main function lets this class be run standalone by a bash script."""
    parser = argparse.ArgumentParser(
        prog="config",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description="Show the effective graphent settings",
        epilog="""
        This should only be run standalone for debugging purposes.
        """,
    )
    parser.add_argument("-v", "--verbose", nargs="?", const="0", help="verbose output")
    parser.add_argument("-i", "--infile", help="YAML or JSON settings file")
    args = parser.parse_args()

    # if verbose, dump to the terminal.
    if args.verbose is not None:
        log.setLevel(logging.DEBUG)
        ch = logging.StreamHandler(sys.stdout)
        ch.setLevel(logging.DEBUG)
        formatter = logging.Formatter(
            "%(threadName)10s - %(name)s - %(levelname)s - %(message)s"
        )
        ch.setFormatter(formatter)
        log.addHandler(ch)

    config = AnalysisConfig()
    if args.infile:
        path = Path(args.infile)
        if path.suffix == ".json":
            config.parseJson(args.infile)
        elif path.suffix in (".yaml", ".yml"):
            config.parseYaml(args.infile)
        else:
            log.error(f"{args.infile} is an unsupported file format!")
            quit()

    config.dump()


if __name__ == "__main__":
    """This is just a hook so this file can be run standalone during development."""
    main()
