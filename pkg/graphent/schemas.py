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

"""The JSON report schema.

Infinite dimensions are written as the string "inf" so every report is
plain JSON and reads back unchanged.
"""

import math
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

# A natural number or "inf"
Count = Union[int, Literal["inf"]]

EntropyMethod = Literal[
    "spectral-exact", "countpaths-estimate", "closed-form", "growth-trichotomy"
]


def to_count(value) -> Count:
    """Map math.inf to "inf" and anything else to int."""
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return int(value)


class GrowthTriple(BaseModel):
    """Dimension, GK dimension and entropy of one algebra."""

    model_config = ConfigDict(populate_by_name=True, frozen=True)

    algebra: Literal["path", "extended", "leavitt"]
    dimension: Count
    gkdim: Count
    entropy: float = Field(ge=0)
    entropy_method: EntropyMethod
    entropy_bounds: Optional[tuple[float, float]] = None
    growth_class: int = Field(alias="class", ge=0, le=2)

    @model_validator(mode="after")
    def check_class(self):
        """Enforce the growth trichotomy."""
        finite = self.dimension != "inf"
        if self.growth_class == 0:
            if not (finite and self.gkdim == 0 and self.entropy == 0):
                raise ValueError("class 0 needs finite dimension and zero growth")
        elif self.growth_class == 1:
            if finite or self.gkdim == "inf" or self.entropy != 0:
                raise ValueError("class 1 needs infinite dimension and finite GK")
        else:
            if finite or self.gkdim != "inf" or math.isinf(self.entropy):
                raise ValueError("class 2 needs infinite GK and finite entropy")
        return self


class CycleEntry(BaseModel):
    edges: list[str]
    vertices: list[str]
    has_exit: bool


class CycleSummary(BaseModel):
    cycles: list[CycleEntry]
    exc: bool
    witness: Optional[list[list[str]]] = None
    d1: Optional[int] = None
    d2: Optional[int] = None


class LeavittReport(BaseModel):
    graph: str
    k_max: int
    h_last: float
    h_ratio: float
    entropy_path: float
    entropy_extended: float
    sandwich_ok: bool


class GraphSummary(BaseModel):
    name: str
    vertices: list[str]
    edges: int
    sinks: list[str]
    sources: list[str]


class AnalysisReport(BaseModel):
    """Everything `graphent analyze` knows about one graph."""

    graph: GraphSummary
    path: GrowthTriple
    extended: GrowthTriple
    leavitt: GrowthTriple
    cycles: CycleSummary
    leavitt_estimate: LeavittReport


class EntropyValue(BaseModel):
    graph: str
    algebra: Literal["path", "extended", "leavitt"]
    entropy: float
    method: EntropyMethod


class DashboardRow(BaseModel):
    graph: str
    k_max: int
    h_ratio: float
    entropy_path: float
    gap: float
    within: bool


def parse_report(text: str) -> AnalysisReport:
    """Read back the JSON written by `graphent analyze --format json`."""
    return AnalysisReport.model_validate_json(text)
