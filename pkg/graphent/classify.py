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

"""Growth triples of the three algebras of a graph.

Each algebra falls in exactly one class: finite dimensional (0),
infinite dimensional with finite GK dimension and zero entropy (1), or
infinite GK dimension with finite entropy (2).
"""

import concurrent.futures
import logging
import math
from typing import Optional

import mpmath

from graphent.config import resolve
from graphent.cycles import (
    cycle_report,
    dim_leavitt_algebra,
    dim_path_algebra,
    gk_dim_leavitt,
    gk_dim_path,
)
from graphent.graph import Graph, components, extended_graph, vertex_classes
from graphent.leavitt import EntropyEstimate, entropy_leavitt_estimate
from graphent.schemas import (
    AnalysisReport,
    CycleEntry,
    CycleSummary,
    GraphSummary,
    GrowthTriple,
    LeavittReport,
    to_count,
)
from graphent.spectral import entropy_extended, entropy_path

# Instantiate logger
log = logging.getLogger(__name__)


def _class_of(dimension, gkdim) -> int:
    if not math.isinf(dimension):
        return 0
    if not math.isinf(gkdim):
        return 1
    return 2


def _path_triple(algebra: str, g: Graph, entropy: float) -> GrowthTriple:
    dimension = dim_path_algebra(g)
    gkdim = gk_dim_path(g)
    return GrowthTriple(
        algebra=algebra,
        dimension=to_count(dimension),
        gkdim=to_count(gkdim),
        entropy=entropy,
        entropy_method="spectral-exact",
        growth_class=_class_of(dimension, gkdim),
    )


def classify_path(g: Graph, tol: Optional[float] = None) -> GrowthTriple:
    """The triple of the path algebra KE."""
    return _path_triple("path", g, entropy_path(g, tol))


def classify_extended(g: Graph, tol: Optional[float] = None) -> GrowthTriple:
    """The triple of the path algebra of the extended graph."""
    return _path_triple("extended", extended_graph(g), entropy_extended(g, tol))


def is_rose(g: Graph) -> bool:
    """One vertex carrying all the edges as loops."""
    return g.order == 1


def is_cycle(g: Graph) -> bool:
    """A single cycle through every vertex."""
    if g.is_empty() or len(components(g)) != 1:
        return False
    return all(
        len(g.out_edges(v)) == 1 and len(g.in_edges(v)) == 1 for v in g.vertices
    )


def classify_leavitt(
    g: Graph,
    k_max: Optional[int] = None,
    tol: Optional[float] = None,
    estimate: Optional[EntropyEstimate] = None,
) -> GrowthTriple:
    """The triple of the Leavitt path algebra.

    Classes 0 and 1 have entropy 0. In class 2 a rose R_n has entropy
    log n, and any other graph gets the ratio estimate at horizon k_max
    with the exact path algebra bounds attached.

    Args:
        g (Graph): The graph
        k_max (int): The horizon, leavitt:classify_k_max if None
        tol (float): Perron root tolerance for the bounds
        estimate (EntropyEstimate): reuse an estimate already computed

    Returns:
        (GrowthTriple): the triple, class in 0..2
    """
    dimension = dim_leavitt_algebra(g)
    gkdim = gk_dim_leavitt(g)
    growth = _class_of(dimension, gkdim)

    lower, upper = entropy_path(g, tol), entropy_extended(g, tol)
    if growth < 2:
        entropy = 0.0
        method = "closed-form" if is_cycle(g) else "growth-trichotomy"
    elif is_rose(g):
        with mpmath.workdps(resolve(None, "precision:dps")):
            entropy = float(mpmath.log(g.size))
        method = "closed-form"
    else:
        if estimate is None:
            k_max = resolve(k_max, "leavitt:classify_k_max")
            estimate = entropy_leavitt_estimate(g, k_max, tol)
        entropy = max(0.0, estimate.ratio_h)
        method = "countpaths-estimate"

    return GrowthTriple(
        algebra="leavitt",
        dimension=to_count(dimension),
        gkdim=to_count(gkdim),
        entropy=entropy,
        entropy_method=method,
        entropy_bounds=(lower, upper),
        growth_class=growth,
    )


def classify(
    g: Graph, k_max: Optional[int] = None, tol: Optional[float] = None
) -> tuple:
    """Triples of the path algebra and of the Leavitt path algebra."""
    return classify_path(g, tol), classify_leavitt(g, k_max, tol)


def leavitt_report(g: Graph, estimate: EntropyEstimate) -> LeavittReport:
    """The JSON view of an entropy estimate."""
    return LeavittReport(
        graph=g.name,
        k_max=estimate.k_max,
        h_last=estimate.last_h,
        h_ratio=estimate.ratio_h,
        entropy_path=estimate.entropy_path,
        entropy_extended=estimate.entropy_extended,
        sandwich_ok=estimate.sandwich_ok,
    )


def cycle_summary(g: Graph) -> CycleSummary:
    """The JSON view of cycle_report()."""
    report = cycle_report(g)
    witness = None
    if report.witness:
        witness = [list(c.edges) for c in report.witness]
    return CycleSummary(
        cycles=[
            CycleEntry(edges=list(c.edges), vertices=list(c.vertices), has_exit=x)
            for c, x in zip(report.cycles, report.exits)
        ],
        exc=report.exc,
        witness=witness,
        d1=report.d1,
        d2=report.d2,
    )


def analyze(
    g: Graph, k_max: Optional[int] = None, tol: Optional[float] = None
) -> AnalysisReport:
    """The full report on one graph.

    The path, extended and Leavitt computations are independent and run
    side by side, the report is assembled in a fixed order afterwards.

    Args:
        g (Graph): The graph
        k_max (int): Leavitt horizon, leavitt:k_max if None
        tol (float): Perron root tolerance

    Returns:
        (AnalysisReport): the report
    """
    k_max = resolve(k_max, "leavitt:k_max")
    with concurrent.futures.ThreadPoolExecutor(max_workers=3) as executor:
        path = executor.submit(classify_path, g, tol)
        extended = executor.submit(classify_extended, g, tol)
        estimate = executor.submit(entropy_leavitt_estimate, g, k_max, tol)
        path, extended, estimate = path.result(), extended.result(), estimate.result()

    classes = vertex_classes(g)
    summary = GraphSummary(
        name=g.name,
        vertices=list(g.vertices),
        edges=g.size,
        sinks=[v for v in g.vertices if v in classes.sinks],
        sources=[v for v in g.vertices if v in classes.sources],
    )
    return AnalysisReport(
        graph=summary,
        path=path,
        extended=extended,
        leavitt=classify_leavitt(g, k_max, tol, estimate),
        cycles=cycle_summary(g),
        leavitt_estimate=leavitt_report(g, estimate),
    )
