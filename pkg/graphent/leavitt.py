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

"""Growth of the Leavitt path algebra under its standard filtration.

W_k is spanned by the products lambda mu* of paths with
l(lambda) + l(mu) <= k. With c_s the column sums of A^s, so c_s[j] is
the number of paths of length s ending at j, the layer dimension is

    q_k = sum_{s=0..k} sum_j c_s[j] c_{k-s}[j]
          - sum_{s=1..k-1} sum_j c_{s-1}[j] c_{k-s-1}[j] gamma_j

where gamma_j is 0 at sinks and 1 elsewhere. The subtracted term drops
one product per regular vertex, the Cuntz-Krieger relation at that
vertex. Everything is exact until the final logarithm.
"""

import argparse
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import mpmath
import numpy as np
import pandas as pd
from codetiming import Timer

from graphent.config import resolve
from graphent.cycles import has_cycle
from graphent.errors import GraphError, PreconditionError
from graphent.filtration import DimSequence
from graphent.graph import Graph, adjacency_matrix, load_graph
from graphent.spectral import (
    column_sums,
    entropy_extended,
    entropy_path,
    norm_sequence,
)

# Instantiate logger
log = logging.getLogger(__name__)


def gamma(g: Graph, vertex: str) -> int:
    """0 when vertex is a sink, 1 otherwise."""
    if vertex not in g.index:
        raise GraphError(f"Unknown vertex {vertex}")
    return 1 if g.out_edges(vertex) else 0


def _gammas(g: Graph) -> np.ndarray:
    return np.array([gamma(g, v) for v in g.vertices], dtype=object)


def _layer(table: np.ndarray, gammas: np.ndarray, k: int) -> int:
    """q_k from the column sum table, which must reach row k."""
    if table.shape[1] == 0:
        return 0
    if k == 0:
        return table.shape[1]
    total = (table[: k + 1] * table[k::-1]).sum()
    if k >= 2:
        total -= (table[: k - 1] * table[k - 2 :: -1] * gammas).sum()
    return int(total)


def leavitt_quotient_dim(g: Graph, k: int) -> int:
    """dim(W_k / W_{k-1}), with q_0 the number of vertices."""
    if k < 0:
        raise PreconditionError(f"k must be nonnegative, not {k}")
    table = column_sums(adjacency_matrix(g), k)
    return _layer(table, _gammas(g), k)


def _h(q: int, k: int) -> float:
    if q == 0:
        return -math.inf
    return float(mpmath.log(mpmath.mpf(q)) / k)


def _ratio(q: int, previous: int) -> float:
    if q == 0 or previous == 0:
        return math.nan
    return float(mpmath.log(mpmath.mpf(q)) - mpmath.log(mpmath.mpf(previous)))


@dataclass(frozen=True)
class LeavittQuotientSeq:
    """q_1..q_kmax and h_k = log(q_k)/k for one graph.

    Args:
        graph (Graph): The graph
        k_max (int): The last layer
        q (tuple): exact layer dimensions q_1..q_kmax
        h (tuple): log(q_k)/k, -inf where q_k = 0
        base (int): q_0, the number of vertices
    """

    graph: Graph
    k_max: int
    q: tuple
    h: tuple
    base: int

    def ratio(self, k: int) -> float:
        """log(q_k / q_{k-1}), nan when either vanishes."""
        previous = self.base if k == 1 else self.q[k - 2]
        with mpmath.workdps(resolve(None, "precision:dps")):
            return _ratio(self.q[k - 1], previous)

    def as_dim_sequence(self) -> DimSequence:
        """The same data as a DimSequence."""
        return DimSequence(self.q, self.base)

    def to_dataframe(self) -> pd.DataFrame:
        """One row per layer, k = 0 included, q_k as full decimal text."""
        ratios = [math.nan] + [self.ratio(k) for k in range(1, self.k_max + 1)]
        return pd.DataFrame(
            {
                "k": range(self.k_max + 1),
                "q_k_digits": [str(q) for q in (self.base,) + self.q],
                "h_k": [math.nan] + list(self.h),
                "ratio_h_k": ratios,
            }
        )


def leavitt_sequence(g: Graph, k_max: Optional[int] = None) -> LeavittQuotientSeq:
    """All layer dimensions up to k_max from one column sum table.

    Args:
        g (Graph): The graph
        k_max (int): The last layer, leavitt:k_max if None

    Returns:
        (LeavittQuotientSeq): exact q_k with their h_k
    """
    k_max = resolve(k_max, "leavitt:k_max")
    if k_max < 2:
        raise PreconditionError(f"k_max must be at least 2, not {k_max}")

    timer = Timer(text="leavitt_sequence() took {seconds:.2f}s", logger=log.debug)
    timer.start()
    table = column_sums(adjacency_matrix(g), k_max)
    gammas = _gammas(g)
    q = tuple(_layer(table, gammas, k) for k in range(1, k_max + 1))
    with mpmath.workdps(resolve(None, "precision:dps")):
        h = tuple(_h(value, k) for k, value in enumerate(q, start=1))
    timer.stop()

    log.info(f"Computed {k_max} Leavitt layers for {g.name or 'graph'}")
    return LeavittQuotientSeq(g, k_max, q, h, g.order)


@dataclass(frozen=True)
class EntropyEstimate:
    """Finite horizon estimates of the Leavitt entropy with exact bounds.

    Args:
        last_h (float): log(q_kmax)/k_max
        ratio_h (float): log(q_kmax / q_{kmax-1})
        k_max (int): The horizon
        entropy_path (float): exact entropy of KE, a lower bound
        entropy_extended (float): exact entropy of the extended path
            algebra, an upper bound
        eps (float): slack allowed when checking the bounds
    """

    last_h: float
    ratio_h: float
    k_max: int
    entropy_path: float
    entropy_extended: float
    eps: float

    @property
    def sandwich_ok(self) -> bool:
        """last_h sits between the two exact bounds, up to eps."""
        return (
            self.entropy_path - self.eps
            <= self.last_h
            <= self.entropy_extended + self.eps
        )


def entropy_leavitt_estimate(
    g: Graph,
    k_max: Optional[int] = None,
    tol: Optional[float] = None,
    eps: Optional[float] = None,
) -> EntropyEstimate:
    """Estimate the Leavitt entropy at horizon k_max.

    Only layers k_max - 1 and k_max are needed, so the sequence itself
    is never materialised.

    Args:
        g (Graph): The graph
        k_max (int): The horizon, leavitt:k_max if None
        tol (float): Perron root tolerance for the bounds
        eps (float): slack for sandwich_ok, leavitt:sandwich_eps if None

    Returns:
        (EntropyEstimate): both estimates and the exact bounds
    """
    k_max = resolve(k_max, "leavitt:k_max")
    eps = resolve(eps, "leavitt:sandwich_eps")
    if k_max < 3:
        raise PreconditionError(f"k_max must be at least 3, not {k_max}")

    lower = entropy_path(g, tol)
    upper = entropy_extended(g, tol)
    if not has_cycle(g):
        log.debug("Acyclic graph, finite dimensional algebra")
        return EntropyEstimate(0.0, 0.0, k_max, lower, upper, eps)

    table = column_sums(adjacency_matrix(g), k_max)
    gammas = _gammas(g)
    last = _layer(table, gammas, k_max)
    previous = _layer(table, gammas, k_max - 1)
    with mpmath.workdps(resolve(None, "precision:dps")):
        estimate = EntropyEstimate(
            _h(last, k_max), _ratio(last, previous), k_max, lower, upper, eps
        )
    if not estimate.sandwich_ok:
        log.warning(f"h_{k_max} = {estimate.last_h} is outside [{lower}, {upper}]")
    return estimate


def quotient_sandwich(g: Graph, k_max: int) -> bool:
    """Check ||A^k|| <= q_k <= ||(A + A^t)^k|| for k = 1..k_max.

    KE embeds in the Leavitt algebra and the extended path algebra maps
    onto it, both compatibly with the standard filtrations, so every
    layer is squeezed between the two path counts.
    """
    matrix = adjacency_matrix(g)
    lower = norm_sequence(matrix, k_max).quotient
    upper = norm_sequence(matrix + matrix.T, k_max).quotient
    table = column_sums(matrix, k_max)
    gammas = _gammas(g)
    for k in range(1, k_max + 1):
        layer = _layer(table, gammas, k)
        if not lower[k - 1] <= layer <= upper[k - 1]:
            log.error(f"Layer {k} = {layer} is outside its path count bounds")
            return False
    return True


def write_csv(seq: LeavittQuotientSeq, path: Union[str, Path]):
    """Write the k,q_k_digits,h_k,ratio_h_k series."""
    seq.to_dataframe().to_csv(path, index=False)
    log.info(f"Wrote {seq.k_max + 1} rows to {path}")


def read_csv(path: Union[str, Path]) -> pd.DataFrame:
    """Load a series written by write_csv(), q_k back as exact ints.

    Args:
        path (str, Path): The CSV file

    Returns:
        (DataFrame): columns k, q_k, h_k, ratio_h_k sorted by k
    """
    frame = pd.read_csv(path, dtype={"q_k_digits": str})
    missing = {"k", "q_k_digits", "h_k", "ratio_h_k"} - set(frame.columns)
    if missing:
        log.error(f"{path} lacks the columns {sorted(missing)}")
        raise PreconditionError(f"{path} is not a Leavitt series")
    digits = frame.pop("q_k_digits")
    values = [int(q) for q in digits]
    frame["q_k"] = pd.Series(values, index=frame.index, dtype=object)
    return frame.sort_values("k").reset_index(drop=True)[
        ["k", "q_k", "h_k", "ratio_h_k"]
    ]


def main():
    """This main function lets this module be run standalone by a bash script."""
    parser = argparse.ArgumentParser(
        prog="leavitt",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description="Compute the Leavitt layer dimensions of a graph file",
        epilog="""
        This should only be run standalone for debugging purposes.
        """,
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="verbose output")
    parser.add_argument("-i", "--infile", required=True, help="Input graph file")
    parser.add_argument("-k", "--kmax", type=int, default=1000, help="Last layer")
    parser.add_argument("-o", "--outfile", help="CSV file to write")
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
    seq = leavitt_sequence(graph, args.kmax)
    print(f"h_{args.kmax} = {seq.h[-1]}, ratio = {seq.ratio(args.kmax)}")
    if args.outfile:
        write_csv(seq, args.outfile)


if __name__ == "__main__":
    """This is just a hook so this file can be run standalone during development."""
    main()
