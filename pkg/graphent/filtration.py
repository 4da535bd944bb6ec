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

"""Growth estimators for finite prefixes of filtration dimensions.

A filtration V_0 <= V_1 <= ... is described by dim V_0 and the
quotient dimensions q_n = dim(V_n / V_{n-1}) for n = 1..N. Every
estimate here is computed on that finite prefix and is only a proxy for
the limit it imitates.
"""

import argparse
import itertools
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import mpmath
import pandas as pd

from graphent.config import resolve
from graphent.errors import PreconditionError

# Instantiate logger
log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DimSequence:
    """Quotient dimensions q_1..q_N on top of dim V_0.

    Args:
        quotient (tuple): q_1..q_N, nonnegative ints
        base (int): dim V_0
        cumulative (tuple): dim V_1..dim V_N when known, must agree
            with base and quotient
    """

    quotient: tuple
    base: int = 0
    cumulative: Optional[tuple] = field(default=None, compare=False)

    def __post_init__(self):
        quotient = tuple(int(q) for q in self.quotient)
        object.__setattr__(self, "quotient", quotient)
        if any(q < 0 for q in quotient) or self.base < 0:
            raise PreconditionError("Dimensions can't be negative")

        if self.cumulative is not None:
            cumulative = tuple(int(c) for c in self.cumulative)
            object.__setattr__(self, "cumulative", cumulative)
            if cumulative != self._accumulate():
                log.error("Cumulative dimensions disagree with the quotients")
                raise PreconditionError("Cumulative and quotient dimensions differ")

    def _accumulate(self) -> tuple:
        return tuple(itertools.accumulate(self.quotient, initial=self.base))[1:]

    def __len__(self) -> int:
        return len(self.quotient)

    def cumulative_dims(self) -> tuple:
        """dim V_1..dim V_N, stored or rebuilt from the quotients."""
        if self.cumulative is not None:
            return self.cumulative
        return self._accumulate()

    @classmethod
    def from_cumulative(cls, cumulative, base: int = 0) -> "DimSequence":
        """Build from dim V_1..dim V_N by differencing.

        Args:
            cumulative (Sequence[int]): dim V_1..dim V_N
            base (int): dim V_0

        Returns:
            (DimSequence): the sequence
        """
        cumulative = tuple(int(c) for c in cumulative)
        previous = (base,) + cumulative[:-1]
        quotient = tuple(c - p for c, p in zip(cumulative, previous))
        return cls(quotient, base, cumulative)


def _log(value: int):
    return mpmath.log(mpmath.mpf(value))


def entropy_of(seq: DimSequence, window: Optional[float] = None) -> float:
    """Largest log(q_n)/n over the trailing window of the sequence.

    Args:
        seq (DimSequence): The sequence, at least two terms
        window (float): trailing fraction to search, filtration:window if None

    Returns:
        (float): the estimate, 0 when the window holds only zeros
    """
    if len(seq) < 2:
        log.error(f"Can't estimate entropy from {len(seq)} terms")
        raise PreconditionError("Need at least two terms")
    fraction = resolve(window, "filtration:window")
    total = len(seq)
    width = max(1, math.ceil(total * fraction))
    start = total - width + 1
    tail = seq.quotient[start - 1 :]
    if not any(tail):
        return 0.0

    with mpmath.workdps(resolve(None, "precision:dps")):
        best = max(
            _log(q) / n for n, q in enumerate(tail, start=start) if q > 0
        )
        return float(best)


def last_entropy(seq: DimSequence) -> float:
    """log(q_N)/N, the estimate at the last index alone."""
    if not len(seq):
        raise PreconditionError("Empty sequence")
    last = seq.quotient[-1]
    if last == 0:
        return 0.0
    with mpmath.workdps(resolve(None, "precision:dps")):
        return float(_log(last) / len(seq))


def gk_dim_of(seq: DimSequence, threshold: Optional[float] = None) -> float:
    """Log-log slope of dim V_n between n = ceil(N/2) and N.

    Args:
        seq (DimSequence): The sequence, at least two terms
        threshold (float): slopes above this give inf,
            filtration:gk_infinity if None

    Returns:
        (float): the estimate, or math.inf
    """
    if len(seq) < 2:
        raise PreconditionError("Need at least two terms")
    threshold = resolve(threshold, "filtration:gk_infinity")
    cumulative = seq.cumulative_dims()
    total = len(seq)
    middle = math.ceil(total / 2)
    low, high = cumulative[middle - 1], cumulative[-1]
    if high == 0:
        return 0.0

    with mpmath.workdps(resolve(None, "precision:dps")):
        rise = _log(max(high, 1)) - _log(max(low, 1))
        slope = float(rise / (mpmath.log(total) - mpmath.log(middle)))
    if slope > threshold:
        return math.inf
    return slope


def growth_class(seq: DimSequence) -> int:
    """0 when the tail vanishes, 2 for exponential growth, else 1."""
    total = len(seq)
    width = max(1, math.ceil(total * resolve(None, "filtration:window")))
    if not any(seq.quotient[total - width :]):
        return 0
    if len(seq) >= 2 and math.isinf(gk_dim_of(seq)):
        return 2
    return 1


def subsample(seq: DimSequence, k: int) -> DimSequence:
    """Keep every k-th subspace, W_n = V_nk."""
    if k < 1:
        raise PreconditionError(f"Subsampling step must be positive, not {k}")
    cumulative = seq.cumulative_dims()
    kept = tuple(cumulative[n * k - 1] for n in range(1, len(seq) // k + 1))
    return DimSequence.from_cumulative(kept, seq.base)


def matrix_scale(seq: DimSequence, n: int) -> DimSequence:
    """Dimensions of the n x n matrix ring filtration, all times n^2."""
    if n < 1:
        raise PreconditionError(f"Matrix size must be positive, not {n}")
    factor = n * n
    cumulative = None
    if seq.cumulative is not None:
        cumulative = tuple(c * factor for c in seq.cumulative)
    return DimSequence(
        tuple(q * factor for q in seq.quotient), seq.base * factor, cumulative
    )


def direct_sum(a: DimSequence, b: DimSequence) -> DimSequence:
    """Termwise sum, the shorter sequence padded with zeros."""
    pairs = itertools.zip_longest(a.quotient, b.quotient, fillvalue=0)
    return DimSequence(tuple(x + y for x, y in pairs), a.base + b.base)


def read_sequence(path: Union[str, Path]) -> DimSequence:
    """Load a sequence from a CSV series or a plain list of integers.

    CSV files use the k,q_k_digits,... layout written by the Leavitt
    series, a k = 0 row giving dim V_0. Anything else is read as
    whitespace separated quotients q_1, q_2, ... with # comments.

    Args:
        path (str, Path): The file

    Returns:
        (DimSequence): the sequence
    """
    path = Path(path)
    if path.suffix == ".csv":
        frame = pd.read_csv(path, dtype={"k": int, "q_k_digits": str})
        frame = frame.sort_values("k")
        values = {int(k): int(q) for k, q in zip(frame["k"], frame["q_k_digits"])}
        base = values.pop(0, 0)
        expected = list(range(1, len(values) + 1))
        if sorted(values) != expected:
            raise PreconditionError(f"{path} does not hold k = 1..{len(values)}")
        seq = DimSequence(tuple(values[k] for k in expected), base)
    else:
        tokens = list()
        for line in path.read_text(encoding="utf-8").splitlines():
            tokens.extend(line.split("#", 1)[0].split())
        try:
            seq = DimSequence(tuple(int(t) for t in tokens))
        except ValueError as e:
            log.error(f"{path} is not a list of integers: {e}")
            raise PreconditionError(f"{path} is not a list of integers") from e

    log.info(f"Read {len(seq)} terms from {path}")
    return seq


def main():
    """This main function lets this module be run standalone by a bash script."""
    parser = argparse.ArgumentParser(
        prog="filtration",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description="Estimate growth of a dimension sequence",
        epilog="""
        This should only be run standalone for debugging purposes.
        """,
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="verbose output")
    parser.add_argument("-i", "--infile", required=True, help="Sequence file")
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

    seq = read_sequence(args.infile)
    print(f"entropy ~ {entropy_of(seq)}")
    print(f"GK dimension ~ {gk_dim_of(seq)}")


if __name__ == "__main__":
    """This is just a hook so this file can be run standalone during development."""
    main()
