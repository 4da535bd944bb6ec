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

"""Exact matrix powers, characteristic polynomials and Perron roots.

Matrices are numpy object arrays holding Python ints, so products never
overflow. The spectral radius of a nonnegative matrix is its largest
real eigenvalue and bounds the modulus of every other one. By the
Gauss-Lucas theorem every derivative of the characteristic polynomial
is then positive at any x above the radius, and by Budan-Fourier some
derivative is negative below it. That sign test is exact on Fractions
and drives the bisection.
"""

import argparse
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath
import numpy as np

from graphent.config import resolve
from graphent.errors import CheckFailure, PreconditionError
from graphent.filtration import DimSequence
from graphent.graph import Graph, adjacency_matrix, extended_graph, load_graph

# Instantiate logger
log = logging.getLogger(__name__)


def as_matrix(data) -> np.ndarray:
    """Convert nested lists to a square object array of Python ints."""
    matrix = np.array(data, dtype=object)
    if matrix.size == 0:
        return np.zeros((0, 0), dtype=object)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise PreconditionError(f"Expected a square matrix, got {matrix.shape}")
    return np.vectorize(int, otypes=[object])(matrix)


def identity(n: int) -> np.ndarray:
    """The n x n identity as an object array."""
    matrix = np.zeros((n, n), dtype=object)
    for i in range(n):
        matrix[i, i] = 1
    return matrix


def mat_pow(matrix: np.ndarray, power: int) -> np.ndarray:
    """A^n by binary exponentiation, A^0 being the identity."""
    if power < 0:
        raise PreconditionError(f"Negative power {power}")
    result = identity(matrix.shape[0])
    base = matrix
    while power:
        if power & 1:
            result = result @ base
        power >>= 1
        if power:
            base = base @ base
    return result


def power_sequence(matrix: np.ndarray, kmax: int) -> list:
    """A^0, A^1, ..., A^kmax computed incrementally."""
    powers = [identity(matrix.shape[0])]
    for _ in range(kmax):
        powers.append(powers[-1] @ matrix)
    return powers


def norm_11(matrix: np.ndarray) -> int:
    """The entrywise sum of a nonnegative matrix."""
    if matrix.size == 0:
        return 0
    return int(matrix.sum())


def column_sums(matrix: np.ndarray, kmax: int) -> np.ndarray:
    """Column sums of A^0..A^kmax, one row per power.

    Row s counts the paths of length s ending at each vertex, and comes
    from row s - 1 by a single vector product.

    Args:
        matrix (np.ndarray): The adjacency matrix
        kmax (int): The last power

    Returns:
        (np.ndarray): a (kmax + 1) x n object array
    """
    n = matrix.shape[0]
    table = np.zeros((kmax + 1, n), dtype=object)
    table[0, :] = 1
    for s in range(1, kmax + 1):
        table[s, :] = table[s - 1, :] @ matrix
    return table


def norm_sequence(matrix: np.ndarray, kmax: int) -> DimSequence:
    """Quotient dimensions ||A^1||, ..., ||A^kmax|| of the path algebra."""
    if kmax < 1:
        raise PreconditionError(f"kmax must be at least 1, not {kmax}")
    table = column_sums(matrix, kmax)
    quotient = tuple(int(row.sum()) if row.size else 0 for row in table[1:])
    return DimSequence(quotient, base=matrix.shape[0])


def _polyval(coeffs: tuple, x):
    total = 0
    for c in coeffs:
        total = total * x + c
    return total


def _derivative(coeffs: tuple) -> tuple:
    degree = len(coeffs) - 1
    return tuple(c * (degree - i) for i, c in enumerate(coeffs[:-1]))


def _deflate(coeffs: tuple, root) -> tuple:
    """Divide by (x - root), which must divide exactly."""
    quotient = list()
    carry = 0
    for c in coeffs[:-1]:
        carry = carry * root + c
        quotient.append(carry)
    return tuple(quotient)


@dataclass(frozen=True)
class CharPoly:
    """det(xI - A), coefficients from x^n down to the constant term."""

    coefficients: tuple

    @property
    def degree(self) -> int:
        """The order of the matrix."""
        return len(self.coefficients) - 1

    def __call__(self, x):
        """Evaluate exactly at an int or Fraction, or at an mpf."""
        return _polyval(self.coefficients, x)

    def __mul__(self, other: "CharPoly") -> "CharPoly":
        result = [0] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                result[i + j] += a * b
        return CharPoly(tuple(result))

    def is_monomial(self) -> bool:
        """True for x^n, the polynomial of a nilpotent matrix."""
        return all(c == 0 for c in self.coefficients[1:])

    def derivatives(self) -> list:
        """p, p', p'', ... down to the constant n!."""
        chain = [self.coefficients]
        while len(chain[-1]) > 1:
            chain.append(_derivative(chain[-1]))
        return chain

    def __str__(self) -> str:
        terms = list()
        for i, c in enumerate(self.coefficients):
            power = self.degree - i
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            size = abs(c)
            if power == 0:
                body = f"{size}"
            else:
                body = "x" if power == 1 else f"x^{power}"
                if size != 1:
                    body = f"{size}{body}"
            terms.append(f"{sign} {body}")
        if not terms:
            return "0"
        text = " ".join(terms)
        return text[2:] if text.startswith("+ ") else f"-{text[2:]}"


def char_poly(matrix: np.ndarray) -> CharPoly:
    """The characteristic polynomial by the Faddeev-LeVerrier recurrence.

    Every division by k is exact since the coefficients are integers.

    Args:
        matrix (np.ndarray): A square integer matrix

    Returns:
        (CharPoly): det(xI - A)
    """
    n = matrix.shape[0]
    eye = identity(n)
    coefficients = [1]
    current = np.zeros((n, n), dtype=object)
    for k in range(1, n + 1):
        current = matrix @ current + coefficients[-1] * eye
        trace = sum((matrix @ current)[i, i] for i in range(n))
        value, remainder = divmod(-trace, k)
        if remainder:
            log.error(f"Inexact division computing coefficient {k}")
            raise CheckFailure("Characteristic polynomial is not integral")
        coefficients.append(int(value))
    return CharPoly(tuple(coefficients))


@dataclass(frozen=True)
class PerronRoot:
    """The spectral radius with an exact rational enclosure.

    Args:
        value (float): midpoint of the enclosure
        lo (Fraction): lower end, at most the radius
        hi (Fraction): upper end, at least the radius
        tolerance (float): requested enclosure width
        exact (bool): the radius is the integer lo == hi
    """

    value: float
    lo: Fraction
    hi: Fraction
    tolerance: float
    exact: bool = False

    @property
    def midpoint(self) -> Fraction:
        """The exact midpoint of the enclosure."""
        return (self.lo + self.hi) / 2


def _above(derivatives: list, x) -> bool:
    """True exactly when x exceeds the spectral radius."""
    return all(_polyval(d, x) > 0 for d in derivatives)


def _is_radius(poly: CharPoly, root: int) -> bool:
    """True when the integer root of poly is its largest real root."""
    coeffs = poly.coefficients
    while len(coeffs) > 1 and _polyval(coeffs, root) == 0:
        coeffs = _deflate(coeffs, root)
    return _above(CharPoly(coeffs).derivatives(), root)


def perron_root(matrix: np.ndarray, tol: Optional[float] = None) -> PerronRoot:
    """The spectral radius of a nonnegative integer matrix.

    The radius is an algebraic integer, so it is either an integer,
    found exactly, or irrational and never hit by a bisection point.

    Args:
        matrix (np.ndarray): A nonnegative integer matrix
        tol (float): enclosure width, spectral:tol if None

    Returns:
        (PerronRoot): the enclosed radius
    """
    tol = resolve(tol, "spectral:tol")
    if tol <= 0:
        log.error(f"Tolerance must be positive, not {tol}")
        raise PreconditionError(f"Tolerance must be positive, not {tol}")

    poly = char_poly(matrix)
    if poly.is_monomial():
        return PerronRoot(0.0, Fraction(0), Fraction(0), tol, True)

    derivatives = poly.derivatives()
    lo, hi = 0, norm_11(matrix) + 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _above(derivatives, mid):
            hi = mid
        else:
            lo = mid

    if poly(lo) == 0 and _is_radius(poly, lo):
        log.debug(f"Spectral radius is exactly {lo}")
        return PerronRoot(float(lo), Fraction(lo), Fraction(lo), tol, True)

    lo, hi = Fraction(lo), Fraction(hi)
    width = Fraction(tol)
    while hi - lo > width:
        mid = (lo + hi) / 2
        if _above(derivatives, mid):
            hi = mid
        else:
            lo = mid

    root = PerronRoot(float((lo + hi) / 2), lo, hi, tol)
    log.debug(f"Spectral radius in [{float(lo)}, {float(hi)}]")
    return root


def entropy_from_matrix(matrix: np.ndarray, tol: Optional[float] = None) -> float:
    """log of the spectral radius, or 0 when the radius is at most 1."""
    root = perron_root(matrix, tol)
    if root.hi <= 1:
        return 0.0
    mid = root.midpoint
    with mpmath.workdps(resolve(None, "precision:dps")):
        return float(mpmath.log(mpmath.mpf(mid.numerator) / mid.denominator))


def entropy_path(g: Graph, tol: Optional[float] = None) -> float:
    """Algebraic entropy of the path algebra KE."""
    return entropy_from_matrix(adjacency_matrix(g), tol)


def entropy_extended(g: Graph, tol: Optional[float] = None) -> float:
    """Algebraic entropy of the path algebra of the extended graph."""
    return entropy_path(extended_graph(g), tol)


def is_nilpotent(matrix: np.ndarray) -> bool:
    """True when some power of the matrix vanishes, an acyclic graph."""
    return char_poly(matrix).is_monomial()


def is_normal(matrix: np.ndarray) -> bool:
    """True when A commutes with its transpose."""
    return bool(np.array_equal(matrix @ matrix.T, matrix.T @ matrix))


def main():
    """This main function lets this module be run standalone by a bash script."""
    parser = argparse.ArgumentParser(
        prog="spectral",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description="Show the spectral data of a graph file",
        epilog="""
        This should only be run standalone for debugging purposes.
        """,
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="verbose output")
    parser.add_argument("-i", "--infile", required=True, help="Input graph file")
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
    matrix = adjacency_matrix(graph)
    print(f"p(x) = {char_poly(matrix)}")
    print(f"rho = {perron_root(matrix).value}")
    print(f"h(KE) = {entropy_path(graph)}")
    print(f"h(KE^) = {entropy_extended(graph)}")


if __name__ == "__main__":
    """This is just a hook so this file can be run standalone during development."""
    main()
