"""Matrices of k-jets for monomial parametrizations.

Column ``u`` of the jet matrix holds the partial derivatives of the
Laurent monomial ``x^u`` of order at most ``k``; rows are indexed by
multi-indices in graded lexicographic order with the constant row first.
At the point (1, ..., 1) every entry is a product of falling factorials,
so the matrix is integral.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb, lcm
from typing import Sequence

from .linalg import IntMatrix, rank_exact
from .polytope import PointConfiguration

__all__ = [
    "JetMatrix",
    "ZeroCoordinate",
    "falling_factorial",
    "multi_indices",
    "jet_matrix",
    "jet_matrix_at_point",
    "osculating_dimension",
    "is_generically_kjet_spanned",
    "jet_rows",
]


class ZeroCoordinate(ValueError):
    pass


def falling_factorial(u: int, a: int) -> int:
    """``u (u-1) ... (u-a+1)``; works verbatim for negative ``u``."""
    out = 1
    for i in range(a):
        out *= u - i
    return out


def _compositions(d: int, n: int):
    # lexicographically decreasing
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in _compositions(d - first, n - 1):
            yield (first,) + rest


def multi_indices(n: int, k: int) -> list[tuple[int, ...]]:
    """All exponent vectors of total order <= k, graded, lex-descending within a degree."""
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    return [a for d in range(k + 1) for a in _compositions(d, n)]


def jet_rows(point: Sequence[int], indices: Sequence[tuple[int, ...]]) -> list[int]:
    """Jet column of a single exponent vector at (1, ..., 1)."""
    out = []
    for alpha in indices:
        v = 1
        for u, a in zip(point, alpha):
            v *= falling_factorial(u, a)
            if not v:
                break
        out.append(v)
    return out


@dataclass(frozen=True)
class JetMatrix:
    order: int
    row_index: tuple[tuple[int, ...], ...]
    col_index: PointConfiguration
    values: tuple[tuple, ...]  # rows of ints, or Fractions off the distinguished point

    @cached_property
    def entries(self) -> IntMatrix:
        if any(isinstance(x, Fraction) and x.denominator != 1 for r in self.values for x in r):
            raise ValueError("jet matrix has non-integral entries")
        return IntMatrix.from_rows(
            ([int(x) for x in r] for r in self.values), cols=len(self.col_index)
        )

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_index), len(self.col_index)

    def rank(self) -> int:
        cols = list(zip(*self.values)) if self.values else []
        scaled = []
        for c in cols:
            # clearing a column's denominators does not change the rank
            m = lcm(*(Fraction(x).denominator for x in c)) if c else 1
            scaled.append([int(Fraction(x) * m) for x in c])
        return rank_exact(scaled) if scaled else 0


def _as_config(A) -> PointConfiguration:
    if isinstance(A, PointConfiguration):
        return A
    return PointConfiguration.from_points(A)


def jet_matrix(A, k: int) -> JetMatrix:
    """Jet matrix at (1, ..., 1); shape ``binom(n+k, k) x |A|``."""
    A = _as_config(A)
    idx = multi_indices(A.ambient_rank, k)
    cols = [jet_rows(u, idx) for u in A.points]
    values = tuple(tuple(c[i] for c in cols) for i in range(len(idx)))
    return JetMatrix(k, tuple(idx), A, values)


def jet_matrix_at_point(A, k: int, p: Sequence) -> JetMatrix:
    """Jet matrix at an arbitrary torus point with rational coordinates."""
    A = _as_config(A)
    p = [Fraction(x) for x in p]
    if len(p) != A.ambient_rank:
        raise ValueError("point has the wrong number of coordinates")
    if any(x == 0 for x in p):
        raise ZeroCoordinate("the point must lie in the torus")
    idx = multi_indices(A.ambient_rank, k)
    values = []
    for alpha in idx:
        row = []
        for u in A.points:
            v = Fraction(1)
            for ui, ai, pi in zip(u, alpha, p):
                v *= falling_factorial(ui, ai) * pi ** (ui - ai)
            row.append(v)
        values.append(tuple(row))
    return JetMatrix(k, tuple(idx), A, tuple(values))


def osculating_dimension(A, k: int) -> int:
    """General k-th osculating dimension of X_A (rank of the jet matrix at (1, ..., 1))."""
    return jet_matrix(A, k).rank()


def is_generically_kjet_spanned(A, k: int) -> bool:
    A = _as_config(A)
    q = comb(A.ambient_rank + k, k)
    if len(A) < q:
        return False
    return osculating_dimension(A, k) == q
