"""Brute-force reference computations.

Nothing here reuses the optimized code paths except the ``IntMatrix``
container: jets are obtained by repeated differentiation of monomials and
determinants by cofactor expansion (or rational Gaussian elimination for
large minors), and every q-subset is examined without pruning.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .gauss import BudgetExceeded, NotGenericallySpanned, analyze, compute_Bk, exchange_walk
from .linalg import IntMatrix, Sublattice, saturate
from .polytope import PointConfiguration

__all__ = [
    "Mismatch",
    "brute_force_Bk",
    "brute_force_subsets",
    "cofactor_det",
    "elimination_det",
    "monomial_jet",
    "cross_check",
    "CrossCheckReport",
    "ORACLE_BUDGET",
]

ORACLE_BUDGET = 10**7
COFACTOR_MAX = 7


class Mismatch(AssertionError):
    def __init__(self, message, element=None):
        super().__init__(message)
        self.element = element


def cofactor_det(m: Sequence[Sequence[int]]) -> int:
    """Laplace expansion along the first row, skipping zero entries."""
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = 0
    for j, a in enumerate(m[0]):
        if a:
            minor = [row[:j] + row[j + 1:] for row in m[1:]]
            total += (-1) ** j * a * cofactor_det(minor)
    return total


def elimination_det(m: Sequence[Sequence[int]]) -> int:
    """Determinant by Gaussian elimination over Q."""
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return int(det)


def _det(m):
    return cofactor_det(m) if len(m) <= COFACTOR_MAX else elimination_det(m)


def monomial_jet(u: Sequence[int], alpha: Sequence[int]) -> int:
    """Value at (1, ..., 1) of the alpha-th partial derivative of x^u."""
    coeff = 1
    for var in range(len(u)):
        e = u[var]
        for _ in range(alpha[var]):
            coeff *= e
            e -= 1
    return coeff


def _derivative_orders(n: int, k: int):
    return [a for a in itertools.product(range(k + 1), repeat=n) if sum(a) <= k]


def brute_force_subsets(A, k: int, budget: int = ORACLE_BUDGET):
    """All q-subsets (index tuples) of A whose jet minor is nonsingular."""
    A = A if isinstance(A, PointConfiguration) else PointConfiguration.from_points(A)
    n = A.ambient_rank
    q = comb(n + k, k)
    total = comb(len(A), q)
    if total > budget:
        raise BudgetExceeded(f"{total} subsets exceed the oracle budget {budget}")
    orders = _derivative_orders(n, k)
    cols = [[monomial_jet(u, a) for a in orders] for u in A.points]
    hits = []
    for sub in itertools.combinations(range(len(A)), q):
        m = [[cols[j][i] for j in sub] for i in range(q)]
        if _det(m):
            hits.append(sub)
    if not hits:
        raise NotGenericallySpanned(f"no nonsingular {q}-subset: not generically {k}-jet spanned")
    return hits


def brute_force_Bk(A, k: int, budget: int = ORACLE_BUDGET) -> list[tuple[int, ...]]:
    A = A if isinstance(A, PointConfiguration) else PointConfiguration.from_points(A)
    sums = set()
    for sub in brute_force_subsets(A, k, budget):
        sums.add(tuple(sum(A.points[i][c] for i in sub) for c in range(A.ambient_rank)))
    return sorted(sums)


@dataclass
class CrossCheckReport:
    order: int
    b_k_size: int
    nonsingular_subsets: int
    span_rank: int
    saturated_basis: list
    difference_basis: list
    exchange_sweeps: int
    timings: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "status": "pass",
            "b_k_size": self.b_k_size,
            "nonsingular_subsets": self.nonsingular_subsets,
            "span_rank": self.span_rank,
            "saturated_span_basis": self.saturated_basis,
            "difference_lattice_basis": self.difference_basis,
            "exchange_sweeps": self.exchange_sweeps,
            "timings_seconds": {k: round(v, 6) for k, v in self.timings.items()},
        }


def _diffs(points):
    return [tuple(a - b for a, b in zip(p, points[0])) for p in points[1:]]


def cross_check(A, k: int, budget: int = ORACLE_BUDGET, threads: int = 1) -> CrossCheckReport:
    """Compare pruned enumeration, exchange walk and the unpruned oracle.

    Raises :class:`Mismatch` naming the first point where they disagree.
    """
    A = A if isinstance(A, PointConfiguration) else PointConfiguration.from_points(A)
    n = A.ambient_rank
    timings = {}

    t = time.perf_counter()
    subsets = brute_force_subsets(A, k, budget)
    oracle = sorted({tuple(sum(A.points[i][c] for i in s) for c in range(n)) for s in subsets})
    timings["oracle"] = time.perf_counter() - t

    t = time.perf_counter()
    full = compute_Bk(A, k, threads=threads)
    timings["full"] = time.perf_counter() - t

    t = time.perf_counter()
    walk = exchange_walk(A, k)
    timings["exchange"] = time.perf_counter() - t

    if full != oracle:
        diff = sorted(set(full) ^ set(oracle))
        raise Mismatch(f"B_k differs between pruned and oracle enumeration at {diff[0]}", diff[0])
    stray = sorted({tuple(sum(A.points[i][c] for i in s) for c in range(n))
                    for s in walk.visited} - set(oracle))
    if stray:
        raise Mismatch(f"exchange walk produced {stray[0]} outside B_k", stray[0])

    sat_oracle = saturate(IntMatrix.from_rows(_diffs(oracle), cols=n), n)
    sat_full = analyze(A, k, mode="full", threads=threads).saturated_span
    sat_walk = saturate(IntMatrix.from_rows(walk.generators, cols=n), n)
    for name, lat in (("full", sat_full), ("exchange", sat_walk)):
        if lat != sat_oracle:
            bad = next((r for r in lat.basis.to_rows() if r not in sat_oracle), None)
            if bad is None:
                bad = next(r for r in sat_oracle.basis.to_rows() if r not in lat)
            raise Mismatch(f"saturated span from {name} mode differs at {bad}", tuple(bad))

    return CrossCheckReport(
        order=k,
        b_k_size=len(oracle),
        nonsingular_subsets=len(subsets),
        span_rank=sat_oracle.rank,
        saturated_basis=sat_oracle.basis.to_rows(),
        difference_basis=Sublattice.generated_by(_diffs(oracle), n).basis.to_rows(),
        exchange_sweeps=walk.sweeps,
        timings=timings,
    )
