"""Higher order Gauss maps of projective toric varieties X_A.

For a generically k-jet spanned configuration A with q = binom(n+k, k),
the set B_k collects the sums of all q-subsets of A whose jet matrix at
(1, ..., 1) is nonsingular, i.e. the sums of the bases of the column
matroid of the jet matrix.  The toric variety of B_k is the closure of
the image of the order-k Gauss map, the general fiber has dimension
``n - rank <B_k - B_k>``, and the fiber itself is the toric variety of
the image of A under the projection killing the saturation of
``<B_k - B_k>``.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd
from typing import Sequence

from .jets import is_generically_kjet_spanned, jet_matrix
from .linalg import IntMatrix, Sublattice, hnf, quotient_projection, saturate
from .polytope import (
    PointConfiguration,
    convex_hull,
    edge_criterion_kjet,
    is_k_veronese,
    is_smooth,
    lattice_points,
)

log = logging.getLogger(__name__)

__all__ = [
    "NotGenericallySpanned",
    "BudgetExceeded",
    "GaussReport",
    "Classification",
    "enumerate_bases",
    "compute_Bk",
    "span_generators_exchange",
    "analyze",
    "classify",
    "DEFAULT_FALLBACK",
]

DEFAULT_FALLBACK = 10**6
# below this many q-subsets a process pool costs more than it saves
PARALLEL_MIN_SUBSETS = 20000


class NotGenericallySpanned(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


def _as_config(A) -> PointConfiguration:
    if isinstance(A, PointConfiguration):
        return A
    return PointConfiguration.from_points(A)


def _jet_columns(A: PointConfiguration, k: int) -> tuple[int, list[list[int]]]:
    q = comb(A.ambient_rank + k, k)
    if not is_generically_kjet_spanned(A, k):
        raise NotGenericallySpanned(
            f"configuration of {len(A)} points is not generically {k}-jet spanned "
            f"(needs rank {q})"
        )
    J = jet_matrix(A, k).entries
    return q, [list(J.col(j)) for j in range(J.cols)]


# --- incremental fraction-free echelon -------------------------------------
# An echelon is a tuple of (pivot position, integer vector) pairs.  Reducing
# a vector against it is exact; the content is divided out to keep entries small.

def _reduce(v: list[int], echelon) -> list[int]:
    for piv, b in echelon:
        c = v[piv]
        if c:
            bp = b[piv]
            v = [bp * x - c * y for x, y in zip(v, b)]
            g = 0
            for x in v:
                g = gcd(g, x)
                if g == 1:
                    break
            if g > 1:
                v = [x // g for x in v]
    return v


def _extend(echelon, v):
    """Echelon with ``v`` appended, or None if ``v`` is dependent."""
    r = _reduce(v, echelon)
    piv = next((i for i, x in enumerate(r) if x), None)
    if piv is None:
        return None
    return echelon + ((piv, r),)


def _completable(echelon, cols, start: int, q: int) -> bool:
    """Can ``echelon`` be extended to rank q using columns ``cols[start:]``?"""
    ech = echelon
    for j in range(start, len(cols)):
        if len(ech) >= q:
            return True
        nxt = _extend(ech, cols[j])
        if nxt is not None:
            ech = nxt
    return len(ech) >= q


class _Budget:
    def __init__(self, limit):
        self.limit = limit
        self.used = 0

    def tick(self):
        self.used += 1
        if self.limit is not None and self.used > self.limit:
            raise BudgetExceeded(f"enumeration budget of {self.limit} nodes exhausted")


def _dfs(cols, q, i, echelon, chosen, out, budget):
    budget.tick()
    if len(chosen) == q:
        out.append(tuple(chosen))
        return
    m = len(cols)
    if m - i < q - len(chosen):
        return
    nxt = _extend(echelon, cols[i])
    if nxt is not None:
        # including an independent column never loses completability
        chosen.append(i)
        _dfs(cols, q, i + 1, nxt, chosen, out, budget)
        chosen.pop()
    if _completable(echelon, cols, i + 1, q):
        _dfs(cols, q, i + 1, echelon, chosen, out, budget)


def _bases_with_first(cols, q, first, limit):
    """Bases whose smallest column index is ``first``."""
    out = []
    ech = _extend((), cols[first])
    if ech is None or not _completable(ech, cols, first + 1, q):
        return out
    _dfs(cols, q, first + 1, ech, [first], out, _Budget(limit))
    return out


def enumerate_bases(cols: Sequence[Sequence[int]], q: int, budget: int | None = None,
                    threads: int = 1) -> list[tuple[int, ...]]:
    """All q-subsets of columns that are linearly independent, in lex order.

    Depth-first extension over the columns; a branch is cut as soon as the
    chosen columns become dependent or can no longer reach rank q.
    """
    cols = [list(c) for c in cols]
    m = len(cols)
    if q == 0:
        return [()]
    if threads > 1 and m > q and comb(m, q) >= PARALLEL_MIN_SUBSETS:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = pool.map(_bases_with_first, [cols] * m, [q] * m, range(m), [budget] * m)
            out = [b for part in parts for b in part]
        if budget is not None and len(out) > budget:
            raise BudgetExceeded(f"more than {budget} bases")
        return out
    out: list[tuple[int, ...]] = []
    if _completable((), cols, 0, q):
        _dfs(cols, q, 0, (), [], out, _Budget(budget))
    return out


def _point_sum(A: PointConfiguration, subset) -> tuple[int, ...]:
    return tuple(sum(A.points[i][c] for i in subset) for c in range(A.ambient_rank))


def _compute_bases(A, k, budget=None, threads=1):
    A = _as_config(A)
    q, cols = _jet_columns(A, k)
    return A, q, enumerate_bases(cols, q, budget=budget, threads=threads)


def compute_Bk(A, k: int, budget: int | None = None, threads: int = 1) -> list[tuple[int, ...]]:
    """Sorted, duplicate-free list of the sums of the nonsingular q-subsets of A."""
    A, _, bases = _compute_bases(A, k, budget, threads)
    return sorted({_point_sum(A, b) for b in bases})


# --- basis exchange walk ---------------------------------------------------

def _exchange_partners(cols, basis, others):
    """For each column outside ``basis``, the basis positions it can replace.

    Column ``u'`` can replace basis element ``u`` iff ``u`` has a nonzero
    coefficient when ``u'`` is written in the basis.
    """
    q = len(basis)
    # Gauss-Jordan on [B | rest] over the rationals
    rows = [[Fraction(cols[b][r]) for b in basis] + [Fraction(cols[o][r]) for o in others]
            for r in range(q)]
    for c in range(q):
        p = next(i for i in range(c, q) if rows[i][c])
        rows[c], rows[p] = rows[p], rows[c]
        pv = rows[c][c]
        rows[c] = [x / pv for x in rows[c]]
        for i in range(q):
            if i != c and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return {
        o: [basis[r] for r in range(q) if rows[r][q + j]]
        for j, o in enumerate(others)
    }


def _greedy_basis(cols, q):
    ech, chosen = (), []
    for j, c in enumerate(cols):
        nxt = _extend(ech, c)
        if nxt is not None:
            ech = nxt
            chosen.append(j)
            if len(chosen) == q:
                break
    return tuple(chosen)


@dataclass
class ExchangeWalk:
    generators: list[tuple[int, ...]]
    visited: list[tuple[int, ...]]
    sweeps: int
    exhausted: bool


def exchange_walk(A, k: int, budget: int | None = None, exhaustive: bool = False) -> ExchangeWalk:
    """Breadth-first walk on the basis exchange graph of the jet matroid.

    Each single exchange ``S -> S - u + u'`` contributes the difference
    ``u' - u`` of the corresponding B_k elements.  The walk stops when a
    full sweep of the frontier leaves the Hermite form of the generated
    lattice unchanged (or the lattice is all of Z^n), unless ``exhaustive``
    is set, in which case the whole exchange graph is traversed.
    """
    A = _as_config(A)
    n = A.ambient_rank
    q, cols = _jet_columns(A, k)
    start = _greedy_basis(cols, q)
    seen = {start}
    visited = [start]
    frontier = [start]
    gens: set[tuple[int, ...]] = set()
    current = hnf(IntMatrix.zeros(0, n))[0]
    full = IntMatrix.identity(n)
    sweeps = 0
    while frontier:
        sweeps += 1
        nxt = []
        for S in frontier:
            members = set(S)
            others = [j for j in range(len(cols)) if j not in members]
            for o, outs in _exchange_partners(cols, S, others).items():
                for u in outs:
                    gens.add(tuple(a - b for a, b in zip(A.points[o], A.points[u])))
                    T = tuple(sorted(members - {u} | {o}))
                    if T not in seen:
                        seen.add(T)
                        visited.append(T)
                        nxt.append(T)
                        if budget is not None and len(seen) > budget:
                            raise BudgetExceeded(f"exchange walk exceeded {budget} bases")
        frontier = nxt
        lat = Sublattice.generated_by(sorted(gens), n).basis
        stable = lat == current
        current = lat
        if not exhaustive and (lat == full or (stable and sweeps > 1)):
            break
    return ExchangeWalk(sorted(gens), visited, sweeps, not frontier)


def span_generators_exchange(A, k: int, budget: int | None = None,
                             exhaustive: bool = False) -> IntMatrix:
    """Generators of ``<B_k - B_k>`` from single basis exchanges (rows)."""
    A = _as_config(A)
    walk = exchange_walk(A, k, budget=budget, exhaustive=exhaustive)
    return IntMatrix.from_rows(walk.generators, cols=A.ambient_rank)


# --- reports ---------------------------------------------------------------

@dataclass(frozen=True)
class GaussReport:
    order: int
    q: int
    b_k: tuple[tuple[int, ...], ...]
    span_rank: int
    fiber_dimension: int
    projection: IntMatrix
    fiber_points: PointConfiguration
    difference_lattice: Sublattice
    saturated_span: Sublattice
    span_is_full_lattice: bool
    finite: bool
    birational: bool
    veronese_exception: bool
    mode: str
    bases_examined: int

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "q": self.q,
            "mode": self.mode,
            "b_k": [list(b) for b in self.b_k],
            "b_k_size": len(self.b_k),
            "bases_examined": self.bases_examined,
            "span_rank": self.span_rank,
            "fiber_dimension": self.fiber_dimension,
            "difference_lattice_basis": self.difference_lattice.basis.to_rows(),
            "saturated_span_basis": self.saturated_span.basis.to_rows(),
            "projection": self.projection.to_rows(),
            "fiber_points": [list(p) for p in self.fiber_points.points],
            "span_is_full_lattice": self.span_is_full_lattice,
            "finite": self.finite,
            "birational": self.birational,
            "veronese_exception": self.veronese_exception,
        }


def _veronese_flag(A: PointConfiguration, k: int) -> bool:
    hull = convex_hull(A)
    return is_smooth(hull) and is_k_veronese(hull, k)


def analyze(A, k: int, mode: str = "full", budget: int | None = None, threads: int = 1,
            fallback_threshold: int = DEFAULT_FALLBACK, exhaustive: bool = False) -> GaussReport:
    """Image, general fiber and finiteness data of the order-k Gauss map of X_A.

    ``mode="exchange"`` only falls back to full enumeration when the number
    of q-subsets is at most ``fallback_threshold``.
    """
    A = _as_config(A)
    n = A.ambient_rank
    if mode not in ("full", "exchange"):
        raise ValueError(f"unknown mode {mode!r}")
    q = comb(n + k, k)
    if mode == "exchange" and comb(len(A), q) <= fallback_threshold:
        log.debug("exchange mode falling back to full enumeration")
        mode = "full"

    if mode == "full":
        _, _, bases = _compute_bases(A, k, budget, threads)
        b_k = sorted({_point_sum(A, b) for b in bases})
        diffs = [tuple(x - y for x, y in zip(b, b_k[0])) for b in b_k[1:]]
        examined = len(bases)
    else:
        walk = exchange_walk(A, k, budget=budget, exhaustive=exhaustive)
        b_k = sorted({_point_sum(A, b) for b in walk.visited})
        diffs = walk.generators
        examined = len(walk.visited)

    gens = IntMatrix.from_rows(diffs, cols=n)
    lattice = Sublattice.generated_by(gens, n)
    span = saturate(gens, n)
    proj = quotient_projection(span)
    images = dict.fromkeys(
        tuple(sum(proj[i, j] * a[j] for j in range(n)) for i in range(proj.rows)) for a in A
    )
    fiber = PointConfiguration(proj.rows, tuple(sorted(images)))
    full = lattice.is_full()
    return GaussReport(
        order=k,
        q=q,
        b_k=tuple(b_k),
        span_rank=span.rank,
        fiber_dimension=n - span.rank,
        projection=proj,
        fiber_points=fiber,
        difference_lattice=lattice,
        saturated_span=span,
        span_is_full_lattice=full,
        finite=span.rank == n,
        birational=full,
        veronese_exception=_veronese_flag(A, k),
        mode=mode,
        bases_examined=examined,
    )


@dataclass(frozen=True)
class Classification:
    finite: bool
    birational: bool
    veronese: bool
    smooth: bool
    kjet_spanned: bool | None
    all_lattice_points: bool
    theorem_consistent: bool
    report: GaussReport

    def to_dict(self) -> dict:
        return {
            "finite": self.finite,
            "birational": self.birational,
            "veronese": self.veronese,
            "smooth": self.smooth,
            "kjet_spanned": self.kjet_spanned,
            "all_lattice_points": self.all_lattice_points,
            "theorem_consistent": self.theorem_consistent,
            "fiber_dimension": self.report.fiber_dimension,
            "span_rank": self.report.span_rank,
        }


def classify(A, k: int, **kwargs) -> Classification:
    """Finiteness/birationality of the order-k Gauss map, checked against the polytope.

    For smooth polytopes whose edges all have lattice length >= k (k-jet
    spanned), with A the full set of lattice points, the map must be finite
    and birational unless the polytope is k times a unimodular simplex.
    ``theorem_consistent`` is False exactly when that implication fails.
    ``kjet_spanned`` is None unless the hull is smooth and A is all of its
    lattice points, since the edge test says nothing otherwise.
    """
    A = _as_config(A)
    rep = analyze(A, k, **kwargs)
    hull = convex_hull(A)
    smooth = is_smooth(hull)
    complete = set(lattice_points(hull).points) == set(A.points)
    spanned = edge_criterion_kjet(hull, k) if smooth and complete else None
    consistent = True
    if smooth and spanned and complete and not rep.veronese_exception:
        consistent = rep.finite and rep.birational
        if not consistent:
            log.error("finite/birational implication violated for order %d", k)
    return Classification(
        finite=rep.finite,
        birational=rep.birational,
        veronese=rep.veronese_exception,
        smooth=smooth,
        kjet_spanned=spanned,
        all_lattice_points=complete,
        theorem_consistent=consistent,
        report=rep,
    )


def default_threads() -> int:
    return os.cpu_count() or 1
