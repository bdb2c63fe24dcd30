"""Lattice point configurations and exact lattice polytopes.

Convex hulls are built by incremental (beneath-beyond) insertion with
integer side tests.  Facets may be non-simplicial, which is the normal
case for lattice polytopes: a facet is stored as a primitive inequality
``normal . x <= offset`` together with every inserted point lying on it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

from .linalg import (
    IntMatrix,
    det_exact,
    lattice_coordinates,
    lattice_section,
    rank_exact,
    saturate,
)

LatticePoint = tuple  # tuple of ints

__all__ = [
    "LatticePoint",
    "PointConfiguration",
    "AffineChart",
    "Polytope",
    "NotFullDimensional",
    "NotSmooth",
    "convex_hull",
    "lattice_points",
    "edge_lattice_length",
    "is_smooth",
    "edge_criterion_kjet",
    "is_k_veronese",
    "simplex_points",
    "box_points",
]


class NotFullDimensional(ValueError):
    pass


class NotSmooth(ValueError):
    pass


def _affine_rank(points: Sequence[Sequence[int]]) -> int:
    """Dimension of the affine span; -1 for the empty set."""
    if not points:
        return -1
    p0 = points[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    return rank_exact(diffs) if diffs else 0


@dataclass(frozen=True)
class PointConfiguration:
    """An ordered, duplicate-free set of lattice points in Z^n."""

    ambient_rank: int
    points: tuple[LatticePoint, ...]
    full_dimensional: bool = field(init=False, compare=False)

    def __post_init__(self):
        pts = tuple(tuple(int(x) for x in p) for p in self.points)
        for p in pts:
            if len(p) != self.ambient_rank:
                raise ValueError(
                    f"point {list(p)} has {len(p)} coordinates, expected {self.ambient_rank}"
                )
        if len(set(pts)) != len(pts):
            raise ValueError("duplicate points in configuration")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "full_dimensional", _affine_rank(pts) == self.ambient_rank)

    @classmethod
    def from_points(cls, points: Iterable[Sequence[int]], ambient_rank: int | None = None,
                    dedupe: bool = False) -> PointConfiguration:
        pts = [tuple(int(x) for x in p) for p in points]
        if dedupe:
            pts = list(dict.fromkeys(pts))
        if ambient_rank is None:
            if not pts:
                raise ValueError("ambient rank is needed for an empty configuration")
            ambient_rank = len(pts[0])
        return cls(ambient_rank, tuple(pts))

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def affine_rank(self) -> int:
        return _affine_rank(self.points)

    def sorted(self) -> PointConfiguration:
        return PointConfiguration(self.ambient_rank, tuple(sorted(self.points)))

    def transform(self, linear: IntMatrix, shift: Sequence[int] = None) -> PointConfiguration:
        """Image under ``x -> L x + t`` (``linear`` acts on column vectors)."""
        shift = shift or (0,) * linear.rows
        pts = []
        for p in self.points:
            pts.append(tuple(
                sum(linear[i, j] * p[j] for j in range(linear.cols)) + shift[i]
                for i in range(linear.rows)
            ))
        return PointConfiguration.from_points(pts, ambient_rank=linear.rows)

    def reduced(self) -> tuple[PointConfiguration, AffineChart]:
        """Re-express the points in a lattice basis of their affine span."""
        chart = AffineChart.for_points(self.points, self.ambient_rank)
        local = [chart.to_local(p) for p in self.points]
        return PointConfiguration(chart.dim, tuple(local)), chart


@dataclass(frozen=True)
class AffineChart:
    """Lattice isomorphism between Z^r and (affine span of a point set) ∩ Z^n."""

    origin: LatticePoint
    coordinates: IntMatrix  # n x r, x -> (x - origin) @ coordinates
    section: IntMatrix  # r x n, y -> origin + y @ section

    @classmethod
    def for_points(cls, points, n: int) -> AffineChart:
        if not points:
            raise ValueError("cannot build a chart for an empty point set")
        origin = tuple(points[0])
        diffs = [[a - b for a, b in zip(p, origin)] for p in points[1:]]
        sub = saturate(IntMatrix.from_rows(diffs, cols=n), n)
        return cls(origin, lattice_coordinates(sub), lattice_section(sub))

    @classmethod
    def identity(cls, n: int) -> AffineChart:
        i = IntMatrix.identity(n)
        return cls((0,) * n, i, i)

    @property
    def dim(self) -> int:
        return self.section.rows

    @property
    def ambient_rank(self) -> int:
        return self.section.cols

    def to_local(self, x: Sequence[int]) -> LatticePoint:
        d = [a - b for a, b in zip(x, self.origin)]
        c = self.coordinates
        return tuple(sum(d[i] * c[i, j] for i in range(c.rows)) for j in range(c.cols))

    def to_ambient(self, y: Sequence[int]) -> LatticePoint:
        s = self.section
        return tuple(
            self.origin[j] + sum(y[i] * s[i, j] for i in range(s.rows)) for j in range(s.cols)
        )

    def is_identity(self) -> bool:
        n = self.ambient_rank
        return (self.dim == n and not any(self.origin)
                and self.section == IntMatrix.identity(n))


def _dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def _hyperplane(points: Sequence[Sequence[int]], d: int) -> tuple[tuple[int, ...], int]:
    """Primitive (normal, offset) of the hyperplane through ``d`` affinely independent points."""
    p0 = points[0]
    rows = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    normal = []
    for j in range(d):
        minor = [[r[c] for c in range(d) if c != j] for r in rows]
        normal.append((-1) ** j * det_exact(minor) if rows else 1)
    g = 0
    for x in normal:
        g = gcd(g, x)
    normal = tuple(x // g for x in normal)
    return normal, _dot(normal, p0)


def _independent_subset(points, size: int) -> list:
    """Greedily pick ``size`` affinely independent points."""
    chosen = []
    for p in points:
        if _affine_rank(chosen + [p]) == len(chosen):
            chosen.append(p)
            if len(chosen) == size:
                break
    return chosen


def _hull_facets(points: list[LatticePoint], d: int):
    """Beneath-beyond hull of full-dimensional ``points`` in Z^d.

    Returns a dict ``(normal, offset) -> frozenset of point indices on the facet``.
    """
    simplex = _independent_subset(points, d + 1)
    simplex_idx = [points.index(p) for p in simplex]
    # interior reference point, scaled by (d + 1) to stay integral
    centre = [sum(c) for c in zip(*simplex)]

    def oriented(normal, offset):
        if _dot(normal, centre) > (d + 1) * offset:
            return tuple(-x for x in normal), -offset
        return normal, offset

    facets: dict[tuple, set[int]] = {}
    for omit in range(d + 1):
        idx = [i for k, i in enumerate(simplex_idx) if k != omit]
        key = oriented(*_hyperplane([points[i] for i in idx], d))
        facets[key] = set(idx)

    for pi, p in enumerate(points):
        if pi in simplex_idx:
            continue
        side = {key: _dot(key[0], p) - key[1] for key in facets}
        visible = [key for key, s in side.items() if s > 0]
        if not visible:
            for key, s in side.items():
                if s == 0:
                    facets[key].add(pi)
            continue
        hidden = [key for key, s in side.items() if s <= 0]
        new_keys = set()
        for fv in visible:
            for fh in hidden:
                common = facets[fv] & facets[fh]
                if len(common) < d - 1:
                    continue
                cpts = [points[i] for i in sorted(common)]
                if _affine_rank(cpts) != d - 2:
                    continue
                basis = _independent_subset(cpts, d - 1)
                new_keys.add(oriented(*_hyperplane(basis + [p], d)))
        for key in visible:
            del facets[key]
        tracked = set().union(*facets.values()) | {pi}
        for key in new_keys:
            if key in facets:
                facets[key].add(pi)
            else:
                facets[key] = {i for i in tracked if _dot(key[0], points[i]) == key[1]}
        for key, s in side.items():
            if s == 0 and key in facets:
                facets[key].add(pi)
    return facets


@dataclass(frozen=True)
class Polytope:
    """A full-dimensional lattice polytope in its own lattice Z^dim.

    ``chart`` maps back to the ambient lattice when the input configuration
    was lower dimensional.
    """

    dim: int
    vertices: tuple[LatticePoint, ...]
    facets: tuple[tuple[tuple[int, ...], int], ...]
    edges: tuple[tuple[int, int], ...]
    chart: AffineChart

    @cached_property
    def vertex_facets(self) -> tuple[frozenset, ...]:
        return tuple(
            frozenset(f for f, (a, b) in enumerate(self.facets) if _dot(a, v) == b)
            for v in self.vertices
        )

    def contains(self, x: Sequence[int]) -> bool:
        return all(_dot(a, x) <= b for a, b in self.facets)

    def edges_at(self, i: int) -> list[int]:
        """Indices of the vertices adjacent to vertex ``i``."""
        return [b if a == i else a for a, b in self.edges if i in (a, b)]

    def ambient_vertices(self) -> list[LatticePoint]:
        return [self.chart.to_ambient(v) for v in self.vertices]

    def is_simplex(self) -> bool:
        return len(self.vertices) == self.dim + 1


def convex_hull(cfg: PointConfiguration | Iterable[Sequence[int]], strict: bool = False) -> Polytope:
    """Exact V/H representation and edge graph of ``conv(cfg)``.

    Lower-dimensional input is re-expressed in a lattice basis of its affine
    span unless ``strict`` is set, in which case it is rejected.
    """
    if not isinstance(cfg, PointConfiguration):
        cfg = PointConfiguration.from_points(cfg, dedupe=True)
    if not cfg.points:
        raise NotFullDimensional("empty point configuration")
    if cfg.full_dimensional:
        local, chart = cfg, AffineChart.identity(cfg.ambient_rank)
    elif strict:
        raise NotFullDimensional(
            f"affine span has rank {cfg.affine_rank} < {cfg.ambient_rank}"
        )
    else:
        local, chart = cfg.reduced()
    d = local.ambient_rank
    pts = list(local.points)
    if d == 0:
        return Polytope(0, (pts[0],), (), (), chart)

    facets = _hull_facets(pts, d)
    boundary = sorted(set().union(*facets.values()))
    keys = sorted(facets)
    vertices = []
    for i in boundary:
        normals = [k[0] for k in keys if i in facets[k]]
        if rank_exact(normals) == d:
            vertices.append(pts[i])
    vertices.sort()
    inc = [frozenset(f for f, (a, b) in enumerate(keys) if _dot(a, v) == b) for v in vertices]
    edges = []
    for i, j in itertools.combinations(range(len(vertices)), 2):
        shared = inc[i] & inc[j]
        normals = [keys[f][0] for f in shared]
        if (rank_exact(normals) if normals else 0) == d - 1:
            edges.append((i, j))
    return Polytope(d, tuple(vertices), tuple(keys), tuple(edges), chart)


def lattice_points(p: Polytope) -> PointConfiguration:
    """All lattice points of ``p`` (ambient coordinates, lexicographic order)."""
    lo = [min(c) for c in zip(*p.vertices)]
    hi = [max(c) for c in zip(*p.vertices)]
    found = []
    for y in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if p.contains(y):
            found.append(p.chart.to_ambient(y))
    found.sort()
    return PointConfiguration(p.chart.ambient_rank, tuple(found))


def edge_lattice_length(p: Polytope, e: tuple[int, int]) -> int:
    v, w = p.vertices[e[0]], p.vertices[e[1]]
    g = 0
    for a, b in zip(v, w):
        g = gcd(g, b - a)
    return g


def _primitive_direction(v, w) -> tuple[int, ...]:
    d = [b - a for a, b in zip(v, w)]
    g = 0
    for x in d:
        g = gcd(g, x)
    return tuple(x // g for x in d)


def is_smooth(p: Polytope) -> bool:
    """Every vertex has exactly ``dim`` edges whose primitive directions form a lattice basis."""
    for i, v in enumerate(p.vertices):
        nbrs = p.edges_at(i)
        if len(nbrs) != p.dim:
            return False
        dirs = [_primitive_direction(v, p.vertices[j]) for j in nbrs]
        if abs(det_exact(dirs)) != 1:
            return False
    return True


def edge_criterion_kjet(p: Polytope, k: int) -> bool:
    """k-jet spannedness of a smooth polytope: every edge has lattice length >= k."""
    if not is_smooth(p):
        raise NotSmooth("the edge criterion only applies to smooth polytopes")
    return all(edge_lattice_length(p, e) >= k for e in p.edges)


def is_k_veronese(p: Polytope, k: int) -> bool:
    """True iff ``p`` is affinely unimodularly equivalent to k times the standard simplex."""
    return (
        p.is_simplex()
        and is_smooth(p)
        and all(edge_lattice_length(p, e) == k for e in p.edges)
    )


def simplex_points(n: int, k: int) -> PointConfiguration:
    """Lattice points of k times the standard n-simplex."""
    pts = [u for u in itertools.product(range(k + 1), repeat=n) if sum(u) <= k]
    return PointConfiguration.from_points(sorted(pts), ambient_rank=n)


def box_points(sides: Sequence[int]) -> PointConfiguration:
    """Lattice points of the box ``[0, s1] x ... x [0, sn]``."""
    pts = itertools.product(*(range(s + 1) for s in sides))
    return PointConfiguration.from_points(sorted(pts), ambient_rank=len(sides))
