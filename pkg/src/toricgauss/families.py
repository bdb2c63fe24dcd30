"""Named point configurations and polytope families used by the CLI and tests."""

from __future__ import annotations

from math import comb

from .polytope import (
    PointConfiguration,
    box_points,
    convex_hull,
    lattice_points,
    simplex_points,
)

__all__ = [
    "pnN_vertices",
    "pnN_points",
    "singular_surface",
    "hexagon",
    "trapezoid",
    "truncated_simplex",
    "smooth_corpus",
    "simplex_points",
    "box_points",
]


def _e(n, i):
    return tuple(int(j == i) for j in range(n))


def _add(*vs):
    return tuple(map(sum, zip(*vs)))


def _scale(c, v):
    return tuple(c * x for x in v)


def pnN_vertices(n: int, N: int, literal: bool = False) -> list[tuple[int, ...]]:
    """Generating points of the singular family P_n^N (n, N >= 2).

    conv of {0, e1 + N e2, 2 e1}, {e2} and {e1 + ej, e2 + ej, 2 ej} for 2 < j <= n.
    The lattice points are then the monomials of degree <= 2 without 2 e2,
    together with the column e1 + m e2, 0 <= m <= N.

    With ``literal=True`` the points e2 + ej are left out; for n >= 3 the hull
    then misses them and has binom(n+2, 2) + N - 3 lattice points.
    """
    if n < 2 or N < 2:
        raise ValueError("the family is defined for n >= 2 and N >= 2")
    zero = (0,) * n
    e = [None] + [_e(n, i) for i in range(n)]  # 1-based
    pts = [zero, _add(e[1], _scale(N, e[2])), _scale(2, e[1]), e[2]]
    for j in range(3, n + 1):
        pts += [_add(e[1], e[j]), _scale(2, e[j])]
        if not literal:
            pts.append(_add(e[2], e[j]))
    return pts


def pnN_points(n: int, N: int) -> PointConfiguration:
    """Lattice points of P_n^N; there are binom(n+2, 2) + N - 2 of them."""
    pts = lattice_points(convex_hull(pnN_vertices(n, N)))
    if len(pts) != comb(n + 2, 2) + N - 2:
        raise AssertionError(f"P_{n}^{N} has {len(pts)} lattice points")
    return pts


def singular_surface() -> PointConfiguration:
    """Exponents of (1 : x : y : xy : x^2 : xy^2): generically 2-jet spanned, not smooth."""
    return PointConfiguration.from_points([(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (1, 2)])


def hexagon() -> PointConfiguration:
    """Lattice points of the hexagon of the degree 6 del Pezzo surface."""
    return PointConfiguration.from_points(
        [(-1, 0), (-1, 1), (0, -1), (0, 0), (0, 1), (1, -1), (1, 0)]
    )


def trapezoid(a: int, b: int, r: int) -> PointConfiguration:
    """Polytope of the Hirzebruch surface F_r: conv{(0,0), (a + r b, 0), (a, b), (0, b)}.

    Smooth for every r >= 0; edge lengths are a + r b, b, a, b.
    """
    return lattice_points(convex_hull([(0, 0), (a + r * b, 0), (a, b), (0, b)]))


def truncated_simplex(m: int, depth: int) -> PointConfiguration:
    """m times the standard triangle with the corner at (0, m) cut off at the given depth."""
    return lattice_points(convex_hull([(0, 0), (m, 0), (m - depth, depth), (0, depth)]))


def smooth_corpus() -> list[tuple[str, PointConfiguration, int]]:
    """Smooth lattice polytopes (as full lattice point sets) with every edge of
    lattice length >= k, none of them k times a unimodular simplex.

    Entries are ``(name, points, k)``.
    """
    out = []
    for k in (1, 2, 3):
        out.append((f"square_{k}", box_points([k, k]), k))
    out += [
        ("box_1x2", box_points([1, 2]), 1),
        ("box_2x3", box_points([2, 3]), 2),
        ("cube_1", box_points([1, 1, 1]), 1),
        ("hexagon", hexagon(), 1),
        ("hexagon_2", lattice_points(convex_hull(
            [(2 * x, 2 * y) for x, y in hexagon() if (x, y) != (0, 0)])), 2),
    ]
    for k in (1, 2):
        # P(O + O(1)) scaled by k, and the same cut from 2k times the triangle
        out.append((f"hirzebruch1_{k}", trapezoid(2 * k, k, 1), k))
        out.append((f"truncated_{k}", truncated_simplex(2 * k, k), k))
        out.append((f"prism_{k}", lattice_points(convex_hull(
            [(0, 0, 0), (k, 0, 0), (0, k, 0), (0, 0, k), (k, 0, k), (0, k, k)])), k))
    out.append(("hirzebruch2_1", trapezoid(1, 1, 2), 1))
    out.append(("hirzebruch2_2", trapezoid(2, 2, 2), 2))
    return out
