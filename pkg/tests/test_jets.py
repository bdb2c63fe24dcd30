import random
from fractions import Fraction
from math import comb

import pytest
import sympy

from toricgauss.families import box_points, hexagon, pnN_points, simplex_points, singular_surface
from toricgauss.jets import (
    ZeroCoordinate,
    falling_factorial,
    is_generically_kjet_spanned,
    jet_matrix,
    jet_matrix_at_point,
    multi_indices,
    osculating_dimension,
)
from toricgauss.linalg import det_exact
from toricgauss.polytope import PointConfiguration

from conftest import random_affine


def sympy_jets(points, k, at):
    """Jet matrix by symbolic differentiation of the monomials."""
    n = len(points[0])
    xs = sympy.symbols(f"x0:{n}")
    rows = []
    for alpha in multi_indices(n, k):
        row = []
        for u in points:
            f = sympy.Mul(*[x ** e for x, e in zip(xs, u)])
            for x, a in zip(xs, alpha):
                if a:
                    f = sympy.diff(f, x, a)
            row.append(sympy.Rational(f.subs(dict(zip(xs, at)))))
        rows.append(row)
    return rows


class TestMultiIndices:
    def test_examples(self):
        assert multi_indices(2, 1) == [(0, 0), (1, 0), (0, 1)]
        assert multi_indices(1, 3) == [(0,), (1,), (2,), (3,)]
        assert len(multi_indices(3, 2)) == 10

    @pytest.mark.parametrize("n,k", [(1, 0), (2, 3), (3, 3), (4, 2)])
    def test_count_and_grading(self, n, k):
        idx = multi_indices(n, k)
        assert len(idx) == comb(n + k, k) == len(set(idx))
        assert [sum(a) for a in idx] == sorted(sum(a) for a in idx)
        assert idx[0] == (0,) * n


class TestJetMatrix:
    def test_line(self):
        assert jet_matrix([(0,), (1,), (2,)], 1).values == ((1, 1, 1), (0, 1, 2))
        assert jet_matrix([(0,), (1,), (2,)], 2).values == ((1, 1, 1), (0, 1, 2), (0, 0, 2))

    def test_singular_surface_against_sympy(self):
        pts = list(singular_surface())
        J = jet_matrix(pts, 2)
        assert [list(r) for r in J.values] == sympy_jets(pts, 2, (1, 1))
        assert abs(det_exact(J.entries)) == 4

    def test_laurent_against_sympy(self):
        pts = list(hexagon())
        assert [list(r) for r in jet_matrix(pts, 2).values] == sympy_jets(pts, 2, (1, 1))

    def test_at_point(self):
        J = jet_matrix_at_point([(0,), (1,), (2,)], 1, [2])
        assert J.values == ((1, 2, 4), (0, 1, 4))
        J = jet_matrix_at_point([(0, 0), (1, 0), (0, 1)], 1, [2, 3])
        assert J.values == ((1, 2, 3), (0, 1, 0), (0, 0, 1))

    @pytest.mark.parametrize("cfg,k", [(singular_surface(), 2), (hexagon(), 2), (box_points([2, 1]), 1)])
    def test_at_ones_matches(self, cfg, k):
        assert jet_matrix_at_point(cfg, k, [1] * cfg.ambient_rank).values == jet_matrix(cfg, k).values

    def test_at_rational_point_against_sympy(self):
        pts = list(hexagon())
        at = (Fraction(2, 3), Fraction(-5, 2))
        J = jet_matrix_at_point(pts, 2, at)
        assert [list(r) for r in J.values] == sympy_jets(pts, 2, [sympy.Rational(a.numerator, a.denominator) for a in at])

    def test_zero_coordinate(self):
        with pytest.raises(ZeroCoordinate):
            jet_matrix_at_point([(1, 1)], 1, [0, 2])

    def test_first_row_ones(self):
        for cfg in (singular_surface(), hexagon(), pnN_points(3, 3)):
            assert set(jet_matrix(cfg, 3).values[0]) == {1}

    def test_falling_factorial_negative(self):
        assert falling_factorial(-1, 2) == 2
        assert falling_factorial(3, 4) == 0
        assert falling_factorial(5, 0) == 1


class TestOsculatingDimension:
    def test_examples(self):
        assert osculating_dimension(simplex_points(2, 2), 2) == 6
        assert osculating_dimension(hexagon(), 2) == 6
        assert osculating_dimension(singular_surface(), 2) == 6

    def test_spanned(self):
        assert is_generically_kjet_spanned(singular_surface(), 2)
        assert not is_generically_kjet_spanned(box_points([1, 1]), 2)
        for n in (2, 3, 4):
            for N in (2, 3, 5):
                assert is_generically_kjet_spanned(pnN_points(n, N), 2)

    @pytest.mark.parametrize("seed", range(20))
    def test_affine_invariance(self, seed):
        rng = random.Random(seed)
        cfg = rng.choice([singular_surface(), hexagon(), box_points([2, 1]), pnN_points(2, 4),
                          simplex_points(3, 1), box_points([1, 1, 1])])
        L, t = random_affine(cfg.ambient_rank, rng)
        moved = cfg.transform(L, t)
        for k in (1, 2):
            assert osculating_dimension(moved, k) == osculating_dimension(cfg, k)

    @pytest.mark.parametrize("cfg", [singular_surface(), hexagon(), box_points([2, 2]), pnN_points(3, 2)],
                             ids=["surface", "hexagon", "square", "p32"])
    def test_monotone(self, cfg):
        dims = [osculating_dimension(cfg, k) for k in range(5)]
        assert dims == sorted(dims)
        assert dims[0] == 1

    @pytest.mark.parametrize("seed", range(6))
    def test_generic_rank_spot_check(self, seed):
        rng = random.Random(seed)
        cfg = rng.choice([singular_surface(), hexagon(), box_points([2, 2]), pnN_points(2, 3)])
        k = 2
        at_ones = osculating_dimension(cfg, k)
        ranks = []
        for _ in range(4):
            p = [Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9))
                 for _ in range(cfg.ambient_rank)]
            ranks.append(jet_matrix_at_point(cfg, k, p).rank())
        assert max(ranks) <= at_ones
        assert at_ones in ranks


def _forward_difference(u, alpha, p, h):
    """Mixed forward difference of x^u divided by h^|alpha|, exact over Q."""
    from itertools import product
    total = Fraction(0)
    for steps in product(*(range(a + 1) for a in alpha)):
        sign = (-1) ** (sum(alpha) - sum(steps))
        coeff = 1
        for a, s in zip(alpha, steps):
            coeff *= comb(a, s)
        val = Fraction(1)
        for ui, pi, s in zip(u, p, steps):
            val *= (pi + s * h) ** ui
        total += sign * coeff * val
    return total / h ** sum(alpha)


def _series_coeff(a, g):
    """[x^g] of ((e^x - 1) / x)^a, exactly."""
    base = [Fraction(1, 1), Fraction(1, 2), Fraction(1, 6), Fraction(1, 24)]
    poly = [Fraction(1)] + [Fraction(0)] * 3
    for _ in range(a):
        poly = [sum(poly[i] * base[d - i] for i in range(d + 1)) for d in range(4)]
    return poly[g]


def _derivative(u, beta, p):
    v = Fraction(1)
    for ui, b, pi in zip(u, beta, p):
        v *= falling_factorial(ui, b) * pi ** (ui - b)
    return v


@pytest.mark.parametrize("seed", range(5))
def test_finite_difference_cross_check(seed):
    # forward differences expand as prod_i D_i^a_i ((e^{h D_i} - 1)/(h D_i))^a_i;
    # keep terms through h^2 and bound the rest by twice the h^3 term
    from itertools import product
    rng = random.Random(seed)
    h = Fraction(1, 1000)
    pts = list({tuple(rng.randint(-3, 3) for _ in range(2)) for _ in range(6)})
    cfg = PointConfiguration.from_points(pts)
    p = [Fraction(rng.randint(2, 5), rng.randint(1, 3)) for _ in range(2)]
    J = jet_matrix_at_point(cfg, 2, p)
    for i, alpha in enumerate(J.row_index):
        for j, u in enumerate(cfg.points):
            assert J.values[i][j] == _derivative(u, alpha, p)
            fd = _forward_difference(u, alpha, p, h)
            approx, third = Fraction(0), Fraction(0)
            for gamma in product(range(4), repeat=2):
                order = sum(gamma)
                if order > 3:
                    continue
                c = _series_coeff(alpha[0], gamma[0]) * _series_coeff(alpha[1], gamma[1])
                term = c * h ** order * _derivative(u, tuple(a + g for a, g in zip(alpha, gamma)), p)
                if order <= 2:
                    approx += term
                else:
                    third += abs(term)
            assert abs(fd - approx) <= 2 * third + h ** 4, (alpha, u)
