"""Exact integer linear algebra.

Everything here works on Python integers; there is no floating point
anywhere in this module.  Matrices are immutable :class:`IntMatrix`
values and every operation is a pure function.

Hermite normal form convention (used everywhere in the package): row
style, the nonzero rows come first, pivots are positive and strictly
move to the right, and the entries above each pivot lie in
``[0, pivot)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "IntMatrix",
    "Sublattice",
    "NonSquare",
    "NotSaturated",
    "rank_exact",
    "det_exact",
    "hnf",
    "snf",
    "saturate",
    "quotient_projection",
    "lattice_coordinates",
    "lattice_section",
]


class NonSquare(ValueError):
    pass


class NotSaturated(ValueError):
    pass


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix shape")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )
        for e in self.entries:
            if not isinstance(e, int) or isinstance(e, bool):
                raise TypeError(f"IntMatrix entries must be int, got {type(e).__name__}")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [tuple(int(x) for x in r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("cols must be given for an empty row list")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls.from_rows(([int(i == j) for j in range(n)] for i in range(n)), cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def transpose(self) -> IntMatrix:
        return IntMatrix.from_rows((self.col(j) for j in range(self.cols)), cols=self.rows)

    @property
    def T(self) -> IntMatrix:
        return self.transpose()

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = [other.col(j) for j in range(other.cols)]
        return IntMatrix.from_rows(
            ([sum(a * b for a, b in zip(self.row(i), c)) for c in ocols] for i in range(self.rows)),
            cols=other.cols,
        )

    def select_columns(self, idx: Sequence[int]) -> IntMatrix:
        return IntMatrix.from_rows(([r[j] for j in idx] for r in self.to_rows()), cols=len(idx))

    def select_rows(self, idx: Sequence[int]) -> IntMatrix:
        return IntMatrix.from_rows((self.row(i) for i in idx), cols=self.cols)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __repr__(self):
        return f"IntMatrix({self.to_rows()!r})" if self.rows else f"IntMatrix(0x{self.cols})"


def _as_matrix(m) -> IntMatrix:
    return m if isinstance(m, IntMatrix) else IntMatrix.from_rows(m)


def _bareiss(a: list[list[int]]) -> tuple[int, int]:
    """Fraction-free elimination in place; returns (rank, sign * last pivot).

    For a square nonsingular input the second value is the determinant.
    """
    nr = len(a)
    nc = len(a[0]) if nr else 0
    prev = 1
    sign = 1
    r = 0
    for c in range(nc):
        if r == nr:
            break
        p = next((i for i in range(r, nr) if a[i][c]), None)
        if p is None:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
            sign = -sign
        piv = a[r][c]
        for i in range(r + 1, nr):
            ai = a[i]
            f = ai[c]
            for j in range(c + 1, nc):
                # exact division is guaranteed by Sylvester's identity
                ai[j] = (piv * ai[j] - f * a[r][j]) // prev
            ai[c] = 0
        prev = piv
        r += 1
    return r, sign * prev


def rank_exact(m) -> int:
    """Rank over the rationals, by fraction-free (Bareiss) elimination."""
    m = _as_matrix(m)
    if m.rows == 0 or m.cols == 0:
        return 0
    r, _ = _bareiss(m.to_rows())
    return r


def det_exact(m) -> int:
    m = _as_matrix(m)
    if m.rows != m.cols:
        raise NonSquare(f"determinant of a {m.rows}x{m.cols} matrix")
    n = m.rows
    if n == 0:
        return 1
    r, d = _bareiss(m.to_rows())
    return d if r == n else 0


def hnf(m) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns ``(h, u)`` with ``u`` unimodular and ``h == u @ m``.
    """
    m = _as_matrix(m)
    nr, nc = m.shape
    a = m.to_rows()
    u = IntMatrix.identity(nr).to_rows()

    def swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def addmul(dst, src, f):
        # row[dst] += f * row[src]
        if f:
            a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
            u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def neg(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    r = 0
    for c in range(nc):
        if r == nr:
            break
        while True:
            nz = [i for i in range(r, nr) if a[i][c]]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(a[i][c]))
            if p != r:
                swap(p, r)
            done = True
            for i in range(r + 1, nr):
                if a[i][c]:
                    addmul(i, r, -(a[i][c] // a[r][c]))
                    if a[i][c]:
                        done = False
            if done:
                break
        if not a[r][c]:
            continue
        if a[r][c] < 0:
            neg(r)
        piv = a[r][c]
        for i in range(r):
            addmul(i, r, -(a[i][c] // piv))
        r += 1
    return IntMatrix.from_rows(a, cols=nc), IntMatrix.from_rows(u, cols=nr)


def snf(m) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form ``s == u @ m @ v`` with ``d1 | d2 | ...`` and all ``di >= 0``."""
    s, u, v, _ = _snf_with_inverse(_as_matrix(m))
    return s, u, v


def _snf_with_inverse(m: IntMatrix):
    """Smith form that also tracks ``v^-1`` (needed for lattice bases)."""
    nr, nc = m.shape
    a = m.to_rows()
    u = IntMatrix.identity(nr).to_rows()
    v = IntMatrix.identity(nc).to_rows()
    vinv = IntMatrix.identity(nc).to_rows()

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def row_add(dst, src, f):
        if f:
            a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
            u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def col_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]
        vinv[i], vinv[j] = vinv[j], vinv[i]

    def col_add(dst, src, f):
        # col[dst] += f * col[src]; the inverse gets row[src] -= f * row[dst]
        if f:
            for row in a:
                row[dst] += f * row[src]
            for row in v:
                row[dst] += f * row[src]
            vinv[src] = [x - f * y for x, y in zip(vinv[src], vinv[dst])]

    t = 0
    while t < min(nr, nc):
        nz = [(abs(a[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if a[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        row_swap(t, pi)
        col_swap(t, pj)
        while True:
            clean = True
            for i in range(t + 1, nr):
                if a[i][t]:
                    row_add(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, nc):
                if a[t][j]:
                    col_add(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        clean = False
            if clean:
                # pivot must divide the whole remaining block
                bad = next(
                    ((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                     if a[i][j] % a[t][t]),
                    None,
                )
                if bad is None:
                    break
                row_add(t, bad[0], 1)
                continue
            # move the smallest nonzero entry of row/column t to the pivot
            cands = [(abs(a[i][t]), i, t) for i in range(t, nr) if a[i][t]]
            cands += [(abs(a[t][j]), t, j) for j in range(t, nc) if a[t][j]]
            _, pi, pj = min(cands)
            row_swap(t, pi)
            col_swap(t, pj)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return (
        IntMatrix.from_rows(a, cols=nc),
        IntMatrix.from_rows(u, cols=nr),
        IntMatrix.from_rows(v, cols=nc),
        IntMatrix.from_rows(vinv, cols=nc),
    )


def _diag(s: IntMatrix) -> list[int]:
    return [s[i, i] for i in range(min(s.shape))]


@dataclass(frozen=True)
class Sublattice:
    """Sublattice of Z^n with basis rows in Hermite normal form."""

    ambient_rank: int
    basis: IntMatrix

    def __post_init__(self):
        if self.basis.cols != self.ambient_rank:
            raise ValueError("basis width does not match ambient rank")
        if rank_exact(self.basis) != self.basis.rows:
            raise ValueError("basis rows are not linearly independent")
        if hnf(self.basis)[0] != self.basis:
            raise ValueError("basis is not in Hermite normal form")

    @classmethod
    def generated_by(cls, generators, ambient_rank: int) -> Sublattice:
        """The (possibly unsaturated) lattice spanned by ``generators``."""
        g = _generator_matrix(generators, ambient_rank)
        h, _ = hnf(g)
        nonzero = [h.row(i) for i in range(h.rows) if any(h.row(i))]
        return cls(ambient_rank, IntMatrix.from_rows(nonzero, cols=ambient_rank))

    @property
    def rank(self) -> int:
        return self.basis.rows

    def is_saturated(self) -> bool:
        if self.rank == 0:
            return True
        s, _, _ = snf(self.basis)
        return all(d == 1 for d in _diag(s))

    def is_full(self) -> bool:
        """True when this is all of Z^n."""
        return self.basis == IntMatrix.identity(self.ambient_rank)

    def contains(self, v: Sequence[int]) -> bool:
        if len(v) != self.ambient_rank:
            return False
        test = IntMatrix.from_rows([*self.basis.to_rows(), list(v)], cols=self.ambient_rank)
        h, _ = hnf(test)
        return h.select_rows(range(self.rank)) == self.basis and not any(h.row(self.rank))

    def __contains__(self, v) -> bool:
        return self.contains(v)


def _generator_matrix(generators, n: int) -> IntMatrix:
    if isinstance(generators, IntMatrix):
        if generators.cols != n:
            raise ValueError("generators have the wrong width")
        return generators
    return IntMatrix.from_rows(list(generators), cols=n)


def saturate(generators, ambient_rank: int) -> Sublattice:
    """Saturation of the lattice spanned by ``generators`` inside Z^n.

    The result is ``{v : q v in span_Z(generators) for some q > 0}``, i.e.
    the real span of the generators intersected with Z^n.
    """
    g = _generator_matrix(generators, ambient_rank)
    if g.rows == 0 or g.is_zero():
        return Sublattice(ambient_rank, IntMatrix.zeros(0, ambient_rank))
    s, _, _, vinv = _snf_with_inverse(g)
    r = sum(1 for d in _diag(s) if d)
    h, _ = hnf(vinv.select_rows(range(r)))
    return Sublattice(ambient_rank, h)


def _complement_transform(s: Sublattice) -> tuple[IntMatrix, IntMatrix]:
    """Unimodular ``(v, vinv)`` whose first ``r`` rows of ``vinv`` span ``s``."""
    if s.rank == 0:
        i = IntMatrix.identity(s.ambient_rank)
        return i, i
    sm, _, v, vinv = _snf_with_inverse(s.basis)
    if any(d != 1 for d in _diag(sm)):
        raise NotSaturated("sublattice has torsion in its quotient")
    return v, vinv


def quotient_projection(s: Sublattice) -> IntMatrix:
    """Surjection Z^n -> Z^(n-r) whose kernel is exactly ``s``.

    Rows of the result together with a basis of ``s`` form a basis of Z^n.
    """
    v, _ = _complement_transform(s)
    n, r = s.ambient_rank, s.rank
    return v.select_columns(range(r, n)).transpose() if n > r else IntMatrix.zeros(0, n)


def lattice_coordinates(s: Sublattice) -> IntMatrix:
    """Map Z^n -> Z^r that is an isomorphism on ``s`` (n x r, acts on row vectors).

    ``x @ C`` gives the coordinates of ``x`` in a lattice basis of ``s``;
    the basis itself is returned by :func:`lattice_section`.
    """
    v, _ = _complement_transform(s)
    return v.select_columns(range(s.rank))


def lattice_section(s: Sublattice) -> IntMatrix:
    """Basis of ``s`` (r x n) dual to :func:`lattice_coordinates`."""
    _, vinv = _complement_transform(s)
    return vinv.select_rows(range(s.rank))
