"""Dense polynomial matrices, determinants, minors and Fitting ideals."""
from __future__ import annotations

import itertools

from .ideal import Ideal
from .polynomial import RingMismatch


class PolyMatrix:
    """Immutable ``rows x cols`` matrix of polynomials over one ring.

    As a presentation, rows index generators and columns index relations:
    the module is the cokernel of ``R^cols -> R^rows``.
    """

    __slots__ = ("ring", "rows", "ambient", "_minors")

    def __init__(self, ring, rows, ambient=None):
        rows = [list(r) for r in rows]
        width = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != width:
                raise ValueError("ragged matrix")
            for e in r:
                if e.ring != ring:
                    raise RingMismatch(f"entry in {e.ring}, matrix over {ring}")
        self.ring = ring
        self.rows = tuple(tuple(r) for r in rows)
        self.ambient = ambient
        self._minors = {}

    @classmethod
    def from_strings(cls, ring, rows):
        return cls(ring, [[ring(s) for s in r] for r in rows])

    @classmethod
    def identity(cls, ring, n):
        return cls(ring, [[ring.one() if i == j else ring.zero() for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, ring, m, n):
        return cls(ring, [[ring.zero()] * n for _ in range(m)])

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self):
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "PolyMatrix(" + str(self.to_strings()) + ")"

    def col(self, j):
        return [r[j] for r in self.rows]

    def columns(self):
        return [self.col(j) for j in range(self.ncols)]

    @classmethod
    def from_columns(cls, ring, cols, nrows=None):
        if not cols:
            return cls(ring, [[] for _ in range(nrows or 0)])
        return cls(ring, [list(r) for r in zip(*cols)])

    def transpose(self):
        return PolyMatrix.from_columns(self.ring, [list(r) for r in self.rows], self.ncols)

    T = property(transpose)

    def is_symmetric(self):
        return self.nrows == self.ncols and all(
            self.rows[i][j] == self.rows[j][i] for i in range(self.nrows) for j in range(i)
        )

    def is_zero(self):
        return all(e.is_zero() for r in self.rows for e in r)

    def __mul__(self, other):
        if isinstance(other, PolyMatrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} x {other.shape}")
            out = []
            for r in self.rows:
                row = []
                for j in range(other.ncols):
                    s = self.ring.zero()
                    for k, a in enumerate(r):
                        if a:
                            b = other.rows[k][j]
                            if b:
                                s = s + a * b
                    row.append(s)
                out.append(row)
            return PolyMatrix(self.ring, out)
        return self.map(lambda e: e * other)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return PolyMatrix(
            self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)]
        )

    def __sub__(self, other):
        return self + other.map(lambda e: -e)

    def map(self, fn, ring=None):
        return PolyMatrix(ring or self.ring, [[fn(e) for e in r] for r in self.rows])

    def subs(self, mapping, target=None):
        target = target or self.ring
        return self.map(lambda e: e.subs(mapping, target), target)

    def to_ring(self, target):
        return self.map(lambda e: e.to_ring(target), target)

    def reduce(self, ideal):
        """Entries replaced by their normal forms modulo ``ideal``."""
        sb = ideal.standard_basis()
        return self.map(sb.normal_form)

    def submatrix(self, rows, cols):
        return PolyMatrix(self.ring, [[self.rows[i][j] for j in cols] for i in rows])

    def delete_leading(self, k, cols=True):
        """Drop the first ``k`` rows (and columns, when ``cols``)."""
        if not 0 <= k <= self.nrows:
            raise IndexError(f"cannot delete {k} rows from {self.nrows}")
        c0 = k if cols else 0
        return self.submatrix(range(k, self.nrows), range(c0, self.ncols))

    def hstack(self, other):
        return PolyMatrix(self.ring, [list(r) + list(s) for r, s in zip(self.rows, other.rows)])

    # ---- determinants ----------------------------------------------------
    def det(self):
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        return bareiss(self.rows, self.ring)

    def minor(self, rows, cols):
        """Determinant of the submatrix on sorted index tuples, memoised by Laplace expansion."""
        key = (rows, cols)
        v = self._minors.get(key)
        if v is not None:
            return v
        if not rows:
            v = self.ring.one()
        elif len(rows) == 1:
            v = self.rows[rows[0]][cols[0]]
        else:
            i = rows[0]
            rest = rows[1:]
            v = self.ring.zero()
            for t, j in enumerate(cols):
                a = self.rows[i][j]
                if not a:
                    continue
                sub = self.minor(rest, cols[:t] + cols[t + 1:])
                if sub:
                    v = v + a * sub if t % 2 == 0 else v - a * sub
        self._minors[key] = v
        return v

    def minors(self, size):
        """Distinct nonzero ``size x size`` minors, in a deterministic order."""
        if size <= 0:
            return [self.ring.one()]
        if size > self.nrows or size > self.ncols:
            return []
        # skip rows/cols that are identically zero: every minor through them vanishes
        rows = [i for i in range(self.nrows) if any(self.rows[i])]
        cols = [j for j in range(self.ncols) if any(self.rows[i][j] for i in range(self.nrows))]
        out = {}
        for R in itertools.combinations(rows, size):
            for C in itertools.combinations(cols, size):
                m = self.minor(R, C)
                if m:
                    out.setdefault(m, None)
        return list(out)

    def fitting_ideal(self, i, ngens=None):
        """``Fitt_i`` of the cokernel: ``(g-i)``-minors, ``g`` = number of generators (rows)."""
        if i < 0:
            raise ValueError("Fitting index must be non-negative")
        g = self.nrows if ngens is None else ngens
        size = g - i
        if size <= 0:
            return Ideal(self.ring, [self.ring.one()])
        return Ideal(self.ring, self.minors(size))

    def fitting_chain(self, top=None):
        g = self.nrows
        top = g if top is None else top
        return [self.fitting_ideal(i) for i in range(top + 1)]

    # ---- serialisation ------------------------------------------------
    def to_strings(self):
        return [[str(e) for e in r] for r in self.rows]

    def to_json(self):
        return {"ring": list(self.ring.names), "rows": self.to_strings()}

    @classmethod
    def from_json(cls, ring, data):
        return cls.from_strings(ring, data["rows"])

    def pretty(self):
        cells = self.to_strings()
        if not cells or not cells[0]:
            return "[]"
        w = [max(len(r[j]) for r in cells) for j in range(len(cells[0]))]
        return "\n".join("[ " + "  ".join(c.rjust(w[j]) for j, c in enumerate(r)) + " ]" for r in cells)


def bareiss(rows, ring):
    """Fraction-free Gaussian elimination; every division is exact."""
    n = len(rows)
    if n == 0:
        return ring.one()
    a = [list(r) for r in rows]
    sign = 1
    prev = ring.one()
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return ring.zero()
        piv = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * piv - a[i][k] * a[k][j]
                a[i][j] = num if prev.is_constant() and prev.constant_term() == 1 else num.exact_quotient(prev)
            a[i][k] = ring.zero()
        prev = piv
    d = a[n - 1][n - 1]
    return d if sign == 1 else -d


def poly_row_times(G, M):
    """Row vector of polynomials times a matrix."""
    out = []
    for j in range(M.ncols):
        s = M.ring.zero()
        for g, r in zip(G, M.rows):
            e = r[j]
            if e and g:
                s = s + g * e
        out.append(s)
    return out

