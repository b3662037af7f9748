"""Submodules of free modules: syzygies, kernels, restricted kernels, lifting.

A column vector ``[p_0, ..., p_{r-1}]`` becomes a term dict keyed by
``(i, e)``.  For kernel computations each input column ``v_j`` is tagged
with an extra basis vector ``eps_j`` (component ``r + j``); the order puts
the *head* components ``< r`` above every tag component, and an optional
variable block above everything inside a class, so that

* basis elements living purely in the tag class generate the syzygies, and
* those whose leading term avoids the block have coefficients in the subring.

All computations here are global; localisation at the origin is flat, so
kernels and liftings computed globally remain valid for the germs.
"""
from __future__ import annotations

from gmpy2 import mpq

from .groebner import Buchberger, reduce_full
from .ideal import Ideal
from .matrix import PolyMatrix
from .orders import MonomialOrder
from .polynomial import Polynomial


def vector_rank(ring, nhead, elim=()):
    order = MonomialOrder.grevlex(ring.nvars, ring.weights)
    elim = sorted(ring.index[v] if isinstance(v, str) else v for v in elim)
    ew = [ring.weights[i] for i in elim]
    block = MonomialOrder.block_rank
    cache = {}

    def rank(m):
        r = cache.get(m)
        if r is None:
            e = m[1:]
            head = (0 if m[0] < nhead else 1,)
            if elim:
                head += block("dp", elim, ew, e)
            r = head + order.rank(e) + (m[0],)
            cache[m] = r
        return r

    return rank


def vector_deg(ring, shifts):
    w = ring.weights

    def deg(m):
        s = shifts[m[0]] if m[0] < len(shifts) else 0
        for a, b in zip(m[1:], w):
            s += a * b
        return s

    return deg


def _wdeg(p, ring):
    if not p.terms:
        return 0
    return max(sum(a * b for a, b in zip(e, ring.weights)) for e in p.terms)


def column_terms(col, offset=0):
    out = {}
    for i, p in enumerate(col):
        for e, c in p.terms.items():
            out[(i + offset,) + e] = c
    return out


def terms_to_column(ring, terms, ncomp, offset=0):
    parts = [dict() for _ in range(ncomp)]
    for m, c in terms.items():
        parts[m[0] - offset][m[1:]] = c
    return [Polynomial._raw(ring, t) for t in parts]


class TaggedModule:
    """Gröbner basis of ``span(v_j + eps_j) + ambient * R^r`` in ``R^r (+) R^m``."""

    def __init__(self, ring, columns, nrows, ambient=None, elim=(), row_degrees=None):
        self.ring = ring
        self.nrows = nrows
        self.ncols = len(columns)
        self.elim = tuple(elim)
        rdeg = list(row_degrees) if row_degrees is not None else [0] * nrows
        shifts = list(rdeg)
        for col in columns:
            ds = [_wdeg(p, ring) + rdeg[i] for i, p in enumerate(col) if p]
            shifts.append(max(ds) if ds else 0)
        self.rank = vector_rank(ring, nrows, self.elim)
        self.deg = vector_deg(ring, shifts)
        eng = Buchberger(self.rank, self.deg, module=True)
        gens = []
        for j, col in enumerate(columns):
            t = column_terms(col)
            t[(nrows + j,) + (0,) * ring.nvars] = mpq(1)
            gens.append(t)
        amb = ambient.gens if ambient is not None else ()
        for q in amb:
            for i in range(nrows):
                gens.append({(i,) + e: c for e, c in q.terms.items()})
        eng.add(gens)
        eng.run()
        self.engine = eng
        self._elim_idx = [ring.index[v] if isinstance(v, str) else v for v in self.elim]

    def _in_subring(self, m):
        return all(m[1 + i] == 0 for i in self._elim_idx)

    def kernel_columns(self):
        """Generators of ``{c in S^m : sum c_j v_j in ambient * R^r}`` (S = subring)."""
        out = []
        for t in self.engine.basis(reduced=True):
            lm = min(t, key=self.rank)
            if lm[0] < self.nrows or not self._in_subring(lm):
                continue
            out.append(terms_to_column(self.ring, t, self.ncols, self.nrows))
        return out

    def lift(self, vector):
        """Coefficients ``c`` (in the subring) with ``vector = sum c_j v_j`` mod ambient, or None."""
        t = column_terms(vector)
        r = reduce_full(t, self.engine.elements(), self.rank)
        if any(m[0] < self.nrows for m in r):
            return None
        if any(not self._in_subring(m) for m in r):
            return None
        c = terms_to_column(self.ring, r, self.ncols, self.nrows)
        return [-x for x in c]


def syzygies(ring, vectors, ambient=None):
    """Generators of the relations among column ``vectors`` modulo ``ambient``."""
    if not vectors:
        return []
    nrows = len(vectors[0])
    return TaggedModule(ring, vectors, nrows, ambient).kernel_columns()


def module_kernel(M, ambient=None, keep=None, row_degrees=None):
    """Kernel of ``M: R^cols -> (R/ambient)^rows`` as a matrix (columns = generators).

    With ``keep`` (variable names), only coefficients from the subring on
    those variables are returned: the kernel of the induced map of
    ``S``-modules, whose result lives over ``ring.subring(keep)``.
    """
    ring = M.ring
    elim = () if keep is None else [v for v in ring.names if v not in set(keep)]
    tm = TaggedModule(ring, M.columns(), M.nrows, ambient, elim, row_degrees)
    cols = tm.kernel_columns()
    target = ring if keep is None else ring.subring(list(keep))
    cols = [[p.to_ring(target) for p in c] for c in cols]
    return PolyMatrix.from_columns(target, cols, M.ncols)


class Submodule:
    """Incrementally grown submodule of ``R^r`` (plus ``ambient * R^r``) with membership."""

    def __init__(self, ring, nrows, ambient=None, row_degrees=None):
        self.ring = ring
        self.nrows = nrows
        self.rank = vector_rank(ring, nrows)
        self.deg = vector_deg(ring, list(row_degrees) if row_degrees else [0] * nrows)
        self.engine = Buchberger(self.rank, self.deg, module=True)
        if ambient is not None:
            gens = []
            for q in ambient.gens:
                for i in range(nrows):
                    gens.append({(i,) + e: c for e, c in q.terms.items()})
            self.engine.add(gens)
            self.engine.run()

    def add(self, col):
        t = column_terms(col)
        if t:
            self.engine.add([t])
            self.engine.run()

    def normal_form(self, col):
        r = self.engine.normal_form(column_terms(col))
        return terms_to_column(self.ring, r, self.nrows)

    def contains(self, col):
        return not self.engine.normal_form(column_terms(col))


def column_degree(col, ring, row_degrees=None):
    rdeg = row_degrees or [0] * len(col)
    ds = []
    for i, p in enumerate(col):
        for e in p.terms:
            ds.append(sum(a * b for a, b in zip(e, ring.weights)) + rdeg[i])
    return min(ds) if ds else 0


def minimal_columns(M, ambient=None, row_degrees=None):
    """Drop columns lying in the span of the others (degree-sorted greedy pass).

    For graded input this leaves a minimal generating set of the column
    module modulo ``ambient``.
    """
    ring = M.ring
    cols = M.columns()
    if ambient is not None and ambient.gens:
        sb = ambient.standard_basis(ambient.default_order(local=False))
        cols = [[sb.normal_form(p) for p in c] for c in cols]
    order = sorted(
        (j for j, c in enumerate(cols) if any(c)),
        key=lambda j: (column_degree(cols[j], ring, row_degrees), len(str(cols[j])), j),
    )
    sub = Submodule(ring, M.nrows, ambient, row_degrees)
    keep = []
    for j in order:
        if sub.contains(cols[j]):
            continue
        keep.append(cols[j])
        sub.add(cols[j])
    return PolyMatrix.from_columns(ring, keep, M.nrows)


def prune_presentation(M, ambient=None):
    """Minimise generators: eliminate rows through unit (constant) entries.

    A relation column with a nonzero constant in row ``i`` expresses the
    ``i``-th generator through the others; removing both keeps the cokernel.
    Returns ``(matrix, kept_row_indices)``.
    """
    rows = list(range(M.nrows))
    A = [list(r) for r in M.rows]
    while True:
        piv = None
        for j in range(len(A[0]) if A else 0):
            for ii, i in enumerate(rows):
                e = A[ii][j]
                if e.is_constant() and e:
                    piv = (ii, j)
                    break
            if piv:
                break
        if piv is None:
            break
        ii, j = piv
        c = A[ii][j].constant_term()
        # column operations clear row ii; the generator e_i is then redundant
        for jj in range(len(A[ii])):
            if jj == j or not A[ii][jj]:
                continue
            f = A[ii][jj] / c
            for r in A:
                if r[j]:
                    r[jj] = r[jj] - f * r[j]
        del A[ii]
        del rows[ii]
        for r in A:
            del r[j]
    ring = M.ring
    P = PolyMatrix(ring, A) if A else PolyMatrix(ring, [])
    if ambient is not None and ambient.gens and A:
        P = P.reduce(ambient)
    return P, rows


def ideal_quotient_generators(I, p):
    """``(I : p)`` via syzygies of ``[p, I...]``."""
    ring = I.ring
    vecs = [[p]] + [[g] for g in I.gens]
    syz = syzygies(ring, vecs)
    return Ideal(ring, [s[0] for s in syz])
