"""Gröbner and standard-basis engines on raw term dictionaries.

Terms are keyed by *vector monomials* ``(c, e_1, ..., e_n)``: ``c`` is the
free-module component (always 0 for ideals).  Callers supply

* ``rank(m)``  - order key on vector monomials, smaller is larger;
* ``deg(m)``   - weighted degree used for sugar and ecart.

The global engine is Buchberger with the sugar strategy and the
Gebauer-Möller installation of the criteria.  Local standard bases are
built on top of it by homogenisation (see ``ideal.local_standard_basis``);
Mora's ecart-driven weak normal form is kept for local normal forms and as
an independent second engine.
"""
from __future__ import annotations

import heapq
import itertools

from gmpy2 import mpq


class Elem:
    __slots__ = ("terms", "lm", "lc", "sugar", "supp", "ecart")

    def __init__(self, terms, lm, sugar, ecart=0):
        self.terms = terms
        self.lm = lm
        self.lc = terms[lm]
        self.sugar = sugar
        self.supp = tuple((i, a) for i, a in enumerate(lm) if i and a)
        self.ecart = ecart


def divides(g, m):
    if g.lm[0] != m[0]:
        return False
    for i, a in g.supp:
        if m[i] < a:
            return False
    return True


def mono_div(a, b):
    """``a / b`` for vector monomials in the same component (shift has component 0)."""
    return (0,) + tuple(x - y for x, y in zip(a[1:], b[1:]))


def mono_mul(a, s):
    return (a[0],) + tuple(x + y for x, y in zip(a[1:], s[1:]))


def mono_lcm(a, b):
    return (a[0],) + tuple(max(x, y) for x, y in zip(a[1:], b[1:]))


def disjoint(a, b):
    return not any(x and y for x, y in zip(a[1:], b[1:]))


def _lead(terms, rank):
    return min(terms, key=rank)


def reduce_full(p, basis, rank, tail=True):
    """Fully reduce ``p`` (a dict, consumed) against ``basis`` (list of Elem)."""
    if not p:
        return p
    heap = [(rank(m), m) for m in p]
    heapq.heapify(heap)
    out = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = p.pop(m, None)
        if c is None:
            continue
        g = None
        for h in basis:
            if divides(h, m):
                g = h
                break
        if g is None:
            out[m] = c
            if not tail:
                out.update(p)
                return out
            continue
        f = c / g.lc
        s = mono_div(m, g.lm)
        for k, v in g.terms.items():
            if k is g.lm:
                continue
            mm = mono_mul(k, s)
            old = p.get(mm)
            if old is None:
                p[mm] = -f * v
                heapq.heappush(heap, (rank(mm), mm))
            else:
                nv = old - f * v
                if nv:
                    p[mm] = nv
                else:
                    del p[mm]
    return out


def _sugar_of(terms, deg):
    return max(deg(m) for m in terms)


class Buchberger:
    """Incremental global Gröbner basis computation.

    ``add`` inserts generators; ``run`` completes the basis.  The object can
    be extended after ``run`` and re-run, which is how module minimisation
    and membership loops grow a basis one generator at a time.
    """

    def __init__(self, rank, deg, module=False, degree_bound=None):
        self.rank = rank
        self.deg = deg
        self.module = module
        self.degree_bound = degree_bound
        self.elems = []
        self.active = []
        self.pairs = {}
        self.heap = []
        self._tick = itertools.count()
        self.pending = []

    def add(self, polys):
        for p in polys:
            if p:
                self.pending.append(dict(p))

    def _install(self, terms, sugar):
        rank = self.rank
        lm = _lead(terms, rank)
        lc = terms[lm]
        if lc != 1:
            inv = 1 / lc
            terms = {k: v * inv for k, v in terms.items()}
        h = Elem(terms, lm, sugar)
        k = len(self.elems)
        self.elems.append(h)
        self._update(k)

    def _update(self, k):
        elems = self.elems
        h = elems[k]
        t = h.lm
        new = []
        for i in self.active:
            g = elems[i]
            if g.lm[0] != t[0]:
                continue
            new.append((i, mono_lcm(g.lm, t), (not self.module) and disjoint(g.lm, t)))
        kept = []
        for idx, (i, L, dis) in enumerate(new):
            if dis:
                kept.append((i, L, dis))
                continue
            rest = itertools.chain(new[idx + 1:], kept)
            if any(_mdivides(L2, L) for _, L2, _ in rest):
                continue
            kept.append((i, L, dis))
        # old pairs: Gebauer-Möller B_k criterion
        for key in list(self.pairs):
            i, j = key
            L = self.pairs[key][1]
            if _mdivides(t, L):
                if mono_lcm(elems[i].lm, t) != L and mono_lcm(elems[j].lm, t) != L:
                    del self.pairs[key]
        for i, L, dis in kept:
            if dis:
                continue
            g = elems[i]
            s = max(
                g.sugar + self.deg(mono_div(L, g.lm)),
                h.sugar + self.deg(mono_div(L, t)),
            )
            if self.degree_bound is not None and s > self.degree_bound:
                continue
            key = (i, k)
            entry = (s, L)
            self.pairs[key] = entry
            heapq.heappush(self.heap, (s, self.rank(L), next(self._tick), key))
        self.active = [i for i in self.active if not divides(h, elems[i].lm)] + [k]

    def _basis(self):
        return [self.elems[i] for i in self.active]

    def run(self):
        rank = self.rank
        while self.pending:
            p = self.pending.pop(0)
            s = _sugar_of(p, self.deg)
            r = reduce_full(p, self._basis(), rank)
            if r:
                self._install(r, s)
        while self.heap:
            s, _, _, key = heapq.heappop(self.heap)
            if key not in self.pairs:
                continue
            del self.pairs[key]
            i, j = key
            f, g = self.elems[i], self.elems[j]
            L = mono_lcm(f.lm, g.lm)
            sp = {}
            sf, sg = mono_div(L, f.lm), mono_div(L, g.lm)
            for m, c in f.terms.items():
                sp[mono_mul(m, sf)] = c
            for m, c in g.terms.items():
                mm = mono_mul(m, sg)
                v = sp.get(mm, 0) - c
                if v:
                    sp[mm] = v
                else:
                    sp.pop(mm, None)
            if not sp:
                continue
            r = reduce_full(sp, self._basis(), rank)
            if r:
                self._install(r, s)
        return self

    def basis(self, reduced=True):
        """Return the (reduced) basis as a list of term dicts, sorted by leading term."""
        B = self._basis()
        if reduced:
            out = []
            for idx, g in enumerate(B):
                others = B[:idx] + B[idx + 1:]
                tail = {k: v for k, v in g.terms.items() if k != g.lm}
                tail = reduce_full(tail, others, self.rank)
                tail[g.lm] = mpq(1)
                out.append(tail)
        else:
            out = [dict(g.terms) for g in B]
        out.sort(key=lambda t: self.rank(_lead(t, self.rank)))
        return out

    def elements(self):
        return self._basis()

    def normal_form(self, p, tail=True):
        return reduce_full(dict(p), self._basis(), self.rank, tail=tail)


def _mdivides(a, b):
    """Monomial ``a`` divides ``b`` (same component)."""
    if a[0] != b[0]:
        return False
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def groebner(polys, rank, deg, module=False, degree_bound=None, reduced=True):
    eng = Buchberger(rank, deg, module=module, degree_bound=degree_bound)
    eng.add(polys)
    eng.run()
    return eng.basis(reduced=reduced)


# ---- local (Mora) -----------------------------------------------------------


def _ecart(terms, lm, deg):
    return max(deg(m) for m in terms) - deg(lm)


def mora_nf(p, T, rank, deg):
    """Mora's weak normal form of ``p`` (dict) w.r.t. the list of Elem ``T``.

    Returns a dict; zero (empty) iff ``p`` lies in the ideal of ``T`` in the
    localisation at the origin.
    """
    h = dict(p)
    if not h:
        return h
    T = list(T)
    while h:
        lm = _lead(h, rank)
        cands = [g for g in T if divides(g, lm)]
        if not cands:
            return h
        g = min(cands, key=lambda e: e.ecart)
        eh = _ecart(h, lm, deg)
        if g.ecart > eh:
            T.append(Elem(dict(h), lm, 0, eh))
        f = h[lm] / g.lc
        s = mono_div(lm, g.lm)
        for k, v in g.terms.items():
            mm = mono_mul(k, s)
            nv = h.get(mm, 0) - f * v
            if nv:
                h[mm] = nv
            else:
                h.pop(mm, None)
    return h


class Mora:
    """Standard basis for ideals under a local order (tangent cone algorithm)."""

    def __init__(self, rank, deg):
        self.rank = rank
        self.deg = deg
        self.S = []
        self.pairs = []
        self._tick = itertools.count()

    def _make(self, terms):
        lm = _lead(terms, self.rank)
        lc = terms[lm]
        if lc != 1:
            inv = 1 / lc
            terms = {k: v * inv for k, v in terms.items()}
        return Elem(terms, lm, _sugar_of(terms, self.deg), _ecart(terms, lm, self.deg))

    def _insert(self, h):
        k = len(self.S)
        for i, g in enumerate(self.S):
            if g.lm[0] != h.lm[0]:
                continue
            L = mono_lcm(g.lm, h.lm)
            skey = max(g.sugar + self.deg(mono_div(L, g.lm)), h.sugar + self.deg(mono_div(L, h.lm)))
            heapq.heappush(self.pairs, (skey, self.rank(L), next(self._tick), i, k))
        self.S.append(h)

    def run(self, polys):
        for p in polys:
            if p:
                h = mora_nf(p, self.S, self.rank, self.deg)
                if h:
                    self._insert(self._make(h))
        while self.pairs:
            _, _, _, i, j = heapq.heappop(self.pairs)
            f, g = self.S[i], self.S[j]
            L = mono_lcm(f.lm, g.lm)
            # chain criterion: some other lead divides L and its pairs were handled
            if self._chain(i, j, L):
                continue
            sp = {}
            sf, sg = mono_div(L, f.lm), mono_div(L, g.lm)
            for m, c in f.terms.items():
                sp[mono_mul(m, sf)] = c
            for m, c in g.terms.items():
                mm = mono_mul(m, sg)
                v = sp.get(mm, 0) - c
                if v:
                    sp[mm] = v
                else:
                    sp.pop(mm, None)
            if not sp:
                continue
            h = mora_nf(sp, self.S, self.rank, self.deg)
            if h:
                self._insert(self._make(h))
        return self

    def _chain(self, i, j, L):
        # safe version of the chain criterion: skip only if, for some l, both
        # (i, l) and (j, l) were already treated (l < max(i, j) and pairs popped)
        return False

    def basis(self):
        keep = []
        S = sorted(self.S, key=lambda e: self.rank(e.lm))
        for g in S:
            if not any(divides(h, g.lm) for h in keep):
                keep.append(g)
        return keep
