"""Ideals of polynomial rings and their germs at the origin."""
from __future__ import annotations

import math
import threading

from gmpy2 import mpq

from .groebner import Buchberger, Elem, mora_nf, reduce_full
from .mode import get_mode
from .orders import MonomialOrder
from .polynomial import Polynomial, RingMismatch

INFINITE = math.inf


def to_vec(p, comp=0):
    return {(comp,) + e: c for e, c in p.terms.items()}


def from_vec(ring, d):
    return Polynomial._raw(ring, {m[1:]: c for m, c in d.items()})


def ideal_rank(order):
    rank = order.rank
    cache = {}

    def r(m):
        v = cache.get(m)
        if v is None:
            v = rank(m[1:])
            cache[m] = v
        return v

    return r


def ideal_deg(weights):
    def d(m):
        s = 0
        for a, w in zip(m[1:], weights):
            s += a * w
        return s

    return d


class StandardBasis:
    """A computed (global reduced or local minimal) standard basis."""

    def __init__(self, ring, order, elems, engine=None):
        self.ring = ring
        self.order = order
        self._elems = elems
        self._engine = engine
        self._rank = ideal_rank(order)
        self._deg = ideal_deg(ring.weights)

    @property
    def polys(self):
        return [from_vec(self.ring, e.terms) for e in self._elems]

    @property
    def leading_exponents(self):
        return [e.lm[1:] for e in self._elems]

    def normal_form(self, p):
        if p.ring != self.ring:
            raise RingMismatch(f"{p.ring} vs {self.ring}")
        v = to_vec(p)
        if self.order.local:
            r = mora_nf(v, self._elems, self._rank, self._deg)
        else:
            r = reduce_full(v, self._elems, self._rank)
        return from_vec(self.ring, r)

    def reduces_to_zero(self, p):
        if self.order.local:
            return self.contains_all([p])
        return self.normal_form(p).is_zero()

    def contains_all(self, polys):
        """Local membership by leading ideals: ``I`` and ``I + (polys)`` agree
        at the origin iff their local leading ideals coincide."""
        extra = [to_vec(p) for p in polys if not p.is_zero()]
        if not extra:
            return True
        if self.is_unit():
            return True
        gens = [e.terms for e in self._elems] + extra
        bigger = local_standard_basis(self.ring, self.order, gens)
        mine = self.leading_exponents
        return all(any(_exp_divides(a, b) for a in mine) for b in bigger.leading_exponents)

    def is_unit(self):
        return any(not any(e) for e in self.leading_exponents)


class Ideal:
    """Finitely generated ideal; standard bases are cached per monomial order."""

    def __init__(self, ring, gens=()):
        gens = list(gens)
        for g in gens:
            if g.ring != ring:
                raise RingMismatch(f"generator in {g.ring}, ideal in {ring}")
        self.ring = ring
        self.gens = tuple(g for g in gens if not g.is_zero())
        self._cache = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return f"Ideal({', '.join(str(g) for g in self.gens) or '0'})"

    def __iter__(self):
        return iter(self.gens)

    def __len__(self):
        return len(self.gens)

    def __add__(self, other):
        if isinstance(other, Ideal):
            other = other.gens
        return Ideal(self.ring, list(self.gens) + list(other))

    def to_ring(self, ring):
        return Ideal(ring, [g.to_ring(ring) for g in self.gens])

    def subs(self, mapping, target=None):
        target = target or self.ring
        return Ideal(target, [g.subs(mapping, target) for g in self.gens])

    def strings(self):
        return [str(g) for g in self.gens]

    # ---- bases ---------------------------------------------------------
    def default_order(self, local=None):
        if local is None:
            local = get_mode() == "local"
        return MonomialOrder.for_ring(self.ring, "ds" if local else "dp")

    def standard_basis(self, order=None, degree_bound=None):
        """Reduced Gröbner basis (global order) or minimal standard basis (local order)."""
        order = order or self.default_order()
        key = (order.key(), degree_bound)
        with self._lock:
            sb = self._cache.get(key)
            if sb is None:
                sb = self._compute(order, degree_bound)
                self._cache[key] = sb
        return sb

    def _compute(self, order, degree_bound):
        rank = ideal_rank(order)
        deg = ideal_deg(self.ring.weights)
        vecs = [to_vec(g) for g in self.gens]
        if order.local:
            if degree_bound is not None:
                raise ValueError("degree truncation is only supported for global orders")
            return local_standard_basis(self.ring, order, vecs, self._homogeneous_for(order))
        eng = Buchberger(rank, deg, degree_bound=degree_bound)
        eng.add(vecs)
        eng.run()
        terms = eng.basis(reduced=True)
        elems = [Elem(t, min(t, key=rank), 0) for t in terms]
        return StandardBasis(self.ring, order, elems, engine=eng)

    def _homogeneous_for(self, order):
        if len(order.blocks) != 1:
            return False
        _, idx, w = order.blocks[0]
        if tuple(idx) != tuple(range(self.ring.nvars)):
            return False
        return all(g.is_homogeneous(w) for g in self.gens)

    def is_homogeneous(self):
        return all(g.is_homogeneous(self.ring.weights) for g in self.gens)

    def normal_form(self, p, order=None):
        return self.standard_basis(order).normal_form(p)

    def contains(self, p, local=None):
        """Membership; in local mode this is membership of the germ at 0."""
        return self._membership_basis(local).reduces_to_zero(p)

    def _membership_basis(self, local):
        # a weighted-homogeneous ideal has all associated primes inside the
        # maximal ideal, so it is contracted from its localisation and global
        # membership decides local membership
        order = self.default_order(local)
        if order.local and self._positive_weights() and self.is_homogeneous():
            order = self.default_order(False)
        return self.standard_basis(order)

    def _positive_weights(self):
        return all(w > 0 for w in self.ring.weights)

    def contains_ideal(self, other, local=None):
        sb = self._membership_basis(local)
        if sb.order.local:
            return sb.contains_all(other.gens)
        return all(sb.reduces_to_zero(g) for g in other.gens)

    def is_unit(self, local=None):
        return self.standard_basis(self.default_order(local)).is_unit()

    def is_zero(self):
        return not self.gens

    # ---- elimination -------------------------------------------------
    def eliminate(self, names):
        """``I ∩ k[remaining variables]``, returned in the subring."""
        names = set(names)
        unknown = names - set(self.ring.names)
        if unknown:
            raise ValueError(f"unknown variables {sorted(unknown)}")
        keep = [v for v in self.ring.names if v not in names]
        sub = self.ring.subring(keep)
        if not names:
            return Ideal(sub, [g.to_ring(sub) for g in self.gens])
        elim = [self.ring.index[v] for v in names]
        order = MonomialOrder.elimination(self.ring.nvars, elim, self.ring.weights)
        sb = self.standard_basis(order)
        out = []
        for g in sb.polys:
            if not any(e[i] for e in g.terms for i in elim):
                out.append(g.to_ring(sub))
        return Ideal(sub, out)

    # ---- germ invariants -----------------------------------------------
    def leading_exponents(self, local=None):
        return self.standard_basis(self.default_order(local)).leading_exponents

    def local_dimension(self, local=None):
        """Krull dimension of the germ; -1 when it is empty (unit ideal)."""
        return monomial_dimension(self.leading_exponents(local), self.ring.nvars)

    def local_vs_dim(self, local=None):
        """``(dim_C O/I, basis)``; ``(INFINITE, None)`` for an infinite staircase."""
        leads = self.leading_exponents(local)
        mons = standard_monomials(leads, self.ring.nvars)
        if mons is None:
            return INFINITE, None
        basis = [Polynomial._raw(self.ring, {e: mpq(1)}) for e in mons]
        return len(mons), basis


def ideal_equal_local(I, J, local=None):
    if I.ring != J.ring:
        raise RingMismatch(f"{I.ring} vs {J.ring}")
    return I.contains_ideal(J, local) and J.contains_ideal(I, local)


def ideal_witness(I, J, local=None):
    """A generator of ``J`` with nonzero normal form against ``I``, or ``None``."""
    if I.contains_ideal(J, local):
        return None
    sb = I._membership_basis(local)
    for g in J.gens:
        if not sb.reduces_to_zero(g):
            return g
    return None


def local_standard_basis(ring, order, vecs, homogeneous=None):
    """Minimal standard basis for a local order.

    Weighted-homogeneous input goes through a global Gröbner basis: within one
    degree the local and the global order break ties identically.  Otherwise
    the generators are homogenised with an extra variable ``t`` (Lazard) and a
    Gröbner basis is computed for the order comparing total degree first and
    the local order on the old variables second; setting ``t = 1`` gives a
    standard basis.  Every reduction stays inside one degree, so this
    terminates without ecart bookkeeping.
    """
    rank = ideal_rank(order)
    w = tuple(a if a > 0 else 1 for a in ring.weights)
    deg = ideal_deg(w)
    if homogeneous is None:
        homogeneous = len(order.blocks) == 1 and all(
            _vec_homogeneous(v, ideal_deg(order.blocks[0][2])) for v in vecs)
    if homogeneous and len(order.blocks) == 1:
        glob = MonomialOrder(order.nvars, [("dp", i, bw) for _, i, bw in order.blocks])
        eng = Buchberger(ideal_rank(glob), deg)
        eng.add(vecs)
        eng.run()
        terms = eng.basis(reduced=True)
    else:
        cache = {}

        def hrank(m):
            v = cache.get(m)
            if v is None:
                x = m[:-1]
                v = cache[m] = (-(deg(x) + m[-1]),) + rank(x)
            return v

        def hdeg(m):
            return deg(m[:-1]) + m[-1]

        hv = []
        for v in vecs:
            if not v:
                continue
            D = max(deg(m) for m in v)
            hv.append({m + (D - deg(m),): c for m, c in v.items()})
        eng = Buchberger(hrank, hdeg)
        eng.add(hv)
        eng.run()
        terms = []
        for t in eng.basis(reduced=False):
            d = {}
            for m, c in t.items():
                d[m[:-1]] = c  # no collisions: t-exponent is fixed by the x-part
            terms.append(d)
    elems = [Elem(t, min(t, key=rank), 0) for t in terms]
    keep = []
    for e in sorted(elems, key=lambda e: sum(e.lm[1:])):
        if not any(_exp_divides(k.lm[1:], e.lm[1:]) for k in keep):
            keep.append(e)
    return StandardBasis(ring, order, keep)


def _vec_homogeneous(v, deg):
    return len({deg(m) for m in v}) <= 1


def _exp_divides(a, b):
    return all(x <= y for x, y in zip(a, b))


# ---- staircase combinatorics --------------------------------------------


def monomial_dimension(leads, n):
    """Krull dimension of ``k[x_1..x_n]/(x^a : a in leads)``; -1 for the unit ideal."""
    supports = []
    for e in leads:
        s = frozenset(i for i, a in enumerate(e) if a)
        if not s:
            return -1
        supports.append(s)
    supports = _minimal_sets(supports)
    if not supports:
        return n
    best = [n]

    def rec(chosen, k):
        if len(chosen) >= best[0]:
            return
        for s in supports[k:]:
            if not (s & chosen):
                for v in sorted(s):
                    rec(chosen | {v}, k)
                return
        best[0] = len(chosen)

    rec(frozenset(), 0)
    return n - best[0]


def _minimal_sets(sets):
    sets = sorted(set(sets), key=len)
    out = []
    for s in sets:
        if not any(t <= s for t in out):
            out.append(s)
    return out


def standard_monomials(leads, n, limit=200000):
    """Exponents outside the monomial ideal generated by ``leads``; ``None`` if infinite."""
    leads = list(leads)
    if any(not any(e) for e in leads):
        return []
    for i in range(n):
        if not any(e[i] and all(a == 0 for j, a in enumerate(e) if j != i) for e in leads):
            return None
    out = []

    def inside(e):
        for l in leads:
            for a, b in zip(l, e):
                if a > b:
                    break
            else:
                return True
        return False

    e = [0] * n

    def rec(i):
        if i == n:
            out.append(tuple(e))
            if len(out) > limit:
                raise RuntimeError("staircase too large")
            return
        a = 0
        while True:
            e[i] = a
            if inside(e):
                break
            rec(i + 1)
            a += 1
        e[i] = 0

    rec(0)
    return out
