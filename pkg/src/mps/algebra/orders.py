"""Monomial orders, encoded by rank tuples.

``order.rank(e)`` maps an exponent vector to a tuple; a *smaller* rank is a
*larger* monomial, so ``min(terms, key=order.rank)`` is the leading term and
``sorted(terms, key=order.rank)`` lists terms in descending order.  Every
rank used here is linear in the exponents, which keeps the orders
multiplicative.
"""
from __future__ import annotations

_KINDS = ("dp", "lp", "ds")


class MonomialOrder:
    """Block order built from graded-reverse-lex (``dp``), lex (``lp``) and
    negative-degree reverse-lex (``ds``, a local order) blocks.

    ``blocks`` is a list of ``(kind, indices, weights)``; earlier blocks
    dominate.  Local and global blocks are never mixed.
    """

    __slots__ = ("nvars", "blocks", "local", "_cache", "_name")

    def __init__(self, nvars, blocks, name=None):
        seen = []
        norm = []
        for kind, idx, w in blocks:
            if kind not in _KINDS:
                raise ValueError(f"unknown block kind {kind!r}")
            idx = tuple(idx)
            w = tuple(w) if w is not None else (1,) * len(idx)
            if len(w) != len(idx):
                raise ValueError("one weight per block variable")
            seen.extend(idx)
            norm.append((kind, idx, w))
        if sorted(seen) != list(range(nvars)):
            raise ValueError("blocks must partition the variables")
        kinds = {k for k, _, _ in norm}
        if "ds" in kinds and kinds != {"ds"}:
            raise ValueError("local and global blocks cannot be mixed")
        self.nvars = nvars
        self.blocks = tuple(norm)
        self.local = kinds == {"ds"}
        self._cache = {}
        self._name = name

    # ---- constructors ------------------------------------------------
    @classmethod
    def grevlex(cls, nvars, weights=None):
        return cls(nvars, [("dp", range(nvars), weights)], name="dp")

    @classmethod
    def lex(cls, nvars):
        return cls(nvars, [("lp", range(nvars), None)], name="lp")

    @classmethod
    def local_order(cls, nvars, weights=None):
        return cls(nvars, [("ds", range(nvars), weights)], name="ds")

    @classmethod
    def elimination(cls, nvars, elim, weights=None):
        """Global block order in which the variables ``elim`` dominate the rest."""
        elim = sorted(set(elim))
        rest = [i for i in range(nvars) if i not in elim]
        w = weights or (1,) * nvars
        blocks = []
        if elim:
            blocks.append(("dp", elim, [w[i] for i in elim]))
        if rest:
            blocks.append(("dp", rest, [w[i] for i in rest]))
        return cls(nvars, blocks, name="elim")

    @classmethod
    def for_ring(cls, ring, kind="dp"):
        if kind == "dp":
            return cls.grevlex(ring.nvars, ring.weights)
        if kind == "ds":
            return cls.local_order(ring.nvars, ring.weights)
        if kind == "lp":
            return cls.lex(ring.nvars)
        raise ValueError(kind)

    # ---- comparison ----------------------------------------------------
    def rank(self, e):
        r = self._cache.get(e)
        if r is None:
            r = ()
            for kind, idx, w in self.blocks:
                r += self.block_rank(kind, idx, w, e)
            self._cache[e] = r
        return r

    @staticmethod
    def block_rank(kind, idx, w, e):
        if kind == "lp":
            return tuple(-e[i] for i in idx)
        d = 0
        for i, wi in zip(idx, w):
            d += e[i] * wi
        tail = tuple(e[i] for i in reversed(idx))
        return (-d,) + tail if kind == "dp" else (d,) + tail

    def greater(self, a, b):
        return self.rank(a) < self.rank(b)

    def key(self):
        return (self.nvars, self.blocks)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        parts = []
        for kind, idx, w in self.blocks:
            ws = "" if all(x == 1 for x in w) else f" w={list(w)}"
            parts.append(f"{kind}{list(idx)}{ws}")
        return f"MonomialOrder({'; '.join(parts)})"
