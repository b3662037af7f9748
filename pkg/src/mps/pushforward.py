"""Presentations of finite algebras as modules over a subring.

Two routes, deliberately independent of each other:

* :func:`present_over_subring` - relations among chosen generators found as
  a kernel over the subring (tagged module Gröbner basis with a variable
  block eliminated).  Nothing about the structure of the algebra is assumed.
* :func:`free_base_presentation` - when the algebra is free over the
  polynomial ring of all but one target coordinate, the last coordinate acts
  by a matrix ``M`` and ``W*Id - M`` presents the algebra over the target.
"""
from __future__ import annotations

from .algebra import Ideal, MonomialOrder, PolyMatrix, PolyRing, Polynomial
from .algebra.ideal import standard_monomials
from .algebra.modules import TaggedModule, minimal_columns, prune_presentation


class SubringPresentation:
    """``ring/ideal`` over ``k[keep]``: matrix over the subring, rows = generators."""

    def __init__(self, matrix, generators, tagged, base_ideal, subring):
        self.matrix = matrix
        self.generators = generators
        self.tagged = tagged
        self.base_ideal = base_ideal
        self.subring = subring

    def lift(self, p):
        """Coefficients (over the subring) writing ``p`` in the generators, or ``None``."""
        c = self.tagged.lift([p])
        if c is None:
            return None
        return [x.to_ring(self.subring) for x in c]


def present_over_subring(ideal, keep, generators, base_ideal=None, minimize=True):
    """Present ``R/ideal`` over ``S = k[keep]`` w.r.t. ``generators``.

    Relations are the kernel of ``S^m -> R/ideal, e_i -> g_i``.  Columns that
    vanish modulo ``base_ideal`` (an ideal of ``S`` contained in the
    annihilator, e.g. the ideal of the base scheme) are dropped.
    """
    R = ideal.ring
    keep = list(keep)
    S = R.subring(keep)
    elim = [v for v in R.names if v not in set(keep)]
    rdeg = [g.wdegree() if g else 0 for g in generators]
    tm = TaggedModule(R, [[g] for g in generators], 1, ideal, elim)
    cols = [[p.to_ring(S) for p in c] for c in tm.kernel_columns()]
    P = PolyMatrix.from_columns(S, cols, len(generators))
    base = base_ideal.to_ring(S) if base_ideal is not None else None
    if minimize:
        P = minimal_columns(P, base, rdeg)
    return SubringPresentation(P, list(generators), tm, base, S)


class FreeBasePresentation:
    def __init__(self, matrix, generators, dropped, base_names, full_rank):
        self.matrix = matrix
        self.generators = generators
        self.dropped = dropped
        self.base_names = base_names
        self.full_rank = full_rank


def free_base_presentation(f, prune=True):
    """Presentation of ``f_* O`` over the target via a free base, or ``None``.

    Tries dropping each non-identity component (last first); the source must
    be finite and free over the remaining ones, certified by a Gröbner basis
    whose leading monomials involve only the non-identity source variables.
    """
    m = f.identity_prefix
    src, tgt = f.source, f.target
    moving = list(src.names[m:])
    cand = list(range(m, f.p))[::-1]
    for d in cand:
        res = _try_base(f, d, moving)
        if res is None:
            continue
        M, basis, T = res
        W = T.var(tgt.names[d])
        r = len(basis)
        L = PolyMatrix(
            T, [[(W if i == j else T.zero()) - M[i][j] for j in range(r)] for i in range(r)]
        )
        kept = list(range(r))
        if prune:
            L, kept = prune_presentation(L)
        gens = [basis[i] for i in kept]
        return FreeBasePresentation(L, gens, tgt.names[d], [t for t in tgt.names if t != tgt.names[d]], r)
    return None


def _try_base(f, d, moving):
    src, tgt = f.source, f.target
    m = f.identity_prefix
    base_idx = [j for j in range(m, f.p) if j != d]
    tb = [tgt.names[j] for j in base_idx]
    names = list(src.names) + tb
    if len(set(names)) != len(names):
        return None
    w = list(src.weights) + [tgt.weights[j] for j in base_idx]
    A = PolyRing(names, w)
    gens = [A.var(tgt.names[j]) - f.components[j].to_ring(A) for j in base_idx]
    block = [A.index[v] for v in moving]
    order = MonomialOrder.elimination(A.nvars, block, A.weights)
    J = Ideal(A, gens)
    sb = J.standard_basis(order)
    leads = []
    for g in sb.polys:
        e = g.lead_exponent(order)
        if any(e[i] for i in range(A.nvars) if i not in block):
            return None
        leads.append(tuple(e[i] for i in block))
    stair = standard_monomials(leads, len(block))
    if stair is None:
        return None
    basis = []
    for ex in sorted(stair, key=lambda e: (sum(a * src.weights[m + i] for i, a in enumerate(e)), e)):
        full = [0] * src.nvars
        for i, a in enumerate(ex):
            full[m + i] = a
        basis.append(src.one().mul_monomial(tuple(full)))
    # the target ring: identity coordinates take their target names
    T = tgt
    ren = {src.names[i]: T.var(tgt.names[i]) for i in range(m)}
    for j in base_idx:
        ren[tgt.names[j]] = T.var(tgt.names[j])
    pos = {}
    for k, b in enumerate(basis):
        (e,) = b.terms
        pos[tuple(e[m:])] = k
    r = len(basis)
    M = [[T.zero()] * r for _ in range(r)]
    fd = f.components[d].to_ring(A)
    for k, b in enumerate(basis):
        nf = sb.normal_form(fd * b.to_ring(A))
        coeff = {}
        for e, c in nf.terms.items():
            key = tuple(e[i] for i in block)
            rest = tuple(0 if i in block else a for i, a in enumerate(e))
            coeff.setdefault(key, {})[rest] = c
        for key, terms in coeff.items():
            row = pos[key]
            M[row][k] = Polynomial._raw(A, terms).subs(ren, T)
    return M, basis, T
