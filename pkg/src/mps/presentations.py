"""Symmetric presentations of ``f_* O`` and the structures built from them."""
from __future__ import annotations

from functools import cached_property

from .algebra import Ideal, PolyMatrix, PolyRing
from .algebra.ideal import ideal_equal_local
from .algebra.modules import TaggedModule
from .germs import CorankOneLayout, DoubledLayout, NotFinite, d2_general, d2_projection_multiplicity, fresh_names
from .pushforward import free_base_presentation, present_over_subring


class NotMonic(ValueError):
    """The middle component is not monic in ``y`` of degree ``q(f)``."""


class MinimalityFailure(ArithmeticError):
    pass


class LiftFailed(RuntimeError):
    pass


# ---- Weierstrass division ------------------------------------------------


class Division:
    """Division by ``g - Z`` in ``k[x, Z][y]`` for an adapted corank-1 germ ``(x, g, h)``."""

    def __init__(self, f):
        lay = CorankOneLayout(f)
        if f.p != f.n + 1:
            raise NotMonic(f"{f.name}: expected n+1 components, got {f.p}")
        self.f = f
        self.lay = lay
        src = f.source
        self.zname = f.target.names[f.n - 1]
        self.wname = f.target.names[f.n]
        zaux = fresh_names("Z", 1, src.names)[0] if self.zname in src.index else self.zname
        self.zaux = zaux
        names = list(src.names) + [zaux]
        self.ring = PolyRing(names, list(src.weights) + [f.target.weights[f.n - 1]])
        g = f.components[f.n - 1].to_ring(self.ring)
        q = f.q
        self.r = q - 1
        y = lay.y
        if g.degree_in(y) != q:
            raise NotMonic(f"{f.name}: deg_y {g} != q(f) = {q}")
        lc = g.coefficients_in(y)[q]
        if not lc.is_constant():
            raise NotMonic(f"{f.name}: leading y-coefficient of {g} is not a constant")
        self.lc = lc.constant_term()
        self.divisor = g - self.ring.var(zaux)
        # coordinates live on the target: x -> X, Z -> Z
        T = f.target
        self.to_target = {v: T.var(t) for v, t in zip(lay.x, f.target.names)}
        self.to_target[zaux] = T.var(self.zname)

    def remainder(self, p):
        """``p mod (g - Z)`` with ``y``-degree at most ``r``."""
        y = self.lay.y
        R = self.ring
        p = p.to_ring(R) if p.ring != R else p
        top = self.r + 1
        yv = R.var(y)
        while True:
            d = p.degree_in(y)
            if d < top:
                return p
            c = p.coefficients_in(y)[d]
            p = p - (c * yv ** (d - top) * self.divisor) / self.lc

    def coordinates(self, p):
        """``[c_0, ..., c_r]`` on the target with ``p = sum c_i y^i`` modulo ``g - Z``."""
        rem = self.remainder(p)
        parts = rem.coefficients_in(self.lay.y)
        T = self.f.target
        out = []
        for i in range(self.r + 1):
            c = parts.get(i)
            out.append(c.subs(self.to_target, T) if c is not None else T.zero())
        return out


def weierstrass_divide(p, f):
    return Division(f).coordinates(p)


def multiplication_matrix(f, div=None):
    """Columns: coordinates of ``h * y^j``; ``h`` is the last component."""
    div = div or Division(f)
    R = div.ring
    h = f.components[f.n].to_ring(R)
    y = R.var(div.lay.y)
    cols = [div.coordinates(h * y ** j) for j in range(div.r + 1)]
    return PolyMatrix.from_columns(f.target, cols, div.r + 1)


def frobenius_gram(f, div=None):
    """``P_ij`` = coefficient of ``y^r`` in ``y^(i+j) mod (g - Z)``."""
    div = div or Division(f)
    R = div.ring
    y = R.var(div.lay.y)
    r = div.r
    rows = [[div.coordinates(y ** (i + j))[r] for j in range(r + 1)] for i in range(r + 1)]
    return PolyMatrix(f.target, rows)


def inverse_unimodular(P):
    """Inverse of a square matrix with constant nonzero determinant (adjugate / det)."""
    d = P.det()
    if not d.is_constant() or not d:
        raise ValueError("matrix is not unimodular")
    c = d.constant_term()
    n = P.nrows
    idx = tuple(range(n))
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            # (i, j) entry of the adjugate is the (j, i) cofactor
            m = P.minor(idx[:j] + idx[j + 1:], idx[:i] + idx[i + 1:]) if n > 1 else P.ring.one()
            s = 1 if (i + j) % 2 == 0 else -1
            row.append(m.scale(s / c) if m else m)
        rows.append(row)
    return PolyMatrix(P.ring, rows)


class SymmetricPresentation:
    """``Lambda`` with generator row ``G = [1, y, ..., y^r]``; invariants checked on construction."""

    def __init__(self, f, Lam, G, M, P, check=True):
        self.f = f
        self.matrix = Lam
        self.G = G
        self.M = M
        self.P = P
        self.checks = {}
        if check:
            self._verify()

    @property
    def r(self):
        return self.matrix.nrows - 1

    def _verify(self):
        L = self.matrix
        f = self.f
        self.checks["symmetric"] = L.is_symmetric()
        if not self.checks["symmetric"]:
            raise AssertionError(f"{f.name}: Lambda is not symmetric")
        bad = [(i, j) for i in range(L.nrows) for j in range(L.ncols) if L[i, j].constant_term()]
        self.checks["minimal"] = not bad
        if bad:
            raise MinimalityFailure(f"{f.name}: entries {bad} are units")
        self.checks["relations"] = all(not v for v in self.relation_row())
        if not self.checks["relations"]:
            raise AssertionError(f"{f.name}: G * Lambda does not vanish on the graph")
        self.checks["det_nonzero"] = not self.det.is_zero()
        if not self.checks["det_nonzero"]:
            raise AssertionError(f"{f.name}: det Lambda vanishes identically")

    def relation_row(self):
        """``G * Lambda`` after substituting components for target variables."""
        f = self.f
        pulled = self.matrix.subs(f.graph_map(), f.source)
        out = []
        for j in range(pulled.ncols):
            s = f.source.zero()
            for g, row in zip(self.G, pulled.rows):
                if row[j]:
                    s = s + g * row[j]
            out.append(s)
        return out

    @cached_property
    def det(self):
        return self.matrix.det()

    def submatrix(self, k, cols=True):
        return submatrix(self.matrix, k, cols)

    def pullback(self, k, cols=True):
        """``f^(k)* Lambda^k_k``: entries pulled back to ``D^k`` along the first point."""
        lay = CorankOneLayout(self.f)
        m = lay.target_pullback(max(k, 1))
        return self.submatrix(k, cols).subs(m, lay.ring(max(k, 1)))

    def to_json(self):
        return {
            "matrix": self.matrix.to_strings(),
            "generators": [str(g) for g in self.G],
            "substitution": {t: str(c) for t, c in self.f.graph_map().items()},
            "invariants": sorted(k for k, v in self.checks.items() if v),
        }


def symmetric_presentation(f, check=True):
    """``Lambda = (W*Id - M) * P^{-1}`` for an adapted corank-1 germ ``(x, g, h)``."""
    div = Division(f)
    M = multiplication_matrix(f, div)
    P = frobenius_gram(f, div)
    T = f.target
    W = T.var(div.wname)
    r1 = div.r + 1
    WI = PolyMatrix(T, [[W if i == j else T.zero() for j in range(r1)] for i in range(r1)])
    Lam = (WI - M) * inverse_unimodular(P)
    y = f.source.var(div.lay.y)
    G = [y ** i for i in range(r1)]
    return SymmetricPresentation(f, Lam, G, M, P, check)


def submatrix(L, k, cols=True):
    """``Lambda^k_k`` (or ``Lambda^k`` when ``cols`` is false)."""
    if not 0 <= k < L.nrows + (0 if cols else 1):
        raise IndexError(f"k={k} out of range for a {L.nrows}x{L.ncols} matrix")
    return L.delete_leading(k, cols)


def target_fitting(L, i):
    return L.fitting_ideal(i)


def congruent(L, Q):
    """``Q^t * L * Q``: another symmetric presentation with the same cokernel."""
    return Q.transpose() * L * Q


# ---- generator ladder ------------------------------------------------------


def ladder_ring(k, base="y"):
    return PolyRing([f"{base}{i}" for i in range(1, k + 1)])


def complete_homogeneous(d, ring, names=None):
    """Sum of all monomials of degree ``d`` in ``names`` (default: all variables)."""
    from itertools import combinations_with_replacement

    names = names or list(ring.names)
    s = ring.zero()
    if d == 0:
        return ring.one()
    for combo in combinations_with_replacement(names, d):
        t = ring.one()
        for v in combo:
            t = t * ring.var(v)
        s = s + t
    return s


def hk_generators(k, r, ring=None, names=None):
    """``g_0^(k), ..., g_{r-k+1}^(k)``: complete homogeneous polynomials in ``y_1..y_k``."""
    if not 1 <= k <= r + 1:
        raise ValueError(f"need 1 <= k <= r+1, got k={k}, r={r}")
    ring = ring or ladder_ring(k)
    names = names or list(ring.names[:k])
    return [complete_homogeneous(i, ring, names) for i in range(r - k + 2)]


def ladder_step(gens, ys, ring):
    """Interpolation-division: ``(g_i(..,y_{k+1}) - g_i(..,y_k)) / (y_{k+1} - y_k)`` for ``i >= 1``.

    ``ys`` names ``y_1..y_{k+1}`` in ``ring``; ``gens`` are level-``k`` generators.
    """
    yk, yk1 = ring.var(ys[-2]), ring.var(ys[-1])
    out = []
    for g in gens[1:]:
        num = g.subs({ys[-2]: yk1}, ring) - g
        out.append(num.exact_quotient(yk1 - yk))
    return out


def ladder(k, r, ring, ys):
    """Level-``k`` generators in ``ring`` built by the recursion from ``1, y_1, ..., y_1^r``."""
    y1 = ring.var(ys[0])
    gens = [y1 ** i for i in range(r + 1)]
    for j in range(1, k):
        gens = ladder_step(gens, ys[: j + 1], ring)
    return gens


# ---- tensor square ---------------------------------------------------------


class TensorSquare:
    """``O (x)_{O_target} O``: doubled source ring modulo ``f(x^1) - f(x^2)``."""

    def __init__(self, f):
        self.f = f
        self.layout = DoubledLayout(f)
        R = self.layout.ring
        self.ring = R
        c1, c2 = self.layout.copy(1), self.layout.copy(2)
        diffs = [c.subs(c1, R) - c.subs(c2, R) for c in f.components]
        self.ideal = Ideal(R, [d for d in diffs if d])
        basis = f.local_algebra.basis
        self.basis = basis
        self.kernel_generators = [g.subs(c1, R) - g.subs(c2, R) for g in basis if not g.is_constant()]

    def mu(self, p):
        """Multiplication map: both copies to the source variables."""
        src = self.f.source
        lay = self.layout
        m = {v: src.var(v) for v in lay.shared}
        for v, a, b in zip(lay.free, lay.first, lay.second):
            m[a] = src.var(v)
            m[b] = src.var(v)
        return p.subs(m, src)

    def in_kernel(self, p):
        return self.mu(p).is_zero()

    # corank 1: Ker(mu) ~ O_{D^2} by dividing out y^1 - y^2
    def _diagonal(self):
        lay = self.layout
        if len(lay.free) != 1:
            raise ValueError("the T-isomorphism exists for corank 1 only")
        R = self.ring
        return R.var(lay.first[0]) - R.var(lay.second[0])

    def T(self, p):
        """``Ker(mu) -> O_{D^2}``: exact quotient by ``y_1 - y_2``."""
        if not self.in_kernel(p):
            raise ValueError(f"{p} is not in Ker(mu)")
        return p.exact_quotient(self._diagonal())

    def T_inv(self, h):
        """``O_{D^2} -> Ker(mu)``: multiplication by ``y_1 - y_2``."""
        return h * self._diagonal()

    def kernel_presentation(self):
        """Oracle presentation of ``Ker(mu)`` over the first factor, w.r.t. ``kernel_generators``."""
        lay = self.layout
        return present_over_subring(self.ideal, lay.shared + lay.first, self.kernel_generators)


def tensor_square(f):
    return TensorSquare(f)


# ---- corank >= 2: presentation and lifting diagram ----------------------------


def pushforward_presentation(f):
    """Minimal presentation of ``f_* O`` over the target with monomial generators."""
    res = free_base_presentation(f)
    if res is None:
        raise NotFinite(f"{f.name}: no finite free base among the components")
    return res


def d2_oracle(f):
    """``O_{D^2}`` over the first factor, generated by the ``q(pi^2_1)`` basis monomials."""
    S = d2_general(f)
    lay = S.layout
    _, basis = d2_projection_multiplicity(f)
    pres = present_over_subring(S.ideal, lay.shared + lay.first, basis)
    return S, pres


class LiftDiagram:
    def __init__(self, route, **kw):
        self.route = route
        self.__dict__.update(kw)


def lift_diagram(f):
    """Compare the resolutions of ``O_{ID^2}`` and ``O_{D^2}`` over ``O(x^1)``.

    Top row: ``f^* Lambda`` presenting ``O_{ID^2}`` w.r.t. ``g_i(x^2)``; bottom:
    the oracle presentation ``P`` of ``O_{D^2}`` w.r.t. its own generators
    ``g_j(x^2)``.  ``A`` rewrites each ``g_i(x^2)`` in the bottom generators
    (identity columns where the generator is shared) and ``B`` solves
    ``A * f^*Lambda = P * B``.
    """
    if f.corank <= 1:
        return LiftDiagram("T", square_commutes=None)
    pf = pushforward_presentation(f)
    S, pres = d2_oracle(f)
    lay = S.layout
    base = lay.first_factor_ring()
    c1, c2 = lay.copy(1), lay.copy(2)
    R = S.ring
    # pull Lambda back along the first copy, into the first factor ring
    pull = {t: c.subs(c1, R).to_ring(base) for t, c in zip(f.target.names, f.components)}
    top = pf.matrix.subs(pull, base)
    top_gens = [g.subs(c2, R) for g in pf.generators]
    bottom_gens = list(pres.generators)
    P = pres.matrix
    if set(top_gens) == set(bottom_gens) and len(top_gens) == len(bottom_gens):
        # same generators in another order: list the bottom ones like the top
        perm = [bottom_gens.index(g) for g in top_gens]
        bottom_gens = top_gens
        P = P.submatrix(perm, range(P.ncols))
    s1 = len(bottom_gens)
    cols = []
    coeffs = {}
    for i, g in enumerate(top_gens):
        if g in bottom_gens:
            j = bottom_gens.index(g)
            cols.append([base.one() if t == j else base.zero() for t in range(s1)])
            continue
        c = pres.lift(g)
        if c is None:
            raise LiftFailed(f"{g} is not in the span of the D^2 generators")
        cols.append(c)
        coeffs[str(g)] = c
    A = PolyMatrix.from_columns(base, cols, s1)
    AT = A * top
    tm = TaggedModule(base, P.columns(), s1)
    bcols = []
    for j in range(AT.ncols):
        c = tm.lift(AT.col(j))
        if c is None:
            raise LiftFailed(f"column {j} of A*f^*Lambda is not a relation of O_D2")
        bcols.append(c)
    B = PolyMatrix.from_columns(base, bcols, P.ncols)
    square = (A * top - P * B).is_zero()
    # the right-hand square: g_i(x^2) == sum_j A_ji g_j(x^2) modulo I_2
    sb = S.ideal.standard_basis(S.ideal.default_order(local=False))
    right = True
    for i, g in enumerate(top_gens):
        s = R.zero()
        for j, h in enumerate(bottom_gens):
            a = A[j, i]
            if a:
                s = s + a.to_ring(R) * h
        if not sb.reduces_to_zero(s - g):
            right = False
    identity = s1 == len(top_gens) and A == PolyMatrix.identity(base, s1)
    return LiftDiagram(
        "lift", A=A, B=B, top=top, bottom=P, top_generators=top_gens,
        bottom_generators=bottom_gens, coefficients=coeffs, square_commutes=square and right,
        identity_case=identity,
    )


def check_image_equation(sp):
    """``(det Lambda)`` versus the image ideal from eliminating the source variables."""
    f = sp.f
    A = PolyRing(list(f.source.names) + list(f.target.names), list(f.source.weights) + list(f.target.weights))
    graph = Ideal(A, [A.var(t) - c.to_ring(A) for t, c in zip(f.target.names, f.components)])
    image = graph.eliminate(list(f.source.names))
    img = image.to_ring(f.target) if image.ring != f.target else image
    return ideal_equal_local(Ideal(f.target, [sp.det]), img)
