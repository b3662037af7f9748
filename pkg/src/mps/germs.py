"""Map-germs, local algebras, divided differences and multiple point schemes."""
from __future__ import annotations

import re
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from pathlib import Path

from .algebra import INFINITE, Ideal, MonomialOrder, PolyMatrix, PolyRing, Polynomial
from .algebra.ideal import ideal_equal_local
from .algebra.polynomial import PolynomialSyntaxError

CATALOG_DIR = Path(__file__).with_name("catalog")


class GermError(ValueError):
    pass


class MalformedFile(GermError):
    pass


class NotVanishingAtOrigin(GermError):
    pass


class NotAdapted(GermError):
    pass


class NotFinite(GermError):
    pass


class NotAnUnfolding(GermError):
    pass


# ---- the germ ------------------------------------------------------------


class MapGerm:
    """A polynomial map-germ ``(C^n, 0) -> (C^p, 0)``.

    Source and target rings carry the quasihomogeneous weights when the germ
    has them (``quasihomogeneous``); otherwise all weights are 1.
    """

    def __init__(self, name, source, target, components, unfolds=(), tags=()):
        source = tuple(source)
        target = tuple(target)
        if len(components) != len(target):
            raise MalformedFile("one component per target variable")
        ring = PolyRing(source)
        comps = []
        for c in components:
            if isinstance(c, str):
                c = ring(c)
            else:
                c = c.to_ring(ring)
            if c.constant_term():
                raise NotVanishingAtOrigin(f"component {c} does not vanish at 0")
            comps.append(c)
        self.name = name
        self.unfolds = tuple(unfolds)
        self.tags = frozenset(tags)
        sw, tw = find_weights(ring, comps)
        self.quasihomogeneous = sw is not None
        self.source = PolyRing(source, sw)
        self.target = PolyRing(target, tw)
        self.components = tuple(c.to_ring(self.source) for c in comps)
        for u in self.unfolds:
            if u not in self.source.index:
                raise MalformedFile(f"unfolding parameter {u} is not a source variable")

    def __repr__(self):
        return f"MapGerm({self.name!r}: {self.n} -> {self.p})"

    @property
    def n(self):
        return self.source.nvars

    @property
    def p(self):
        return self.target.nvars

    @property
    def stable(self):
        return "stable" in self.tags

    @cached_property
    def jacobian_at_zero(self):
        """Linear parts of the components, as rows of Fractions."""
        rows = []
        for c in self.components:
            row = []
            for i in range(self.n):
                a = c.terms.get(tuple(int(j == i) for j in range(self.n)), 0)
                row.append(Fraction(int(a.numerator), int(a.denominator)) if a else Fraction(0))
            rows.append(row)
        return rows

    @cached_property
    def corank(self):
        return self.n - _rank(self.jacobian_at_zero)

    @cached_property
    def identity_prefix(self):
        """Number of leading components equal to the leading source variables."""
        k = 0
        for c, v in zip(self.components, self.source.names):
            if c != self.source.var(v):
                break
            k += 1
        return k

    @property
    def adapted(self):
        return self.identity_prefix >= self.n - 1

    def graph_map(self):
        """Target variable name -> component polynomial."""
        return dict(zip(self.target.names, self.components))

    def pullback(self, p, target_ring=None, mapping=None):
        """``f^* p`` for a polynomial on the target."""
        mapping = mapping or self.graph_map()
        src = target_ring or self.source
        return p.subs(mapping, src)

    @cached_property
    def local_algebra(self):
        return local_algebra(self)

    @property
    def q(self):
        return self.local_algebra.q

    def pretty(self):
        parts = [f"{t} = {c}" for t, c in zip(self.target.names, self.components)]
        return f"({', '.join(self.source.names)}) -> " + "; ".join(parts)

    def to_text(self):
        lines = [f'name "{self.name}"', "source " + ", ".join(self.source.names),
                 "target " + ", ".join(self.target.names),
                 "map " + "; ".join(f"{t} = {c}" for t, c in zip(self.target.names, self.components))]
        if self.unfolds:
            lines.append("unfolds " + ", ".join(self.unfolds))
        if self.tags:
            lines.append("tags " + ", ".join(sorted(self.tags)))
        return "\n".join(lines) + "\n"


def _rank(rows):
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for j in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][j] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][j] != 0:
                f = m[i][j] / m[rank][j]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def find_weights(ring, comps):
    """Positive integer weights making every component weighted homogeneous.

    Returns ``(source_weights, target_weights)`` or ``(None, None)``.  The
    linear program only proposes a candidate; homogeneity is then checked
    exactly.
    """
    rows = []
    for c in comps:
        es = list(c.terms)
        for e in es[1:]:
            rows.append([a - b for a, b in zip(e, es[0])])
    n = ring.nvars
    if rows:
        import numpy as np
        from scipy.optimize import linprog

        res = linprog(
            np.ones(n), A_eq=np.array(rows, dtype=float), b_eq=np.zeros(len(rows)),
            bounds=[(1, None)] * n, method="highs",
        )
        if not res.success:
            return None, None
        fr = [Fraction(float(x)).limit_denominator(1000) for x in res.x]
        den = 1
        for f in fr:
            den = lcm(den, f.denominator)
        w = [int(f * den) for f in fr]
        g = 0
        for a in w:
            g = gcd(g, a)
        w = [a // g for a in w]
    else:
        w = [1] * n
    if any(a <= 0 for a in w) or not all(c.is_homogeneous(w) for c in comps):
        return None, None
    tw = [c.wdegree(w) if c.terms else 1 for c in comps]
    return tuple(w), tuple(tw)


# ---- germ files --------------------------------------------------------

_KEYS = ("name", "source", "target", "map", "unfolds", "tags")


def parse_germ(text):
    """Parse the germ file format (one germ per file, ``#`` comments)."""
    fields = {}
    current = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word = line.split(None, 1)[0]
        if word in _KEYS:
            if word in fields:
                raise MalformedFile(f"duplicate clause {word!r}")
            current = word
            fields[word] = line[len(word):].strip()
        elif current == "map":
            fields["map"] += "; " + line
        else:
            raise MalformedFile(f"unexpected line {raw!r}")
    for k in ("source", "target", "map"):
        if k not in fields:
            raise MalformedFile(f"missing clause {k!r}")
    name = fields.get("name", "germ").strip().strip('"')
    source = _names(fields["source"])
    target = _names(fields["target"])
    if not source or not target:
        raise MalformedFile("empty variable list")
    assigned = {}
    for part in re.split(r"[;\n]", fields["map"]):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise MalformedFile(f"bad map entry {part!r}")
        lhs, rhs = (s.strip() for s in part.split("=", 1))
        if lhs not in target:
            raise MalformedFile(f"{lhs!r} is not a target variable")
        if lhs in assigned:
            raise MalformedFile(f"{lhs!r} assigned twice")
        assigned[lhs] = rhs
    missing = [t for t in target if t not in assigned]
    if missing:
        raise MalformedFile(f"no component for {missing}")
    ring = PolyRing(source)
    try:
        comps = [ring(assigned[t]) for t in target]
    except (PolynomialSyntaxError, KeyError, ValueError) as exc:
        raise MalformedFile(f"cannot parse component: {exc}") from exc
    unfolds = _names(fields.get("unfolds", ""))
    tags = _names(fields.get("tags", ""))
    try:
        return MapGerm(name, source, target, comps, unfolds, tags)
    except ValueError as exc:
        if isinstance(exc, GermError):
            raise
        raise MalformedFile(str(exc)) from exc


def _names(s):
    return [t for t in (x.strip() for x in s.replace(",", " ").split()) if t]


def catalog_names():
    return sorted(p.stem for p in CATALOG_DIR.glob("*.germ"))


def load_germ(spec):
    """A catalog name or a path to a germ file."""
    path = Path(spec)
    if path.suffix == ".germ" or path.exists():
        return parse_germ(path.read_text())
    cat = CATALOG_DIR / f"{spec}.germ"
    if not cat.exists():
        raise FileNotFoundError(f"no catalog germ or file named {spec!r}")
    return parse_germ(cat.read_text())


# ---- local algebra ---------------------------------------------------------


class LocalAlgebra:
    def __init__(self, ideal, basis):
        self.ideal = ideal
        self.basis = basis

    @property
    def q(self):
        return len(self.basis)

    def __repr__(self):
        return f"LocalAlgebra(q={self.q}, basis={{{', '.join(map(str, self.basis))}}})"


def sort_monomials(mons, ring):
    def key(p):
        (e,) = p.terms
        return (sum(a * w for a, w in zip(e, ring.weights)), sum(e), tuple(-a for a in e))

    return sorted(mons, key=key)


def local_algebra(f):
    I = Ideal(f.source, f.components)
    q, basis = I.local_vs_dim()
    if q == INFINITE:
        raise NotFinite(f"{f.name}: Q(f) is infinite dimensional")
    return LocalAlgebra(I, sort_monomials(basis, f.source))


# ---- corank-1 multiple point schemes ---------------------------------------


def fresh_names(base, count, taken):
    """``base1 .. base<count>``, adding underscores until nothing clashes."""
    stem = base
    while True:
        names = [f"{stem}{i}" for i in range(1, count + 1)]
        if not set(names) & set(taken):
            return names
        stem += "_"


class MultiplePointScheme:
    """``D^k(f)`` as an ideal in the ring ``x, y_1..y_k`` (or a doubled ring)."""

    def __init__(self, f, k, ring, ideal, generators=None, expected_dim=None, kind="divided"):
        self.f = f
        self.k = k
        self.ring = ring
        self.ideal = ideal
        self.generators = generators or {}
        self.expected_dim = expected_dim
        self.kind = kind

    @cached_property
    def dimension(self):
        return self.ideal.local_dimension()

    @property
    def empty(self):
        return self.dimension < 0

    @property
    def dimension_ok(self):
        return self.empty or self.expected_dim is None or self.dimension == self.expected_dim

    def __repr__(self):
        return f"MultiplePointScheme(D^{self.k}({self.f.name}), {len(self.ideal)} generators)"


class CorankOneLayout:
    """Variable naming for the rings ``x, y_1, ..., y_k`` of a corank-1 adapted germ."""

    def __init__(self, f):
        if not f.adapted:
            raise NotAdapted(f"{f.name}: components do not start with the source coordinates")
        if f.corank > 1:
            raise NotAdapted(f"{f.name} has corank {f.corank}")
        self.f = f
        self.x = list(f.source.names[:-1])
        self.y = f.source.names[-1]
        self.wx = list(f.source.weights[:-1])
        self.wy = f.source.weights[-1]

    def ys(self, k):
        return fresh_names(self.y, k, self.x)

    def ring(self, k):
        return PolyRing(self.x + self.ys(k), self.wx + [self.wy] * k)

    def point(self, k, i):
        """Substitution source -> ring(k) sending y to y_i (1-based)."""
        R = self.ring(k)
        m = {v: R.var(v) for v in self.x}
        m[self.y] = R.var(self.ys(k)[i - 1])
        return m

    def target_pullback(self, k, i=1):
        """Target variable -> ``f_j(x, y_i)`` in ring(k)."""
        R = self.ring(k)
        pt = self.point(k, i)
        return {t: c.subs(pt, R) for t, c in zip(self.f.target.names, self.f.components)}


def divided_differences(f, k):
    """``R_i^j`` for ``i = 1..k-1`` and the non-identity components ``j``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    lay = CorankOneLayout(f)
    R = lay.ring(k)
    ys = lay.ys(k)
    comps = list(f.components[f.n - 1:])
    table = {}
    gens = []
    for jj, c in enumerate(comps):
        j = f.n - 1 + jj + 1  # 1-based component index
        prev = c.subs(lay.point(k, 1), R)
        for i in range(1, k):
            # prev is R_{i-1}(y_1..y_i); swap y_i -> y_{i+1} and interpolate
            shifted = prev.subs({ys[i - 1]: R.var(ys[i])}, R)
            num = shifted - prev
            den = R.var(ys[i]) - R.var(ys[i - 1])
            cur = num.exact_quotient(den)
            table[(i, j)] = cur
            gens.append(cur)
            prev = cur
    ideal = Ideal(R, gens)
    expected = f.n - k + 1
    return MultiplePointScheme(f, k, R, ideal, table, expected, "divided")


def dk_scheme(f, k):
    return divided_differences(f, k)


def projection_multiplicity(f, k):
    """``q(pi^k_{k-1})``: vs-dim of ``I_k + (x, y_1..y_{k-1})``."""
    if k == 1:
        return f.q
    S = divided_differences(f, k)
    lay = CorankOneLayout(f)
    R = S.ring
    extra = [R.var(v) for v in lay.x + lay.ys(k)[:-1]]
    q, _ = (S.ideal + extra).local_vs_dim()
    return q


# ---- any corank: doubled ring ------------------------------------------------


class DoubledLayout:
    """Doubled source ring; identity components are collapsed (``x^2_i := x^1_i``)."""

    def __init__(self, f, collapse=True):
        self.f = f
        m = f.identity_prefix if collapse else 0
        names = f.source.names
        w = f.source.weights
        self.shared = list(names[:m])
        self.free = list(names[m:])
        taken = set(names)
        self.first, self.second = [], []
        for v in self.free:
            a, b = fresh_names(v, 2, taken)
            taken.update((a, b))
            self.first.append(a)
            self.second.append(b)
        wf = list(w[m:])
        self.ring = PolyRing(self.shared + self.first + self.second, list(w[:m]) + wf + wf)

    def copy(self, which):
        """Substitution source -> doubled ring for copy 1 or 2."""
        R = self.ring
        names = self.first if which == 1 else self.second
        m = {v: R.var(v) for v in self.shared}
        for v, t in zip(self.free, names):
            m[v] = R.var(t)
        return m

    def first_factor_ring(self):
        return self.ring.subring(self.shared + self.first)

    def to_source(self):
        """Rename the first-copy variables back to source names (ring map into ``f.source``)."""
        src = self.f.source
        m = {v: src.var(v) for v in self.shared}
        for v, t in zip(self.free, self.first):
            m[t] = src.var(v)
        return m


def alpha_matrix(f, layout=None):
    """``p x n`` matrix with ``f_j(x^1) - f_j(x^2) = sum_i alpha_ji (x^1_i - x^2_i)``.

    Telescoping in ascending variable order: step ``i`` moves variable ``i``
    from the first copy to the second.  Over a collapsed layout, identity
    variables are shared and contribute nothing; their columns are
    the unit vectors of the identity components.
    """
    lay = layout or DoubledLayout(f, collapse=False)
    R = lay.ring
    names = f.source.names
    c1, c2 = lay.copy(1), lay.copy(2)
    rows = []
    for c in f.components:
        row = []
        for i, v in enumerate(names):
            if v in lay.shared:
                # collapsed coordinate: only its own identity component sees it
                row.append(R.one() if c == f.source.var(v) else R.zero())
                continue
            before = {}
            after = {}
            for j, u in enumerate(names):
                if j < i:
                    before[u] = c2[u]
                    after[u] = c2[u]
                elif j == i:
                    before[u] = c1[u]
                    after[u] = c2[u]
                else:
                    before[u] = c1[u]
                    after[u] = c1[u]
            num = c.subs(before, R) - c.subs(after, R)
            row.append(num.exact_quotient(c1[v] - c2[v]))
        rows.append(row)
    return PolyMatrix(R, rows)


def d2_general(f, collapse=True):
    """Double point scheme of any corank: differences plus maximal minors of ``alpha``."""
    lay = DoubledLayout(f, collapse)
    R = lay.ring
    c1, c2 = lay.copy(1), lay.copy(2)
    diffs = []
    for c in f.components:
        d = c.subs(c1, R) - c.subs(c2, R)
        if d:
            diffs.append(d)
    alpha = alpha_matrix(f, lay)
    minors = alpha.minors(f.n)
    S = MultiplePointScheme(f, 2, R, Ideal(R, diffs + minors), {"alpha": alpha}, f.n - 1, "doubled")
    S.layout = lay
    return S


def d2_projection_multiplicity(f):
    """``q(pi^2_1)`` and a monomial basis in the second-copy variables."""
    S = d2_general(f)
    lay = S.layout
    R = S.ring
    extra = [R.var(v) for v in lay.shared + lay.first]
    q, basis = (S.ideal + extra).local_vs_dim()
    if q == INFINITE:
        raise NotFinite("pi^2_1 is not finite")
    return q, sort_monomials(basis, R)


# ---- unfoldings and iteration ------------------------------------------------


def restrict_unfolding(F, parameters, k):
    """``I_k(F)`` with the unfolding parameters set to zero."""
    parameters = list(parameters)
    lay = CorankOneLayout(F)
    carried = {str(c) for c in F.components}
    for u in parameters:
        if u not in F.source.index or u == lay.y:
            raise NotAnUnfolding(f"{u} is not a parameter of {F.name}")
        if u not in carried:
            raise NotAnUnfolding(f"{u} is not carried identically to the target")
    S = divided_differences(F, k)
    keep = [v for v in S.ring.names if v not in parameters]
    sub = S.ring.subring(keep)
    zero = {u: 0 for u in parameters}
    gens = [g.subs(zero, sub) if parameters else g for g in S.ideal.gens]
    if not parameters:
        gens = [g.to_ring(sub) for g in gens]
    table = {key: (g.subs(zero, sub) if parameters else g.to_ring(sub)) for key, g in S.generators.items()}
    return MultiplePointScheme(F, k, sub, Ideal(sub, gens), table, F.n - len(parameters) - k + 1, "restricted")


def restricted_germ(F, parameters):
    """The germ ``F`` with ``parameters`` set to zero (and their target coordinates dropped)."""
    parameters = set(parameters)
    src = [v for v in F.source.names if v not in parameters]
    ring = PolyRing(src)
    zero = {u: 0 for u in parameters}
    comps, tgt = [], []
    for t, c in zip(F.target.names, F.components):
        if str(c) in parameters:
            continue
        tgt.append(t)
        comps.append(c.subs(zero, ring) if parameters else c.to_ring(ring))
    return MapGerm(F.name + "|" + ",".join(sorted(parameters)), src, tgt, comps)


class Parametrization:
    """``D = graph of v -> p_v(S)``: ``params`` are free, ``solved`` maps the rest."""

    def __init__(self, ring, params, solved):
        self.ring = ring
        self.params = params
        self.param_ring = ring.subring(params)
        self.solved = solved

    def substitution(self):
        m = {v: self.param_ring.var(v) for v in self.params}
        m.update(self.solved)
        return m

    def pull(self, p):
        return p.subs(self.substitution(), self.param_ring)


def parametrize(ideal, prefer=()):
    """Find variables ``S`` with ``ideal = (v - p_v(S))`` (a global graph); ``None`` if none.

    Subsets are tried in order of size ``dim``, preferring the names in ``prefer``.
    """
    from itertools import combinations

    R = ideal.ring
    d = ideal.local_dimension()
    if d < 0:
        return None
    names = list(R.names)
    pref = [v for v in prefer if v in names] + [v for v in names if v not in prefer]
    for S in combinations(pref, d):
        rest = [v for v in names if v not in S]
        order = MonomialOrder.elimination(R.nvars, [R.index[v] for v in rest], R.weights)
        sb = ideal.standard_basis(order)
        polys = sb.polys
        if len(polys) != len(rest):
            continue
        solved = {}
        ok = True
        for g in polys:
            e = g.lead_exponent(order)
            lead_vars = [i for i, a in enumerate(e) if a]
            if sum(e) != 1 or R.names[lead_vars[0]] not in rest:
                ok = False
                break
            v = R.names[lead_vars[0]]
            tail = g - g.terms[e] * R.var(v)
            if any(x in rest for x in tail.variables()):
                ok = False
                break
            solved[v] = (-tail / g.terms[e])
        if ok and len(solved) == len(rest):
            Sr = list(S)
            sub = R.subring(Sr)
            return Parametrization(R, Sr, {v: p.to_ring(sub) for v, p in solved.items()})
    return None


def projection_as_germ(f, k):
    """``pi^k_{k-1}`` on a graph-parametrized ``D^k(f)`` written in adapted form.

    Returns ``(germ, parametrization)``; the germ's last source variable is
    ``y_k``, leading identity components are the remaining free variables.
    ``None`` if ``D^k`` is not a graph, or if ``y_k`` is not free (then the
    projection is an immersion).
    """
    S = divided_differences(f, k)
    lay = CorankOneLayout(f)
    ys = lay.ys(k)
    par = parametrize(S.ideal, prefer=list(reversed(ys)))
    if par is None:
        return None, None
    yk = ys[-1]
    if yk not in par.params:
        return "immersion", par
    lead = [v for v in lay.x + ys[:-1] if v in par.params]
    src = lead + [yk]
    ring = PolyRing(src)
    sub = par.substitution()
    tgt_names = lead[:]
    comps = [ring.var(v) for v in lead]
    for v in lay.x + ys[:-1]:
        if v in lead:
            continue
        tgt_names.append(v)
        comps.append(sub[v].to_ring(ring))
    # order target coordinates so the identity prefix comes first
    g = MapGerm(f"pi^{k}_{k - 1}({f.name})", src, [t.upper() + "_" for t in tgt_names], comps)
    return g, par


def verify_iteration(f, k, s):
    """``I_s(pi^k_{k-1})`` relabelled equals ``I_{k+s-1}(f)`` locally."""
    if s == 1:
        return True
    lay = CorankOneLayout(f)
    big = divided_differences(f, k + s - 1)
    R = big.ring
    g, par = projection_as_germ(f, k)
    if g is None:
        raise NotAdapted(f"D^{k}({f.name}) is not graph-parametrizable")
    if g == "immersion":
        left = Ideal(R, [R.one()])
        return ideal_equal_local(left, big.ideal)
    Ds = divided_differences(g, s)
    ys = lay.ys(k + s - 1)
    # relabel: the s copies of y_k become y_k, ..., y_{k+s-1}
    copies = fresh_names(g.source.names[-1], s, g.source.names[:-1])
    ren = {v: R.var(v) for v in g.source.names[:-1]}
    for t, c in enumerate(copies):
        ren[c] = R.var(ys[k - 1 + t])
    gens = [h.subs(ren, R) for h in Ds.ideal.gens]
    # the solved coordinates of the first point
    first = {v: R.var(v) for v in par.params}
    for v, p in par.solved.items():
        gens.append(R.var(v) - p.subs(first, R))
    return ideal_equal_local(Ideal(R, gens), big.ideal)
