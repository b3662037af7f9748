"""Machine checks of the multiple point claims, each producing a structured report.

Every check compares objects built along two independent routes: the
symmetric presentation ``Lambda`` on one side, and kernels, eliminations or
syzygies computed from the defining ideals on the other.  Ideals are compared
in the local ring at the origin unless the global mode is active.

Evidence items carry ``equal``: for comparisons it records ideal equality,
for inclusions and structural checks whether the check holds.  ``expected``
is the outcome the claim predicts (``None`` for purely informational items),
and a failed item always carries a ``witness``.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from .algebra import Ideal, PolyMatrix, PolyRing, ideal_witness, minimal_columns, syzygies
from .germs import (
    CorankOneLayout,
    GermError,
    NotAnUnfolding,
    NotFinite,
    divided_differences,
    fresh_names,
    load_germ,
    parametrize,
    restricted_germ,
    sort_monomials,
    verify_iteration,
)
from .presentations import (
    d2_oracle,
    hk_generators,
    pushforward_presentation,
    submatrix,
    symmetric_presentation,
    tensor_square,
)
from .pushforward import present_over_subring

VERIFIED = "verified"
REFUTED = "refuted"
UNSUPPORTED = "unsupported"
SKIPPED = "skipped"
STATUSES = (VERIFIED, REFUTED, UNSUPPORTED, SKIPPED)


class OutOfRange(ValueError):
    """``k`` outside ``1..min(r, n)``."""


class Unsupported(RuntimeError):
    """The check's precondition cannot be established by the tool."""


@dataclass
class Evidence:
    check: str
    ideal_left: list = field(default_factory=list)
    ideal_right: list = field(default_factory=list)
    equal: bool | None = None
    witness: str | None = None
    expected: bool | None = True
    detail: dict = field(default_factory=dict)

    @property
    def holds(self):
        return self.expected is None or self.equal == self.expected

    def to_json(self):
        d = {
            "check": self.check,
            "ideal_left": list(self.ideal_left),
            "ideal_right": list(self.ideal_right),
            "equal": self.equal,
            "expected": self.expected,
        }
        if self.witness is not None:
            d["witness"] = self.witness
        if self.detail:
            d["detail"] = self.detail
        return d

    @classmethod
    def from_json(cls, d):
        return cls(
            d["check"], d.get("ideal_left", []), d.get("ideal_right", []), d.get("equal"),
            d.get("witness"), d.get("expected", True), d.get("detail", {}),
        )


@dataclass
class VerificationReport:
    claim: str
    germ: str
    params: dict = field(default_factory=dict)
    status: str = VERIFIED
    evidence: list = field(default_factory=list)
    oracle: str = ""
    wall_ms: int = 0
    reason: str | None = None

    def add(self, ev):
        self.evidence.append(ev)
        if not ev.holds and self.status == VERIFIED:
            self.status = REFUTED
        return ev

    def find(self, check):
        return [e for e in self.evidence if e.check == check]

    @property
    def ok(self):
        return self.status == VERIFIED

    def to_json(self):
        d = {
            "claim": self.claim,
            "germ": self.germ,
            "params": self.params,
            "status": self.status,
            "evidence": [e.to_json() for e in self.evidence],
            "oracle": self.oracle,
            "wall_ms": self.wall_ms,
        }
        if self.reason is not None:
            d["reason"] = self.reason
        return d

    @classmethod
    def from_json(cls, d):
        return cls(
            d["claim"], d["germ"], d.get("params", {}), d["status"],
            [Evidence.from_json(e) for e in d.get("evidence", [])],
            d.get("oracle", ""), d.get("wall_ms", 0), d.get("reason"),
        )

    def summary(self):
        p = ", ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        head = f"{self.claim}({self.germ}{', ' + p if p else ''}): {self.status}"
        if self.reason:
            head += f" - {self.reason}"
        return head


def dumps(obj):
    """Canonical JSON: sorted keys, fixed indentation; parsing and re-dumping is byte-identical."""
    if isinstance(obj, VerificationReport):
        obj = obj.to_json()
    elif isinstance(obj, list):
        obj = [o.to_json() if isinstance(o, VerificationReport) else o for o in obj]
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


class _timed:
    def __init__(self, report):
        self.report = report

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self.report

    def __exit__(self, *exc):
        self.report.wall_ms = int(round((time.perf_counter() - self.t0) * 1000))
        return False


# ---- ideal comparisons -----------------------------------------------------


def _strings(I):
    return [str(g) for g in I.gens]


def compare(check, I, J, local=None, expected=True, **detail):
    """Equality of ``I`` and ``J``; the witness is a generator of one missing from the other."""
    w = ideal_witness(J, I, local)
    if w is None:
        w = ideal_witness(I, J, local)
    return Evidence(check, _strings(I), _strings(J), w is None, None if w is None else str(w), expected, detail)


def contained(check, I, J, local=None, expected=True, **detail):
    """``I`` inside ``J``; the witness is a generator of ``I`` not in ``J``."""
    w = ideal_witness(J, I, local)
    return Evidence(check, _strings(I), _strings(J), w is None, None if w is None else str(w), expected, detail)


def compare_truncated(check, I, J, degree, expected=True, **detail):
    """Equality in weighted degrees ``<= degree`` (homogeneous ideals only, otherwise exact)."""
    if not (I.is_homogeneous() and J.is_homogeneous()):
        return compare(check, I, J, expected=expected, truncated=False, **detail)
    w = None
    for A, B in ((J, I), (I, J)):
        sb = A.standard_basis(A.default_order(local=False), degree_bound=degree)
        for g in B.gens:
            if g.wdegree() <= degree and not sb.reduces_to_zero(g):
                w = g
                break
        if w is not None:
            break
    return Evidence(check, _strings(I), _strings(J), w is None, None if w is None else str(w), expected,
                    dict(detail, truncated=degree))


def _fact(check, holds, witness=None, expected=True, left=(), right=(), **detail):
    return Evidence(check, list(left), list(right), bool(holds), None if holds else (witness or "failed"),
                    expected, detail)


# ---- shared constructions ------------------------------------------------------


def pulled_submatrix(f, Lam, k):
    """``f^(k)* Lambda^k_k`` in the ring of ``D^k``, along the first point."""
    lay = CorankOneLayout(f)
    kk = max(k, 1)
    return submatrix(Lam, k).subs(lay.target_pullback(kk), lay.ring(kk))


def oracle_presentation(f, k):
    """``O_{D^{k+1}}`` over ``O_{D^k}`` w.r.t. the ladder ``g^(k+1)``, without using ``Lambda``.

    Kernel of ``S^m -> O_{D^{k+1}}`` over ``S = k[x, y_1..y_k]``, columns
    vanishing modulo ``I_k`` dropped.  An empty ``D^{k+1}`` (no ladder
    generators left) gives the unit presentation of the zero module.
    """
    lay = CorankOneLayout(f)
    r = f.q - 1
    R = lay.ring(k + 1)
    ys = lay.ys(k + 1)
    keep = lay.x + ys[:k]
    S = R.subring(keep)
    if r - k + 1 <= 0:
        return PolyMatrix(S, [[S.one()]])
    gens = hk_generators(k + 1, r, R, ys)
    Ik1 = divided_differences(f, k + 1).ideal
    Ik = divided_differences(f, k).ideal
    return present_over_subring(Ik1, keep, gens, base_ideal=Ik).matrix


def d2_over_source(f):
    """Oracle presentation of ``(pi^2_1)_* O_{D^2}`` over the source ring."""
    src = f.source
    if f.corank <= 1:
        S = divided_differences(f, 2)
        lay = CorankOneLayout(f)
        R = S.ring
        ys = lay.ys(2)
        q, basis = (S.ideal + [R.var(v) for v in lay.x + ys[:1]]).local_vs_dim()
        if not q:
            return PolyMatrix(src, [[src.one()]])
        if basis is None:
            raise NotFinite("pi^2_1 is not finite")
        pres = present_over_subring(S.ideal, lay.x + ys[:1], sort_monomials(basis, R))
        m = {v: src.var(v) for v in lay.x}
        m[ys[0]] = src.var(lay.y)
        return pres.matrix.subs(m, src)
    S, pres = d2_oracle(f)
    return pres.matrix.subs(S.layout.to_source(), src)


def _pullback_ideal(f, I):
    return Ideal(f.source, [f.pullback(g) for g in I.gens])


def _range(f):
    return min(f.q - 1, f.n)


# ---- the claims --------------------------------------------------------------


def check_hypotheses(f):
    """Finite, corank at most 1, generically one-to-one, every ``D^k`` of the expected dimension."""
    rep = VerificationReport("hypotheses", f.name, oracle="staircase of Q(f); divided-difference ideals I_k")
    with _timed(rep):
        try:
            q = f.q
        except NotFinite as exc:
            rep.add(_fact("finite", False, str(exc)))
            return rep
        rep.add(_fact("finite", True, left=_strings(f.local_algebra.ideal), q=q))
        c = f.corank
        rep.add(_fact("corank", c <= 1, f"corank {c}", corank=c))
        if c > 1:
            return rep
        try:
            sp = symmetric_presentation(f)
        except (GermError, ValueError, ArithmeticError, AssertionError) as exc:
            rep.add(_fact("presentation", False, f"{type(exc).__name__}: {exc}"))
            return rep
        if sp.r == 0:
            rep.add(_fact("generically_one_to_one", True, note="immersion: Lambda^1_1 is empty"))
        else:
            d = pulled_submatrix(f, sp.matrix, 1).det()
            rep.add(_fact("generically_one_to_one", not d.is_zero(), "det f*Lambda^1_1 = 0",
                          left=[str(d)]))
        for k in range(2, q + 2):
            S = divided_differences(f, k)
            dim = S.dimension
            rep.add(_fact(f"dimension_D{k}", S.dimension_ok,
                          f"dim D^{k} = {dim}, expected {S.expected_dim} or empty",
                          left=_strings(S.ideal), k=k, dimension=dim, expected_dimension=S.expected_dim))
    return rep


def verify_main_theorem(f, k, presentation=None):
    """Exactness of ``0 -> O^{r-k+1} -> O^{r-k+1} -> O_{D^{k+1}} -> 0`` over ``O_{D^k}``.

    ``presentation`` replaces ``f``'s own symmetric presentation (target matrix).
    """
    rk = _range(f)
    if not 1 <= k <= rk:
        raise OutOfRange(f"k={k} outside 1..{rk} for {f.name}")
    rep = VerificationReport("main_theorem", f.name, {"k": k},
                             oracle="kernel of S^m -> O_{D^{k+1}} over S = O(x, y_1..y_k), Lambda-free")
    with _timed(rep):
        Lam = presentation if presentation is not None else symmetric_presentation(f).matrix
        r = f.q - 1
        lay = CorankOneLayout(f)
        L = pulled_submatrix(f, Lam, k)
        Rk = lay.ring(k)
        R1 = lay.ring(k + 1)
        Ik = divided_differences(f, k).ideal
        Ik1 = divided_differences(f, k + 1).ideal
        # (a) relations on the ladder vector
        G = hk_generators(k + 1, r, R1, lay.ys(k + 1))
        L1 = L.to_ring(R1)
        rel = []
        for j in range(L1.ncols):
            s = R1.zero()
            for i, g in enumerate(G):
                if L1[i, j]:
                    s = s + g * L1[i, j]
            rel.append(s)
        bad = [s for s in rel if not Ik1.contains(s)]
        rep.add(_fact("relations", not bad, str(bad[0]) if bad else None,
                      left=[str(s) for s in rel], right=_strings(Ik1)))
        # (b) cokernel: Fitting chains against the oracle, modulo I_k
        O = oracle_presentation(f, k).to_ring(Rk)
        g = L.nrows
        for i in range(g + 1):
            rep.add(compare(f"fitting_{i}", L.fitting_ideal(i) + Ik, O.fitting_ideal(i) + Ik, i=i))
        # (c) injectivity: det is a nonzerodivisor modulo I_k
        d = L.det()
        outside = not Ik.contains(d)
        d0 = Ik.local_dimension()
        d1 = (Ik + [d]).local_dimension()
        rep.add(_fact("injective", outside and d1 < d0, f"det {d} does not lower dim D^{k}",
                      left=[str(d)], right=_strings(Ik), dim_Dk=d0, dim_with_det=d1))
    return rep


def verify_fitting_correspondence(f, i_max=None, degree_bound=None):
    """``Fitt_i(f^* f_* O) = Fitt_{i-1}((pi^2_1)_* O_{D^2})`` for ``1 <= i <= i_max``.

    The claim covers every ``i`` in corank 1 and only ``i <= 2`` in higher
    corank; beyond that the outcome is reported without being predicted.
    With ``degree_bound`` the ideals are compared up to that weighted degree.
    """
    i_max = f.q if i_max is None else i_max
    params = {"i_max": i_max}
    if degree_bound is not None:
        params["degree_bound"] = degree_bound
    rep = VerificationReport("fitting_correspondence", f.name, params,
                             oracle="kernel presentation of O_{D^2} over the first factor")
    with _timed(rep):
        if f.corank <= 1:
            Lam = symmetric_presentation(f).matrix
        else:
            Lam = pushforward_presentation(f).matrix
        P = d2_over_source(f)
        for i in range(1, i_max + 1):
            left = _pullback_ideal(f, Lam.fitting_ideal(i))
            right = P.fitting_ideal(i - 1)
            expected = True if f.corank <= 1 or i <= 2 else None
            if degree_bound is None:
                rep.add(compare(f"fitting_{i}", left, right, expected=expected, i=i))
            else:
                rep.add(compare_truncated(f"fitting_{i}", left, right, degree_bound, expected=expected, i=i))
    return rep


def verify_kernel_mu(f):
    """``f^*Lambda^1_1`` presents ``Ker(mu)``; in corank 1 its Fitting chain is that of ``O_{D^2}``."""
    rep = VerificationReport("kernel_mu", f.name,
                             oracle="kernel presentation of Ker(mu) inside the tensor square")
    with _timed(rep):
        ts = tensor_square(f)
        if not ts.kernel_generators:
            rep.add(_fact("kernel_zero", True, note="Ker(mu) = 0, empty presentation"))
            return rep
        pres = ts.kernel_presentation()
        K = pres.matrix
        B = pres.subring
        R = ts.ring
        lay = ts.layout
        src = f.source
        D2 = d2_over_source(f)
        Ksrc = K.subs(lay.to_source(), src)
        if f.corank <= 1:
            Lam = symmetric_presentation(f).matrix
            c1 = lay.copy(1)
            pull = {t: c.subs(c1, R).to_ring(B) for t, c in zip(f.target.names, f.components)}
            L1 = submatrix(Lam, 1).subs(pull, B)
            rel = []
            for j in range(L1.ncols):
                s = R.zero()
                for i, g in enumerate(ts.kernel_generators):
                    if L1[i, j]:
                        s = s + g * L1[i, j].to_ring(R)
                rel.append(s)
            bad = [s for s in rel if not ts.ideal.contains(s)]
            rep.add(_fact("relations", not bad, str(bad[0]) if bad else None,
                          left=[str(s) for s in rel], right=_strings(ts.ideal)))
            for i in range(L1.nrows + 1):
                rep.add(compare(f"fitting_{i}", L1.fitting_ideal(i), K.fitting_ideal(i), i=i))
            for i in range(max(Ksrc.nrows, D2.nrows) + 1):
                rep.add(compare(f"t_route_fitting_{i}", Ksrc.fitting_ideal(i), D2.fitting_ideal(i), i=i))
        else:
            rep.oracle += "; compared with O_{D^2} (isomorphism fails beyond corank 1)"
            differ = []
            for i in range(max(Ksrc.nrows, D2.nrows) + 1):
                ev = rep.add(compare(f"chain_{i}", Ksrc.fitting_ideal(i), D2.fitting_ideal(i),
                                     expected=None, i=i))
                if not ev.equal:
                    differ.append(i)
            rep.add(_fact("chains_differ", bool(differ), "Fitting chains of Ker(mu) and O_{D^2} agree",
                          indices=differ))
    return rep


def _power_in(p, I, bound):
    """Smallest ``e <= bound`` with ``p^e`` in ``I`` (locally), or ``None``."""
    t = p
    for e in range(1, bound + 1):
        if I.contains(t):
            return e
        t = t * p
    return None


def verify_complete_intersection(f, k):
    """``(det f*Lambda^1_1, ..., det f*Lambda^{k-1}_{k-1})`` cuts out ``D^k_1`` (set-level check only)."""
    rep = VerificationReport("complete_intersection", f.name, {"k": k},
                             oracle="elimination of I_k to the first source factor; set-level check only")
    with _timed(rep):
        src = f.source
        Lam = symmetric_presentation(f).matrix
        dets = [submatrix(Lam, j).subs(f.graph_map(), src).det() for j in range(1, k)]
        J = Ideal(src, dets)
        expected = f.n - k + 1
        dj = J.local_dimension()
        S = divided_differences(f, k)
        lay = CorankOneLayout(f)
        ys = lay.ys(k)
        E = S.ideal.eliminate(ys[1:])
        m = {v: src.var(v) for v in lay.x}
        m[ys[0]] = src.var(lay.y)
        E = E.subs(m, src)
        de = E.local_dimension()
        rep.add(_fact("dimension", dj == expected, f"dim = {dj}", left=_strings(J), dimension=dj,
                      expected_dimension=expected))
        rep.add(_fact("dimension_Dk1", de == dj, f"dim D^k_1 = {de}", left=_strings(E), dimension=de))
        bound = max(f.q, 2) * max(k, 1)
        for name, A, B in (("Dk1_in_rad", E, J), ("rad_contains_Dk1", J, E)):
            bad = None
            powers = {}
            for g in A.gens:
                e = _power_in(g, B, bound)
                if e is None:
                    bad = g
                    break
                powers[str(g)] = e
            rep.add(_fact(name, bad is None, str(bad) if bad is not None else None,
                          left=_strings(A), right=_strings(B), powers=powers))
    return rep


def _saito(prefix, St, par):
    """Evidence that ``{St = 0}`` is free: ``m`` logarithmic derivations with determinant ``unit * St``."""
    T = par.param_ring
    ts = par.params
    m = len(ts)
    out = []
    if St.is_zero():
        out.append(_fact(prefix + "nonzero", False, "S vanishes identically"))
        return out
    vecs = [[St.derivative(t)] for t in ts] + [[St]]
    derivs = [c[:m] for c in syzygies(T, vecs) if any(c[:m])]
    rdeg = [-T.weights[T.index[t]] for t in ts]
    D = minimal_columns(PolyMatrix.from_columns(T, derivs, m), row_degrees=rdeg)
    out.append(_fact(prefix + "generators", D.ncols == m,
                     f"{D.ncols} minimal logarithmic derivations, need {m}",
                     left=[str(St)], generators=D.ncols, parameters=list(ts)))
    if D.ncols == m:
        det = D.det()
        out.append(compare(prefix + "saito_determinant", Ideal(T, [det]), Ideal(T, [St]),
                           determinant=str(det), derivations=D.to_strings()))
    return out


def free_divisor_check(f, k):
    """Saito's criterion for ``S = det f*Lambda^{k-1}_{k-1} * det f*Lambda^k_k`` on a parametrized ``D^k``.

    The first factor annihilates ``O_{D^k}``, so for ``k >= 2`` this ``S``
    vanishes on all of ``D^k`` and the check fails.  The divisor governing
    ``O_{D^{k+1}}`` over ``D^k``, ``det f*Lambda^k_k * det f*Lambda^{k+1}_{k+1}``,
    is tested as well and reported without a prediction.
    """
    rep = VerificationReport("free_divisor", f.name, {"k": k},
                             oracle="logarithmic derivations from syzygies of (dS/dt_1, ..., dS/dt_m, S)")
    with _timed(rep):
        sp = symmetric_presentation(f)
        if k == 1:
            full = sp.det.subs(f.graph_map(), f.source)
            rep.add(_fact("trivial_k1", full.is_zero(), f"det f*Lambda = {full}", left=[str(full)]))
        S = divided_differences(f, k)
        par = parametrize(S.ideal, prefer=list(CorankOneLayout(f).ys(k)))
        if par is None and k == 1:
            return rep
        if par is None:
            rep.status = SKIPPED if not f.stable else UNSUPPORTED
            rep.reason = f"D^{k} is not graph-parametrizable" + ("" if f.stable else " and the germ is not stable")
            return rep
        if not f.stable and k > 1:
            rep.oracle += "; germ not tagged stable, D^k is a smooth graph so the check still applies"

        def det_on_dk(j):
            if j > sp.r:
                return S.ring.one()
            return pulled_submatrix(f, sp.matrix, j).to_ring(S.ring).det()

        if k > 1:
            St = par.pull(det_on_dk(k - 1) * det_on_dk(k))
            for ev in _saito("", St, par):
                rep.add(ev)
        Sn = par.pull(det_on_dk(k) * det_on_dk(k + 1))
        for ev in _saito("next.", Sn, par):
            ev.expected = None
            rep.add(ev)
    return rep


def verify_remark_corank2():
    """``Fitt_3`` of ``O_{D^2}`` over the source for the corank-2 germ: inside ``m``, outside ``f*m``."""
    f = load_germ("corank2")
    rep = VerificationReport("remark_corank2", f.name, {"i": 3},
                             oracle="kernel presentation of O_{D^2} over the first factor")
    with _timed(rep):
        src = f.source
        P = d2_over_source(f)
        m = Ideal(src, src.gens())
        fm = Ideal(src, list(f.components))
        F3 = P.fitting_ideal(3)
        rep.add(contained("fitt3_in_m", F3, m, generators=P.nrows))
        ev = contained("fitt3_in_f_m", F3, fm, expected=False)
        if ev.equal is False:
            ev.detail["witness_not_in_f_m"] = ev.witness
        rep.add(ev)
        rep.add(contained("fitt0_in_fitt3", P.fitting_ideal(0), F3))
        # the ideal of entries, Fitt_{g-1}, reported alongside
        top = P.nrows - 1
        Fe = P.fitting_ideal(top)
        rep.add(contained(f"fitt{top}_in_m", Fe, m, expected=None, i=top))
        rep.add(contained(f"fitt{top}_in_f_m", Fe, fm, expected=None, i=top))
    return rep


def _check_parameters(F, parameters):
    lay = CorankOneLayout(F)
    carried = {str(c) for c in F.components}
    for u in parameters:
        if u not in F.source.index or u == lay.y or u not in carried:
            raise NotAnUnfolding(f"{u} is not an unfolding parameter of {F.name}")


def pushforward_oracle(f):
    """``f_* O`` over the target w.r.t. ``1, y, ..., y^r``, from the graph ideal (no ``Lambda``)."""
    taken = set(f.target.names)
    src_names = []
    for v in f.source.names:
        if v in taken:
            v = fresh_names(v, 1, taken | set(f.source.names))[0]
        src_names.append(v)
        taken.add(v)
    A = PolyRing(src_names + list(f.target.names), list(f.source.weights) + list(f.target.weights))
    ren = {v: A.var(w) for v, w in zip(f.source.names, src_names)}
    graph = Ideal(A, [A.var(t) - c.subs(ren, A) for t, c in zip(f.target.names, f.components)])
    y = A.var(src_names[-1])
    gens = [y ** i for i in range(f.q)]
    pres = present_over_subring(graph, list(f.target.names), gens)
    return pres.matrix.to_ring(f.target)


def verify_glambda(F, parameters, k):
    """``Lambda_F`` restricted to zero parameters is a minimal presentation for the restricted germ."""
    parameters = list(parameters)
    _check_parameters(F, parameters)
    rep = VerificationReport("glambda", F.name, {"k": k, "parameters": parameters},
                             oracle="pushforward of the restricted germ by elimination; main theorem oracle")
    with _timed(rep):
        f = restricted_germ(F, parameters) if parameters else F
        spF = symmetric_presentation(F)
        m = {}
        for t, c in zip(F.target.names, F.components):
            m[t] = 0 if str(c) in parameters else f.target.var(t)
        Lr = spF.matrix.subs(m, f.target)
        rep.add(_fact("symmetric", Lr.is_symmetric(), "restriction is not symmetric"))
        units = [str(e) for r in Lr.rows for e in r if e.constant_term()]
        rep.add(_fact("minimal", not units, units[0] if units else None))
        y = f.source.var(f.source.names[-1])
        G = [y ** i for i in range(Lr.nrows)]
        pulled = Lr.subs(f.graph_map(), f.source)
        rel = []
        for j in range(pulled.ncols):
            s = f.source.zero()
            for g, row in zip(G, pulled.rows):
                s = s + g * row[j]
            rel.append(s)
        bad = [s for s in rel if s]
        rep.add(_fact("relations", not bad, str(bad[0]) if bad else None, left=[str(s) for s in rel]))
        O = pushforward_oracle(f)
        for i in range(Lr.nrows + 1):
            rep.add(compare(f"pushforward_fitting_{i}", Lr.fitting_ideal(i), O.fitting_ideal(i), i=i))
        if k >= 1:
            if k > _range(f):
                rep.add(_fact("main_theorem_range", False, f"k={k} outside 1..{_range(f)}"))
            else:
                sub = verify_main_theorem(f, k, presentation=Lr)
                for ev in sub.evidence:
                    ev.check = "main_theorem." + ev.check
                    rep.add(ev)
    return rep


def verify_iteration_report(f, k, s):
    """``I_s(pi^k_{k-1})`` agrees with ``I_{k+s-1}(f)`` after relabelling."""
    rep = VerificationReport("iteration", f.name, {"k": k, "s": s},
                             oracle="divided differences of the projection germ on a parametrized D^k")
    with _timed(rep):
        try:
            ok = verify_iteration(f, k, s)
        except GermError as exc:
            rep.status = UNSUPPORTED
            rep.reason = str(exc)
            return rep
        rep.add(_fact("ideals_agree", ok, f"I_{s}(pi^{k}_{k - 1}) differs from I_{k + s - 1}"))
    return rep


# ---- suites ----------------------------------------------------------------

CLAIMS = {
    "hypotheses": lambda f, **kw: check_hypotheses(f),
    "main_theorem": lambda f, k: verify_main_theorem(f, k),
    "fitting_correspondence": lambda f, i_max=None, degree_bound=None: verify_fitting_correspondence(
        f, i_max, degree_bound
    ),
    "kernel_mu": lambda f, **kw: verify_kernel_mu(f),
    "complete_intersection": lambda f, k: verify_complete_intersection(f, k),
    "free_divisor": lambda f, k: free_divisor_check(f, k),
    "remark_corank2": lambda f, **kw: verify_remark_corank2(),
    "glambda": lambda f, parameters, k: verify_glambda(f, parameters, k),
    "iteration": lambda f, k, s: verify_iteration_report(f, k, s),
}

# truncation degree of the default-suite Fitting pre-check in higher corank
PRECHECK_DEGREE = 6


def suite_tasks(f, suite="default"):
    """``(claim, params)`` pairs relevant to ``f``; ``long`` adds the heavy checks."""
    long = suite == "long"
    tasks = []
    if f.corank <= 1:
        tasks.append(("hypotheses", {}))
        try:
            rk = _range(f)
        except NotFinite:
            return tasks
        for k in range(1, rk + 1):
            tasks.append(("main_theorem", {"k": k}))
        tasks.append(("fitting_correspondence", {"i_max": f.q}))
        tasks.append(("kernel_mu", {}))
        for k in range(2, rk + 2):
            tasks.append(("complete_intersection", {"k": k}))
        tasks.append(("free_divisor", {"k": 1}))
        if long:
            for k in range(2, rk + 1):
                tasks.append(("free_divisor", {"k": k}))
        for u in f.unfolds:
            for k in (1, 2):
                tasks.append(("glambda", {"parameters": [u], "k": k}))
        if rk >= 2:
            tasks.append(("iteration", {"k": 2, "s": 2}))
    else:
        if long:
            tasks.append(("fitting_correspondence", {"i_max": f.q}))
            tasks.append(("kernel_mu", {}))
        else:
            tasks.append(("fitting_correspondence", {"i_max": f.q, "degree_bound": PRECHECK_DEGREE}))
        if f.name == "corank2":
            tasks.append(("remark_corank2", {}))
    return tasks


def run_claim(germ, claim, params):
    """One report; errors become statuses rather than exceptions."""
    f = load_germ(germ) if isinstance(germ, str) else germ
    try:
        return CLAIMS[claim](f, **params)
    except OutOfRange as exc:
        rep = VerificationReport(claim, f.name, dict(params), SKIPPED, reason=str(exc))
    except (Unsupported, GermError) as exc:
        rep = VerificationReport(claim, f.name, dict(params), UNSUPPORTED, reason=f"{type(exc).__name__}: {exc}")
    return rep


def _run_one(args):
    return run_claim(*args)


def run_suite(germ, suite="default", jobs=1):
    """Reports for every task of the suite, in task order."""
    f = load_germ(germ) if isinstance(germ, str) else germ
    tasks = suite_tasks(f, suite)
    if jobs > 1 and isinstance(germ, str):
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_run_one, [(germ, c, p) for c, p in tasks]))
    return [run_claim(f, c, p) for c, p in tasks]


def any_refuted(reports):
    return any(r.status == REFUTED for r in reports)
