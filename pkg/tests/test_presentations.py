import pytest

from mps.algebra import Ideal, PolyMatrix, PolyRing, ideal_equal_local
from mps.germs import load_germ, parse_germ
from mps.presentations import (
    Division, NotMonic, check_image_equation, complete_homogeneous, congruent,
    d2_oracle, frobenius_gram, hk_generators, inverse_unimodular, ladder, ladder_ring, lift_diagram,
    multiplication_matrix, pushforward_presentation, submatrix, symmetric_presentation, target_fitting,
    tensor_square, weierstrass_divide,
)


@pytest.fixture(scope="module")
def crosscap():
    return load_germ("crosscap")


@pytest.fixture(scope="module")
def morin3():
    return load_germ("morin3")


def strs(ps):
    return [str(p) for p in ps]


def T(f, s):
    return f.target(s)


# ---- division ---------------------------------------------------------------

def test_division_one_step(crosscap):
    y = crosscap.source.var("y")
    assert weierstrass_divide(y ** 3, crosscap) == [crosscap.target.zero(), T(crosscap, "Z")]
    assert strs(weierstrass_divide(crosscap.source.one(), crosscap)) == ["1", "0"]


def test_division_morin3(morin3):
    y = morin3.source.var("y")
    assert weierstrass_divide(y ** 4, morin3) == [morin3.target.zero(), T(morin3, "Z"), T(morin3, "-X1")]


def test_division_rejects_non_monic():
    # y-degree 3 but q(f) = 2 locally
    g = parse_germ("source x, y\ntarget X, Z, W\nmap X = x; Z = y^2 + y^3; W = x*y\n")
    with pytest.raises(NotMonic):
        Division(g)


def test_division_reconstructs(morin3):
    div = Division(morin3)
    y = morin3.source.var("y")
    p = morin3.source("y^7 + 3*x1*y^5 - x2^2*y + 1")
    c = div.coordinates(p)
    back = sum((ci.subs(morin3.graph_map(), morin3.source) * y ** i for i, ci in enumerate(c)),
               morin3.source.zero())
    assert back == p


# ---- M, P, Lambda -------------------------------------------------------------

def test_multiplication_matrix_examples(crosscap, morin3):
    assert multiplication_matrix(crosscap).to_strings() == [["0", "X*Z"], ["X", "0"]]
    assert multiplication_matrix(load_germ("immersion")).to_strings() == [["0"]]
    M = multiplication_matrix(morin3)
    assert M.col(0) == [morin3.target.zero(), T(morin3, "X2 + Z"), T(morin3, "-X1")]


def test_frobenius_gram_examples(crosscap, morin3):
    assert frobenius_gram(crosscap).to_strings() == [["0", "1"], ["1", "0"]]
    assert frobenius_gram(load_germ("immersion")).to_strings() == [["1"]]
    P = frobenius_gram(morin3)
    assert all(P[i, 2 - i] == morin3.target.one() for i in range(3))
    assert P[2, 2] == T(morin3, "-X1")
    assert P.det().is_constant() and P.det()


def test_inverse_unimodular(morin3):
    P = frobenius_gram(morin3)
    assert P * inverse_unimodular(P) == PolyMatrix.identity(P.ring, 3)
    with pytest.raises(ValueError):
        inverse_unimodular(PolyMatrix.from_strings(P.ring, [["X1"]]))


def test_crosscap_lambda(crosscap):
    sp = symmetric_presentation(crosscap)
    assert sp.matrix.to_strings() == [["-X*Z", "W"], ["W", "-X"]]
    assert strs(sp.G) == ["1", "y"]
    assert all(sp.checks.values())
    assert ideal_equal_local(Ideal(crosscap.target, [sp.det]), Ideal(crosscap.target, [T(crosscap, "X^2*Z - W^2")]))
    assert check_image_equation(sp)


def test_immersion_lambda():
    f = load_germ("immersion")
    sp = symmetric_presentation(f)
    assert sp.matrix.to_strings() == [["W"]]
    assert check_image_equation(sp)


@pytest.mark.parametrize("name", ["morin3", "s1germ"])
def test_lambda_invariants(name):
    f = load_germ(name)
    sp = symmetric_presentation(f)
    assert sp.matrix.nrows == f.q
    assert sp.matrix.is_symmetric()
    assert all(not v for v in sp.relation_row())
    assert check_image_equation(sp)
    assert set(sp.to_json()["invariants"]) == {"symmetric", "minimal", "relations", "det_nonzero"}


def test_wrong_distinguished_component_refused():
    # an immersion whose Z-component is not the one of y-degree q(f) = 1
    g = parse_germ("source x, y\ntarget X, Z, W\nmap X = x; Z = y^2; W = y + x*y\n")
    with pytest.raises(NotMonic):
        symmetric_presentation(g)


def test_submatrices(crosscap, morin3):
    L = symmetric_presentation(crosscap).matrix
    assert submatrix(L, 1).to_strings() == [["-X"]]
    assert submatrix(L, 0) == L
    Lm = symmetric_presentation(morin3).matrix
    assert submatrix(Lm, 2).to_strings() == [[str(Lm[2, 2])]]
    assert submatrix(Lm, 1, cols=False).shape == (2, 3)
    with pytest.raises(IndexError):
        submatrix(L, 2)


def test_target_fitting_crosscap(crosscap):
    L = symmetric_presentation(crosscap).matrix
    R = crosscap.target
    assert ideal_equal_local(target_fitting(L, 0), Ideal(R, [T(crosscap, "X^2*Z - W^2")]))
    assert ideal_equal_local(target_fitting(L, 1), Ideal(R, [T(crosscap, "X"), T(crosscap, "W")]))
    assert target_fitting(L, 2).is_unit() and target_fitting(L, 3).is_unit()


def test_congruent_keeps_fitting(morin3):
    L = symmetric_presentation(morin3).matrix
    R = L.ring
    Q = PolyMatrix.from_strings(R, [["1", "X1", "0"], ["0", "1", "Z"], ["0", "0", "1"]])
    C = congruent(L, Q)
    assert C.is_symmetric()
    for i in range(3):
        assert ideal_equal_local(C.fitting_ideal(i), L.fitting_ideal(i))


def test_pullback_crosscap(crosscap):
    sp = symmetric_presentation(crosscap)
    assert strs(sp.pullback(1).rows[0]) == ["-x"]


# ---- generator ladder --------------------------------------------------------

def test_hk_generators_examples():
    R = ladder_ring(2)
    # r = 3 gives g_0..g_2
    assert hk_generators(2, 3, R) == [R.one(), R("y1 + y2"), R("y1^2 + y1*y2 + y2^2")]
    assert hk_generators(2, 2, R) == [R.one(), R("y1 + y2")]
    R3 = ladder_ring(3)
    assert hk_generators(3, 3, R3)[1] == R3("y1 + y2 + y3")
    for k in range(1, 5):
        assert hk_generators(k, 4)[0].is_constant()
    with pytest.raises(ValueError):
        hk_generators(5, 3)


def test_ladder_matches_complete_homogeneous():
    R = ladder_ring(3)
    ys = list(R.names)
    assert ladder(3, 4, R, ys) == [complete_homogeneous(i, R, ys) for i in range(3)]


# ---- tensor square ---------------------------------------------------------------

def test_tensor_square_crosscap(crosscap):
    ts = tensor_square(crosscap)
    R = ts.ring
    assert ideal_equal_local(ts.ideal, Ideal(R, [R("y1^2 - y2^2"), R("x*y1 - x*y2")]), local=False)
    assert strs(ts.kernel_generators) == ["y1 - y2"]
    for g in [R("y1^3 - y2^3"), R("x*y1 - x*y2")]:
        assert ts.in_kernel(g)
        assert ts.T_inv(ts.T(g)) == g
    with pytest.raises(ValueError):
        ts.T(R("y1"))


def test_tensor_square_immersion():
    ts = tensor_square(load_germ("immersion"))
    assert ts.kernel_generators == []


def test_tensor_square_h():
    f = load_germ("h")
    ts = tensor_square(f)
    assert len(ts.kernel_generators) == 3
    for g in ts.kernel_generators:
        assert ts.in_kernel(g)
    # mu kills g (x) 1 - 1 (x) g for every ring element
    c1, c2 = ts.layout.copy(1), ts.layout.copy(2)
    p = f.source("y^2*z + u1*y - 3*z^3")
    assert ts.in_kernel(p.subs(c1, ts.ring) - p.subs(c2, ts.ring))


# ---- corank >= 2 ------------------------------------------------------------------

@pytest.mark.parametrize("name,q", [("h", 4), ("htilde", 4), ("corank2", 3)])
def test_pushforward_presentation_sizes(name, q):
    f = load_germ(name)
    pf = pushforward_presentation(f)
    # pruned to a minimal system: q(f) generators, square, no unit entries
    assert len(pf.generators) == q and pf.matrix.shape == (q, q)
    assert pf.full_rank >= q
    assert not any(e.constant_term() for r in pf.matrix.rows for e in r)
    assert not pf.matrix.det().is_zero()


def test_d2_oracle_h():
    S, pres = d2_oracle(load_germ("h"))
    assert strs(pres.generators) == ["1", "y2", "z2"]


def test_lift_diagram_identity_case():
    ld = lift_diagram(load_germ("htilde"))
    assert ld.identity_case and ld.square_commutes


def test_lift_diagram_h_nontrivial():
    ld = lift_diagram(load_germ("h"))
    assert not ld.identity_case and ld.square_commutes
    assert list(ld.coefficients) == ["y2*z2"]


def test_lift_diagram_corank2():
    ld = lift_diagram(load_germ("corank2"))
    assert ld.identity_case and ld.square_commutes


def test_lift_diagram_corank1_uses_t(crosscap):
    ld = lift_diagram(crosscap)
    assert ld.route == "T" and not hasattr(ld, "A")
