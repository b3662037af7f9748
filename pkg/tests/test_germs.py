import itertools

import pytest

from mps.algebra import Ideal, PolyMatrix, ideal_equal_local
from mps.germs import (
    GermError, MalformedFile, NotAnUnfolding, NotFinite, NotVanishingAtOrigin, alpha_matrix,
    catalog_names, d2_general, d2_projection_multiplicity, divided_differences, load_germ,
    parse_germ, projection_as_germ, projection_multiplicity, restrict_unfolding, verify_iteration,
)

CORANK1 = ["crosscap", "immersion", "morin3", "s1germ"]


def germ(text):
    return parse_germ(text)


def strs(ps):
    return sorted(str(p) for p in ps)


# ---- parsing --------------------------------------------------------------

def test_catalog_contents():
    assert set(catalog_names()) >= {"crosscap", "immersion", "morin3", "s1germ", "h", "htilde", "corank2"}


def test_crosscap_parsed():
    f = load_germ("crosscap")
    assert (f.n, f.p, f.corank, f.adapted) == (2, 3, 1, True)
    assert f.q == 2 and strs(f.local_algebra.basis) == ["1", "y"]


def test_immersion_and_h():
    f = load_germ("immersion")
    assert f.corank == 0 and f.adapted
    h = load_germ("h")
    assert (h.corank, h.n, h.p) == (2, 7, 8)


def test_round_trip_through_text():
    for name in catalog_names():
        f = load_germ(name)
        g = parse_germ(f.to_text())
        assert g.components == f.components and g.target.names == f.target.names
        assert set(g.unfolds) == set(f.unfolds) and set(g.tags) == set(f.tags)


@pytest.mark.parametrize("text,exc", [
    ('source x, y\ntarget A, B\nmap A = x + 1; B = y\n', NotVanishingAtOrigin),
    ('source x\ntarget A, B\nmap A = x\n', MalformedFile),
    ('source x\nmap A = x\n', MalformedFile),
    ('source x\ntarget A\nmap A = x +\n', MalformedFile),
    ('source x\ntarget A\nmap B = x\n', MalformedFile),
    ('source x\ntarget A\nmap A = x; A = x\n', MalformedFile),
    ('source x\nsource y\ntarget A\nmap A = x\n', MalformedFile),
])
def test_malformed(text, exc):
    with pytest.raises(exc):
        parse_germ(text)


def test_non_finite_local_algebra():
    f = germ('source x, y\ntarget A, B, C\nmap A = x; B = x*y; C = x*y^2\n')
    with pytest.raises(NotFinite):
        f.local_algebra


def test_unknown_catalog_name():
    with pytest.raises(FileNotFoundError):
        load_germ("nonesuch")


def test_germ_error_hierarchy():
    assert issubclass(MalformedFile, GermError) and issubclass(GermError, ValueError)


def test_weights_found_for_quasihomogeneous():
    f = load_germ("morin3")
    src, tgt = f.source.weights, f.target.weights
    for c, w in zip(f.components, tgt):
        assert c.is_homogeneous(src) and c.wdegree(src) == w


# ---- local algebra ------------------------------------------------------

def test_h_local_algebras():
    assert sorted(map(str, load_germ("h").local_algebra.basis)) == sorted(["1", "y", "z", "y*z"])
    assert sorted(map(str, load_germ("htilde").local_algebra.basis)) == sorted(["1", "y", "y^2", "z"])


# ---- multiple point schemes ----------------------------------------------

def test_crosscap_d2():
    S = divided_differences(load_germ("crosscap"), 2)
    assert strs(S.ideal.gens) == strs(["y1 + y2", "x"])
    assert S.dimension == 1 and S.dimension_ok
    assert divided_differences(load_germ("crosscap"), 3).empty


def test_morin3_d2_generators():
    S = divided_differences(load_germ("morin3"), 2)
    R = S.ring
    want = Ideal(R, [R("x1 + y1^2 + y1*y2 + y2^2"), R("x2 + y1^3 + y1^2*y2 + y1*y2^2 + y2^3")])
    assert ideal_equal_local(S.ideal, want, local=False)


def test_morin3_dimensions():
    f = load_germ("morin3")
    assert [divided_differences(f, k).dimension for k in (2, 3)] == [2, 1]
    assert divided_differences(f, 4).empty


def test_immersion_d2_empty():
    S = divided_differences(load_germ("immersion"), 2)
    assert S.empty and S.ideal.is_unit()


@pytest.mark.parametrize("name", CORANK1)
@pytest.mark.parametrize("k", [2, 3])
def test_generator_count(name, k):
    f = load_germ(name)
    S = divided_differences(f, k)
    assert len(S.generators) == (k - 1) * (f.p - f.n + 1)


@pytest.mark.parametrize("name", CORANK1)
@pytest.mark.parametrize("k", [2, 3])
def test_dk_symmetric_under_transpositions(name, k):
    f = load_germ(name)
    S = divided_differences(f, k)
    R = S.ring
    ys = [v for v in R.names if v.startswith("y")][-k:]
    for a, b in itertools.combinations(ys, 2):
        swap = {v: R.var(v) for v in R.names}
        swap[a], swap[b] = R.var(b), R.var(a)
        for g in S.ideal.gens:
            assert S.ideal.contains(g.subs(swap, R))


@pytest.mark.parametrize("name", CORANK1)
def test_projection_maps_dk_into_dk_minus_one(name):
    f = load_germ(name)
    for k in (2, 3):
        big, small = divided_differences(f, k), divided_differences(f, k - 1)
        for g in small.ideal.gens:
            assert big.ideal.contains(g.to_ring(big.ring))


@pytest.mark.parametrize("name,k,q", [
    ("crosscap", 2, 1), ("morin3", 2, 2), ("morin3", 3, 1), ("morin3", 1, 3), ("crosscap", 1, 2),
])
def test_projection_multiplicity(name, k, q):
    assert projection_multiplicity(load_germ(name), k) == q


# ---- any corank ---------------------------------------------------------------

def test_alpha_matrix_quadratic():
    g = germ('name "g"\nsource x, y\ntarget A, B, C\nmap A = x^2; B = y^2; C = x*y\n')
    a = alpha_matrix(g)
    R = a.ring
    assert set(R.names) == {"x1", "x2", "y1", "y2"}
    want = PolyMatrix.from_strings(R, [["x1 + x2", "0"], ["0", "y1 + y2"], ["y1", "x2"]])
    assert a == want


def test_alpha_matrix_linear_and_adapted():
    lin = germ('source x, y\ntarget A, B, C\nmap A = x + 2*y; B = y; C = 0\n')
    a = alpha_matrix(lin)
    assert all(e.is_constant() for r in a.rows for e in r)
    assert a[0, 1].constant_term() == 2
    f = load_germ("morin3")
    a = alpha_matrix(f)
    m = f.identity_prefix
    assert all(a[i, j] == (a.ring.one() if i == j else a.ring.zero()) for i in range(m) for j in range(m))


def test_d2_general_matches_divided_differences():
    f = load_germ("crosscap")
    G = d2_general(f)
    D = divided_differences(f, 2)
    assert G.ring.names == D.ring.names
    assert ideal_equal_local(G.ideal, D.ideal)


def test_d2_general_corank2_dimension():
    S = d2_general(load_germ("corank2"))
    assert S.dimension == 5


def test_example_d2_multiplicities():
    q, basis = d2_projection_multiplicity(load_germ("h"))
    assert q == 3 and strs(basis) == strs(["1", "y2", "z2"])
    q, _ = d2_projection_multiplicity(load_germ("htilde"))
    assert q == 4


# ---- unfoldings and iteration -----------------------------------------------

def test_restrict_one_parameter():
    F = load_germ("morin3")
    S = restrict_unfolding(F, ["x2"], 2)
    R = S.ring
    assert "x2" not in R.names
    want = Ideal(R, [R("y1^2 + y1*y2 + y2^2 + x1"), R("y1^3 + y1^2*y2 + y1*y2^2 + y2^3")])
    assert ideal_equal_local(S.ideal, want, local=False)


def test_restrict_no_parameters_is_identity():
    F = load_germ("morin3")
    assert ideal_equal_local(restrict_unfolding(F, [], 2).ideal, divided_differences(F, 2).ideal, local=False)


def test_restrict_both_parameters():
    F = load_germ("morin3")
    S = restrict_unfolding(F, ["x1", "x2"], 2)
    R = S.ring
    assert R.names == ("y1", "y2")
    want = Ideal(R, [R("y1^2 + y1*y2 + y2^2"), R("y1^3 + y1^2*y2 + y1*y2^2 + y2^3")])
    assert ideal_equal_local(S.ideal, want, local=False)


def test_restrict_rejects_non_parameter():
    with pytest.raises(NotAnUnfolding):
        restrict_unfolding(load_germ("morin3"), ["y"], 2)
    with pytest.raises(NotAnUnfolding):
        restrict_unfolding(load_germ("morin3"), ["w"], 2)


@pytest.mark.parametrize("name,k,s", [("morin3", 2, 2), ("crosscap", 2, 2), ("morin3", 2, 1), ("crosscap", 1, 1)])
def test_iteration_principle(name, k, s):
    assert verify_iteration(load_germ(name), k, s)


def test_projection_of_morin3_is_corank_one():
    g, par = projection_as_germ(load_germ("morin3"), 2)
    assert g.corank == 1 and g.q == 2
    assert set(par.params) == {"y1", "y2"}
