from itertools import product

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from corral.catalog import free_monoid, pyramid
from corral.errors import InvalidMorphism, NotBTransverse, NotCTransverse
from corral.transverse import (
    GermMap,
    b_transverse,
    c_transverse,
    corner_grading_check,
    dual_monoid,
    fibre_product_germ,
    is_isomorphic,
    strict_corner_check,
)
from corral.tri import Tri

from oracles import rational_rank
from support import germ_pair


def monomial_germ(Phi, name):
    """Germ N^a -> N^c sending z_k to the monomial with exponents column k of Phi."""
    a, c = len(Phi), len(Phi[0])
    phi = [tuple(Phi[i][k] for i in range(a)) for k in range(c)]
    jac = [[Phi[i][k] for i in range(a)] for k in range(c)]
    return GermMap(free_monoid(a), 0, free_monoid(c), 0, phi, jac, name=name)


def test_diag_parabola_face_condition():
    g, h = germ_pair("diag_parabola.germ")
    assert b_transverse(g, h)
    res = c_transverse(g, h)
    assert not res.ok and res.reason == "face condition"


def test_exp_twist_normal_map():
    g, h = germ_pair("exp_twist.germ")
    assert b_transverse(g, h)
    res = c_transverse(g, h)
    assert not res.ok and res.reason == "normal map"


def test_identity_germs():
    g, h = germ_pair("identity.germ")
    assert c_transverse(g, h).ok
    fp = fibre_product_germ(g, h)
    assert fp.dim_W == 1
    assert is_isomorphic(fp.W_monoid, free_monoid(1)) is Tri.YES
    assert strict_corner_check(g, h).sc


def test_diagonal_not_b_transverse():
    g, h = germ_pair("diagonal.germ")
    assert not b_transverse(g, h)
    assert c_transverse(g, h).reason == "not b-transverse"
    with pytest.raises(NotBTransverse):
        fibre_product_germ(g, h)
    with pytest.raises(NotBTransverse):
        corner_grading_check(g, h)


def test_multiply_multiply():
    g, h = germ_pair("multmult.germ")
    assert c_transverse(g, h).ok
    fp = fibre_product_germ(g, h)
    assert fp.dim_W == 3
    assert is_isomorphic(fp.W_monoid, pyramid()) is Tri.YES
    report = corner_grading_check(g, h)
    assert report.law_holds and report.formula_holds
    assert report.counts == (1, 4, 4, 1)
    assert not strict_corner_check(g, h).sc


def test_grading_check_rejects_non_c_transverse():
    g, h = germ_pair("diag_parabola.germ")
    with pytest.raises(NotCTransverse):
        corner_grading_check(g, h)


def test_germ_validation():
    with pytest.raises(InvalidMorphism):
        GermMap(free_monoid(1), 0, free_monoid(1), 0, [(1,)], [[1, 0]])
    bad = GermMap(free_monoid(1), 0, free_monoid(1), 0, [(2,)], [[1]])
    with pytest.raises(InvalidMorphism):
        bad.check()
    outside = GermMap(free_monoid(1), 0, free_monoid(1), 0, [(-1,)], [[-1]])
    with pytest.raises(InvalidMorphism):
        outside.check()


def test_double_dual_of_pyramid():
    d = dual_monoid(pyramid())
    dd = dual_monoid(d.monoid)
    assert is_isomorphic(dd.monoid, pyramid()) is Tri.YES
    assert len(d.monoid.gens) == 4
    for row in d.pairing:
        assert all(x >= 0 for x in row)


def test_isomorphism_negative():
    assert is_isomorphic(pyramid(), free_monoid(3)) is Tri.NO
    assert is_isomorphic(free_monoid(2), free_monoid(3)) is Tri.NO


matrices = st.integers(1, 2).flatmap(lambda a: st.integers(1, 2).flatmap(
    lambda c: st.lists(st.lists(st.integers(0, 2), min_size=c, max_size=c),
                       min_size=a, max_size=a)))


@settings(max_examples=60, deadline=None)
@given(matrices, matrices)
def test_random_monomial_pairs(A, B):
    assume(len(A[0]) == len(B[0]))
    g, h = monomial_germ(A, "g"), monomial_germ(B, "h")
    gh = c_transverse(g, h)
    hg = c_transverse(h, g)
    assert b_transverse(g, h) == b_transverse(h, g)
    assert gh.ok == hg.ok
    if not b_transverse(g, h):
        return
    fp = fibre_product_germ(g, h)
    # exact rank oracle for the dimension of the fibre product
    c = len(A[0])
    stacked = [[A[i][k] for i in range(len(A))] + [-B[i][k] for i in range(len(B))]
               for k in range(c)]
    assert fp.dim_W == len(A) + len(B) - rational_rank(stacked)
    assert fp.dim_W == len(A) + len(B) - c
    if gh.ok:
        report = corner_grading_check(g, h)
        assert report.law_holds
        assert report.formula_holds


def _small_matrices():
    out = []
    for a in (1, 2):
        for c in (1, 2):
            for entries in product(range(2), repeat=a * c):
                out.append([list(entries[i * c:(i + 1) * c]) for i in range(a)])
    return out


def test_grading_law_on_exhaustive_small_corpus():
    checked = 0
    mats = _small_matrices()
    for A in mats:
        for B in mats:
            if len(A[0]) != len(B[0]):
                continue
            g, h = monomial_germ(A, "g"), monomial_germ(B, "h")
            if c_transverse(g, h).ok:
                report = corner_grading_check(g, h)
                assert report.law_holds and report.formula_holds, (A, B)
                checked += 1
    assert checked > 20


def test_nearby_stratum_failure_is_reported():
    # z1 = x1 x2, z2 = x2 against itself: fine at the origin, but the pair
    # x = (1, 0), y = (0, 0) violates the face condition
    A = [[1, 0], [1, 1]]
    g, h = monomial_germ(A, "g"), monomial_germ(A, "h")
    res = c_transverse(g, h)
    assert not res.ok and res.reason == "face condition"
    assert res.faces != ((), ())
