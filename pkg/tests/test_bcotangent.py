import random
from itertools import combinations

import numpy as np
import pytest

from corral.bcotangent import (
    CRingPresentation,
    PresentationMorphism,
    RPoint,
    bcotangent_fibre,
    check_point,
    corner_quotient,
    corner_sequence_check,
    eval_and_bderiv,
    fibre_dim,
    finite_difference_check,
    free_ring,
    numerical_rank,
    pushout_presentation,
    pushout_sequence_check,
    relation_matrix,
    two_path_rows,
    validate_point,
)
from corral.errors import CorralError, InvalidMorphism, InvalidPoint, NotWeaklyToric
from corral.expr import Const, InteriorExpr, Var, evaluate, exp

from support import pushout_fixture, random_expression, ring_and_point


def svd_rank(rows, ncols):
    a = np.array(rows, dtype=float).reshape(len(rows), ncols)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    return int(np.sum(s > 1e-8 * max(1.0, s[0])))


def test_free_ring_fibre():
    for m in range(3):
        for n in range(3):
            C = free_ring(m, n)
            p = RPoint.of({**{f"x{i + 1}": 0.3 for i in range(m)},
                           **{f"y{i + 1}": 0.0 for i in range(n)}})
            assert fibre_dim(C, p) == m + n


def test_idempotent_fibre():
    C, p = ring_and_point("idempotent.cring")
    fib = bcotangent_fibre(C, p)
    assert fib.fibre_dim == 0
    assert fib.rank.stable
    assert [list(r) for r in fib.gamma] == [[0.0, -1.0], [1.0, 0.0]]


def test_cubic_fibre():
    C, p = ring_and_point("cubic.cring")
    fib = bcotangent_fibre(C, p)
    assert fib.fibre_dim == 1
    assert fib.rank.stable


def test_invalid_points():
    C, _ = ring_and_point("idempotent.cring")
    with pytest.raises(InvalidPoint):
        validate_point(C, RPoint.of({"x": 0.0, "y": 2.0}))
    with pytest.raises(InvalidPoint):
        check_point(C, RPoint.of({"x": 0.0}))
    with pytest.raises(InvalidPoint):
        check_point(C, RPoint.of({"x": 0.0, "y": -1.0}))
    assert not check_point(C, RPoint.of({"x": 0.5, "y": 1.0})).ok


def test_presentation_validation():
    with pytest.raises(ValueError):
        CRingPresentation(("x",), ("x",))
    with pytest.raises(ValueError):
        CRingPresentation(("x",), (), (Var("z"),))
    with pytest.raises(ValueError):
        CRingPresentation(("x",), ("y",), (), ((InteriorExpr((("x", 1),)), InteriorExpr()),))


def test_random_real_relations_against_svd():
    rng = random.Random(3)
    names = ["x1", "x2", "y1"]
    for _ in range(25):
        env = {"x1": rng.uniform(-1, 1), "x2": rng.uniform(-1, 1), "y1": rng.uniform(0.5, 2)}
        rels = []
        for _ in range(rng.randint(1, 3)):
            e = random_expression(rng, names, 2)
            rels.append(e - Const(evaluate(e, env)))
        C = CRingPresentation(("x1", "x2"), ("y1",), tuple(rels))
        p = RPoint.of(env)
        gamma = relation_matrix(C, p)
        assert fibre_dim(C, p) == 3 - svd_rank(gamma, 3)


def test_two_paths_agree_off_the_boundary():
    C, _ = ring_and_point("idempotent.cring")
    p = RPoint.of({"x": 0.0, "y": 1.0})
    assert np.allclose(relation_matrix(C, p), two_path_rows(C, p))
    D = CRingPresentation(("x",), ("y1", "y2"), (),
                          ((InteriorExpr((("y1", 2),), Var("x")), InteriorExpr((("y2", 1),))),))
    q = RPoint.of({"x": 0.3, "y1": 1.5, "y2": 1.5 ** 2 * np.exp(0.3)})
    assert np.allclose(relation_matrix(D, q), two_path_rows(D, q))


def test_eval_and_bderiv_and_finite_differences():
    e = Var("x1") * exp(Var("x2"))
    v, g = eval_and_bderiv(e, RPoint.of({"x1": 2.0, "x2": 3.0}))
    assert v == pytest.approx(2 * np.exp(3)) and g == pytest.approx([np.exp(3), 2 * np.exp(3)])
    p = RPoint.of({"x": 0.4, "y": 1.7})
    assert finite_difference_check(Var("y") * Var("y") + exp(Var("x") * Var("y")), p, {"y"}) < 1e-8
    with pytest.raises(InvalidPoint):
        finite_difference_check(Var("y"), RPoint.of({"y": 0.0}), {"y"})


def test_numerical_rank_floor_and_stability():
    info = numerical_rank([[1e-12, 0.0], [0.0, 1e-12]], 2)
    assert info.rank == 0
    info = numerical_rank([[1.0, 0.0], [0.0, 1e-9]], 2)
    assert info.rank == 1 and not info.stable
    assert numerical_rank([[1.0, 2.0], [2.0, 4.0]], 2).rank == 1


def test_pushout_fixtures_exact():
    g, h, p = pushout_fixture("diag_parabola.push")
    rep = pushout_sequence_check(g, h, p)
    assert rep.exact and rep.dims == (2, 1, 1, 0)
    g, h, p = pushout_fixture("multmult.push")
    rep = pushout_sequence_check(g, h, p)
    assert rep.exact and rep.dims == (1, 2, 2, 3)


def test_pushout_naming_on_clash():
    C = free_ring(0, 1)
    D = CRingPresentation((), ("y1",))
    f = PresentationMorphism(C, D, (), (InteriorExpr((("y1", 1),)),))
    F, md, me = pushout_presentation(f, f)
    assert F.interior == ("d.y1", "e.y1")
    rep = pushout_sequence_check(f, f, RPoint.of({"d.y1": 2.0, "e.y1": 2.0}))
    assert rep.exact and rep.dims == (1, 1, 1, 1)


def test_morphism_validation():
    C, D = free_ring(1, 0), free_ring(0, 1)
    with pytest.raises(InvalidMorphism):
        PresentationMorphism(C, D, (), ())
    with pytest.raises(InvalidMorphism):
        PresentationMorphism(C, D, (Var("q"),), ())


def test_pushout_points_must_agree():
    g, h, _ = pushout_fixture("diag_parabola.push")
    with pytest.raises(InvalidPoint):
        pushout_sequence_check(g, h, RPoint.of({"x": 1.0, "y": 2.0}))


def pyramid_points():
    """Point (1 on the face, 0 off it) for each of the 10 faces of the pyramid."""
    faces = [(), (0,), (1,), (2,), (3,), (0, 2), (0, 3), (1, 2), (1, 3), (0, 1, 2, 3)]
    for face in faces:
        yield face, RPoint.of({f"y{i + 1}": float(i in face) for i in range(4)})


def test_pyramid_corner_sequences():
    C, _ = ring_and_point("pyramid.cring")
    seen = 0
    for face, p in pyramid_points():
        rep = corner_sequence_check(C, p)
        assert rep.exact, (face, rep)
        seen += 1
    assert seen == 10


def test_vertex_sequence_dims():
    C, p = ring_and_point("pyramid.cring")
    rep = corner_sequence_check(C, p)
    assert rep.dims == (0, 3, 3)


def test_free_ring_corner_sequences():
    for n in range(1, 5):
        for k in range(n + 1):
            C = free_ring(n - k, k)
            for r in range(k + 1):
                for prime in combinations(C.interior, r):
                    env = {x: 0.2 for x in C.real}
                    env.update({y: 0.0 if y in prime else 1.5 for y in C.interior})
                    rep = corner_sequence_check(C, RPoint.of(env))
                    assert rep.exact
                    assert rep.dims == (n - r, n, r)


def test_corner_quotient_drops_touching_relations():
    C, _ = ring_and_point("pyramid.cring")
    D = corner_quotient(C, ("y1",))
    assert D.interior == ("y2", "y3", "y4") and D.interior_relations == ()


def test_corner_sequence_needs_toric():
    C, p = ring_and_point("idempotent.cring")
    with pytest.raises(CorralError):
        corner_sequence_check(C, p)
    T = CRingPresentation((), ("y1", "y2"), (),
                          ((InteriorExpr((("y1", 2),)), InteriorExpr((("y2", 2),))),))
    with pytest.raises(NotWeaklyToric):
        corner_sequence_check(T, RPoint.of({"y1": 1.0, "y2": 1.0}))
