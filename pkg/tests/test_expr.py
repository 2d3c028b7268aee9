import math
import random

import pytest

from corral.expr import Const, InteriorExpr, Var, bgrad, bpartial, evaluate, exp, rename, substitute, variables

from support import random_expression


def central_difference(e, env, name, interior, h=1e-5):
    """d/dt e(env with name moved by t), in log coordinates for interior names."""
    def f(t):
        moved = dict(env)
        moved[name] = env[name] * math.exp(t) if interior else env[name] + t
        return evaluate(e, moved)
    return (f(h) - f(-h)) / (2 * h)


def test_operators_build_trees():
    x, y = Var("x"), Var("y")
    e = 2 * x + y ** 2 - exp(x * y)
    env = {"x": 0.5, "y": 1.5}
    assert evaluate(e, env) == pytest.approx(1.0 + 2.25 - math.exp(0.75))
    assert variables(e) == {"x", "y"}
    assert evaluate(y ** 0, env) == 1.0
    with pytest.raises((ValueError, TypeError)):
        y ** -1


def test_bgrad_simple_cases():
    x1, x2, y = Var("x1"), Var("x2"), Var("y")
    v, g = bgrad(x1 * exp(x2), {"x1": 2.0, "x2": 3.0}, ("x1", "x2"), set())
    assert v == pytest.approx(2 * math.exp(3))
    assert g == pytest.approx([math.exp(3), 2 * math.exp(3)])
    v, g = bgrad(y ** 2, {"y": 4.0}, ("y",), {"y"})
    assert v == 16.0 and g == pytest.approx([32.0])
    # at the boundary the b-derivative of y vanishes
    assert bgrad(y, {"y": 0.0}, ("y",), {"y"})[1] == [0.0]


def test_bgrad_matches_symbolic_bpartial():
    rng = random.Random(7)
    names = ["x", "y"]
    for _ in range(30):
        e = random_expression(rng, names)
        env = {"x": rng.uniform(0.5, 2), "y": rng.uniform(0.5, 2)}
        _, g = bgrad(e, env, names, {"y"})
        assert g[0] == pytest.approx(evaluate(bpartial(e, "x", False), env), rel=1e-9, abs=1e-9)
        assert g[1] == pytest.approx(evaluate(bpartial(e, "y", True), env), rel=1e-9, abs=1e-9)


def test_bgrad_matches_central_differences():
    rng = random.Random(11)
    names = ["x1", "x2", "y1", "y2"]
    interior = {"y1", "y2"}
    for _ in range(40):
        e = random_expression(rng, names)
        env = {n: rng.uniform(0.5, 2) for n in names}
        _, g = bgrad(e, env, names, interior)
        for j, n in enumerate(names):
            fd = central_difference(e, env, n, n in interior)
            assert abs(fd - g[j]) <= 1e-5 * max(1.0, abs(g[j]))


def test_interior_expr_normal_form():
    a = InteriorExpr((("y", 1), ("x", 2), ("y", 2)), Var("t"))
    assert a.exponents == (("x", 2), ("y", 3))
    env = {"x": 2.0, "y": 0.5, "t": 0.25}
    assert a.value(env) == pytest.approx(4 * 0.125 * math.exp(0.25))
    assert evaluate(a.as_smooth(), env) == pytest.approx(a.value(env))
    lg = a.log_bgrad(env, ("t", "x", "y"), {"x", "y"})
    assert lg == pytest.approx([1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        InteriorExpr((("y", -1),))
    assert InteriorExpr().as_smooth() == Const(1.0)


def test_log_bgrad_is_bgrad_of_log():
    a = InteriorExpr((("y1", 2), ("y2", 1)), Var("x") * Var("y1"))
    env = {"x": 0.7, "y1": 1.3, "y2": 0.9}
    cols = ("x", "y1", "y2")
    v, g = bgrad(a.as_smooth(), env, cols, {"y1", "y2"})
    assert a.log_bgrad(env, cols, {"y1", "y2"}) == pytest.approx([x / v for x in g])


def test_rename_and_substitute():
    e = Var("a") * exp(Var("b"))
    r = rename(e, {"a": "c"})
    assert variables(r) == {"b", "c"}
    s = substitute(e, {"b": Const(0.0)})
    assert evaluate(s, {"a": 3.0}) == 3.0
