"""Loading fixture documents for tests."""

from pathlib import Path

from corral.cli.documents import build_cring, build_germ_pair, build_morphism, build_point, load

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def documents(name):
    return load((FIXTURES / name).read_text())


def germ_pair(name):
    (doc,) = [d for d in documents(name) if d.kind == "germ_pair"]
    return build_germ_pair(doc)


def ring_and_point(name):
    docs = documents(name)
    ring = build_cring(next(d for d in docs if d.kind == "cring_presentation"))
    point = build_point(next(d for d in docs if d.kind == "point"))
    return ring, point


def pushout_fixture(name):
    docs = documents(name)
    rings = {d.name: build_cring(d) for d in docs if d.kind == "cring_presentation"}
    g, h = [build_morphism(d, rings) for d in docs if d.kind == "morphism"]
    point = build_point(next(d for d in docs if d.kind == "point"))
    return g, h, point


def random_expression(rng, names, depth=3):
    """A random expression tree over ``names``; exp nodes are kept shallow
    so values stay moderate on [0.5, 2]."""
    from corral.expr import Add, Const, Exp, Mul, Neg, Var

    def go(d, exp_ok):
        if d == 0 or rng.random() < 0.25:
            if rng.random() < 0.7:
                return Var(rng.choice(names))
            return Const(round(rng.uniform(-2, 2), 3))
        kind = rng.choice(["add", "mul", "neg", "exp"] if exp_ok else ["add", "mul", "neg"])
        if kind == "add":
            return Add(tuple(go(d - 1, exp_ok) for _ in range(rng.randint(2, 3))))
        if kind == "mul":
            return Mul(tuple(go(d - 1, exp_ok) for _ in range(2)))
        if kind == "neg":
            return Neg(go(d - 1, exp_ok))
        return Exp(go(min(d - 1, 1), False))

    return go(depth, True)
