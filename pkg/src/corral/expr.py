"""Smooth expressions over real and interior generators.

The fragment is constants, sums, products, negation and exp. It is closed
under the b-derivations x d/dx (interior generators) and d/dx (real
generators), and neither needs division, so b-gradients are exact at y = 0.
"""

import math
from dataclasses import dataclass
from typing import Dict, Mapping, Sequence, Tuple


class Expr:
    __slots__ = ()

    def __add__(self, other):
        return Add((self, lift(other)))

    def __radd__(self, other):
        return Add((lift(other), self))

    def __sub__(self, other):
        return Add((self, Neg(lift(other))))

    def __rsub__(self, other):
        return Add((lift(other), Neg(self)))

    def __mul__(self, other):
        return Mul((self, lift(other)))

    def __rmul__(self, other):
        return Mul((lift(other), self))

    def __neg__(self):
        return Neg(self)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers are in the fragment")
        if k == 0:
            return Const(1.0)
        if k == 1:
            return self
        return Mul((self,) * k)


@dataclass(frozen=True)
class Const(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Add(Expr):
    terms: Tuple[Expr, ...]


@dataclass(frozen=True)
class Mul(Expr):
    factors: Tuple[Expr, ...]


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Exp(Expr):
    arg: Expr


def lift(x):
    if isinstance(x, Expr):
        return x
    return Const(float(x))


def exp(e):
    return Exp(lift(e))


def variables(e: Expr):
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Const):
        return set()
    if isinstance(e, (Neg, Exp)):
        return variables(e.arg)
    parts = e.terms if isinstance(e, Add) else e.factors
    out = set()
    for p in parts:
        out |= variables(p)
    return out


def evaluate(e: Expr, env: Mapping[str, float]) -> float:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return float(env[e.name])
    if isinstance(e, Add):
        return math.fsum(evaluate(t, env) for t in e.terms)
    if isinstance(e, Mul):
        v = 1.0
        for f in e.factors:
            v *= evaluate(f, env)
        return v
    if isinstance(e, Neg):
        return -evaluate(e.arg, env)
    if isinstance(e, Exp):
        return math.exp(evaluate(e.arg, env))
    raise TypeError(f"not an expression: {e!r}")


def _seed(name, order, interior, env):
    g = [0.0] * len(order)
    if name in order:
        g[order[name]] = float(env[name]) if name in interior else 1.0
    return g


def bgrad(e: Expr, env: Mapping[str, float], columns: Sequence[str], interior) -> Tuple[float, list]:
    """Value and b-gradient of e by forward propagation.

    ``columns`` fixes the gradient order; names in ``interior`` get the
    component y de/dy, the rest de/dx.
    """
    order = {n: i for i, n in enumerate(columns)}
    interior = set(interior)

    def go(node):
        if isinstance(node, Const):
            return node.value, [0.0] * len(order)
        if isinstance(node, Var):
            return float(env[node.name]), _seed(node.name, order, interior, env)
        if isinstance(node, Neg):
            v, g = go(node.arg)
            return -v, [-x for x in g]
        if isinstance(node, Exp):
            v, g = go(node.arg)
            ev = math.exp(v)
            return ev, [ev * x for x in g]
        if isinstance(node, Add):
            v, g = 0.0, [0.0] * len(order)
            for t in node.terms:
                tv, tg = go(t)
                v += tv
                g = [a + b for a, b in zip(g, tg)]
            return v, g
        if isinstance(node, Mul):
            v, g = 1.0, [0.0] * len(order)
            for f in node.factors:
                fv, fg = go(f)
                g = [a * fv + v * b for a, b in zip(g, fg)]
                v *= fv
            return v, g
        raise TypeError(f"not an expression: {node!r}")

    return go(e)


def bpartial(e: Expr, name: str, interior: bool) -> Expr:
    """Symbolic b-partial: y de/dy for an interior generator, de/dx otherwise."""
    if isinstance(e, Const):
        return Const(0.0)
    if isinstance(e, Var):
        if e.name != name:
            return Const(0.0)
        return Var(name) if interior else Const(1.0)
    if isinstance(e, Neg):
        return Neg(bpartial(e.arg, name, interior))
    if isinstance(e, Exp):
        return Mul((e, bpartial(e.arg, name, interior)))
    if isinstance(e, Add):
        return Add(tuple(bpartial(t, name, interior) for t in e.terms))
    if isinstance(e, Mul):
        terms = []
        for i in range(len(e.factors)):
            rest = e.factors[:i] + (bpartial(e.factors[i], name, interior),) + e.factors[i + 1:]
            terms.append(Mul(rest))
        return Add(tuple(terms)) if terms else Const(0.0)
    raise TypeError(f"not an expression: {e!r}")


def rename(e: Expr, mapping: Mapping[str, str]) -> Expr:
    return substitute(e, {k: Var(v) for k, v in mapping.items()})


def substitute(e: Expr, mapping: Mapping[str, Expr]) -> Expr:
    if isinstance(e, Const):
        return e
    if isinstance(e, Var):
        return mapping.get(e.name, e)
    if isinstance(e, Neg):
        return Neg(substitute(e.arg, mapping))
    if isinstance(e, Exp):
        return Exp(substitute(e.arg, mapping))
    if isinstance(e, Add):
        return Add(tuple(substitute(t, mapping) for t in e.terms))
    return Mul(tuple(substitute(f, mapping) for f in e.factors))


@dataclass(frozen=True)
class InteriorExpr:
    """y^alpha * exp(factor), with alpha a sparse map name -> exponent."""

    exponents: Tuple[Tuple[str, int], ...] = ()
    factor: Expr = Const(0.0)

    def __post_init__(self):
        merged: Dict[str, int] = {}
        for n, a in self.exponents:
            if int(a) < 0:
                raise ValueError("interior exponents must be nonnegative")
            merged[n] = merged.get(n, 0) + int(a)
        object.__setattr__(self, "exponents", tuple(sorted((n, a) for n, a in merged.items() if a)))

    def alpha(self, names):
        d = dict(self.exponents)
        return tuple(d.get(n, 0) for n in names)

    def as_smooth(self) -> Expr:
        parts = []
        for n, a in self.exponents:
            parts += [Var(n)] * a
        if self.factor != Const(0.0):
            parts.append(Exp(self.factor))
        if not parts:
            return Const(1.0)
        return parts[0] if len(parts) == 1 else Mul(tuple(parts))

    def value(self, env):
        v = math.exp(evaluate(self.factor, env))
        for n, a in self.exponents:
            v *= float(env[n]) ** a
        return v

    def log_bgrad(self, env, columns, interior):
        """b-gradient of log(self): the exponents plus the b-gradient of the factor."""
        _, g = bgrad(self.factor, env, columns, interior)
        d = dict(self.exponents)
        return [x + d.get(n, 0) for n, x in zip(columns, g)]

    def variables(self):
        return {n for n, _ in self.exponents} | variables(self.factor)

    def rename(self, mapping):
        return InteriorExpr(tuple((mapping.get(n, n), a) for n, a in self.exponents),
                            rename(self.factor, mapping))
