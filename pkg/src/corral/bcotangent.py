"""Finitely presented interior C-infinity rings with corners and the fibres
of their b-cotangent modules at R-points.

A presentation has real generators x_a, interior generators y_a', real
relations f = 0 and interior relations g = h with g, h of the form
y^alpha exp(f). At a point the b-cotangent fibre is the cokernel of the
relation matrix gamma: one row per relation, columns real generators first
and then interior generators. A real relation contributes its b-gradient;
an interior relation g = h contributes d_in log g - d_in log h.
"""

from dataclasses import dataclass
from typing import Mapping, Tuple

import numpy as np
import scipy.linalg

from .errors import CorralError, InvalidMorphism, InvalidPoint, NotWeaklyToric
from .expr import Const, Expr, InteriorExpr, bgrad, evaluate, rename, substitute, variables
from .lattice import quotient_group
from .monoid import MonoidPresentation, classify, integralize
from .tri import Tri

RANK_TOL = 1e-8
CROSS_TOL = 1e-10
POINT_TOL = 1e-9


@dataclass(frozen=True)
class RankInfo:
    rank: int
    stable: bool
    smallest_kept: float
    largest_dropped: float


def _qr_rank(a, rtol):
    if a.size == 0:
        return 0, np.zeros(0)
    r = scipy.linalg.qr(a, mode="r", pivoting=True)[0]
    diag = np.abs(np.diag(r))
    if diag.size == 0:
        return 0, diag
    thresh = rtol * max(1.0, float(diag[0]))
    return int(np.sum(diag > thresh)), diag


def numerical_rank(rows, ncols=None, rtol=RANK_TOL, cross=CROSS_TOL) -> RankInfo:
    """Rank by column-pivoted QR, relative to max(1, |R_00|).

    The answer is recomputed at ``cross``; ``stable`` records agreement.
    """
    a = np.asarray(rows, dtype=float)
    if a.ndim == 1:
        a = a.reshape(0, ncols or 0) if a.size == 0 else a.reshape(1, -1)
    k, diag = _qr_rank(a, rtol)
    k2, _ = _qr_rank(a, cross)
    kept = float(diag[k - 1]) if k else float("inf")
    dropped = float(diag[k]) if k < diag.size else 0.0
    return RankInfo(k, k == k2, kept, dropped)


def _rank(rows, ncols, rtol=RANK_TOL):
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    return numerical_rank(np.array(rows, dtype=float).reshape(len(rows), ncols), rtol=rtol).rank


@dataclass(frozen=True)
class CRingPresentation:
    real: Tuple[str, ...] = ()
    interior: Tuple[str, ...] = ()
    real_relations: Tuple[Expr, ...] = ()
    interior_relations: Tuple[Tuple[InteriorExpr, InteriorExpr], ...] = ()
    name: str = ""

    def __post_init__(self):
        for attr in ("real", "interior", "real_relations", "interior_relations"):
            object.__setattr__(self, attr, tuple(getattr(self, attr)))
        names = self.real + self.interior
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        known = set(names)
        for f in self.real_relations:
            bad = variables(f) - known
            if bad:
                raise ValueError(f"undeclared generator {sorted(bad)[0]}")
        inner = set(self.interior)
        for g, h in self.interior_relations:
            for side in (g, h):
                bad = {n for n, _ in side.exponents} - inner
                if bad:
                    raise ValueError(f"{sorted(bad)[0]} is not an interior generator")
                bad = variables(side.factor) - known
                if bad:
                    raise ValueError(f"undeclared generator {sorted(bad)[0]}")

    @property
    def columns(self):
        return self.real + self.interior


@dataclass(frozen=True)
class RPoint:
    values: Tuple[Tuple[str, float], ...]

    @classmethod
    def of(cls, mapping: Mapping[str, float]):
        return cls(tuple((k, float(v)) for k, v in mapping.items()))

    @property
    def env(self):
        return dict(self.values)


@dataclass(frozen=True)
class PointReport:
    ok: bool
    real_residuals: Tuple[float, ...]
    interior_residuals: Tuple[float, ...]


def check_point(C: CRingPresentation, p: RPoint, tol=POINT_TOL) -> PointReport:
    env = p.env
    missing = [n for n in C.columns if n not in env]
    if missing:
        raise InvalidPoint(f"no value for {missing[0]}")
    for n in C.interior:
        if env[n] < 0:
            raise InvalidPoint(f"interior generator {n} must be nonnegative")
    rr = tuple(abs(evaluate(f, env)) for f in C.real_relations)
    ir = []
    ok = all(r <= tol for r in rr)
    for g, h in C.interior_relations:
        a, b = g.value(env), h.value(env)
        ir.append(abs(a - b))
        ok = ok and abs(a - b) <= tol * (1 + abs(a) + abs(b))
    return PointReport(ok, rr, tuple(ir))


def validate_point(C, p, tol=POINT_TOL):
    report = check_point(C, p, tol)
    if not report.ok:
        raise InvalidPoint("relations are not satisfied at the point")
    return report


def eval_and_bderiv(e: Expr, p: RPoint, interior=(), columns=None):
    """Value and b-gradient of e at p; columns default to the point's names."""
    cols = tuple(columns) if columns is not None else tuple(n for n, _ in p.values)
    return bgrad(e, p.env, cols, interior)


def sharpened_monoid(C: CRingPresentation) -> MonoidPresentation:
    """Exp factors are units, so only the exponent vectors survive."""
    rels = tuple((g.alpha(C.interior), h.alpha(C.interior)) for g, h in C.interior_relations)
    return MonoidPresentation(C.interior, rels)


def relation_matrix(C: CRingPresentation, p: RPoint):
    env, cols = p.env, C.columns
    rows = []
    for f in C.real_relations:
        rows.append(bgrad(f, env, cols, C.interior)[1])
    for g, h in C.interior_relations:
        a, b = g.log_bgrad(env, cols, C.interior), h.log_bgrad(env, cols, C.interior)
        rows.append([x - y for x, y in zip(a, b)])
    return rows


@dataclass(frozen=True)
class BCotangentFibre:
    labels: Tuple[str, ...]
    gamma: Tuple[Tuple[float, ...], ...]
    fibre_dim: int
    rank: RankInfo
    tolerance: float = RANK_TOL


def bcotangent_fibre(C: CRingPresentation, p: RPoint, rtol=RANK_TOL) -> BCotangentFibre:
    validate_point(C, p)
    gamma = relation_matrix(C, p)
    n = len(C.columns)
    info = numerical_rank(np.array(gamma, dtype=float).reshape(len(gamma), n), rtol=rtol)
    return BCotangentFibre(C.columns, tuple(tuple(r) for r in gamma), n - info.rank, info, rtol)


def fibre_dim(C, p, rtol=RANK_TOL):
    return bcotangent_fibre(C, p, rtol).fibre_dim


@dataclass(frozen=True)
class PresentationMorphism:
    """Generator-level morphism source -> target: a smooth expression in the
    target for each real generator, an interior expression for each interior
    generator."""

    source: CRingPresentation
    target: CRingPresentation
    real_images: Tuple[Expr, ...]
    interior_images: Tuple[InteriorExpr, ...]

    def __post_init__(self):
        object.__setattr__(self, "real_images", tuple(self.real_images))
        object.__setattr__(self, "interior_images", tuple(self.interior_images))
        if len(self.real_images) != len(self.source.real):
            raise InvalidMorphism("one image per real generator")
        if len(self.interior_images) != len(self.source.interior):
            raise InvalidMorphism("one image per interior generator")
        known = set(self.target.columns)
        for e in self.real_images:
            if variables(e) - known:
                raise InvalidMorphism("image uses an undeclared generator")
        for ie in self.interior_images:
            if {n for n, _ in ie.exponents} - set(self.target.interior) or (
                    variables(ie.factor) - known):
                raise InvalidMorphism("image uses an undeclared generator")

    def pull_point(self, p: RPoint) -> RPoint:
        env = p.env
        vals = [(n, evaluate(e, env)) for n, e in zip(self.source.real, self.real_images)]
        vals += [(n, ie.value(env)) for n, ie in zip(self.source.interior, self.interior_images)]
        return RPoint(tuple(vals))

    def jacobian(self, p: RPoint):
        """Rows: target generators. Columns: source generators."""
        env, cols, inner = p.env, self.target.columns, self.target.interior
        columns = [bgrad(e, env, cols, inner)[1] for e in self.real_images]
        columns += [ie.log_bgrad(env, cols, inner) for ie in self.interior_images]
        return [[c[i] for c in columns] for i in range(len(cols))]


def _qualify(D, E):
    clash = set(D.columns) & set(E.columns)
    if not clash:
        return {n: n for n in D.columns}, {n: n for n in E.columns}
    return ({n: f"d.{n}" for n in D.columns}, {n: f"e.{n}" for n in E.columns})


def pushout_presentation(phi: PresentationMorphism, psi: PresentationMorphism):
    """F = D and E glued along the images of the generators of C.

    Returns (F, names_D, names_E) where names_* map old names to F names.
    """
    if phi.source != psi.source:
        raise InvalidMorphism("both morphisms need the same source")
    D, E = phi.target, psi.target
    md, me = _qualify(D, E)
    real = tuple(md[n] for n in D.real) + tuple(me[n] for n in E.real)
    inner = tuple(md[n] for n in D.interior) + tuple(me[n] for n in E.interior)
    rr = [rename(f, md) for f in D.real_relations] + [rename(f, me) for f in E.real_relations]
    ir = [(g.rename(md), h.rename(md)) for g, h in D.interior_relations]
    ir += [(g.rename(me), h.rename(me)) for g, h in E.interior_relations]
    for a, b in zip(phi.real_images, psi.real_images):
        rr.append(rename(a, md) - rename(b, me))
    for a, b in zip(phi.interior_images, psi.interior_images):
        ir.append((a.rename(md), b.rename(me)))
    F = CRingPresentation(real, inner, tuple(rr), tuple(ir), name="pushout")
    return F, md, me


def _restrict(p: RPoint, mapping):
    env = p.env
    return RPoint(tuple((old, env[new]) for old, new in mapping.items()))


def _mod_rank(base, extra, ncols):
    """Rank of the span of ``extra`` modulo the span of ``base``."""
    return _rank(list(base) + list(extra), ncols) - _rank(base, ncols)


@dataclass(frozen=True)
class PushoutReport:
    dims: Tuple[int, int, int, int]
    first_rank: int
    composition_zero: bool
    exact_middle: bool
    surjective: bool

    @property
    def exact(self):
        return self.composition_zero and self.exact_middle and self.surjective


def pushout_sequence_check(phi: PresentationMorphism, psi: PresentationMorphism,
                           p: RPoint, tol=POINT_TOL) -> PushoutReport:
    """Fibres of  Omega_C -> Omega_D + Omega_E -> Omega_F -> 0  at p."""
    F, md, me = pushout_presentation(phi, psi)
    C, D, E = phi.source, phi.target, psi.target
    pD, pE = _restrict(p, md), _restrict(p, me)
    validate_point(D, pD, tol)
    validate_point(E, pE, tol)
    validate_point(F, p, tol)
    pC = phi.pull_point(pD)
    other = psi.pull_point(pE).env
    for n, v in pC.values:
        if abs(v - other[n]) > tol * (1 + abs(v)):
            raise InvalidPoint("the two induced points of the source disagree")
    validate_point(C, pC, tol)

    nd, ne, nf = len(D.columns), len(E.columns), len(F.columns)
    gD, gE, gF = relation_matrix(D, pD), relation_matrix(E, pE), relation_matrix(F, p)
    dim_c = fibre_dim(C, pC)
    dim_d, dim_e, dim_f = nd - _rank(gD, nd), ne - _rank(gE, ne), nf - _rank(gF, nf)

    # F columns are D columns then E columns, in the same order.
    base = [list(r) + [0.0] * ne for r in gD] + [[0.0] * nd + list(r) for r in gE]
    jd, je = phi.jacobian(pD), psi.jacobian(pE)
    images = [[jd[i][c] for i in range(nd)] + [-je[i][c] for i in range(ne)]
              for c in range(len(C.columns))]
    first = _mod_rank(base, images, nf)
    composition = _mod_rank(gF, images, nf) == 0
    identity = [[float(i == j) for j in range(nf)] for i in range(nf)]
    second = _mod_rank(gF, identity, nf)
    kernel_second = dim_d + dim_e - second
    return PushoutReport((dim_c, dim_d, dim_e, dim_f), first, composition,
                         kernel_second == first, second == dim_f)


@dataclass(frozen=True)
class CornerSequenceReport:
    prime: Tuple[str, ...]
    dims: Tuple[int, int, int]
    pi_rank: int
    i_rank: int
    well_defined: bool

    @property
    def exact(self):
        a, b, c = self.dims
        return (self.well_defined and a + c == b and self.pi_rank == a
                and self.i_rank == c)


def corner_quotient(C: CRingPresentation, prime):
    """C with the interior generators in ``prime`` sent to 0.

    Interior relations touching the prime hold trivially (both sides lie in
    it) and are dropped; the survivors and the real relations have y = 0
    substituted for the removed generators.
    """
    prime = set(prime)
    zero = {n: Const(0.0) for n in prime}
    inner = tuple(n for n in C.interior if n not in prime)
    rr = tuple(substitute(f, zero) for f in C.real_relations)
    ir = []
    for g, h in C.interior_relations:
        if {n for n, _ in g.exponents + h.exponents} & prime:
            continue
        ir.append((InteriorExpr(g.exponents, substitute(g.factor, zero)),
                   InteriorExpr(h.exponents, substitute(h.factor, zero))))
    return CRingPresentation(C.real, inner, rr, tuple(ir), name=C.name)


def corner_sequence_check(C: CRingPresentation, p: RPoint, prime=None,
                          zero_tol=POINT_TOL) -> CornerSequenceReport:
    """0 -> Omega_D -> Omega_C (x) D -> C_in^P (x) R -> 0 at a point of the
    stratum of P, where P is spanned by the interior generators vanishing at p."""
    validate_point(C, p)
    env = p.env
    vanishing = tuple(n for n in C.interior if abs(env[n]) <= zero_tol)
    if prime is None:
        prime = vanishing
    elif set(prime) != set(vanishing):
        raise InvalidPoint("the point does not lie on the stratum of the given prime")
    prime = tuple(n for n in C.interior if n in set(prime))

    sharp = sharpened_monoid(C)
    c = classify(sharp)
    if c.is_toric is Tri.UNKNOWN:
        raise CorralError("could not certify that the sharpened monoid is toric")
    if c.is_weakly_toric is Tri.NO:
        raise NotWeaklyToric("corner sequence needs a toric ring")
    if c.is_toric is not Tri.YES:
        raise CorralError("corner sequence needs a toric ring")
    M = integralize(sharp)
    # Generators outside the prime become 1, i.e. 0 additively.
    outside = [M.gens[i] for i, n in enumerate(C.interior) if n not in prime]
    q, proj = quotient_group(M.ambient, outside)
    r = q.free_rank

    cols = C.columns
    n = len(cols)
    gamma = relation_matrix(C, p)
    b = n - _rank(gamma, n)

    D = corner_quotient(C, prime)
    pD = RPoint(tuple((k, env[k]) for k in D.columns))
    a = fibre_dim(D, pD)

    incl = [[float(cols[j] == k) for j in range(n)] for k in D.columns]
    pi_rank = _mod_rank(gamma, incl, n)

    i_map = [[0.0] * n for _ in range(r)]
    for j, name in enumerate(cols):
        if name in prime:
            img = proj(M.gens[C.interior.index(name)])
            for t in range(r):
                i_map[t][j] = float(img[t])
    g = np.array(gamma, dtype=float).reshape(len(gamma), n)
    im = np.array(i_map, dtype=float).reshape(r, n)
    killed = bool(np.all(np.abs(im @ g.T) <= 1e-8 * max(1.0, float(np.abs(g).max(initial=0.0)))))
    i_rank = _rank(i_map, n)
    return CornerSequenceReport(prime, (a, b, r), pi_rank, i_rank, killed)


def finite_difference_check(e: Expr, p: RPoint, interior=(), step=1e-4) -> float:
    """Largest relative gap between the b-gradient and a five point stencil,
    taken in log coordinates for interior generators."""
    env = p.env
    interior = set(interior)
    cols = tuple(n for n, _ in p.values)
    _, grad = bgrad(e, env, cols, interior)
    worst = 0.0
    for j, name in enumerate(cols):
        def f(t):
            moved = dict(env)
            if name in interior:
                if env[name] <= 0:
                    raise InvalidPoint("finite differences need a strictly interior point")
                moved[name] = env[name] * np.exp(t)
            else:
                moved[name] = env[name] + t
            return evaluate(e, moved)
        h = step
        fd = (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h)
        worst = max(worst, abs(fd - grad[j]) / max(1.0, abs(grad[j])))
    return worst


def two_path_rows(C: CRingPresentation, p: RPoint):
    """Interior relation rows computed generically, as b-gradients of
    g and h divided by their values; only valid when both are nonzero."""
    env, cols = p.env, C.columns
    out = []
    for g, h in C.interior_relations:
        gv, gg = bgrad(g.as_smooth(), env, cols, C.interior)
        hv, hg = bgrad(h.as_smooth(), env, cols, C.interior)
        out.append([a / gv - b / hv for a, b in zip(gg, hg)])
    return out


def free_ring(m, n, real_prefix="x", interior_prefix="y") -> CRingPresentation:
    return CRingPresentation(tuple(f"{real_prefix}{i + 1}" for i in range(m)),
                             tuple(f"{interior_prefix}{i + 1}" for i in range(n)))
