"""Finitely generated commutative monoids.

Two representations are used. A ``MonoidPresentation`` is generators and
relations, written additively as pairs of exponent vectors. An
``AffineMonoid`` is a list of elements of a finitely generated abelian
group that generate it as a group; the monoid is the submonoid they span.
Affine monoids are integral by construction.

The reflection functors run presentation -> integral -> torsion free ->
saturated through ``integralize``, ``torsion_free_quotient`` and ``saturate``.
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

from . import linalg
from .errors import NotTorsionFree
from .hilbert import DEFAULT_CAP, hilbert_basis_of_generators
from .lattice import (
    AbelianGroupData,
    cokernel_group,
    hermite_rows,
    quotient_group,
    smith_normal_form,
    solve_integer,
    solve_nonneg,
    subgroup_generated,
)
from .polyhedra import cone_facets, lineality_indices
from .rewriting import check_integral
from .tri import Tri


@dataclass(frozen=True)
class MonoidPresentation:
    generator_names: Tuple[str, ...]
    relations: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...] = ()

    def __post_init__(self):
        names = tuple(self.generator_names)
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        n = len(names)
        rels = []
        for u, v in self.relations:
            u, v = tuple(int(x) for x in u), tuple(int(x) for x in v)
            if len(u) != n or len(v) != n:
                raise ValueError("relation vector length differs from generator count")
            if any(x < 0 for x in u + v):
                raise ValueError("relation vectors must be in N^n")
            rels.append((u, v))
        object.__setattr__(self, "generator_names", names)
        object.__setattr__(self, "relations", tuple(rels))

    @property
    def n(self):
        return len(self.generator_names)


@dataclass(frozen=True)
class AffineMonoid:
    ambient: AbelianGroupData
    gens: Tuple[Tuple[int, ...], ...]
    provenance: Optional[MonoidPresentation] = field(default=None, compare=False)
    names: Optional[Tuple[str, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        gens = tuple(self.ambient.canonical(g) for g in self.gens)
        object.__setattr__(self, "gens", gens)
        if self.names is not None:
            if len(self.names) != len(gens):
                raise ValueError("one name per generator")
            object.__setattr__(self, "names", tuple(self.names))

    @property
    def rank(self):
        return self.ambient.free_rank

    @property
    def n(self):
        return len(self.gens)

    def label(self, i):
        return self.names[i] if self.names else f"g{i + 1}"

    def labels(self):
        return tuple(self.label(i) for i in range(self.n))

    def free_parts(self):
        r = self.rank
        return [g[:r] for g in self.gens]

    @property
    def is_trivial(self):
        return self.ambient.is_trivial

    def generates_ambient(self):
        q, _ = quotient_group(self.ambient, self.gens)
        return q.is_trivial

    def facet_normals(self):
        return cone_facets(self.free_parts(), self.rank)


def free_group(k):
    return AbelianGroupData(k, ())


def affine_from_vectors(vectors, n, names=None):
    """The submonoid of Z^n spanned by ``vectors``, re-expressed in a basis of
    the subgroup they generate. Returns (monoid, basis) where basis[j] is the
    Z^n vector of the j-th ambient coordinate.
    """
    vectors = [tuple(int(x) for x in v) for v in vectors]
    if not vectors:
        return AffineMonoid(free_group(0), (), names=names), []
    H, _ = hermite_rows([list(v) for v in vectors], n)
    basis = [tuple(h) for h in H if any(h)]
    d = len(basis)
    if d == n and all(basis[i][j] == int(i == j) for i in range(n) for j in range(n)):
        return AffineMonoid(free_group(n), tuple(vectors), names=names), basis
    bmat = [[basis[j][i] for j in range(d)] for i in range(n)]
    coords = []
    for v in vectors:
        c = solve_integer(bmat, list(v), d)
        assert c is not None
        coords.append(tuple(c))
    return AffineMonoid(free_group(d), tuple(coords), names=names), basis


def groupify(P: MonoidPresentation):
    """P^gp = Z^n / <u_i - v_i>, with the images of the generators."""
    cols = [tuple(a - b for a, b in zip(u, v)) for u, v in P.relations]
    group, proj = cokernel_group(cols, rows=P.n)
    return group, tuple(proj.images_of_basis())


def integralize(P: MonoidPresentation) -> AffineMonoid:
    """Image of P in its groupification."""
    group, images = groupify(P)
    return AffineMonoid(group, images, provenance=P, names=P.generator_names)


def torsion_free_quotient(M: AffineMonoid) -> AffineMonoid:
    r = M.rank
    return AffineMonoid(free_group(r), tuple(g[:r] for g in M.gens),
                        provenance=M.provenance, names=M.names)


def _hb_names(k):
    return tuple(f"h{i + 1}" for i in range(k))


def saturate(M: AffineMonoid, cap=DEFAULT_CAP) -> AffineMonoid:
    """cone(M) intersected with M^gp, generated by a Hilbert basis of its
    pointed part plus a lattice basis of its units (both signs), sorted
    lexicographically."""
    if not M.ambient.is_torsion_free:
        raise NotTorsionFree("saturation requires a torsion-free ambient group")
    r = M.rank
    if r == 0:
        return AffineMonoid(M.ambient, (), provenance=M.provenance, names=())
    gens = [g for g in M.gens if any(g)]
    normals = cone_facets(gens, r)
    if not normals:
        out = []
        for i in range(r):
            e = tuple(int(i == j) for j in range(r))
            out += [e, tuple(-x for x in e)]
        out.sort()
        return AffineMonoid(M.ambient, tuple(out), provenance=M.provenance,
                            names=_hb_names(len(out)))
    snf = smith_normal_form([list(y) for y in normals])
    rho = snf.rank
    if rho == r:
        hb = hilbert_basis_of_generators(gens, r, cap)
    else:
        V = snf.V.to_rows()
        Vinv = [[int(x) for x in row] for row in linalg.inverse(V)]
        proj = [tuple(sum(Vinv[i][j] * g[j] for j in range(r)) for i in range(rho)) for g in gens]
        hb_w = hilbert_basis_of_generators(proj, rho, cap)
        hb = []
        for h in hb_w:
            w = list(h) + [0] * (r - rho)
            hb.append(tuple(sum(V[i][j] * w[j] for j in range(r)) for i in range(r)))
        for j in range(rho, r):
            col = tuple(V[i][j] for i in range(r))
            hb += [col, tuple(-x for x in col)]
    hb = sorted(set(hb))
    return AffineMonoid(M.ambient, tuple(hb), provenance=M.provenance,
                        names=_hb_names(len(hb)))


@dataclass(frozen=True)
class SharpSplit:
    units: AbelianGroupData
    sharp: AffineMonoid
    split_rank: int
    unit_indices: Tuple[int, ...]
    sharp_indices: Tuple[int, ...]


def unit_indices(M: AffineMonoid):
    """Generators that are units: their free part lies in the lineality space."""
    return tuple(lineality_indices(M.free_parts(), M.rank))


def sharpen_split(M: AffineMonoid) -> SharpSplit:
    uidx = unit_indices(M)
    units = [M.gens[i] for i in uidx]
    ugroup, _ = subgroup_generated(M.ambient, units)
    q, proj = quotient_group(M.ambient, units)
    sidx = tuple(i for i in range(M.n) if i not in uidx)
    sharp = AffineMonoid(q, tuple(proj(M.gens[i]) for i in sidx), provenance=M.provenance,
                         names=tuple(M.label(i) for i in sidx))
    return SharpSplit(ugroup, sharp, ugroup.free_rank, uidx, sidx)


def membership(M: AffineMonoid, p, bound=None) -> Tri:
    res = solve_nonneg(M.gens, p, bound, M.ambient)
    if res.status == "found":
        return Tri.YES
    if res.status == "not_found":
        return Tri.NO
    return Tri.UNKNOWN


@dataclass(frozen=True)
class MonoidClassification:
    is_integral: Tri
    is_sharp: Tri
    is_torsion_free: Tri
    is_saturated: Tri
    is_weakly_toric: Tri
    is_toric: Tri
    is_simplicial: Tri
    is_free: Tri
    rank: int

    def as_dict(self):
        out = {k: str(getattr(self, k)) for k in (
            "is_integral", "is_sharp", "is_torsion_free", "is_saturated",
            "is_weakly_toric", "is_toric", "is_simplicial", "is_free")}
        out["rank"] = self.rank
        return out


def _is_saturated(M: AffineMonoid, bound=None) -> Tri:
    tf = torsion_free_quotient(M)
    answer = Tri.YES
    if not M.ambient.is_torsion_free:
        r = M.rank
        for k in range(len(M.ambient.torsion_orders)):
            e = tuple(int(j == r + k) for j in range(M.ambient.dim))
            answer = answer & membership(M, e, bound)
            if answer is Tri.NO:
                return answer
    for h in saturate(tf).gens:
        answer = answer & membership(tf, h, bound)
        if answer is Tri.NO:
            return answer
    return answer


def _classify_affine(M: AffineMonoid, bound=None) -> MonoidClassification:
    tf = Tri.of(M.ambient.is_torsion_free)
    split = sharpen_split(M)
    sharp = Tri.of(split.units.is_trivial)
    sat = _is_saturated(M, bound)
    wt = tf & sat
    toric = wt & sharp
    if toric is Tri.YES:
        free = Tri.of(len(saturate(M).gens) == M.rank)
    else:
        free = toric
    return MonoidClassification(Tri.YES, sharp, tf, sat, wt, toric, free, free, M.rank)


def _sharp_from_rules(system, n):
    """Sharpness of a presentation from a completed rewriting system.

    In a confluent system a word equivalent to 0 rewrites to 0, and the last
    step uses a rule whose right side is 0; the generators in such left
    sides are exactly the unit generators.
    """
    unit_gens = set()
    for l, r in system.rules:
        if not any(r):
            unit_gens.update(i for i, x in enumerate(l) if x)
    for i in unit_gens:
        e = tuple(int(j == i) for j in range(n))
        if any(system.normal_form(e)):
            return Tri.NO
    return Tri.YES


def classify(M, degree_bound=12, bound=None) -> MonoidClassification:
    if isinstance(M, AffineMonoid):
        return _classify_affine(M, bound)
    report = check_integral(M.relations, M.n, degree_bound)
    integral_monoid = integralize(M)
    if report.answer is Tri.YES:
        c = _classify_affine(integral_monoid, bound)
        return c
    group = integral_monoid.ambient
    tf = Tri.of(group.is_torsion_free)
    sharp = _sharp_from_rules(report.system, M.n) if report.system.complete else Tri.UNKNOWN
    rest = report.answer
    return MonoidClassification(report.answer, sharp, tf, rest, rest, rest, rest, rest,
                                group.free_rank)


def minimal_generators(M: AffineMonoid):
    """Hilbert basis of a toric monoid (sorted)."""
    return saturate(M).gens


def reflect(P: MonoidPresentation, cap=DEFAULT_CAP):
    """The three reflection stages of a presentation."""
    integral = integralize(P)
    tf = torsion_free_quotient(integral)
    sat = saturate(tf, cap)
    return integral, tf, sat
