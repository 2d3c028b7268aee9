"""Corner germs of interior maps, transversality and germ fibre products.

A germ g: X -> Z at a corner point is recorded by the sharp toric stalk
monoids P_x, P_z, the free ranks l_x, l_z, the monoid morphism
phi: P_z -> P_x (given on the generators of P_z) and the b-Jacobian B, a
real matrix of shape (rank P_z + l_z) x (rank P_x + l_x). Columns of B
are indexed by the b-tangent basis of X: first the corner directions
Hom(P_x, R) in the dual basis, then the l_x free directions.

For the corner part, Hom(P_x, R) -> Hom(P_z, R) is lambda -> lambda o phi,
which in coordinates is Phi^T where Phi is the linear extension of phi.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Optional, Tuple

from . import linalg
from .errors import InvalidMorphism, NotBTransverse, NotCTransverse
from .faces import enumerate_faces
from .gcorners import build_local_model, corner_decomposition
from .hilbert import hilbert_basis
from .monoid import (
    AffineMonoid,
    affine_from_vectors,
    classify,
    free_group,
    membership,
    saturate,
)
from .tri import Tri


def _frac_rows(rows):
    return [[Fraction(x) for x in r] for r in rows]


@dataclass(frozen=True)
class GermMap:
    source: AffineMonoid
    source_free: int
    target: AffineMonoid
    target_free: int
    phi: Tuple[Tuple[int, ...], ...]
    b_jacobian: Tuple[Tuple[float, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "phi", tuple(tuple(int(x) for x in v) for v in self.phi))
        object.__setattr__(self, "b_jacobian", tuple(tuple(r) for r in self.b_jacobian))
        rows = self.target.rank + self.target_free
        cols = self.source.rank + self.source_free
        if len(self.b_jacobian) != rows or any(len(r) != cols for r in self.b_jacobian):
            raise InvalidMorphism(f"b-Jacobian must be {rows} x {cols}")
        if len(self.phi) != self.target.n:
            raise InvalidMorphism("phi needs one image per target generator")
        if any(len(v) != self.source.rank for v in self.phi):
            raise InvalidMorphism("phi images must lie in the source lattice")

    @property
    def dim_source(self):
        return self.source.rank + self.source_free

    @property
    def dim_target(self):
        return self.target.rank + self.target_free

    def linear_part(self):
        """Integer matrix Phi (rank P_x rows, rank P_z cols) extending phi."""
        rx, rz = self.source.rank, self.target.rank
        gz = self.target.free_parts()
        Phi = []
        for i in range(rx):
            sol = linalg.solve([list(g) for g in gz], [v[i] for v in self.phi], rz)
            if sol is None:
                raise InvalidMorphism("phi does not respect the relations of the target")
            if any(x.denominator != 1 for x in sol):
                raise InvalidMorphism("phi does not extend to an integral linear map")
            Phi.append([int(x) for x in sol])
        return Phi

    def check(self):
        """Validate phi (well defined, lands in P_x) and the corner block of B."""
        Phi = self.linear_part()
        for v in self.phi:
            if membership(self.source, v) is not Tri.YES:
                raise InvalidMorphism(f"phi image {v} is not in the source monoid")
        rx, rz = self.source.rank, self.target.rank
        for i in range(rz):
            for j in range(rx):
                if Fraction(self.b_jacobian[i][j]) != Phi[j][i]:
                    raise InvalidMorphism("corner block of the b-Jacobian disagrees with phi")
        return True

    def corner_block(self):
        Phi = self.linear_part()
        rx, rz = self.source.rank, self.target.rank
        return [[Phi[j][i] for j in range(rx)] for i in range(rz)]


@dataclass(frozen=True)
class DualData:
    monoid: AffineMonoid
    pairing: Tuple[Tuple[int, ...], ...]


def dual_monoid(P: AffineMonoid) -> DualData:
    """Hom(P, N) as the Hilbert basis of the dual cone, in dual coordinates."""
    r = P.rank
    gens = [list(g) for g in P.free_parts() if any(g)]
    hb = hilbert_basis(gens, [], r) if r else []
    N = AffineMonoid(free_group(r), tuple(hb),
                     names=tuple(f"n{i + 1}" for i in range(len(hb))))
    pairing = tuple(tuple(linalg.dot(n, g) for g in P.free_parts()) for n in hb)
    return DualData(N, pairing)


def _same_target(g: GermMap, h: GermMap):
    if g.target.gens != h.target.gens or g.target_free != h.target_free:
        raise InvalidMorphism("germs must share the target")


def b_transverse(g: GermMap, h: GermMap) -> bool:
    _same_target(g, h)
    rows = [list(a) + list(b) for a, b in zip(g.b_jacobian, h.b_jacobian)]
    return linalg.rank(_frac_rows(rows), g.dim_source + h.dim_source) == g.dim_target


def equalizer_cone(g: GermMap, h: GermMap):
    """Inequalities and equations of K inside Hom(P_x^gp,Z) x Hom(P_y^gp,Z)."""
    rx, ry = g.source.rank, h.source.rank
    ineqs = [list(p) + [0] * ry for p in g.source.free_parts() if any(p)]
    ineqs += [[0] * rx + list(q) for q in h.source.free_parts() if any(q)]
    Pg, Ph = g.linear_part(), h.linear_part()
    eqs = [[Pg[j][i] for j in range(rx)] + [-Ph[j][i] for j in range(ry)]
           for i in range(g.target.rank)]
    return ineqs, eqs


def equalizer_basis(g: GermMap, h: GermMap, faces=((), ())):
    """Hilbert basis of K, or of its part vanishing on the given faces of
    P_x and P_y (the equalizer at a nearby point of that stratum pair)."""
    ineqs, eqs = equalizer_cone(g, h)
    rx, ry = g.source.rank, h.source.rank
    n = rx + ry
    if n == 0:
        return []
    gx, gy = g.source.free_parts(), h.source.free_parts()
    eqs = eqs + [list(gx[i]) + [0] * ry for i in faces[0]]
    eqs = eqs + [[0] * rx + list(gy[i]) for i in faces[1]]
    return hilbert_basis(ineqs, eqs, n)


@dataclass(frozen=True)
class CTransverseResult:
    ok: bool
    reason: Optional[str]
    witness: Tuple
    faces: Tuple = ((), ())  # stratum pair where the check failed


def _target_face(germ: GermMap, support):
    """Target generators whose image lies in the face spanned by ``support``."""
    gx = germ.source.free_parts()
    span = [list(gx[i]) for i in support]
    r = linalg.rank(span) if span else 0
    out = []
    for k, v in enumerate(germ.phi):
        if not any(v):
            out.append(k)
        elif span and linalg.rank(span + [list(v)]) == r:
            out.append(k)
    return tuple(out)


def _check_pair(g: GermMap, h: GermMap, fx, fy, target):
    """Normal map and face condition at points of the strata of faces fx, fy."""
    rx, ry, rz = g.source.rank, h.source.rank, g.target.rank
    gx, gy, gz = g.source.free_parts(), h.source.free_parts(), g.target.free_parts()
    # Normal directions at such points are the functionals vanishing on the faces.
    lam = linalg.kernel([list(gx[i]) for i in fx], rx) if fx else [
        [Fraction(int(i == j)) for j in range(rx)] for i in range(rx)]
    mu = linalg.kernel([list(gy[i]) for i in fy], ry) if fy else [
        [Fraction(int(i == j)) for j in range(ry)] for i in range(ry)]
    Pg, Ph = g.linear_part(), h.linear_part()
    images = [_pullback(Pg, v, rz) for v in lam] + [_pullback(Ph, v, rz) for v in mu]
    zspan = [list(gz[k]) for k in target]
    need = rz - (linalg.rank(zspan) if zspan else 0)
    if need and (linalg.rank(images, rz) if images else 0) != need:
        return CTransverseResult(False, "normal map", (), (fx, fy))
    hb = equalizer_basis(g, h, (fx, fy))
    s = [sum(v[i] for v in hb) for i in range(rx + ry)]
    ok = all(linalg.dot(s[:rx], gx[i]) > 0 for i in range(len(gx)) if i not in fx) and all(
        linalg.dot(s[rx:], gy[i]) > 0 for i in range(len(gy)) if i not in fy)
    if not ok:
        return CTransverseResult(False, "face condition", tuple(s), (fx, fy))
    return CTransverseResult(True, None, tuple(s), (fx, fy))


def c_transverse(g: GermMap, h: GermMap) -> CTransverseResult:
    """b-transversality plus, for the base pair and every pair of nearby
    strata (faces of P_x and P_y with the same image face in P_z), a
    surjective normal map and the face condition on the equalizer."""
    if not b_transverse(g, h):
        return CTransverseResult(False, "not b-transverse", ())
    base = _check_pair(g, h, (), (), ())
    if not base.ok:
        return base
    fxs = [f.generator_support for f in enumerate_faces(g.source).faces]
    fys = [f.generator_support for f in enumerate_faces(h.source).faces]
    tys = [_target_face(h, fy) for fy in fys]
    for fx in fxs:
        tx = _target_face(g, fx)
        for fy, ty in zip(fys, tys):
            if (fx, fy) == ((), ()) or tx != ty:
                continue
            res = _check_pair(g, h, fx, fy, tx)
            if not res.ok:
                return res
    return CTransverseResult(True, None, base.witness)


def _zero_rank(functional, gens):
    zs = [list(p) for p in gens if linalg.dot(functional, p) == 0]
    return linalg.rank(zs) if zs else 0


def _zero_key(functional, gens):
    return tuple(i for i, p in enumerate(gens) if linalg.dot(functional, p) == 0)


def _pullback(Phi, lam, rz):
    return [sum(Phi[j][i] * lam[j] for j in range(len(Phi))) for i in range(rz)]


@dataclass(frozen=True)
class FibreProductGerm:
    K_vectors: Tuple[Tuple[int, ...], ...]
    K: AffineMonoid
    W_monoid: AffineMonoid
    dim_W: int
    table: Tuple[Tuple[int, int, int, int], ...]
    c_transverse: bool


def grading_rows(g: GermMap, h: GermMap, hb=None):
    """One (i, j, k, l) row per face of K, in face order."""
    if hb is None:
        hb = equalizer_basis(g, h)
    rx, ry, rz = g.source.rank, h.source.rank, g.target.rank
    K, _ = affine_from_vectors(hb, rx + ry)
    Pg = g.linear_part()
    gx, gy, gz = g.source.free_parts(), h.source.free_parts(), g.target.free_parts()
    rows = []
    for f in enumerate_faces(K).faces:
        s = [sum(hb[i][c] for i in f.generator_support) for c in range(rx + ry)]
        lam, mu = s[:rx], s[rx:]
        j = rx - _zero_rank(lam, gx)
        k = ry - _zero_rank(mu, gy)
        l = rz - _zero_rank(_pullback(Pg, lam, rz), gz)
        rows.append((f.rank, j, k, l))
    return rows, K


def fibre_product_germ(g: GermMap, h: GermMap) -> FibreProductGerm:
    if not b_transverse(g, h):
        raise NotBTransverse("germs are not b-transverse")
    hb = equalizer_basis(g, h)
    rows, K = grading_rows(g, h, hb)
    W = dual_monoid(K).monoid
    jac = [list(a) + [-x for x in b] for a, b in zip(g.b_jacobian, h.b_jacobian)]
    ncols = g.dim_source + h.dim_source
    dim_W = ncols - linalg.rank(_frac_rows(jac), ncols)
    return FibreProductGerm(tuple(hb), K, W, dim_W, tuple(rows), c_transverse(g, h).ok)


@dataclass(frozen=True)
class GradingReport:
    rows: Tuple[Tuple[int, int, int, int], ...]
    law_holds: bool
    counts: Tuple[int, ...]
    formula_counts: Tuple[int, ...]
    formula_holds: bool


def _dual_face_data(germ: GermMap):
    """For each face A of P_x^dual: (j, key of the target face, l)."""
    dual = dual_monoid(germ.source).monoid
    gz = germ.target.free_parts()
    rz = germ.target.rank
    Phi = germ.linear_part()
    out = []
    for f in enumerate_faces(dual).faces:
        s = [sum(dual.gens[i][c] for i in f.generator_support) for c in range(dual.rank)]
        nu = _pullback(Phi, s, rz)
        out.append((f.rank, _zero_key(nu, gz), rz - _zero_rank(nu, gz)))
    return out


def corner_grading_check(g: GermMap, h: GermMap) -> GradingReport:
    ct = c_transverse(g, h)
    if not ct.ok:
        if ct.reason == "not b-transverse":
            raise NotBTransverse("germs are not b-transverse")
        raise NotCTransverse(f"germs are not c-transverse ({ct.reason})")
    rows, _ = grading_rows(g, h)
    law = all(i + l == j + k for i, j, k, l in rows)
    top = max(r[0] for r in rows)
    counts = [0] * (top + 1)
    for r in rows:
        counts[r[0]] += 1
    formula = {}
    for j, key_x, l in _dual_face_data(g):
        for k, key_y, l2 in _dual_face_data(h):
            if key_x == key_y:
                i = j + k - l
                formula[i] = formula.get(i, 0) + 1
    fc = [formula.get(i, 0) for i in range(max(list(formula) + [top]) + 1)]
    return GradingReport(tuple(sorted(rows)), law, tuple(counts), tuple(fc),
                         tuple(counts) == tuple(fc))


@dataclass(frozen=True)
class StrictReport:
    strata: Tuple[Tuple[Tuple[str, ...], int, bool], ...]
    sc: bool


def is_free_monoid(M: AffineMonoid) -> bool:
    return len(saturate(M).gens) == M.rank if M.ambient.is_torsion_free else False


def strict_corner_check(g: GermMap, h: GermMap) -> StrictReport:
    ct = c_transverse(g, h)
    if not ct.ok:
        raise NotCTransverse(f"germs are not c-transverse ({ct.reason})")
    W = fibre_product_germ(g, h).W_monoid
    decomposition = corner_decomposition(build_local_model(W))
    rows = tuple((s.key, s.codim, is_free_monoid(s.fiber)) for s in decomposition.strata)
    return StrictReport(rows, all(r[2] for r in rows))


def is_isomorphic(M1: AffineMonoid, M2: AffineMonoid, search_cap=200000) -> Tri:
    """Isomorphism of toric monoids: invariants first, then a search over
    maps sending a basis among the Hilbert basis of M1 into that of M2."""
    for M in (M1, M2):
        if classify(M).is_toric is not Tri.YES:
            raise ValueError("isomorphism test needs toric monoids")
    if M1.rank != M2.rank:
        return Tri.NO
    H1, H2 = list(saturate(M1).gens), list(saturate(M2).gens)
    if len(H1) != len(H2):
        return Tri.NO
    if enumerate_faces(M1).f_vector() != enumerate_faces(M2).f_vector():
        return Tri.NO
    r = M1.rank
    if r == 0:
        return Tri.YES
    idx = linalg.independent_subset(H1)
    S = [[Fraction(H1[i][row]) for i in idx] for row in range(r)]
    Sinv = linalg.inverse(S)
    target = set(H2)
    attempts = 0
    for choice in permutations(range(len(H2)), r):
        attempts += 1
        if attempts > search_cap:
            return Tri.UNKNOWN
        Tg = [[H2[c][row] for c in choice] for row in range(r)]
        T = linalg.matmul(Tg, Sinv)
        if any(x.denominator != 1 for row in T for x in row):
            continue
        T = [[int(x) for x in row] for row in T]
        if linalg.rank(T) != r:
            continue
        images = {tuple(sum(T[a][b] * h[b] for b in range(r)) for a in range(r)) for h in H1}
        if images == target:
            return Tri.YES
    return Tri.NO
