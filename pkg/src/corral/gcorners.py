"""Local models X_P, their points, depth and corner strata.

X_P is the set of monoid morphisms P -> [0, inf). Choosing generators
p_1..p_m embeds it in [0, inf)^m as the nonnegative solutions of binomial
equations x^u = x^v, one for each generator of the additive relations
among the p_i.
"""

from dataclasses import dataclass
from math import prod
from typing import Optional, Tuple

from .errors import BoundExceeded, InvalidPoint, NotWeaklyToric
from .faces import (
    Face,
    PrimeIdeal,
    corner_fiber,
    enumerate_faces,
    monoid_dimension,
    primes,
)
from .lattice import integer_kernel
from .monoid import AffineMonoid, SharpSplit, classify, sharpen_split
from .rewriting import lattice_congruence_generators
from .tri import Tri

POINT_TOL = 1e-9
ZERO_TOL = 1e-9


@dataclass(frozen=True)
class LocalModel:
    monoid: AffineMonoid
    chosen_generators: Tuple[Tuple[int, ...], ...]
    binomial_relations: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...]
    free_rank: int
    split: SharpSplit
    complete_relations: bool = True

    @property
    def m(self):
        return len(self.chosen_generators)

    @property
    def dim(self):
        return self.monoid.rank

    @property
    def sharp(self):
        return self.split.sharp


def _split_vector(k):
    return (tuple(max(x, 0) for x in k), tuple(max(-x, 0) for x in k))


def _normalize_sign(k):
    for x in k:
        if x:
            return k if x > 0 else tuple(-y for y in k)
    return k


def build_local_model(P: AffineMonoid, degree_bound=24) -> LocalModel:
    c = classify(P)
    if c.is_weakly_toric is Tri.UNKNOWN:
        raise BoundExceeded("could not certify that the monoid is weakly toric")
    if c.is_weakly_toric is Tri.NO:
        raise NotWeaklyToric("local models need a weakly toric monoid")
    gens = P.free_parts()
    m, r = len(gens), P.rank
    rows = [[g[i] for g in gens] for i in range(r)]
    kernel = [_normalize_sign(k) for k in integer_kernel(rows, m)] if m else []
    basis = [_split_vector(k) for k in kernel]
    full = lattice_congruence_generators(basis, m, degree_bound) if basis else []
    complete = full is not None
    rels = tuple(full) if complete else tuple(basis)
    return LocalModel(P, tuple(gens), rels, sharpen_split(P).split_rank, sharpen_split(P),
                      complete)


@dataclass(frozen=True)
class PointCheck:
    ok: bool
    relation_index: Optional[int] = None
    residual: float = 0.0


def _monomial(x, e):
    return prod(xi ** ei for xi, ei in zip(x, e) if ei)


def validate_point(model: LocalModel, coords, tol=POINT_TOL) -> PointCheck:
    x = [float(v) for v in coords]
    if len(x) != model.m:
        raise InvalidPoint(f"expected {model.m} coordinates, got {len(x)}")
    if any(v < 0 for v in x):
        raise InvalidPoint("model coordinates must be nonnegative")
    worst = PointCheck(True)
    for i, (u, v) in enumerate(model.binomial_relations):
        a, b = _monomial(x, u), _monomial(x, v)
        res = abs(a - b)
        if res > tol * (1 + max(abs(a), abs(b))):
            return PointCheck(False, i, res)
    return worst


def _sharp_face(model: LocalModel, nonvanishing):
    """Face of P^sharp spanned by the nonvanishing sharp generators."""
    sidx = model.split.sharp_indices
    support = tuple(k for k, i in enumerate(sidx) if i in nonvanishing)
    for f in enumerate_faces(model.sharp).faces:
        if f.generator_support == support:
            return f
    return None


def depth_at(model: LocalModel, coords, tol=POINT_TOL, zero_tol=ZERO_TOL):
    """(depth, prime) at a model point; the prime lives in P^sharp with zero."""
    check = validate_point(model, coords, tol)
    if not check.ok:
        raise InvalidPoint(f"relation {check.relation_index} violated "
                           f"(residual {check.residual:.3g})")
    nonvanishing = {i for i, v in enumerate(coords) if float(v) > zero_tol}
    for i in model.split.unit_indices:
        if i not in nonvanishing:
            raise InvalidPoint("a unit generator vanishes")
    face = _sharp_face(model, nonvanishing)
    if face is None:
        raise InvalidPoint("vanishing coordinates do not form a prime ideal")
    prime = PrimeIdeal(face, True, model.sharp.n)
    return model.sharp.rank - face.rank, prime


@dataclass(frozen=True)
class CornerStratum:
    prime: PrimeIdeal
    fiber: AffineMonoid
    codim: int
    stratum_face: Face
    key: Tuple[str, ...]


@dataclass(frozen=True)
class CornerDecomposition:
    strata: Tuple[CornerStratum, ...]
    grading: Tuple[int, ...]

    @property
    def boundary(self):
        return tuple(s for s in self.strata if s.codim == 1)

    def by_codim(self, k):
        return tuple(s for s in self.strata if s.codim == k)


def corner_decomposition(model: LocalModel) -> CornerDecomposition:
    sharp = model.sharp
    strata = []
    for p in primes(sharp, with_zero=True):
        face = p.complement_face
        fiber = corner_fiber(sharp, p)
        codim = sharp.rank - face.rank
        dim = monoid_dimension(fiber, with_zero=True)
        if dim != codim + 1:
            raise AssertionError("fibre dimension disagrees with codimension")
        key = tuple(sharp.label(i) for i in face.generator_support)
        strata.append(CornerStratum(p, fiber, codim, face, key))
    strata.sort(key=lambda s: (s.codim, s.stratum_face.generator_support))
    grading = tuple(sum(1 for s in strata if s.codim == k) for k in range(sharp.rank + 1))
    return CornerDecomposition(tuple(strata), grading)
