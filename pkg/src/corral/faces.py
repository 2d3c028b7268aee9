"""Faces, prime ideals and corner fibres of affine monoids.

A face is recorded by the generators it contains. Its complement in the
monoid is a prime ideal. For a monoid with an adjoined zero the primes are
{0} united with those complements, and every face (including the whole
monoid) contributes one.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

from . import linalg
from .errors import ConeDimensionExceeded
from .lattice import quotient_group
from .monoid import AffineMonoid
from .polyhedra import face_supports

RANK_LIMIT = 8


@dataclass(frozen=True)
class Face:
    generator_support: Tuple[int, ...]
    rank: int
    certificate: Tuple[int, ...]

    def contains(self, other: "Face"):
        return set(other.generator_support) <= set(self.generator_support)


@dataclass(frozen=True)
class PrimeIdeal:
    complement_face: Face
    includes_zero: bool
    n_generators: int

    @property
    def generator_support(self):
        """Generators lying in the ideal."""
        face = set(self.complement_face.generator_support)
        return tuple(i for i in range(self.n_generators) if i not in face)

    def is_subset_of(self, other: "PrimeIdeal"):
        return self.complement_face.contains(other.complement_face)


@dataclass(frozen=True)
class FaceLattice:
    faces: Tuple[Face, ...]
    order: Tuple[Tuple[int, int], ...]  # (i, j) means faces[i] is inside faces[j]

    def f_vector(self):
        if not self.faces:
            return ()
        top = max(f.rank for f in self.faces)
        low = min(f.rank for f in self.faces)
        return tuple(sum(1 for f in self.faces if f.rank == k) for k in range(low, top + 1))


def _rank_of(vectors):
    return linalg.rank([list(v) for v in vectors]) if vectors else 0


def enumerate_faces(M: AffineMonoid, rank_limit=RANK_LIMIT) -> FaceLattice:
    if M.rank > rank_limit:
        raise ConeDimensionExceeded(f"cone dimension {M.rank} exceeds limit {rank_limit}")
    free = M.free_parts()
    faces = []
    for support, cert in face_supports(free, M.rank):
        faces.append(Face(support, _rank_of([free[i] for i in support]), cert))
    order = tuple((i, j) for i, a in enumerate(faces) for j, b in enumerate(faces)
                  if set(a.generator_support) <= set(b.generator_support))
    return FaceLattice(tuple(faces), order)


def verify_certificate(M: AffineMonoid, face: Face):
    free = M.free_parts()
    for i, g in enumerate(free):
        v = linalg.dot(face.certificate, g)
        if i in face.generator_support:
            if v != 0:
                return False
        elif v <= 0:
            return False
    return True


def primes(M: AffineMonoid, with_zero: bool, rank_limit=RANK_LIMIT) -> List[PrimeIdeal]:
    lat = enumerate_faces(M, rank_limit)
    full = tuple(range(M.n))
    out = [PrimeIdeal(f, with_zero, M.n) for f in lat.faces
           if with_zero or f.generator_support != full]
    out.sort(key=lambda p: (len(p.generator_support), p.generator_support))
    return out


def monoid_dimension(M: AffineMonoid, with_zero: bool) -> int:
    """Length of the longest strictly increasing chain of primes."""
    ps = primes(M, with_zero)
    if not ps:
        return 0

    @lru_cache(maxsize=None)
    def longest(i):
        best = 1
        for j, q in enumerate(ps):
            if j != i and ps[i].is_subset_of(q) and ps[i] != q:
                best = max(best, 1 + longest(j))
        return best

    return max(longest(i) for i in range(len(ps)))


def corner_fiber(M: AffineMonoid, P: PrimeIdeal) -> AffineMonoid:
    """Image of M in M^gp / <F>^gp, where F is the face complementary to P.

    Generators that become zero are dropped.
    """
    face = P.complement_face.generator_support
    q, proj = quotient_group(M.ambient, [M.gens[i] for i in face])
    keep = [i for i in range(M.n) if i not in face]
    imgs = [proj(M.gens[i]) for i in keep]
    pairs = [(g, M.label(i)) for g, i in zip(imgs, keep) if any(g)]
    return AffineMonoid(q, tuple(g for g, _ in pairs), names=tuple(n for _, n in pairs))


def face_of_support(M: AffineMonoid, support, rank_limit=RANK_LIMIT):
    """The face whose generator support is ``support``, or None."""
    support = tuple(sorted(support))
    for f in enumerate_faces(M, rank_limit).faces:
        if f.generator_support == support:
            return f
    return None
