"""Rational polyhedral cones: double description, facets and faces.

A cone is handled either by generators (columns) or by constraints
``A x >= 0, E x = 0``. The conversion is an exact double-description
pass over Fractions with an algebraic adjacency test.
"""

from itertools import combinations

from . import linalg


def _dd_pointed(rows, d):
    """Extreme rays of {w in Q^d : rows . w >= 0}, rows of full column rank d."""
    order = linalg.independent_subset(rows)
    if len(order) != d:
        raise ValueError("constraint matrix must have full column rank")
    basis_rows = [rows[i] for i in order]
    inv = linalg.inverse(basis_rows)
    # columns of the inverse are the rays of the initial simplicial cone
    rays = [list(linalg.primitive([inv[i][j] for i in range(d)])) for j in range(d)]
    done = list(order)
    remaining = [i for i in range(len(rows)) if i not in order]

    def zero_set(ray):
        return frozenset(i for i in done if linalg.dot(rows[i], ray) == 0)

    for idx in remaining:
        a = rows[idx]
        vals = [linalg.dot(a, r) for r in rays]
        pos = [r for r, v in zip(rays, vals) if v > 0]
        neg = [r for r, v in zip(rays, vals) if v < 0]
        zer = [r for r, v in zip(rays, vals) if v == 0]
        if not neg:
            done.append(idx)
            continue
        zsets = {id(r): zero_set(r) for r in pos + neg}
        new = []
        for p in pos:
            for n in neg:
                common = zsets[id(p)] & zsets[id(n)]
                if len(common) < d - 2:
                    continue
                if linalg.rank([rows[i] for i in common], d) != d - 2:
                    continue
                ap, an = linalg.dot(a, p), linalg.dot(a, n)
                combo = [ap * x - an * y for x, y in zip(n, p)]
                new.append(list(linalg.primitive(combo)))
        rays = pos + zer + new
        done.append(idx)
    return rays


def extreme_rays(ineqs, eqs, n):
    """Extreme rays and lineality basis of {x in Q^n : ineqs.x >= 0, eqs.x = 0}.

    Rays are primitive integer tuples in sorted order; the lineality basis
    is a list of primitive integer tuples.
    """
    K = linalg.kernel(eqs, n) if eqs else linalg.kernel([], n)
    k = len(K)
    if k == 0:
        return [], []
    Ap = [[linalg.dot(a, col) for col in K] for a in ineqs]
    Lz = linalg.kernel(Ap, k) if Ap else linalg.kernel([], k)

    def lift(z):
        return [sum(z[j] * K[j][i] for j in range(k)) for i in range(n)]

    lineality = [linalg.primitive(lift(z)) for z in Lz]
    R = linalg.row_basis(Ap, k)
    d = len(R)
    if d == 0:
        return [], lineality
    App = [[linalg.dot(a, r) for r in R] for a in Ap]
    wrays = _dd_pointed(App, d)
    rays = set()
    for w in wrays:
        z = [sum(w[i] * R[i][j] for i in range(d)) for j in range(k)]
        rays.add(linalg.primitive(lift(z)))
    return sorted(rays), lineality


def cone_facets(vectors, n):
    """Inward facet normals of cone(vectors), taken inside span(vectors).

    Each normal y is a primitive integer vector in the linear span of the
    generators with y . g >= 0 for all generators g.
    """
    vectors = [list(v) for v in vectors if any(v)]
    if not vectors:
        return []
    perp = linalg.kernel(vectors, n)
    rays, lin = extreme_rays(vectors, perp, n)
    assert not lin
    return rays


def lineality_indices(vectors, n, normals=None):
    if normals is None:
        normals = cone_facets(vectors, n)
    return [i for i, v in enumerate(vectors)
            if all(linalg.dot(y, v) == 0 for y in normals)]


def face_supports(vectors, n):
    """All faces of cone(vectors) as (generator support, certificate).

    The certificate is an integer functional that is >= 0 on every
    generator and vanishes exactly on the support. The list is sorted by
    (support size, support).
    """
    vectors = [list(v) for v in vectors]
    normals = cone_facets(vectors, n)
    full = frozenset(range(len(vectors)))
    zsets = [frozenset(i for i, v in enumerate(vectors) if linalg.dot(y, v) == 0)
             for y in normals]
    faces = {full}
    frontier = [full]
    while frontier:
        nxt = []
        for f in frontier:
            for z in zsets:
                g = f & z
                if g not in faces:
                    faces.add(g)
                    nxt.append(g)
        frontier = nxt
    out = []
    for f in faces:
        cert = [0] * n
        for y, z in zip(normals, zsets):
            if f <= z:
                cert = [a + b for a, b in zip(cert, y)]
        out.append((tuple(sorted(f)), tuple(cert)))
    out.sort(key=lambda fc: (len(fc[0]), fc[0]))
    return out


def in_cone(x, normals, perp=()):
    """Membership of x in the cone with the given facet normals and
    equations (all exact)."""
    return all(linalg.dot(y, x) >= 0 for y in normals) and all(
        linalg.dot(e, x) == 0 for e in perp)


def simplicial_subsets(rays, d):
    """All d-subsets of rays that are linearly independent."""
    for sub in combinations(range(len(rays)), d):
        if linalg.rank([rays[i] for i in sub], d) == d:
            yield sub


__all__ = [
    "extreme_rays", "cone_facets", "face_supports", "lineality_indices", "in_cone",
    "simplicial_subsets",
]
