"""Hilbert bases of pointed rational cones intersected with Z^n.

Every lattice point of a pointed cone lies in some simplicial subcone
spanned by linearly independent extreme rays, and there it is an
N-combination of those rays plus a point of the half-open fundamental
parallelepiped. Rays and parallelepiped points together therefore generate
the monoid; the Hilbert basis is the set of irreducible elements among them.
"""

from fractions import Fraction
from math import floor

from . import linalg
from .errors import HilbertBoundExceeded
from .lattice import integer_kernel, smith_normal_form, solve_integer
from .polyhedra import cone_facets, extreme_rays, simplicial_subsets

DEFAULT_CAP = 10000


def _parallelepiped_points(cols, d):
    """Integer points sum t_i c_i with t in [0,1)^d (excluding 0)."""
    M = [[cols[j][i] for j in range(d)] for i in range(d)]
    snf = smith_normal_form(M)
    Uinv = [[int(x) for x in row] for row in linalg.inverse(snf.U.to_rows())]
    Minv = linalg.inverse(M)
    orders = list(snf.diagonal)
    points = []

    def rec(i, k):
        if i == d:
            v = [sum(Uinv[r][c] * k[c] for c in range(d)) for r in range(d)]
            t = [sum(Minv[r][c] * v[c] for c in range(d)) for r in range(d)]
            frac = [x - floor(x) for x in t]
            p = [sum(M[r][c] * frac[c] for c in range(d)) for r in range(d)]
            p = tuple(int(x) for x in p)
            if any(p):
                points.append(p)
            return
        for a in range(orders[i]):
            rec(i + 1, k + [a])

    rec(0, [])
    return points


def _irreducibles(cands, normals):
    ell = [sum(y[i] for y in normals) for i in range(len(normals[0]))] if normals else None
    weight = {c: linalg.dot(ell, c) for c in cands}
    order = sorted(cands, key=lambda c: (weight[c], c))
    basis = []
    for x in order:
        reducible = False
        for y in basis:
            if weight[y] >= weight[x]:
                continue
            diff = [a - b for a, b in zip(x, y)]
            if all(linalg.dot(nv, diff) >= 0 for nv in normals):
                reducible = True
                break
        if not reducible:
            basis.append(x)
    return basis


def hilbert_basis(ineqs, eqs, n, cap=DEFAULT_CAP):
    """Sorted Hilbert basis of {x in Z^n : ineqs.x >= 0, eqs.x = 0}.

    The cone must be pointed. Raises HilbertBoundExceeded when more than
    ``cap`` candidate vectors would be generated.
    """
    rays, lin = extreme_rays(ineqs, eqs, n)
    if lin:
        raise ValueError("Hilbert basis requested for a cone with lineality")
    if not rays:
        return []
    perp = integer_kernel([list(r) for r in rays], n)
    basis = integer_kernel([list(p) for p in perp], n) if perp else [
        tuple(int(i == j) for j in range(n)) for i in range(n)]
    d = len(basis)
    bmat = [[basis[j][i] for j in range(d)] for i in range(n)]
    coords = []
    for r in rays:
        c = solve_integer(bmat, list(r), d)
        assert c is not None
        coords.append(tuple(c))
    normals = cone_facets(coords, d)
    cands = set(coords)
    for sub in simplicial_subsets(coords, d):
        for p in _parallelepiped_points([coords[i] for i in sub], d):
            cands.add(p)
            if len(cands) > cap:
                raise HilbertBoundExceeded(
                    f"Hilbert basis candidate count exceeded {cap}")
    hb = _irreducibles(cands, normals)
    out = sorted(tuple(sum(basis[j][i] * c[j] for j in range(d)) for i in range(n))
                 for c in hb)
    return out


def hilbert_basis_of_generators(gens, n, cap=DEFAULT_CAP):
    """Hilbert basis of cone(gens) intersected with Z^n (cone must be pointed)."""
    gens = [list(g) for g in gens if any(g)]
    if not gens:
        return []
    normals = cone_facets(gens, n)
    perp = linalg.kernel(gens, n)
    return hilbert_basis([list(y) for y in normals], [list(map(Fraction, p)) for p in perp],
                         n, cap)
