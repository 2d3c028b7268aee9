"""Exact integer linear algebra: Smith and Hermite forms, finitely generated
abelian groups, and nonnegative integer feasibility.

All arithmetic uses Python integers, so nothing overflows.
"""

from dataclasses import dataclass
from math import gcd
from typing import Optional, Sequence, Tuple


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix stored row-major."""

    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match shape")

    @classmethod
    def from_rows(cls, rows, cols=None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        flat = []
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
            flat.extend(int(x) for x in r)
        return cls(len(rows), cols, tuple(flat))

    @classmethod
    def identity(cls, n):
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    def to_rows(self):
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def column(self, j):
        return tuple(self[i, j] for i in range(self.rows))

    def transpose(self):
        return IntMatrix.from_rows(
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)], self.rows
        )

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        a, b = self.to_rows(), other.to_rows()
        out = [[sum(a[i][k] * b[k][j] for k in range(self.cols)) for j in range(other.cols)]
               for i in range(self.rows)]
        return IntMatrix.from_rows(out, other.cols)

    def det(self):
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return _bareiss_det(self.to_rows())


def _bareiss_det(m):
    n = len(m)
    if n == 0:
        return 1
    m = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def as_matrix(a, cols=None) -> IntMatrix:
    if isinstance(a, IntMatrix):
        return a
    return IntMatrix.from_rows(a, cols)


@dataclass(frozen=True)
class SNFDecomposition:
    """U * A * V = D with U, V unimodular and D in Smith form.

    ``diagonal`` lists all min(rows, cols) diagonal entries, zeros last.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    diagonal: Tuple[int, ...]

    @property
    def rank(self):
        return sum(1 for d in self.diagonal if d != 0)


def _min_nonzero(D, t, m, n):
    best = None
    for i in range(t, m):
        for j in range(t, n):
            v = D[i][j]
            if v and (best is None or abs(v) < abs(D[best[0]][best[1]])):
                best = (i, j)
    return best


def smith_normal_form(A) -> SNFDecomposition:
    """Smith normal form with pivot = smallest |entry|, ties to lowest (row, col)."""
    A = as_matrix(A)
    m, n = A.rows, A.cols
    D = A.to_rows()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        D[i], D[k] = D[k], D[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for row in D:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]

    def add_row(dst, src, q):
        # row dst -= q * row src
        D[dst] = [a - q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in D:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    t = 0
    while t < min(m, n):
        p = _min_nonzero(D, t, m, n)
        if p is None:
            break
        swap_rows(t, p[0])
        swap_cols(t, p[1])
        while True:
            piv = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, D[i][t] // piv)
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, D[t][j] // piv)
            # a nonzero remainder smaller than the pivot takes over
            best = None
            for i in range(t + 1, m):
                if D[i][t] and (best is None or abs(D[i][t]) < best[0]):
                    best = (abs(D[i][t]), "r", i)
            for j in range(t + 1, n):
                if D[t][j] and (best is None or abs(D[t][j]) < best[0]):
                    best = (abs(D[t][j]), "c", j)
            if best is not None:
                if best[1] == "r":
                    swap_rows(t, best[2])
                else:
                    swap_cols(t, best[2])
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if D[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, -1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1

    diag = tuple(D[i][i] for i in range(min(m, n)))
    return SNFDecomposition(
        IntMatrix.from_rows(U, m), IntMatrix.from_rows(D, n), IntMatrix.from_rows(V, n), diag
    )


def hermite_rows(rows, ncols):
    """Row-style Hermite normal form.

    Returns (H, T) with T unimodular and T * rows = H; H is echelon with
    positive pivots, entries above a pivot reduced into [0, pivot), and
    zero rows at the bottom.
    """
    H = [list(r) for r in rows]
    m = len(H)
    T = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(ncols):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if H[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(H[i][c]), i))
            H[r], H[i0] = H[i0], H[r]
            T[r], T[i0] = T[i0], T[r]
            clean = True
            for i in range(r + 1, m):
                if H[i][c]:
                    q = H[i][c] // H[r][c]
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    T[i] = [a - q * b for a, b in zip(T[i], T[r])]
                    if H[i][c]:
                        clean = False
            if clean:
                break
        if r >= m or H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            T[r] = [-x for x in T[r]]
        for i in range(r):
            q = H[i][c] // H[r][c]
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                T[i] = [a - q * b for a, b in zip(T[i], T[r])]
        r += 1
    return H, T


def integer_kernel(rows, ncols):
    """Basis (Hermite-reduced) of the lattice {x in Z^ncols : rows . x = 0}."""
    if not rows:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    snf = smith_normal_form(as_matrix(rows, ncols))
    V = snf.V.to_rows()
    basis = [[V[i][j] for i in range(ncols)] for j in range(snf.rank, ncols)]
    H, _ = hermite_rows(basis, ncols)
    return [tuple(h) for h in H if any(h)]


def solve_integer(rows, rhs, ncols):
    """One integer solution of rows . x = rhs, or None if none exists."""
    if not rows:
        return (0,) * ncols
    snf = smith_normal_form(as_matrix(rows, ncols))
    U, V = snf.U.to_rows(), snf.V.to_rows()
    ub = [sum(u * b for u, b in zip(row, rhs)) for row in U]
    y = [0] * ncols
    for i, b in enumerate(ub):
        d = snf.diagonal[i] if i < len(snf.diagonal) else 0
        if d == 0:
            if b != 0:
                return None
        else:
            if b % d:
                return None
            y[i] = b // d
    return tuple(sum(V[i][j] * y[j] for j in range(ncols)) for i in range(ncols))


@dataclass(frozen=True)
class AbelianGroupData:
    """Z^free_rank + Z/d_1 + ... + Z/d_t with d_i | d_(i+1), each d_i >= 2.

    Elements are integer tuples of length free_rank + t whose torsion
    entries are reduced into [0, d_i).
    """

    free_rank: int
    torsion_orders: Tuple[int, ...] = ()

    def __post_init__(self):
        for d in self.torsion_orders:
            if d < 2:
                raise ValueError("torsion orders must be >= 2")
        for a, b in zip(self.torsion_orders, self.torsion_orders[1:]):
            if b % a:
                raise ValueError("torsion orders must divide each other in order")

    @property
    def dim(self):
        return self.free_rank + len(self.torsion_orders)

    @property
    def is_trivial(self):
        return self.dim == 0

    @property
    def is_torsion_free(self):
        return not self.torsion_orders

    @property
    def exponent(self):
        return self.torsion_orders[-1] if self.torsion_orders else 1

    def canonical(self, v):
        v = tuple(int(x) for x in v)
        if len(v) != self.dim:
            raise ValueError(f"element {v} has wrong length for group of dimension {self.dim}")
        r = self.free_rank
        return v[:r] + tuple(x % d for x, d in zip(v[r:], self.torsion_orders))

    def zero(self):
        return (0,) * self.dim

    def add(self, a, b):
        return self.canonical(tuple(x + y for x, y in zip(a, b)))

    def sub(self, a, b):
        return self.canonical(tuple(x - y for x, y in zip(a, b)))

    def neg(self, a):
        return self.canonical(tuple(-x for x in a))

    def scale(self, k, a):
        return self.canonical(tuple(k * x for x in a))

    def combine(self, coeffs, elements):
        acc = [0] * self.dim
        for c, e in zip(coeffs, elements):
            for i, x in enumerate(e):
                acc[i] += c * x
        return self.canonical(acc)

    def relation_columns(self):
        """Columns d_i * e_(r+i) presenting the torsion inside Z^dim."""
        r = self.free_rank
        cols = []
        for k, d in enumerate(self.torsion_orders):
            col = [0] * self.dim
            col[r + k] = d
            cols.append(col)
        return cols

    def describe(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion_orders)
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class Projection:
    """Linear map Z^m -> group, given by an integer matrix, then reduced."""

    group: AbelianGroupData
    matrix: Tuple[Tuple[int, ...], ...]
    source_dim: int

    def __call__(self, v):
        v = list(v)
        return self.group.canonical([sum(a * b for a, b in zip(row, v)) for row in self.matrix])

    def images_of_basis(self):
        return [self([int(i == j) for j in range(self.source_dim)]) for i in range(self.source_dim)]


def _normalize_coordinates(free_rows, tors_rows, orders, m):
    """Canonical coordinate choice: Hermite form on the free part, then clear
    torsion entries on unit pivots of the free part."""
    H, _ = hermite_rows(free_rows, m)
    H = [h for h in H if any(h)]
    tors = [list(t) for t in tors_rows]
    for k, d in enumerate(orders):
        row = tors[k]
        for h in H:
            p = next(j for j, x in enumerate(h) if x)
            if h[p] == 1:
                c = -row[p]
                row = [a + c * b for a, b in zip(row, h)]
        tors[k] = [x % d for x in row]
    return H, tors


def cokernel_group(A, rows=None):
    """Z^rows / (column span of A), with the projection of Z^rows onto it."""
    if isinstance(A, IntMatrix):
        m = A.rows
        ncols = A.cols
        cols = [A.column(j) for j in range(ncols)]
    else:
        cols = [tuple(c) for c in A]
        if rows is None:
            raise ValueError("rows must be given when A is a list of columns")
        m = rows
        ncols = len(cols)
    if ncols == 0:
        group = AbelianGroupData(m, ())
        mat = tuple(tuple(int(i == j) for j in range(m)) for i in range(m))
        return group, Projection(group, mat, m)
    M = IntMatrix.from_rows([[cols[j][i] for j in range(ncols)] for i in range(m)], ncols)
    snf = smith_normal_form(M)
    U = snf.U.to_rows()
    diag = list(snf.diagonal) + [0] * (m - len(snf.diagonal))
    free_rows = [U[i] for i in range(m) if diag[i] == 0]
    tors_idx = [i for i in range(m) if diag[i] > 1]
    orders = tuple(diag[i] for i in tors_idx)
    H, tors = _normalize_coordinates(free_rows, [U[i] for i in tors_idx], orders, m)
    group = AbelianGroupData(len(H), orders)
    mat = tuple(tuple(r) for r in H + tors)
    return group, Projection(group, mat, m)


def subgroup_generated(group: AbelianGroupData, vectors):
    """Abstract structure of the subgroup spanned by ``vectors``, with the
    images of the given generators in its canonical coordinates."""
    k = len(vectors)
    lifted = [list(v) for v in vectors] + group.relation_columns()
    ncols = len(lifted)
    if k == 0:
        return AbelianGroupData(0, ()), []
    mat = [[lifted[j][i] for j in range(ncols)] for i in range(group.dim)]
    ker = integer_kernel(mat, ncols) if group.dim else [
        tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    rels = [kv[:k] for kv in ker if any(kv[:k])]
    sub, proj = cokernel_group(rels, rows=k)
    return sub, proj.images_of_basis()


def quotient_group(group: AbelianGroupData, vectors):
    """group / <vectors>, with a projection accepting group coordinates."""
    cols = group.relation_columns() + [list(v) for v in vectors]
    return cokernel_group(cols, rows=group.dim)


@dataclass(frozen=True)
class NonnegResult:
    status: str  # "found" | "not_found" | "bound_exceeded"
    coefficients: Optional[Tuple[int, ...]] = None

    @property
    def found(self):
        return self.status == "found"


def default_bound(target):
    return 64 * (1 + max((abs(int(x)) for x in target), default=0))


def _positive_relation(group, unit_gens):
    """A strictly positive integer vector e with sum e_j u_j = 0 in the group.

    Each unit generator has an inverse inside the monoid they span, so such
    a relation exists.
    """
    from .polyhedra import extreme_rays

    u = len(unit_gens)
    r = group.free_rank
    eq = [[g[i] for g in unit_gens] for i in range(r)]
    ident = [[int(i == j) for j in range(u)] for i in range(u)]
    rays, lin = extreme_rays(ident, eq, u)
    if lin:
        raise AssertionError("relation cone should be pointed")
    s = [sum(ray[j] for ray in rays) for j in range(u)]
    if any(x <= 0 for x in s):
        raise AssertionError("units without a positive relation")
    return [group.exponent * x for x in s]


def solve_nonneg(generators: Sequence, target, bound: Optional[int] = None,
                 group: Optional[AbelianGroupData] = None) -> NonnegResult:
    """Find a in N^n with sum a_i g_i = target in the group.

    Generators whose free part is in the lineality space of their cone are
    units of the monoid they span; the search runs in the quotient by those
    units, where a functional positive on the remaining generators bounds a
    breadth-first enumeration. Exhausting that enumeration certifies
    infeasibility.
    """
    from .polyhedra import cone_facets

    gens = [tuple(int(x) for x in g) for g in generators]
    target = tuple(int(x) for x in target)
    if group is None:
        group = AbelianGroupData(len(target), ())
    gens = [group.canonical(g) for g in gens]
    target = group.canonical(target)
    if bound is None:
        bound = default_bound(target)
    n = len(gens)
    if target == group.zero():
        return NonnegResult("found", (0,) * n)
    if n == 0:
        return NonnegResult("not_found")

    r = group.free_rank
    normals = cone_facets([g[:r] for g in gens], r)
    unit_idx = [i for i, g in enumerate(gens)
                if all(sum(a * b for a, b in zip(y, g[:r])) == 0 for y in normals)]
    pointed_idx = [i for i in range(n) if i not in unit_idx]
    units = [gens[i] for i in unit_idx]

    Q, proj = quotient_group(group, units)
    qg = [proj(gens[i]) for i in pointed_idx]
    qt = proj(target)
    rq = Q.free_rank
    qnormals = cone_facets([q[:rq] for q in qg], rq)
    ell = [sum(y[i] for y in qnormals) for i in range(rq)]

    def weight(v):
        return sum(a * b for a, b in zip(ell, v[:rq]))

    limit = weight(qt)
    start = Q.zero()
    seen = {start: (0,) * len(qg)}
    frontier = [start]
    depth = 0
    while qt not in seen:
        if not frontier:
            return NonnegResult("not_found")
        depth += 1
        if depth > bound:
            return NonnegResult("bound_exceeded")
        nxt = []
        for s in frontier:
            base = seen[s]
            for k, q in enumerate(qg):
                t = Q.add(s, q)
                if t in seen or weight(t) > limit:
                    continue
                coeffs = list(base)
                coeffs[k] += 1
                seen[t] = tuple(coeffs)
                nxt.append(t)
        frontier = nxt

    a = seen[qt]
    coeffs = [0] * n
    for k, i in enumerate(pointed_idx):
        coeffs[i] = a[k]
    if units:
        residual = group.sub(target, group.combine(a, [gens[i] for i in pointed_idx]))
        cols = [list(u) for u in units] + group.relation_columns()
        mat = [[c[i] for c in cols] for i in range(group.dim)]
        z = solve_integer(mat, list(residual), len(cols))
        if z is None:
            raise AssertionError("residual should lie in the unit subgroup")
        z = list(z[:len(units)])
        e = _positive_relation(group, units)
        lift = 0
        for zj, ej in zip(z, e):
            if zj < 0:
                lift = max(lift, -(zj // ej))
        z = [zj + lift * ej for zj, ej in zip(z, e)]
        for k, i in enumerate(unit_idx):
            coeffs[i] = z[k]
    if sum(coeffs) > bound:
        return NonnegResult("bound_exceeded")
    if group.combine(coeffs, gens) != target:
        raise AssertionError("nonnegative solution failed verification")
    return NonnegResult("found", tuple(coeffs))


def gcd_list(values):
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g
