"""Exact rational linear algebra on lists of Fractions.

Matrices are plain lists of rows. Everything here is tiny and dense, so
straightforward Gauss-Jordan elimination is all we need.
"""

from fractions import Fraction
from math import gcd


def to_fractions(rows):
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows, ncols=None):
    """Reduced row echelon form. Returns (matrix, pivot columns)."""
    m = to_fractions(rows)
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows, ncols=None):
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])


def kernel(rows, ncols):
    """Basis of {x : rows . x = 0} in Q^ncols."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -red[i][f]
        basis.append(v)
    return basis


def row_basis(rows, ncols=None):
    """Nonzero rows of the reduced echelon form (a basis of the row space)."""
    if not rows:
        return []
    return rref(rows, ncols)[0]


def solve(rows, rhs, ncols):
    """One rational solution of rows . x = rhs, or None."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, p in enumerate(pivots):
        x[p] = red[i][ncols]
    return x


def independent_subset(vectors):
    """Indices of a greedy maximal linearly independent subset."""
    chosen = []
    basis = []
    for i, v in enumerate(vectors):
        if rank(basis + [list(v)]) > len(basis):
            basis.append(list(v))
            chosen.append(i)
    return chosen


def primitive(v):
    """Scale a rational vector to a primitive integer vector, same direction."""
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def matmul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def transpose(a, ncols=None):
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(c) for c in zip(*a)]


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def inverse(rows):
    n = len(rows)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(rows)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]
