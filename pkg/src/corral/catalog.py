"""Standard small monoids used throughout the tests and the CLI fixtures."""

from .monoid import AffineMonoid, MonoidPresentation, free_group, integralize


def pyramid_presentation():
    """Four generators with the single relation p1 + p2 = p3 + p4."""
    return MonoidPresentation(("p1", "p2", "p3", "p4"), (((1, 1, 0, 0), (0, 0, 1, 1)),))


def pyramid():
    """The pyramid monoid in the coordinates (a, b, c), a, b >= 0, a + b >= c >= 0."""
    return AffineMonoid(free_group(3), ((1, 0, 0), (0, 1, 1), (0, 1, 0), (1, 0, 1)),
                        names=("p1", "p2", "p3", "p4"))


def pyramid_integralized():
    return integralize(pyramid_presentation())


def free_monoid(k, prefix="e"):
    return AffineMonoid(free_group(k), tuple(tuple(int(i == j) for j in range(k))
                                             for i in range(k)),
                        names=tuple(f"{prefix}{i + 1}" for i in range(k)))


def corner_monoid(n, k):
    """N^k x Z^(n-k) with generators e_1, ..., e_n and -(e_(k+1) + ... + e_n)."""
    gens = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    gens.append(tuple(0 if j < k else -1 for j in range(n)))
    return AffineMonoid(free_group(n), tuple(gens),
                        names=tuple(f"p{i + 1}" for i in range(n + 1)))


def integers():
    return AffineMonoid(free_group(1), ((1,), (-1,)), names=("u", "v"))


def naturals():
    return AffineMonoid(free_group(1), ((1,),), names=("x",))
