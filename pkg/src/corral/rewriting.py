"""Commutative rewriting (Knuth-Bendix completion on exponent vectors).

A finitely presented commutative monoid N^n / ~ has a word problem that a
completed rewriting system decides. Completion may not finish under the
degree limit; callers then receive ``complete=False`` and must answer
"unknown".
"""

from collections import deque
from dataclasses import dataclass
from typing import Callable, List, Tuple

from .tri import Tri

Vec = Tuple[int, ...]


def deglex_key(w):
    return (sum(w), w)


def elimination_key(w):
    # the last coordinate is eliminated first
    return (w[-1], sum(w), w)


def _dominates(w, l):
    return all(a >= b for a, b in zip(w, l))


def _disjoint(a, b):
    return not any(x and y for x, y in zip(a, b))


@dataclass
class RewriteSystem:
    rules: List[Tuple[Vec, Vec]]
    key: Callable
    complete: bool

    def normal_form(self, w):
        w = tuple(w)
        changed = True
        while changed:
            changed = False
            for l, r in self.rules:
                if _dominates(w, l):
                    w = tuple(a - b + c for a, b, c in zip(w, l, r))
                    changed = True
                    break
        return w

    def equivalent(self, a, b):
        return self.normal_form(a) == self.normal_form(b)


def complete(pairs, n, key=deglex_key, degree_bound=12, degree=None,
             rule_cap=500, step_cap=50000) -> RewriteSystem:
    """Complete the congruence generated by ``pairs`` on N^n.

    ``degree`` measures words for the bound (total degree by default).
    """
    if degree is None:
        degree = sum
    system = RewriteSystem([], key, False)
    queue = deque((tuple(a), tuple(b)) for a, b in pairs)
    steps = 0
    while True:
        while queue:
            steps += 1
            if steps > step_cap:
                return system
            a, b = queue.popleft()
            a, b = system.normal_form(a), system.normal_form(b)
            if a == b:
                continue
            if key(a) < key(b):
                a, b = b, a
            if degree(a) > degree_bound:
                return system
            kept = []
            for l, r in system.rules:
                if _dominates(l, a):
                    queue.append((l, r))
                else:
                    kept.append((l, r))
            for l, r in kept:
                if not _disjoint(l, a):
                    m = tuple(max(x, y) for x, y in zip(l, a))
                    queue.append((tuple(p - q + s for p, q, s in zip(m, l, r)),
                                  tuple(p - q + s for p, q, s in zip(m, a, b))))
            kept.append((a, b))
            system.rules = kept
            if len(kept) > rule_cap:
                return system
        # final local-confluence check over the surviving rules
        for i, (l1, r1) in enumerate(system.rules):
            for l2, r2 in system.rules[i + 1:]:
                if _disjoint(l1, l2):
                    continue
                m = tuple(max(x, y) for x, y in zip(l1, l2))
                if degree(m) > degree_bound:
                    return system
                u = tuple(p - q + s for p, q, s in zip(m, l1, r1))
                v = tuple(p - q + s for p, q, s in zip(m, l2, r2))
                if not system.equivalent(u, v):
                    queue.append((u, v))
        if not queue:
            system.complete = True
            return system


@dataclass
class IntegralityReport:
    answer: Tri
    system: RewriteSystem
    witness: Tuple[Vec, Vec] = None


def check_integral(relations, n, degree_bound=12) -> IntegralityReport:
    """Semi-decide whether N^n / relations is cancellative.

    The lattice congruence (a ~ b iff a - b lies in the relation lattice) is
    the saturation of ~ by the product of all generators. It is computed by
    adjoining t with t + e_1 + ... + e_n = 0 and eliminating t. The monoid
    is integral iff every t-free rule of that system already holds in ~.
    Degrees are measured without t; the bound is raised to cover the
    presentation itself.
    """
    rels = [(tuple(u), tuple(v)) for u, v in relations]
    bound = max([degree_bound, n] + [max(sum(u), sum(v)) for u, v in rels])
    base = complete(rels, n, deglex_key, bound)
    if not base.complete:
        return IntegralityReport(Tri.UNKNOWN, base)
    ext = [(u + (0,), v + (0,)) for u, v in rels]
    ext.append(((1,) * (n + 1), (0,) * (n + 1)))
    elim = complete(ext, n + 1, elimination_key, bound, degree=lambda w: sum(w[:-1]))
    if not elim.complete:
        return IntegralityReport(Tri.UNKNOWN, base)
    for l, r in elim.rules:
        if l[-1] == 0 and r[-1] == 0:
            if not base.equivalent(l[:-1], r[:-1]):
                return IntegralityReport(Tri.NO, base, (l[:-1], r[:-1]))
    return IntegralityReport(Tri.YES, base)


def lattice_congruence_generators(relations, n, degree_bound=24):
    """Generators of the lattice congruence of the given relations, or None
    if elimination does not complete within the bound."""
    rels = [(tuple(u), tuple(v)) for u, v in relations]
    bound = max([degree_bound, n] + [max(sum(u), sum(v)) for u, v in rels])
    ext = [(u + (0,), v + (0,)) for u, v in rels]
    ext.append(((1,) * (n + 1), (0,) * (n + 1)))
    elim = complete(ext, n + 1, elimination_key, bound, degree=lambda w: sum(w[:-1]))
    if not elim.complete:
        return None
    out = [(l[:-1], r[:-1]) for l, r in elim.rules if l[-1] == 0 and r[-1] == 0]
    return sorted(out, key=lambda p: (sum(p[0]), p[0], p[1]))
