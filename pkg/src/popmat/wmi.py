"""Weighted matroid intersection: exact optima and chain-supported duals.

Optima come from exhaustive enumeration (the empty set is always
feasible, so an optimum exists).  Dual certificates are computed by an
exact rational LP with one variable per ground subset, then uncrossed
into chain support; complementary slackness checkers turn the duals
into binary optimality tests with zero tolerance.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

from . import lp
from .errors import DomainError, PreconditionError
from .exhaustive import DEFAULT_BUDGET, canon, enumerate_cis, subsets_in_order
from .matroids import Matroid

# 2^|S| LP columns; above this the subset LP stops being a desk exercise
DUAL_GROUND_CAP = 12


def coerce_weights(ground, w) -> dict:
    ww = {u: Fraction(v) for u, v in dict(w).items()}
    missing = set(ground) - set(ww)
    if missing:
        raise DomainError(f"weight function undefined on {sorted(missing)}")
    return ww


@dataclass
class OneSidedDual:
    """LP dual (y, alpha) for a 1-partition matroid crossed with a matroid.

    `y` maps subsets to positive rationals with chain support; `alpha`
    maps part indices to nonnegative rationals.
    """

    y: dict
    alpha: dict


@dataclass
class TwoSidedDual:
    """LP dual (y, z) for two general matroids; both supports are chains."""

    y: dict
    z: dict


def max_weight_cis(m1: Matroid, m2: Matroid, w, budget=DEFAULT_BUDGET):
    """Exact optimum of w over common independent sets, by enumeration.

    Returns (opt value, lexicographically least maximizer, all maximizers).
    """
    ww = coerce_weights(m1.ground, w)
    cands = enumerate_cis(m1, m2, budget)
    best = None
    arg = []
    for X in cands:
        v = sum((ww[u] for u in X), Fraction(0))
        if best is None or v > best:
            best, arg = v, [X]
        elif v == best:
            arg.append(X)
    arg.sort(key=canon)
    return best, arg[0], arg


def _check_cap(n, allow_large):
    if n > DUAL_GROUND_CAP:
        if not allow_large:
            raise DomainError(
                f"ground size {n} above the dual LP cap {DUAL_GROUND_CAP}; "
                "pass allow_large=True to force"
            )
        warnings.warn(
            f"solving a subset LP with 2^{n} variables; this may take a while",
            stacklevel=3,
        )


def solve_dual_one(parts, m2: Matroid, w, allow_large=False) -> OneSidedDual:
    """Optimal chain-supported dual for the part-capacity intersection LP.

    `parts` lists the blocks of the 1-partition matroid on m2's ground.
    One LP variable per ground subset plus one per part; the y component
    is uncrossed before returning.
    """
    ground = m2.ground
    _check_cap(len(ground), allow_large)
    parts = [tuple(p) for p in parts]
    part_of = {}
    for i, p in enumerate(parts):
        for u in p:
            if u in part_of:
                raise DomainError(f"element {u!r} in two parts")
            part_of[u] = i
    if set(part_of) != set(ground):
        raise DomainError("parts do not partition the ground set")
    ww = coerce_weights(ground, w)

    subsets = list(subsets_in_order(ground))
    nsub = len(subsets)
    nvar = nsub + len(parts)
    objective = {j: Fraction(m2.rank(X)) for j, X in enumerate(subsets)}
    for i in range(len(parts)):
        objective[nsub + i] = Fraction(1)
    constraints = []
    for u in ground:
        coeffs = {j: 1 for j, X in enumerate(subsets) if u in X}
        coeffs[nsub + part_of[u]] = 1
        constraints.append((coeffs, lp.GE, ww[u]))
    _, x = lp.linprog_min(objective, constraints, nvar)

    y = {subsets[j]: x[j] for j in range(nsub) if x[j] != 0 and subsets[j]}
    alpha = {i: x[nsub + i] for i in range(len(parts))}
    y = uncross(y, m2.rank)
    return OneSidedDual(y=y, alpha=alpha)


def solve_dual_two(m1: Matroid, m2: Matroid, w, allow_large=False) -> TwoSidedDual:
    """Optimal dual with one chain-supported component per matroid."""
    if set(m1.ground) != set(m2.ground):
        raise DomainError("matroids do not share a ground set")
    ground = m1.ground
    _check_cap(len(ground), allow_large)
    ww = coerce_weights(ground, w)

    subsets = list(subsets_in_order(ground))
    nsub = len(subsets)
    objective = {}
    for j, X in enumerate(subsets):
        objective[j] = Fraction(m1.rank(X))
        objective[nsub + j] = Fraction(m2.rank(X))
    constraints = []
    for u in ground:
        coeffs = {}
        for j, X in enumerate(subsets):
            if u in X:
                coeffs[j] = 1
                coeffs[nsub + j] = 1
        constraints.append((coeffs, lp.GE, ww[u]))
    _, x = lp.linprog_min(objective, constraints, 2 * nsub)

    y = {subsets[j]: x[j] for j in range(nsub) if x[j] != 0 and subsets[j]}
    z = {subsets[j]: x[nsub + j] for j in range(nsub) if x[nsub + j] != 0 and subsets[j]}
    return TwoSidedDual(y=uncross(y, m1.rank), z=uncross(z, m2.rank))


def is_chain(sets) -> bool:
    ordered = sorted(sets, key=lambda X: (len(X), canon(X)))
    return all(a <= b for a, b in zip(ordered, ordered[1:]))


def uncross(y: dict, rank) -> dict:
    """Rewire a dual component onto a chain support.

    Repeatedly moves mass from an incomparable pair onto its union and
    intersection.  Per-element coverage is preserved exactly; rank
    submodularity makes the objective non-increasing, and the weighted
    sum of squared sizes strictly grows, which bounds the loop.
    """
    cur = {frozenset(X): Fraction(v) for X, v in y.items() if v}
    cur.pop(frozenset(), None)
    if any(v < 0 for v in cur.values()):
        raise PreconditionError("dual component has a negative entry")

    def crossing_pair():
        support = sorted(cur, key=lambda X: (len(X), canon(X)))
        for i, X in enumerate(support):
            for Y in support[i + 1 :]:
                if not (X <= Y or Y <= X):
                    return X, Y
        return None

    guard = sum(v * len(X) ** 2 for X, v in cur.items())
    while True:
        pair = crossing_pair()
        if pair is None:
            return cur
        X, Y = pair
        eps = min(cur[X], cur[Y])
        for S in (X, Y):
            cur[S] -= eps
            if not cur[S]:
                del cur[S]
        for S in (X & Y, X | Y):
            if S:
                cur[S] = cur.get(S, Fraction(0)) + eps
        new_guard = sum(v * len(X) ** 2 for X, v in cur.items())
        if new_guard <= guard:
            raise AssertionError("uncrossing failed to make progress")
        guard = new_guard


def coverage(y: dict, u) -> Fraction:
    return sum((v for X, v in y.items() if u in X), Fraction(0))


def dual_objective_one(dual: OneSidedDual, m2: Matroid) -> Fraction:
    total = sum((v * m2.rank(X) for X, v in dual.y.items()), Fraction(0))
    return total + sum(dual.alpha.values(), Fraction(0))


def dual_objective_two(dual: TwoSidedDual, m1: Matroid, m2: Matroid) -> Fraction:
    return sum((v * m1.rank(X) for X, v in dual.y.items()), Fraction(0)) + sum(
        (v * m2.rank(X) for X, v in dual.z.items()), Fraction(0)
    )


def tight_elements(dual, ground, w, parts=None) -> frozenset:
    """Elements whose covering constraint holds with equality."""
    ww = coerce_weights(ground, w)
    if isinstance(dual, OneSidedDual):
        if parts is None:
            raise DomainError("one-sided tightness needs the part structure")
        part_of = {u: i for i, p in enumerate(parts) for u in p}
        return frozenset(
            u
            for u in ground
            if coverage(dual.y, u) + dual.alpha.get(part_of[u], Fraction(0)) == ww[u]
        )
    return frozenset(
        u for u in ground if coverage(dual.y, u) + coverage(dual.z, u) == ww[u]
    )


def check_cs_one(I, dual: OneSidedDual, parts, m2: Matroid, w):
    """Complementary slackness test against a chain-supported optimal dual.

    Returns (True, None) when I is certified maximum-weight, otherwise
    (False, condition id) naming the first violated condition: dual
    tightness on members, part saturation where alpha is positive, or
    rank saturation on every chain member.
    """
    fi = frozenset(I)
    parts = [tuple(p) for p in parts]
    part_of = {u: i for i, p in enumerate(parts) for u in p}
    counts = {}
    for u in fi:
        counts[part_of[u]] = counts.get(part_of[u], 0) + 1
    if any(c > 1 for c in counts.values()) or not m2.is_independent(fi):
        raise PreconditionError("candidate is not a common independent set")
    ww = coerce_weights(m2.ground, w)
    for u in sorted(fi):
        if coverage(dual.y, u) + dual.alpha.get(part_of[u], Fraction(0)) != ww[u]:
            return False, "1.1"
    for i, a in dual.alpha.items():
        if a > 0 and counts.get(i, 0) != 1:
            return False, "1.2"
    for C in sorted(dual.y, key=lambda X: (len(X), canon(X))):
        if len(fi & C) != m2.rank(C):
            return False, "1.3"
    return True, None


def check_cs_two(I, dual: TwoSidedDual, m1: Matroid, m2: Matroid, w):
    """Two-sided analogue of `check_cs_one` (tightness plus chain criticality)."""
    fi = frozenset(I)
    if not (m1.is_independent(fi) and m2.is_independent(fi)):
        raise PreconditionError("candidate is not a common independent set")
    ww = coerce_weights(m1.ground, w)
    for u in sorted(fi):
        if coverage(dual.y, u) + coverage(dual.z, u) != ww[u]:
            return False, "2.1"
    for C in sorted(dual.y, key=lambda X: (len(X), canon(X))):
        if len(fi & C) != m1.rank(C):
            return False, "2.2"
    for C in sorted(dual.z, key=lambda X: (len(X), canon(X))):
        if len(fi & C) != m2.rank(C):
            return False, "2.2"
    return True, None
