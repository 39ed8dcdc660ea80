"""Brute-force oracles: the ground truth every solver is measured against.

Everything here enumerates, within an explicit budget, and returns
canonically sorted results so outputs are stable across runs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .errors import BudgetExceededError, DomainError
from .matroids import Matroid


def canon(X):
    """Canonical key for an element set: the sorted id tuple."""
    return tuple(sorted(X))


@dataclass(frozen=True)
class EnumerationBudget:
    """Limits for exhaustive search; exceeding one aborts, never lies."""

    max_ground: int = 12
    max_candidates: int | None = None
    time_limit: float | None = None

    def check_ground(self, n):
        if n > self.max_ground:
            raise BudgetExceededError(
                f"ground size {n} exceeds enumeration budget {self.max_ground}"
            )


DEFAULT_BUDGET = EnumerationBudget()


def subsets_in_order(ground):
    """All subsets of an ordered ground, in bit-counting order."""
    ground = tuple(ground)
    n = len(ground)
    for mask in range(1 << n):
        yield frozenset(ground[j] for j in range(n) if mask >> j & 1)


def enumerate_family(ground, predicate, budget: EnumerationBudget = DEFAULT_BUDGET):
    """All subsets of `ground` satisfying `predicate`, canonically sorted."""
    ground = tuple(ground)
    budget.check_ground(len(ground))
    deadline = None if budget.time_limit is None else time.monotonic() + budget.time_limit
    out = []
    for fs in subsets_in_order(ground):
        if predicate(fs):
            out.append(fs)
            if budget.max_candidates is not None and len(out) > budget.max_candidates:
                raise BudgetExceededError(
                    f"candidate count exceeds budget {budget.max_candidates}"
                )
        if deadline is not None and time.monotonic() > deadline:
            raise BudgetExceededError("enumeration time budget exceeded")
    out.sort(key=canon)
    return out


def _shared_ground(m1: Matroid, m2: Matroid):
    if set(m1.ground) != set(m2.ground):
        raise DomainError("matroids do not share a ground set")
    return m1.ground


def enumerate_cis(m1: Matroid, m2: Matroid, budget: EnumerationBudget = DEFAULT_BUDGET):
    """All common independent sets of two matroids on the same ground."""
    ground = _shared_ground(m1, m2)
    return enumerate_family(
        ground, lambda fs: m1._indep(fs) and m2._indep(fs), budget
    )

def enumerate_common_bases(
    m1: Matroid, m2: Matroid, budget: EnumerationBudget = DEFAULT_BUDGET
):
    """All sets that are simultaneously a base of both matroids."""
    ground = _shared_ground(m1, m2)
    budget.check_ground(len(ground))
    r1, r2 = m1.full_rank(), m2.full_rank()
    if r1 != r2:
        return []
    return enumerate_family(
        ground,
        lambda fs: len(fs) == r1 and m1._indep(fs) and m2._indep(fs),
        budget,
    )


def brute_popular(candidates, score):
    """Members of `candidates` undominated under the pairwise `score`.

    `score(I, J)` is the signed comparison (positive favors I).  Returns
    (popular list, witness map) where the witness map sends each dominated
    candidate to one strict dominator.
    """
    cands = sorted(candidates, key=canon)
    popular = []
    witness = {}
    for I in cands:
        beaten = None
        for J in cands:
            if score(I, J) < 0:
                beaten = J
                break
        if beaten is None:
            popular.append(I)
        else:
            witness[I] = beaten
    return popular, witness


# ----------------------------------------------------------------------
# axiom checkers (test oracles)


def independence_axioms_hold(M: Matroid):
    """Exhaustive (I1)+(I2) check; returns (ok, witness)."""
    indep = [fs for fs in subsets_in_order(M.ground) if M._indep(fs)]
    fam = set(indep)
    if frozenset() not in fam:
        return False, ("empty set dependent",)
    for X in indep:
        for u in X:
            if X - {u} not in fam:
                return False, ("I1", canon(X), u)
    by_size: dict[int, list[frozenset]] = {}
    for X in indep:
        by_size.setdefault(len(X), []).append(X)
    # single-step augmentation plus (I1) implies the general axiom
    for k, smaller in by_size.items():
        for big in by_size.get(k + 1, []):
            for small in smaller:
                if not any(small | {x} in fam for x in big - small):
                    return False, ("I2", canon(small), canon(big))
    return True, None


def rank_is_submodular(M: Matroid):
    """Check r(X)+r(Y) >= r(X|Y)+r(X&Y) over all pairs; returns (ok, witness)."""
    subs = list(subsets_in_order(M.ground))
    for X in subs:
        for Y in subs:
            if M.rank(X) + M.rank(Y) < M.rank(X | Y) + M.rank(X & Y):
                return False, (canon(X), canon(Y))
    return True, None
