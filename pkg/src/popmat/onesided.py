"""One-sided preferences over a 1-partition matroid crossed with a matroid.

Agents are the blocks of the partition; each has a strict partial order
on its own elements with the empty outcome strictly worst.  Solvers
reduce popular maximum-weight (or maximum-utility) questions to popular
common base questions on a rebuilt pair of matroids, solve those
exhaustively, and map the answer back.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from . import wmi
from .errors import BudgetExceededError, DomainError, InfeasibleError, PreconditionError
from .exhaustive import (
    DEFAULT_BUDGET,
    brute_popular,
    canon,
    enumerate_family,
)
from .matroids import ExplicitMatroid, FreeMatroid, Matroid, direct_sum, one_partition
from .mnat import ValuedFamily, base_family_from, is_mnat_concave, weight_split
from .reports import PopularityReport


class AgentOrder:
    """Strict partial order of one agent over its part plus the empty outcome.

    Input pairs (u, v) mean u is strictly better than v; v may be None
    for the empty outcome.  Every element is forced above None.  The
    transitive closure is taken; reflexivity or symmetry after closure is
    rejected.
    """

    def __init__(self, part, pairs=()):
        self.part = tuple(part)
        pset = set(self.part)
        if len(pset) != len(self.part):
            raise DomainError("duplicate ids in part")
        better = set()
        for u, v in pairs:
            if u not in pset:
                raise DomainError(f"order mentions foreign element {u!r}")
            if v is not None and v not in pset:
                raise DomainError(f"order mentions foreign element {v!r}")
            better.add((u, v))
        for u in self.part:
            better.add((u, None))
        items = list(self.part) + [None]
        changed = True
        while changed:
            changed = False
            for a, b in list(better):
                for c in items:
                    if (b, c) in better and (a, c) not in better:
                        better.add((a, c))
                        changed = True
        for a, b in better:
            if a == b:
                raise DomainError(f"order is reflexive at {a!r}")
            if (b, a) in better:
                raise DomainError(f"order is not asymmetric on ({a!r}, {b!r})")
        self._better = frozenset(better)

    def prefers(self, u, v) -> bool:
        return (u, v) in self._better

    def strict_pairs(self):
        return self._better

    def restricted(self, keep, extra_worst=None) -> "AgentOrder":
        """Order induced on part & keep, optionally with a new worst element.

        `extra_worst` is appended to the part and placed strictly below
        every kept element (and nothing else).
        """
        kept = [u for u in self.part if u in keep]
        pairs = [
            (u, v)
            for (u, v) in self._better
            if u in keep and (v is None or v in keep)
        ]
        part = list(kept)
        if extra_worst is not None:
            part.append(extra_worst)
            pairs += [(u, extra_worst) for u in kept]
        return AgentOrder(part, pairs)


class OneSidedInstance:
    """Parts with orders, a second matroid, and a weight or utility objective."""

    def __init__(self, ground, agents, m2: Matroid, weights=None, utility=None):
        self.ground = tuple(ground)
        gs = frozenset(self.ground)
        if len(gs) != len(self.ground):
            raise DomainError("duplicate ids in ground")
        agents = tuple(agents)
        covered: set = set()
        for ag in agents:
            ps = set(ag.part)
            if ps & covered:
                raise DomainError("agent parts overlap")
            covered |= ps
        if covered != gs:
            raise DomainError("agent parts do not partition the ground set")
        if frozenset(m2.ground) != gs:
            raise DomainError("second matroid is on a different ground set")
        if (weights is None) == (utility is None):
            raise DomainError("give exactly one of weights or utility")
        self.agents = agents
        self.m2 = m2
        self.m1 = one_partition([ag.part for ag in agents], ground=self.ground)
        self.weights = None if weights is None else wmi.coerce_weights(self.ground, weights)
        if utility is not None:
            if frozenset(utility.ground) != gs:
                raise DomainError("utility table is on a different ground set")
            for X in utility.domain:
                if not m2.is_independent(X):
                    raise DomainError(
                        f"utility domain member {canon(X)} is dependent in m2"
                    )
            ok, witness = is_mnat_concave(utility)
            if not ok:
                X, Y, x = witness
                raise DomainError(
                    f"utility table fails the exchange property at "
                    f"({canon(X)}, {canon(Y)}, {x!r})"
                )
        self.utility = utility

    def assignment(self, X):
        """Per-agent assigned element (None when the agent gets nothing)."""
        fs = frozenset(X)
        out = []
        for ag in self.agents:
            hit = [u for u in ag.part if u in fs]
            if len(hit) > 1:
                raise PreconditionError("set assigns two elements to one agent")
            out.append(hit[0] if hit else None)
        return out

    def is_common_independent(self, X) -> bool:
        fs = frozenset(X)
        return self.m1.is_independent(fs) and self.m2.is_independent(fs)


def delta_over(agents, assign_i, assign_j) -> int:
    plus = minus = 0
    for ag, a, b in zip(agents, assign_i, assign_j):
        if a == b:
            continue
        if ag.prefers(a, b):
            plus += 1
        elif ag.prefers(b, a):
            minus += 1
    return plus - minus


def delta(inst: OneSidedInstance, I, J) -> int:
    """Signed vote count between two common independent sets.

    Agents whose assignments are incomparable under their partial order
    contribute nothing.
    """
    fi, fj = frozenset(I), frozenset(J)
    if not (inst.is_common_independent(fi) and inst.is_common_independent(fj)):
        raise PreconditionError("delta compares common independent sets only")
    return delta_over(inst.agents, inst.assignment(fi), inst.assignment(fj))


def _delta_on_parts(agents):
    def assign(fs):
        return [next((u for u in ag.part if u in fs), None) for ag in agents]

    def score(I, J):
        return delta_over(agents, assign(I), assign(J))

    return score


def common_bases_with_parts(agents, m2: Matroid, budget=DEFAULT_BUDGET):
    """Common bases of the 1-partition matroid of `agents` and m2."""
    parts = [ag.part for ag in agents]
    n = len(parts)
    if m2.full_rank() != n:
        return []
    if isinstance(m2, ExplicitMatroid) and m2.base_list is not None:
        block_of = {u: i for i, p in enumerate(parts) for u in p}
        out = []
        for B in m2.base_list:
            hits = {block_of[u] for u in B}
            if len(hits) == len(B) == n:
                out.append(B)
        return sorted(out, key=canon)
    cap = budget.max_candidates or 1_000_000
    size = 1
    for p in parts:
        size *= len(p)
        if size > cap:
            raise BudgetExceededError(f"common-base search space exceeds {cap}")
    out = []
    for pick in product(*parts):
        B = frozenset(pick)
        if m2._indep(B):
            out.append(B)
    return sorted(out, key=canon)


def solve_popular_common_base(agents, m2: Matroid, budget=DEFAULT_BUDGET):
    """Popular common base by exhaustive vote counting.

    Returns the lexicographically least popular base, or None when every
    base loses some head-to-head comparison.  Raises InfeasibleError when
    there is no common base at all.
    """
    bases = common_bases_with_parts(agents, m2, budget)
    if not bases:
        raise InfeasibleError("no common base exists")
    popular, _ = brute_popular(bases, _delta_on_parts(agents))
    return popular[0] if popular else None


@dataclass
class ReducedOneSided:
    """Popular-common-base instance produced by a reduction, plus the map back."""

    agents: tuple
    m2: Matroid
    dummies: dict
    source_ground: frozenset
    dual: wmi.OneSidedDual | None = None
    tight: frozenset | None = None
    chain: tuple = ()
    price: dict | None = None

    def project(self, B) -> frozenset:
        return frozenset(B) & self.source_ground

    def lift(self, I) -> frozenset:
        fs = frozenset(I)
        out = set(fs)
        for i, ag in enumerate(self.agents):
            if not any(u in fs for u in ag.part):
                if i not in self.dummies:
                    raise PreconditionError(
                        f"agent {i} is uncovered and has no dummy element"
                    )
                out.add(self.dummies[i])
        return frozenset(out)


def _fresh_dummy(i, taken) -> str:
    name = f"d{i}"
    while name in taken:
        name = "_" + name
    return name


def reduce_weighted(inst: OneSidedInstance) -> ReducedOneSided:
    """Rebuild the instance so common bases are the max-weight candidates.

    The tight elements of a chain-supported optimal dual survive; agents
    whose dual price is zero gain a dummy element ranked strictly below
    their surviving elements; the second matroid is sliced along the dual
    chain (contract below, restrict to the slice) with a truncated free
    tail absorbing the dummies.
    """
    if inst.weights is None:
        raise DomainError("reduce_weighted needs a weight objective")
    w = inst.weights
    ground = inst.ground
    parts = [ag.part for ag in inst.agents]
    n = len(parts)
    dual = wmi.solve_dual_one(parts, inst.m2, w)
    T = wmi.tight_elements(dual, ground, w, parts=parts)

    taken = set(ground)
    dummies = {}
    new_agents = []
    for i, ag in enumerate(inst.agents):
        alpha = dual.alpha.get(i, Fraction(0))
        if alpha == 0:
            d = _fresh_dummy(i, taken)
            taken.add(d)
            dummies[i] = d
            new_agents.append(ag.restricted(T, extra_worst=d))
        else:
            if not set(ag.part) & T:
                raise AssertionError(
                    "positive dual price on an agent with no tight element"
                )
            new_agents.append(ag.restricted(T))

    chain = sorted(dual.y, key=len)
    below = frozenset()
    summands = []
    for C in chain:
        piece = (C - below) & T
        summands.append(inst.m2.contract(below).restrict(piece))
        below = C
    r_top = inst.m2.rank(below)
    if r_top > n:
        raise AssertionError("chain rank exceeds the number of agents")
    tail_ground = (frozenset(ground) - below) & T
    tail = direct_sum(
        [
            inst.m2.contract(below).restrict(tail_ground),
            FreeMatroid([dummies[i] for i in sorted(dummies)]),
        ]
    ).truncate(n - r_top)
    m2_new = direct_sum(summands + [tail]) if summands else tail

    return ReducedOneSided(
        agents=tuple(new_agents),
        m2=m2_new,
        dummies=dummies,
        source_ground=frozenset(ground),
        dual=dual,
        tight=T,
        chain=tuple(chain),
    )


def reduce_mnat(inst: OneSidedInstance) -> ReducedOneSided:
    """Utility-objective analogue of `reduce_weighted`, via price splitting.

    A price vector decouples the joint maximization; each agent keeps
    only its top-priced elements (or just a dummy when its best price is
    negative), and the second matroid is the base family induced by the
    price-discounted argmax members inside the surviving ground, padded
    by dummies to one element per agent.
    """
    if inst.utility is None:
        raise DomainError("reduce_mnat needs a utility objective")
    f = inst.utility
    ground = inst.ground
    n = len(inst.agents)
    fam1 = enumerate_family(ground, inst.m1._indep)
    p = weight_split(fam1, f)

    taken = set(ground)
    dummies = {}
    new_agents = []
    star_all = set()
    for i, ag in enumerate(inst.agents):
        p_star = max(p[u] for u in ag.part)
        top = frozenset(u for u in ag.part if p[u] == p_star)
        if p_star > 0:
            star_all |= top
            new_agents.append(ag.restricted(top))
        elif p_star == 0:
            star_all |= top
            d = _fresh_dummy(i, taken)
            taken.add(d)
            dummies[i] = d
            new_agents.append(ag.restricted(top, extra_worst=d))
        else:
            d = _fresh_dummy(i, taken)
            taken.add(d)
            dummies[i] = d
            new_agents.append(AgentOrder([d]))

    discounted = f.shift({u: -p[u] for u in ground})
    _, arg = discounted.maximize()
    members = [X for X in arg if X <= star_all]
    star_ground = tuple(u for u in ground if u in star_all)
    dummy_ids = tuple(dummies[i] for i in sorted(dummies))
    m2_new = base_family_from(members, dummy_ids, n, ground=star_ground)

    return ReducedOneSided(
        agents=tuple(new_agents),
        m2=m2_new,
        dummies=dummies,
        source_ground=frozenset(ground),
        price=p,
    )


def _optimal_family(inst: OneSidedInstance, budget):
    """All objective-optimal common independent sets, plus the optimum."""
    if inst.weights is not None:
        opt, _, arg = wmi.max_weight_cis(inst.m1, inst.m2, inst.weights, budget)
        return opt, arg
    f = inst.utility
    fam1 = set(enumerate_family(inst.ground, inst.m1._indep, budget))
    joint = [X for X in f.domain if X in fam1]
    if not joint:
        raise InfeasibleError("no common independent set lies in the utility domain")
    opt = max(f.value(X) for X in joint)
    return opt, sorted((X for X in joint if f.value(X) == opt), key=canon)


def _dual_certificate(dual: wmi.OneSidedDual):
    return {
        "y": [
            {"set": list(canon(X)), "value": str(v)}
            for X, v in sorted(dual.y.items(), key=lambda kv: (len(kv[0]), canon(kv[0])))
        ],
        "alpha": {str(i): str(a) for i, a in sorted(dual.alpha.items())},
    }


def _solve_reduced(inst, red: ReducedOneSided, budget, kind):
    opt, rivals = _optimal_family(inst, budget)
    base = solve_popular_common_base(red.agents, red.m2, budget)
    certificate = {
        "reduction": kind,
        "optimum": str(opt),
        "reduced_parts": [list(ag.part) for ag in red.agents],
        "dummies": {str(i): d for i, d in sorted(red.dummies.items())},
    }
    if red.dual is not None:
        certificate["dual"] = _dual_certificate(red.dual)
        certificate["tight"] = list(canon(red.tight))
        certificate["chain"] = [list(canon(C)) for C in red.chain]
    if red.price is not None:
        certificate["price"] = {u: str(red.price[u]) for u in sorted(red.price)}

    if base is None:
        popular, witness = brute_popular(rivals, lambda I, J: delta_over(
            inst.agents, inst.assignment(I), inst.assignment(J)))
        if popular:
            raise AssertionError("reduction missed a popular optimal set")
        verification = [
            {"candidate": list(canon(I)), "beaten_by": list(canon(witness[I]))}
            for I in rivals
        ]
        return PopularityReport(
            status="none-exists",
            solution=None,
            certificate=certificate,
            verification=verification,
        )

    Iopt = red.project(base)
    certificate["reduced_base"] = list(canon(base))
    verification = []
    assign_i = inst.assignment(Iopt)
    for J in rivals:
        d = delta_over(inst.agents, assign_i, inst.assignment(J))
        if d < 0:
            raise AssertionError("solver produced an unpopular optimal set")
        verification.append({"rival": list(canon(J)), "delta": d})
    return PopularityReport(
        status="solution",
        solution=Iopt,
        certificate=certificate,
        verification=verification,
    )


def solve_popular_max_weight(
    inst: OneSidedInstance, budget=DEFAULT_BUDGET
) -> PopularityReport:
    """Popular maximum-weight common independent set, or none-exists."""
    red = reduce_weighted(inst)
    return _solve_reduced(inst, red, budget, kind="weighted")


def solve_popular_max_utility(
    inst: OneSidedInstance, budget=DEFAULT_BUDGET
) -> PopularityReport:
    """Popular maximum-utility common independent set, or none-exists."""
    red = reduce_mnat(inst)
    return _solve_reduced(inst, red, budget, kind="utility")
