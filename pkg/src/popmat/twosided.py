"""Two-sided total-order preferences on a pair of direct-sum matroids.

Each summand of each matroid is one voter; a voter compares two sets by
pairing exchanged elements inside its own summand (the feasible-pairing
rules) and voting pair by pair, plus the size difference.  Popularity
asks that the two vote totals, each taken under its most adversarial
pairing, sum to a nonnegative number against every rival.

The solver chain: restrict to dual-tight elements, slice each matroid
along its dual chain, lift everything onto leveled element copies, run
the deferred-acceptance kernel loop there, and project back.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import wmi
from .errors import DomainError, InfeasibleError, PreconditionError
from .exhaustive import DEFAULT_BUDGET, brute_popular, canon, enumerate_cis
from .matroids import Matroid, direct_sum
from .reports import PopularityReport


class OrderedMatroid:
    """Direct sum of per-agent matroids with one strict total order."""

    def __init__(self, summands, order):
        self.summands = tuple(summands)
        if not self.summands:
            raise DomainError("need at least one summand")
        self.matroid = direct_sum(self.summands) if len(self.summands) > 1 else self.summands[0]
        self.ground = self.matroid.ground
        order = tuple(order)
        if sorted(order) != sorted(self.ground):
            raise DomainError("order must be a total order on the union ground")
        self.order = order
        self._rank_in_order = {u: i for i, u in enumerate(order)}

    def prefers(self, u, v) -> bool:
        return self._rank_in_order[u] < self._rank_in_order[v]

    def is_independent(self, X) -> bool:
        return self.matroid.is_independent(X)

    def restricted(self, keep) -> "OrderedMatroid":
        keep = frozenset(keep)
        kept = [s.restrict(frozenset(s.ground) & keep) for s in self.summands]
        kept = [s for s in kept if s.ground] or kept[:1]
        return OrderedMatroid(kept, [u for u in self.order if u in keep])

    def __repr__(self):
        return f"OrderedMatroid(k={len(self.summands)}, |S|={len(self.ground)})"


@dataclass(frozen=True)
class ChainPair:
    """Inclusion chains prescribing rank-saturation targets per side."""

    c1: tuple
    c2: tuple

    def __post_init__(self):
        for chain in (self.c1, self.c2):
            ordered = sorted(chain, key=len)
            for a, b in zip(ordered, ordered[1:]):
                if not a < b:
                    raise DomainError("chain members must be strictly nested")

    @staticmethod
    def of(c1, c2) -> "ChainPair":
        return ChainPair(
            tuple(sorted((frozenset(C) for C in c1 if C), key=len)),
            tuple(sorted((frozenset(C) for C in c2 if C), key=len)),
        )


def feasible_pairings(M: OrderedMatroid, I, J):
    """Every feasible pairing between I-J and J-I, canonically sorted.

    Pairs live inside one summand, every pair is an exchange the matroid
    allows, uncovered incoming elements must be plain additions, and each
    summand carries as many pairs as its smaller side.
    """
    fi, fj = frozenset(I), frozenset(J)
    if not (M.is_independent(fi) and M.is_independent(fj)):
        raise PreconditionError("pairings are defined for independent sets")
    per_summand = []
    for s in M.summands:
        sg = frozenset(s.ground)
        A = sorted(sg & (fi - fj))
        B = sorted(sg & (fj - fi))
        need = min(len(A), len(B))
        local = fi & sg

        def extend(a_left, b_left, chosen):
            if len(chosen) == need:
                uncovered = [v for v in b_left]
                if all(s._indep(local | {v}) for v in uncovered):
                    yield frozenset(chosen)
                return
            if len(a_left) < need - len(chosen) or len(b_left) < need - len(chosen):
                return
            u = a_left[0]
            rest = a_left[1:]
            # u stays unpaired only if some other element can still fill the quota
            yield from extend(rest, b_left, chosen)
            for k, v in enumerate(b_left):
                if s._indep(local - {u} | {v}):
                    yield from extend(rest, b_left[:k] + b_left[k + 1 :], chosen + [(u, v)])

        found = set(extend(A, B, []))
        if not found:
            return []
        per_summand.append(sorted(found, key=lambda N: sorted(N)))
    out = [frozenset().union(*combo) if combo else frozenset()
           for combo in product(*per_summand)]
    return sorted(set(out), key=lambda N: sorted(N))


def vote(M: OrderedMatroid, I, J, pairing) -> int:
    """Pair-by-pair vote total for a given feasible pairing, plus |I|-|J|."""
    fi, fj = frozenset(I), frozenset(J)
    total = len(fi) - len(fj)
    for u, v in pairing:
        if u not in fi - fj or v not in fj - fi:
            raise PreconditionError("pairing does not match the two sets")
        total += 1 if M.prefers(u, v) else -1
    return total


def vote_min(M: OrderedMatroid, I, J) -> int:
    """Vote under the most adversarial feasible pairing for I."""
    pairings = feasible_pairings(M, I, J)
    if not pairings:
        raise AssertionError("no feasible pairing exists; matroid exchange broke")
    return min(vote(M, I, J, N) for N in pairings)


def is_kernel(m1: OrderedMatroid, m2: OrderedMatroid, I):
    """Stability test; returns (True, None) or (False, blocking element).

    An outside element must be dominated on at least one side: adding it
    breaks independence and every element it could replace is strictly
    better.
    """
    fi = frozenset(I)
    if not (m1.is_independent(fi) and m2.is_independent(fi)):
        raise PreconditionError("kernel candidates must be common independent sets")

    def dominated(M: OrderedMatroid, v) -> bool:
        if M.is_independent(fi | {v}):
            return False
        return all(
            M.prefers(u, v)
            for u in fi
            if M.is_independent(fi - {u} | {v})
        )

    for v in sorted(set(m1.ground) - fi):
        if not dominated(m1, v) and not dominated(m2, v):
            return False, v
    return True, None


def matroid_kernel(m1: OrderedMatroid, m2: OrderedMatroid) -> frozenset:
    """Deferred acceptance on matroids: propose greedily, keep greedily.

    The first side proposes its best independent set among unrejected
    elements; the second keeps its greedy choice inside the proposal;
    the difference is rejected for good.  The fixed point is verified
    with `is_kernel` and a failure aborts loudly.
    """
    if set(m1.ground) != set(m2.ground):
        raise DomainError("ordered matroids must share a ground set")
    rejected: set = set()
    ground = frozenset(m1.ground)
    while True:
        proposal = m1.matroid.greedy_choice(ground - rejected, m1.order)
        kept = m2.matroid.greedy_choice(proposal, m2.order)
        if kept == proposal:
            ok, blocker = is_kernel(m1, m2, kept)
            if not ok:
                raise AssertionError(f"kernel loop output blocked by {blocker!r}")
            return kept
        rejected |= proposal - kept


def is_critical(m1: OrderedMatroid, m2: OrderedMatroid, chains: ChainPair, I) -> bool:
    """Does I meet the rank of every chain member with equality, both sides?"""
    fi = frozenset(I)
    if not (m1.is_independent(fi) and m2.is_independent(fi)):
        raise PreconditionError("criticality is defined for common independent sets")
    for M, chain in ((m1, chains.c1), (m2, chains.c2)):
        for C in chain:
            if len(fi & C) != M.matroid.rank(C):
                return False
    return True


def transform_chains(M: OrderedMatroid, chain) -> Matroid:
    """Slice a matroid along a chain into a direct sum of gap minors.

    Each consecutive gap contributes the minor contract-below-restrict-to-
    gap; with an empty chain this is the single gap from nothing to the
    whole ground.
    """
    base = M.matroid
    ground = frozenset(base.ground)
    pieces = []
    below = frozenset()
    for C in tuple(chain) + (ground,):
        if C == below:
            continue
        pieces.append(base.contract(below).restrict(C - below))
        below = C
    if not pieces:
        pieces = [base.restrict(frozenset())]
    return direct_sum(pieces) if len(pieces) > 1 else pieces[0]


@dataclass
class LeveledGround:
    """Copy bookkeeping for the duplication transform."""

    copies: dict          # original -> {level: copy id}
    originals: dict       # copy id -> (original, level)
    rho1: int
    rho2: int

    def project(self, X) -> frozenset:
        return frozenset(self.originals[c][0] for c in X)

    def level_of(self, c) -> int:
        return self.originals[c][1]


class _LiftedMatroid(Matroid):
    """Copies of a matroid's elements; independent when the projection is
    independent and no element contributes two copies."""

    kind = "lifted"

    def __init__(self, base: Matroid, copies, originals):
        ground = []
        for u in base.ground:
            for lev in sorted(copies[u]):
                ground.append(copies[u][lev])
        super().__init__(ground)
        self.base = base
        self._originals = originals

    def _indep(self, fs):
        seen = set()
        for c in fs:
            u = self._originals[c][0]
            if u in seen:
                return False
            seen.add(u)
        return self.base._indep(frozenset(seen))


def build_leveled(m1p, m2p, order1, order2, cmax1, cmax2, rho1, rho2):
    """Duplicate elements into priority levels and lift both matroids.

    Elements inside the first side's top chain member get positive
    levels up to rho1, those inside the second side's get negative
    levels down to -rho2; everything keeps a level-0 copy.  The first
    side prefers lower levels, the second higher; original preferences
    break ties inside a level.
    """
    ground = m1p.ground if isinstance(m1p, Matroid) else tuple(m1p)
    copies = {}
    originals = {}
    for u in ground:
        levels = [0]
        if u in cmax1:
            levels += list(range(1, rho1 + 1))
        if u in cmax2:
            levels += [-k for k in range(1, rho2 + 1)]
        tagged = {}
        for lev in levels:
            cid = f"{u}@{lev}"
            tagged[lev] = cid
            originals[cid] = (u, lev)
        copies[u] = tagged

    def lift_summands(mp):
        summands = mp.children if hasattr(mp, "children") else (mp,)
        return [
            _LiftedMatroid(s, {u: copies[u] for u in s.ground}, originals)
            for s in summands
        ]

    all_copies = sorted(originals)
    pos1 = {u: i for i, u in enumerate(order1)}
    pos2 = {u: i for i, u in enumerate(order2)}
    order_1 = sorted(all_copies, key=lambda c: (originals[c][1], pos1[originals[c][0]]))
    order_2 = sorted(all_copies, key=lambda c: (-originals[c][1], pos2[originals[c][0]]))
    m1_star = OrderedMatroid(lift_summands(m1p), order_1)
    m2_star = OrderedMatroid(lift_summands(m2p), order_2)
    lev = LeveledGround(copies=copies, originals=originals, rho1=rho1, rho2=rho2)
    return m1_star, m2_star, lev


def solve_popular_critical(
    m1: OrderedMatroid,
    m2: OrderedMatroid,
    chains: ChainPair,
    budget=DEFAULT_BUDGET,
    verify=True,
) -> frozenset:
    """Popular chain-critical common independent set.

    Requires some critical set to exist (checked exhaustively at desk
    scale).  The output's criticality is always asserted; with `verify`
    the full popularity-within-critical check runs too.
    """
    cis = enumerate_cis(m1.matroid, m2.matroid, budget)
    critical = [X for X in cis if is_critical(m1, m2, chains, X)]
    if not critical:
        raise InfeasibleError("no chain-critical common independent set exists")

    m1p = transform_chains(m1, chains.c1)
    m2p = transform_chains(m2, chains.c2)
    cmax1 = chains.c1[-1] if chains.c1 else frozenset()
    cmax2 = chains.c2[-1] if chains.c2 else frozenset()
    rho1 = m1.matroid.rank(cmax1)
    rho2 = m2.matroid.rank(cmax2)
    m1_star, m2_star, lev = build_leveled(
        m1p, m2p, m1.order, m2.order, cmax1, cmax2, rho1, rho2
    )
    kernel = matroid_kernel(m1_star, m2_star)
    out = lev.project(kernel)
    if not is_critical(m1, m2, chains, out):
        raise AssertionError("projected kernel is not critical")
    if verify:
        for J in critical:
            if vote_min(m1, out, J) + vote_min(m2, out, J) < 0:
                raise AssertionError("projected kernel lost a head-to-head vote")
    return out


@dataclass
class ReducedTwoSided:
    """Tight restriction plus the chain targets induced by the dual."""

    m1: OrderedMatroid
    m2: OrderedMatroid
    chains: ChainPair
    dual: wmi.TwoSidedDual
    tight: frozenset


def reduce_weighted_two(m1: OrderedMatroid, m2: OrderedMatroid, w) -> ReducedTwoSided:
    """Restrict to dual-tight elements; dual supports become chain targets.

    Max-weight common independent sets of the input coincide with the
    chain-critical sets of the restriction, and pairings (hence votes)
    are untouched by the restriction.
    """
    dual = wmi.solve_dual_two(m1.matroid, m2.matroid, w)
    T = wmi.tight_elements(dual, m1.ground, w)
    c1 = [C & T for C in dual.y]
    c2 = [C & T for C in dual.z]
    return ReducedTwoSided(
        m1=m1.restricted(T),
        m2=m2.restricted(T),
        chains=ChainPair.of(c1, c2),
        dual=dual,
        tight=T,
    )


def solve_popular_max_weight_two(
    m1: OrderedMatroid, m2: OrderedMatroid, w, budget=DEFAULT_BUDGET
) -> PopularityReport:
    """Popular maximum-weight common independent set; always succeeds.

    The report carries the dual certificate, the tight set, the chains,
    a summary of the leveled instance, and the rival-by-rival vote
    transcript over all maximum-weight candidates.
    """
    if set(m1.ground) != set(m2.ground):
        raise DomainError("ordered matroids must share a ground set")
    ww = wmi.coerce_weights(m1.ground, w)
    red = reduce_weighted_two(m1, m2, ww)
    out = solve_popular_critical(red.m1, red.m2, red.chains, budget, verify=False)

    opt, _, rivals = wmi.max_weight_cis(m1.matroid, m2.matroid, ww, budget)
    verification = []
    for J in rivals:
        v1 = vote_min(m1, out, J)
        v2 = vote_min(m2, out, J)
        if v1 + v2 < 0:
            raise AssertionError("two-sided solver output lost a vote")
        verification.append(
            {"rival": list(canon(J)), "vote1": v1, "vote2": v2, "total": v1 + v2}
        )
    out_weight = sum((ww[u] for u in out), Fraction(0))
    if out_weight != opt:
        raise AssertionError("two-sided solver output is not maximum weight")

    certificate = {
        "optimum": str(opt),
        "dual": {
            "y": [{"set": list(canon(X)), "value": str(v)} for X, v in
                  sorted(red.dual.y.items(), key=lambda kv: (len(kv[0]), canon(kv[0])))],
            "z": [{"set": list(canon(X)), "value": str(v)} for X, v in
                  sorted(red.dual.z.items(), key=lambda kv: (len(kv[0]), canon(kv[0])))],
        },
        "tight": list(canon(red.tight)),
        "chains": {
            "c1": [list(canon(C)) for C in red.chains.c1],
            "c2": [list(canon(C)) for C in red.chains.c2],
        },
    }
    return PopularityReport(
        status="solution",
        solution=out,
        certificate=certificate,
        verification=verification,
    )
