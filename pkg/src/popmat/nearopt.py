"""Near-optimal popular matching machinery on bipartite graphs.

This covers the hardness side of the package: the reduction from exact
matching to popularity over near-maximum-weight matchings, the special
edge and cycle gadgets whose thresholds kill every candidate, a
k-popularity verifier (exhaustive, plus an exact LP route on the
extended graph with self-loops for unit weights), and brute-force
near-optimal solvers used as oracles.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from . import lp
from .errors import DomainError, PreconditionError
from .exhaustive import canon

_INF = float("inf")


class PrefBipartite:
    """Bipartite preference instance; one- or two-sided, weighted, thresholded.

    Preferences are ranked tiers of neighbor ids (ties inside a tier).
    One-sided instances carry preferences for the left side only and may
    contain ties; two-sided instances are strict on both sides.
    """

    def __init__(
        self,
        a_side,
        b_side,
        edges,
        prefs,
        weights=None,
        threshold=None,
        two_sided=False,
    ):
        self.a_side = tuple(a_side)
        self.b_side = tuple(b_side)
        if set(self.a_side) & set(self.b_side):
            raise DomainError("vertex sides overlap")
        if len(set(self.a_side)) != len(self.a_side) or len(set(self.b_side)) != len(
            self.b_side
        ):
            raise DomainError("duplicate vertex ids")
        known = set(self.a_side) | set(self.b_side)
        seen = set()
        es = []
        for a, b in edges:
            if a not in set(self.a_side) or b not in set(self.b_side):
                raise DomainError(f"edge ({a!r}, {b!r}) leaves the bipartition")
            if (a, b) in seen:
                raise DomainError(f"duplicate edge ({a!r}, {b!r})")
            seen.add((a, b))
            es.append((a, b))
        self.edges = tuple(es)
        nbr: dict = {v: [] for v in known}
        for a, b in self.edges:
            nbr[a].append(b)
            nbr[b].append(a)
        self.neighbors = {v: tuple(ns) for v, ns in nbr.items()}
        self.two_sided = bool(two_sided)

        voters = known if self.two_sided else set(self.a_side)
        self.prefs = {}
        self._tier = {}
        for v in sorted(voters):
            tiers = prefs.get(v)
            if tiers is None:
                if self.neighbors[v]:
                    raise DomainError(f"missing preferences for {v!r}")
                tiers = ()
            tiers = tuple(tuple(t) for t in tiers if len(tuple(t)))
            flat = [u for t in tiers for u in t]
            if sorted(flat) != sorted(self.neighbors[v]):
                raise DomainError(
                    f"preferences of {v!r} do not cover exactly its neighbors"
                )
            if self.two_sided and any(len(t) > 1 for t in tiers):
                raise DomainError(f"ties at {v!r} are not allowed two-sided")
            self.prefs[v] = tiers
            for rank, t in enumerate(tiers):
                for u in t:
                    self._tier[(v, u)] = rank
        extra = set(prefs) - voters
        if extra:
            raise DomainError(f"preferences given for non-voters {sorted(extra)}")

        ww = {}
        if weights is not None:
            for e, v in dict(weights).items():
                e = tuple(e)
                if e not in seen:
                    raise DomainError(f"weight for unknown edge {e!r}")
                ww[e] = Fraction(v)
        self.weights = {e: ww.get(e, Fraction(1)) for e in self.edges}
        self.threshold = None if threshold is None else Fraction(threshold)

    # ------------------------------------------------------------------

    def voters(self):
        if self.two_sided:
            return self.a_side + self.b_side
        return self.a_side

    def rank_of(self, v, u):
        """Tier index of neighbor u in v's list; unmatched compares as worst."""
        if u is None:
            return _INF
        return self._tier[(v, u)]

    def weight_of(self, M) -> Fraction:
        return sum((self.weights[e] for e in M), Fraction(0))

    def is_matching(self, M) -> bool:
        seen = set()
        for a, b in M:
            if (a, b) not in self.weights:
                return False
            if a in seen or b in seen:
                return False
            seen.add(a)
            seen.add(b)
        return True

    def partner_map(self, M) -> dict:
        mu = {}
        for a, b in M:
            mu[a] = b
            mu[b] = a
        return mu


def delta_matchings(G: PrefBipartite, M, N) -> int:
    """Signed vote count between two matchings under G's voting model."""
    mu_m = G.partner_map(M)
    mu_n = G.partner_map(N)
    plus = minus = 0
    for v in G.voters():
        rm = G.rank_of(v, mu_m.get(v))
        rn = G.rank_of(v, mu_n.get(v))
        if rm < rn:
            plus += 1
        elif rn < rm:
            minus += 1
    return plus - minus


def matchings_with_weight_at_least(G: PrefBipartite, k):
    """All matchings of weight at least k, canonically sorted."""
    k = Fraction(k)
    edges = sorted(G.edges)
    gains = [max(G.weights[e], Fraction(0)) for e in edges]
    suffix = [Fraction(0)] * (len(edges) + 1)
    for i in range(len(edges) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + gains[i]
    out = []

    def walk(i, used, acc, chosen):
        if acc + suffix[i] < k:
            return
        if i == len(edges):
            out.append(frozenset(chosen))
            return
        a, b = edges[i]
        walk(i + 1, used, acc, chosen)
        if a not in used and b not in used:
            used |= {a, b}
            chosen.append((a, b))
            walk(i + 1, used, acc + G.weights[(a, b)], chosen)
            chosen.pop()
            used -= {a, b}

    walk(0, set(), Fraction(0), [])
    return sorted(set(out), key=lambda m: sorted(m))


def verify_k_popular(G: PrefBipartite, M, k=None):
    """Is M popular among matchings of weight at least k?

    Exhaustive over rivals; returns (True, None) or (False, rival).
    Requires M itself to clear the threshold.
    """
    k = G.threshold if k is None else Fraction(k)
    if k is None:
        raise DomainError("no threshold given")
    M = frozenset(tuple(e) for e in M)
    if not G.is_matching(M):
        raise PreconditionError("candidate is not a matching of the instance")
    if G.weight_of(M) < k:
        raise PreconditionError("candidate is below the weight threshold")
    for N in matchings_with_weight_at_least(G, k):
        if delta_matchings(G, M, N) < 0:
            return False, N
    return True, None


def verify_k_popular_lp(G: PrefBipartite, M, k=None):
    """LP route for unit weights: extended graph with per-vertex self-loops.

    Costs are votes against M; M is popular among matchings of size at
    least k exactly when no perfect matching of the extended graph with
    at least k real edges has negative cost.  The constraint matrix is
    totally unimodular, so the basic optimum is integral and doubles as
    the dominating rival when one exists.
    """
    k = G.threshold if k is None else Fraction(k)
    if k is None:
        raise DomainError("no threshold given")
    if any(w != 1 for w in G.weights.values()):
        raise DomainError("the LP verifier applies to unit weights only")
    M = frozenset(tuple(e) for e in M)
    if not G.is_matching(M):
        raise PreconditionError("candidate is not a matching of the instance")
    if Fraction(len(M)) < k:
        raise PreconditionError("candidate is below the size threshold")

    mu = G.partner_map(M)

    def vote_against(v, u):
        # +1 when v prefers its M-partner to u, -1 when it prefers u
        rm = G.rank_of(v, mu.get(v))
        rn = G.rank_of(v, u)
        return 0 if rm == rn else (1 if rm < rn else -1)

    verts = list(G.a_side) + list(G.b_side)
    cols = list(G.edges) + [(v, v) for v in verts]
    cost = []
    for a, b in G.edges:
        c = vote_against(a, b)
        if G.two_sided:
            c += vote_against(b, a)
        cost.append(Fraction(c))
    for v in verts:
        cost.append(Fraction(vote_against(v, None)) if (G.two_sided or v in set(G.a_side)) else Fraction(0))

    col_idx = {e: j for j, e in enumerate(cols)}
    constraints = []
    for v in verts:
        coeffs = {col_idx[(v, v)]: 1}
        for u in G.neighbors[v]:
            e = (v, u) if (v, u) in col_idx else (u, v)
            coeffs[col_idx[e]] = 1
        constraints.append((coeffs, lp.EQ, 1))
    constraints.append(({j: 1 for j in range(len(G.edges))}, lp.GE, k))
    value, x = lp.linprog_min(cost, constraints, len(cols))
    if value >= 0:
        return True, None
    if any(x[j] not in (0, 1) for j in range(len(cols))):
        raise AssertionError("extended-graph LP returned a fractional vertex")
    rival = frozenset(G.edges[j] for j in range(len(G.edges)) if x[j] == 1)
    return False, rival


def solve_near_opt_brute(G: PrefBipartite, k=None):
    """First popular matching among those above the threshold, or None.

    Candidates are scanned in canonical order; recently found dominators
    are retried first, which keeps the quadratic scan shallow in practice.
    """
    k = G.threshold if k is None else Fraction(k)
    if k is None:
        raise DomainError("no threshold given")
    candidates = matchings_with_weight_at_least(G, k)
    killers: list = []
    for M in candidates:
        dominated = False
        for N in killers:
            if delta_matchings(G, M, N) < 0:
                dominated = True
                break
        if dominated:
            continue
        for N in candidates:
            if delta_matchings(G, M, N) < 0:
                killers.insert(0, N)
                del killers[12:]
                dominated = True
                break
        if not dominated:
            return M
    return None


# ----------------------------------------------------------------------
# gadget constructions


def special_edge(vi, vj, level_count, tag):
    """Path gadget with `level_count` mutually-top inner pairs.

    Returns (vertices, edges, prefs) where prefs cover the inner
    vertices only; the corners vi, vj are left to the caller.  Inner
    vertex ids are namespaced by `tag`.
    """
    if level_count < 1:
        raise DomainError("special edges need at least one inner pair")
    inner = []
    for h in range(1, level_count + 1):
        inner += [f"{tag}:{h}a", f"{tag}:{h}b"]
    path = [vi] + inner + [vj]
    edges = list(zip(path, path[1:]))
    prefs = {}
    for h in range(1, level_count + 1):
        first, second = f"{tag}:{h}a", f"{tag}:{h}b"
        left = vi if h == 1 else f"{tag}:{h - 1}b"
        right = vj if h == level_count else f"{tag}:{h + 1}a"
        prefs[first] = [[second], [left]]
        prefs[second] = [[first], [right]]
    return inner, edges, prefs


def cycle_gadget(corner_pairs, level_count) -> PrefBipartite:
    """Ring of 2K corners joined by special edges, forward edge preferred.

    With K = corner_pairs, the instance has (2 * level_count + 1) * 2K
    vertices; for level_count >= 2 and any integer threshold strictly
    between 2*level_count*K and (2*level_count + 1)*K it admits no
    popular matching of that size.
    """
    K = corner_pairs
    if K < 1 or level_count < 1:
        raise DomainError("need at least one corner pair and one level")
    m = 2 * K
    corners = [f"v{i}" for i in range(1, m + 1)]
    all_edges = []
    prefs = {}
    forward = {}
    backward = {}
    for i in range(1, m + 1):
        vi = f"v{i}"
        vj = f"v{i % m + 1}"
        inner, edges, p = special_edge(vi, vj, level_count, tag=f"e{i}")
        all_edges += edges
        prefs.update(p)
        forward[vi] = inner[0]
        backward[vj] = inner[-1]
    for vi in corners:
        prefs[vi] = [[forward[vi]], [backward[vi]]]

    ring = []
    for i in range(1, m + 1):
        vi = f"v{i}"
        ring.append(vi)
        for h in range(1, level_count + 1):
            ring += [f"e{i}:{h}a", f"e{i}:{h}b"]
    a_side = [v for i, v in enumerate(ring) if i % 2 == 0]
    b_side = [v for i, v in enumerate(ring) if i % 2 == 1]
    aset = set(a_side)
    oriented = [(a, b) if a in aset else (b, a) for a, b in all_edges]
    return PrefBipartite(a_side, b_side, oriented, prefs, two_sided=True)


# ----------------------------------------------------------------------
# exact matching


@dataclass(frozen=True)
class ColoredBipartite:
    """Balanced bipartite graph with red/blue edges."""

    a_side: tuple
    b_side: tuple
    edges: tuple  # (a, b, "red" | "blue")

    def __post_init__(self):
        seen = set()
        for a, b, color in self.edges:
            if color not in ("red", "blue"):
                raise DomainError(f"bad edge color {color!r}")
            if a not in self.a_side or b not in self.b_side:
                raise DomainError(f"edge ({a!r}, {b!r}) leaves the bipartition")
            if (a, b) in seen:
                raise DomainError(f"duplicate edge ({a!r}, {b!r})")
            seen.add((a, b))


def exact_matching_brute(G: ColoredBipartite, k):
    """Perfect matching with exactly k red edges, by enumeration; or None."""
    n = len(G.a_side)
    if len(G.b_side) != n:
        raise DomainError("sides are unbalanced")
    adj = {a: [] for a in G.a_side}
    color = {}
    for a, b, c in G.edges:
        adj[a].append(b)
        color[(a, b)] = c
    for perm in permutations(G.b_side):
        pairing = list(zip(G.a_side, perm))
        if all(b in adj[a] for a, b in pairing):
            reds = sum(1 for e in pairing if color[e] == "red")
            if reds == k:
                return frozenset(pairing)
    return None


def reduce_exact_matching(G: ColoredBipartite, k):
    """Build the near-opt instance whose popular solutions decide exact matching.

    Every original vertex pair spawns a chain of selector agents and
    objects; red edges make the private object preferred, blue edges the
    shared one, and only blue shared edges carry weight zero.  Returns
    (instance, decode) where decode maps a matching of the instance back
    to the original edges it selects.
    """
    n = len(G.a_side)
    if len(G.b_side) != n:
        raise DomainError("sides are unbalanced")
    m = len(G.edges)
    incident = {a: [] for a in G.a_side}
    for a, b, c in G.edges:
        incident[a].append((b, c))
    for a in incident:
        incident[a].sort()

    agents = []
    objects = [f"{b}'" for b in G.b_side]
    edges = []
    prefs = {}
    weights = {}
    back = {}
    for a in G.a_side:
        d = len(incident[a])
        xs = [f"{a}:x{p}" for p in range(1, d)]
        objects += [f"{a}:o{l}" for l in range(1, d + 1)] + xs
        for l, (b, color) in enumerate(incident[a], start=1):
            sel, chooser = f"{a}:a{l}", f"{a}:c{l}"
            o, shared = f"{a}:o{l}", f"{b}'"
            agents += [sel, chooser]
            edges += [(sel, o), (sel, shared), (chooser, o)]
            edges += [(chooser, x) for x in xs]
            if color == "red":
                prefs[sel] = [[o], [shared]]
            else:
                prefs[sel] = [[shared], [o]]
                weights[(sel, shared)] = 0
            prefs[chooser] = ([list(xs)] if xs else []) + [[o]]
            back[(sel, shared)] = (a, b)

    inst = PrefBipartite(
        agents,
        objects,
        edges,
        prefs,
        weights=weights,
        threshold=2 * m + k - n,
        two_sided=False,
    )

    def decode(matching) -> frozenset:
        return frozenset(back[e] for e in matching if e in back)

    return inst, decode


def exact_matching_via_reduction(G: ColoredBipartite, k):
    """Decision procedure on the reduced instance; mirrors the brute answer.

    Solve the reduced popularity problem; absent a solution the answer is
    no, otherwise the decoded matching must be perfect with exactly k red
    edges to certify yes.
    """
    inst, decode = reduce_exact_matching(G, k)
    sol = solve_near_opt_brute(inst)
    if sol is None:
        return None
    induced = decode(sol)
    n = len(G.a_side)
    perfect = (
        len(induced) == n
        and len({a for a, _ in induced}) == n
        and len({b for _, b in induced}) == n
    )
    reds = {(a, b) for a, b, c in G.edges if c == "red"}
    if perfect and len(induced & reds) == k:
        return induced
    return None
