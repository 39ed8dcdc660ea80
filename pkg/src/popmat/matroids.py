"""Oracle-based matroids over ordered ground sets of string ids.

Concrete classes cover the free, uniform, partition, graphic, and
explicit-family matroids.  Minors (restriction, contraction, truncation)
and direct sums wrap other matroids lazily: no family is materialized,
every query is answered through the child's independence oracle.

Rank queries are memoized per oracle with bitmask keys over the ground
order.  Oracles are immutable after construction except for that memo
table, which only ever gains entries; concurrent readers at worst
recompute a value.
"""

from __future__ import annotations

from itertools import combinations

from .errors import DomainError, PreconditionError

# explicit families are validated eagerly up to this ground size
_EAGER_CHECK_LIMIT = 10


class Matroid:
    """Independence oracle base class.

    Subclasses implement ``_indep`` on frozensets already known to be
    subsets of the ground set.  Public entry points validate arguments
    and raise :class:`DomainError` on foreign elements.
    """

    kind = "abstract"

    def __init__(self, ground):
        ground = tuple(ground)
        seen = set()
        for e in ground:
            if not isinstance(e, str):
                raise DomainError(f"element ids must be strings, got {e!r}")
            if e in seen:
                raise DomainError(f"duplicate element id {e!r}")
            seen.add(e)
        self.ground = ground
        self._ground_set = frozenset(ground)
        self._pos = {e: i for i, e in enumerate(ground)}
        self._rank_memo: dict[int, int] = {}

    # ------------------------------------------------------------------
    # queries

    def is_independent(self, X) -> bool:
        return self._indep(self._subset(X))

    def rank(self, X=None) -> int:
        """Size of a maximum independent subset of X, greedy in ground order."""
        fs = self._ground_set if X is None else self._subset(X)
        key = self._mask(fs)
        hit = self._rank_memo.get(key)
        if hit is not None:
            return hit
        r = len(self.greedy_base(fs))
        self._rank_memo[key] = r
        return r

    def full_rank(self) -> int:
        return self.rank(None)

    def greedy_base(self, X=None):
        """Maximal independent subset of X, scanning in ground order."""
        fs = self._ground_set if X is None else self._subset(X)
        picked = set()
        for e in self.ground:
            if e in fs:
                picked.add(e)
                if not self._indep(frozenset(picked)):
                    picked.remove(e)
        return frozenset(picked)

    def fundamental_circuit(self, I, v):
        """The unique minimal dependent subset of I+v, for independent I.

        Requires I independent and I+v dependent; contains v.
        """
        fi = self._subset(I)
        if v not in self._ground_set:
            raise DomainError(f"element {v!r} outside ground set")
        if v in fi:
            raise PreconditionError(f"element {v!r} already in the independent set")
        if not self._indep(fi):
            raise PreconditionError("I is not independent")
        ext = fi | {v}
        if self._indep(ext):
            raise PreconditionError("I+v is independent, no circuit to report")
        # u lies on the unique circuit iff deleting u restores independence
        return frozenset(u for u in ext if self._indep(ext - {u}))

    def greedy_choice(self, X, order):
        """Scan X best-first along `order`, keeping elements while independent.

        `order` must be a total order (best first) covering X.  The result is
        the unique greedy-optimal independent subset of X.
        """
        fs = self._subset(X)
        seen = set(order)
        missing = fs - seen
        if missing:
            raise DomainError(f"order does not cover elements {sorted(missing)}")
        picked = set()
        for e in order:
            if e in fs and e not in picked:
                picked.add(e)
                if not self._indep(frozenset(picked)):
                    picked.remove(e)
        return frozenset(picked)

    # ------------------------------------------------------------------
    # minors

    def restrict(self, T) -> "Restriction":
        return Restriction(self, T)

    def contract(self, T) -> "Contraction":
        return Contraction(self, T)

    def truncate(self, k) -> "Truncation":
        return Truncation(self, k)

    # ------------------------------------------------------------------
    # plumbing

    def _subset(self, X) -> frozenset:
        fs = X if isinstance(X, frozenset) else frozenset(X)
        if not fs <= self._ground_set:
            raise DomainError(
                f"elements {sorted(fs - self._ground_set)} outside ground set"
            )
        return fs

    def _mask(self, fs) -> int:
        m = 0
        for e in fs:
            m |= 1 << self._pos[e]
        return m

    def _indep(self, fs) -> bool:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}(|ground|={len(self.ground)})"


class FreeMatroid(Matroid):
    kind = "free"

    def _indep(self, fs):
        return True


class UniformMatroid(Matroid):
    kind = "uniform"

    def __init__(self, ground, rank):
        super().__init__(ground)
        if not isinstance(rank, int) or rank < 0:
            raise DomainError(f"uniform rank must be a nonnegative int, got {rank!r}")
        self.uniform_rank = rank

    def _indep(self, fs):
        return len(fs) <= self.uniform_rank


class PartitionMatroid(Matroid):
    """Capacity bound per block of a partition of the ground set."""

    kind = "partition"

    def __init__(self, parts, capacities, ground=None):
        parts = tuple(frozenset(p) for p in parts)
        capacities = tuple(capacities)
        if len(parts) != len(capacities):
            raise DomainError("parts and capacities differ in length")
        if any((not isinstance(c, int)) or c < 0 for c in capacities):
            raise DomainError("capacities must be nonnegative ints")
        if ground is None:
            ground = [e for p in parts for e in sorted(p)]
        super().__init__(ground)
        union = set()
        for p in parts:
            if union & p:
                raise DomainError("partition blocks overlap")
            union |= p
        if union != self._ground_set:
            raise DomainError("partition blocks do not cover the ground set")
        self.parts = parts
        self.capacities = capacities
        self._block_of = {e: i for i, p in enumerate(parts) for e in p}

    def _indep(self, fs):
        counts = [0] * len(self.parts)
        for e in fs:
            i = self._block_of[e]
            counts[i] += 1
            if counts[i] > self.capacities[i]:
                return False
        return True


def one_partition(parts, ground=None) -> PartitionMatroid:
    """Partition matroid with every capacity 1 (one agent per block)."""
    parts = tuple(tuple(p) for p in parts)
    return PartitionMatroid(parts, (1,) * len(parts), ground=ground)


class GraphicMatroid(Matroid):
    """Forests of a multigraph; ground ids name edges, endpoints name vertices."""

    kind = "graphic"

    def __init__(self, endpoints, ground=None):
        endpoints = {e: (str(u), str(v)) for e, (u, v) in dict(endpoints).items()}
        if ground is None:
            ground = sorted(endpoints)
        super().__init__(ground)
        if set(endpoints) != self._ground_set:
            raise DomainError("endpoint map must cover exactly the ground set")
        self.endpoints = endpoints

    def _indep(self, fs):
        parent: dict[str, str] = {}

        def find(x):
            while parent.setdefault(x, x) != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in fs:
            u, v = self.endpoints[e]
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True


class ExplicitMatroid(Matroid):
    """Matroid given by an explicit list of independent sets or of bases.

    Independent-set input is validated against the matroid axioms eagerly
    for grounds of at most 10 elements and trusted beyond that (call
    :meth:`validate` to force the check).  Base input is always checked for
    equal cardinality; the exchange axiom check is available on demand.
    """

    kind = "explicit"

    def __init__(self, ground, independent=None, bases=None):
        super().__init__(ground)
        if (independent is None) == (bases is None):
            raise DomainError("give exactly one of independent sets or bases")
        if independent is not None:
            fam = frozenset(self._subset(X) for X in independent)
            if not fam:
                raise DomainError("independent family must be nonempty")
            self.family = fam
            self.base_list = None
            if len(self.ground) <= _EAGER_CHECK_LIMIT:
                self.validate()
        else:
            bl = sorted({self._subset(B) for B in bases}, key=lambda b: tuple(sorted(b)))
            if not bl:
                raise DomainError("base family must be nonempty")
            sizes = {len(b) for b in bl}
            if len(sizes) != 1:
                raise DomainError(f"bases differ in size: {sorted(sizes)}")
            self.family = None
            self.base_list = tuple(bl)

    def _indep(self, fs):
        if self.family is not None:
            return fs in self.family
        return any(fs <= b for b in self.base_list)

    def validate(self):
        """Raise DomainError unless the stored family satisfies the axioms."""
        if self.family is not None:
            if frozenset() not in self.family:
                raise DomainError("independent family must contain the empty set")
            for X in self.family:
                for u in X:
                    if X - {u} not in self.family:
                        raise DomainError(
                            f"family not downward closed at {sorted(X)} minus {u!r}"
                        )
            by_size: dict[int, list[frozenset]] = {}
            for X in self.family:
                by_size.setdefault(len(X), []).append(X)
            for k, smaller in by_size.items():
                for bigger in by_size.get(k + 1, []):
                    for small in smaller:
                        if not any(small | {x} in self.family for x in bigger - small):
                            raise DomainError(
                                f"augmentation fails from {sorted(small)} "
                                f"into {sorted(bigger)}"
                            )
        else:
            ok, witness = base_exchange_holds(self.base_list)
            if not ok:
                raise DomainError(f"base exchange axiom fails at {witness}")


def base_exchange_holds(bases):
    """Check the base exchange axiom on an explicit base list.

    Returns (True, None) or (False, (B, B2, x)) with the first failure.
    """
    fam = set(bases)
    for B in bases:
        for B2 in bases:
            for x in B - B2:
                if not any(B - {x} | {y} in fam for y in B2 - B):
                    return False, (tuple(sorted(B)), tuple(sorted(B2)), x)
    return True, None


class DirectSum(Matroid):
    kind = "direct_sum"

    def __init__(self, children):
        children = tuple(children)
        if not children:
            raise DomainError("direct sum needs at least one child")
        ground = []
        seen = set()
        for c in children:
            for e in c.ground:
                if e in seen:
                    raise DomainError(f"direct sum grounds overlap at {e!r}")
                seen.add(e)
                ground.append(e)
        super().__init__(ground)
        self.children = children
        self._child_of = {e: c for c in children for e in c.ground}

    def _indep(self, fs):
        split: dict[int, set] = {}
        for e in fs:
            split.setdefault(id(self._child_of[e]), set()).add(e)
        for c in self.children:
            part = split.get(id(c))
            if part and not c._indep(frozenset(part)):
                return False
        return True


def direct_sum(children) -> DirectSum:
    return DirectSum(children)


class Restriction(Matroid):
    kind = "restriction"

    def __init__(self, child, subset):
        keep = child._subset(subset)
        super().__init__([e for e in child.ground if e in keep])
        self.child = child
        self.subset = keep

    def _indep(self, fs):
        return self.child._indep(fs)


class Contraction(Matroid):
    """Contraction by T, evaluated through a fixed greedy base of T.

    The base is picked greedily in the child's ground order; the resulting
    independence family does not depend on that choice.
    """

    kind = "contraction"

    def __init__(self, child, subset):
        away = child._subset(subset)
        super().__init__([e for e in child.ground if e not in away])
        self.child = child
        self.subset = away
        self.base_of_subset = child.greedy_base(away)

    def _indep(self, fs):
        return self.child._indep(fs | self.base_of_subset)


class Truncation(Matroid):
    kind = "truncation"

    def __init__(self, child, k):
        if not isinstance(k, int) or k < 0:
            raise DomainError(f"truncation bound must be a nonnegative int, got {k!r}")
        super().__init__(child.ground)
        self.child = child
        self.limit = k

    def _indep(self, fs):
        return len(fs) <= self.limit and self.child._indep(fs)


def enumerate_bases(M: Matroid):
    """All bases of M, desk scale; explicit base lists short-circuit."""
    if isinstance(M, ExplicitMatroid) and M.base_list is not None:
        return list(M.base_list)
    r = M.full_rank()
    return [
        frozenset(c)
        for c in combinations(M.ground, r)
        if M._indep(frozenset(c))
    ]
