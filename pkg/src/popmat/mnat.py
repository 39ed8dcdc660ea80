"""Gross-substitutes set functions given by explicit value tables.

A :class:`ValuedFamily` is a finite family of subsets with a rational
value per member (zero values make it a plain set family).  The module
checks the exchange property that characterizes these functions, builds
the induced base family on a dummy-padded ground set, and computes the
price vector that splits a joint maximization into two independent ones.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from . import lp
from .errors import DomainError, InfeasibleError, NoBaseError
from .exhaustive import canon
from .matroids import ExplicitMatroid

_MNAT_CHECK_LIMIT = 14


class ValuedFamily:
    """Explicit subset family with rational values (omitted = all zero)."""

    def __init__(self, ground, domain, values=None):
        self.ground = tuple(ground)
        gs = frozenset(self.ground)
        if len(gs) != len(self.ground):
            raise DomainError("duplicate ids in ground")
        dom = []
        seen = set()
        for X in domain:
            fs = frozenset(X)
            if not fs <= gs:
                raise DomainError(f"domain member {canon(fs)} outside ground")
            if fs not in seen:
                seen.add(fs)
                dom.append(fs)
        if not dom:
            raise DomainError("domain must be nonempty")
        dom.sort(key=canon)
        self.domain = tuple(dom)
        self._members = seen
        vals = {}
        if values is not None:
            for X, v in dict(values).items():
                fs = frozenset(X)
                if fs not in seen:
                    raise DomainError(f"value given for non-member {canon(fs)}")
                vals[fs] = Fraction(v)
        self.values = vals

    def __contains__(self, X):
        return frozenset(X) in self._members

    def value(self, X) -> Fraction:
        fs = frozenset(X)
        if fs not in self._members:
            raise DomainError(f"{canon(fs)} not in the family domain")
        return self.values.get(fs, Fraction(0))

    def shift(self, q) -> "ValuedFamily":
        """Add the modular term sum(q(u) for u in X) to every value."""
        qq = {u: Fraction(v) for u, v in dict(q).items()}
        missing = set(self.ground) - set(qq)
        if missing:
            raise DomainError(f"shift vector undefined on {sorted(missing)}")
        vals = {
            X: self.values.get(X, Fraction(0)) + sum((qq[u] for u in X), Fraction(0))
            for X in self.domain
        }
        return ValuedFamily(self.ground, self.domain, vals)

    def maximize(self):
        """Exact maximum value and every maximizer, canonically sorted."""
        best = None
        arg = []
        for X in self.domain:
            v = self.values.get(X, Fraction(0))
            if best is None or v > best:
                best = v
                arg = [X]
            elif v == best:
                arg.append(X)
        return best, arg

    def argmax_family(self) -> "ValuedFamily":
        _, arg = self.maximize()
        return ValuedFamily(self.ground, arg)

    def __repr__(self):
        return f"ValuedFamily(|ground|={len(self.ground)}, |domain|={len(self.domain)})"


def is_mnat_concave(F: ValuedFamily):
    """Exchange-property check; returns (True, None) or (False, (X, Y, x)).

    For every X, Y in the domain and x in X-Y, either the transfer move
    (drop x from X, add it to Y) or some swap move (trade x for a y in
    Y-X) must keep both sets in the domain without decreasing the value
    sum.  The first violating triple is reported.
    """
    if len(F.ground) > _MNAT_CHECK_LIMIT:
        raise DomainError(
            f"ground size {len(F.ground)} above the desk-scale check bound"
        )
    val = lambda X: F.values.get(X, Fraction(0))
    members = F._members
    order = {u: i for i, u in enumerate(F.ground)}
    for X in F.domain:
        vX = val(X)
        for Y in F.domain:
            vY = val(Y)
            for x in sorted(X - Y, key=order.__getitem__):
                Xdn = X - {x}
                Yup = Y | {x}
                if (
                    Xdn in members
                    and Yup in members
                    and vX + vY <= val(Xdn) + val(Yup)
                ):
                    continue
                if any(
                    (X - {x}) | {y} in members
                    and (Y | {x}) - {y} in members
                    and vX + vY <= val((X - {x}) | {y}) + val((Y | {x}) - {y})
                    for y in Y - X
                ):
                    continue
                return False, (X, Y, x)
    return True, None


def base_family_from(domain, dummies, t: int, ground=None) -> ExplicitMatroid:
    """Base family {B : B cap S in family, |B| = t} on the dummy-padded ground.

    `domain` is an exchange-closed family on S (a ValuedFamily or iterable
    of subsets); `dummies` must be disjoint from S.  `ground` overrides
    the ground inferred from the members.  Raises NoBaseError when no
    member can be padded to size t.
    """
    if isinstance(domain, ValuedFamily):
        members = list(domain.domain)
        if ground is None:
            ground = domain.ground
    else:
        members = sorted({frozenset(X) for X in domain}, key=canon)
        if ground is None:
            ground = sorted({u for X in members for u in X})
    if any(not X <= set(ground) for X in members):
        raise DomainError("family member outside the given ground")
    dummies = tuple(dummies)
    if set(dummies) & set(ground):
        raise DomainError("dummy elements collide with the ground set")
    bases = []
    for J in members:
        pad = t - len(J)
        if pad < 0 or pad > len(dummies):
            continue
        for extra in combinations(dummies, pad):
            bases.append(J | frozenset(extra))
    if not bases:
        raise NoBaseError(f"no member extends to size {t}")
    return ExplicitMatroid(tuple(ground) + dummies, bases=bases)


def split_is_valid(p, indep1, F: ValuedFamily) -> bool:
    """Extensional check of the splitting property of a price vector.

    True iff argmax over the joint family equals the intersection of the
    argmax of the price-shifted indicator on `indep1` with the argmax of
    the price-discounted values on F's domain.
    """
    p = {u: Fraction(v) for u, v in dict(p).items()}
    price = lambda X: sum((p.get(u, Fraction(0)) for u in X), Fraction(0))
    fam1 = {frozenset(X) for X in indep1}
    joint = [X for X in F.domain if X in fam1]
    if not joint:
        raise InfeasibleError("the two families do not intersect")
    fval = lambda X: F.values.get(X, Fraction(0))
    top = max(fval(X) for X in joint)
    joint_arg = {X for X in joint if fval(X) == top}

    best1 = max(price(Y) for Y in fam1)
    arg1 = {Y for Y in fam1 if price(Y) == best1}
    best2 = max(fval(Z) - price(Z) for Z in F.domain)
    arg2 = {Z for Z in F.domain if fval(Z) - price(Z) == best2}
    return joint_arg == (arg1 & arg2)


def weight_split(indep1, F: ValuedFamily):
    """Price vector p splitting max over (indicator on indep1) + F.

    Returns a dict element -> Fraction such that the shifted argmax sets
    intersect exactly in the joint argmax (`split_is_valid`).  Raises
    InfeasibleError when the families do not intersect.
    """
    fam1 = sorted({frozenset(X) for X in indep1}, key=canon)
    fam1_set = set(fam1)
    fval = lambda X: F.values.get(X, Fraction(0))
    joint = [X for X in F.domain if X in fam1_set]
    if not joint:
        raise InfeasibleError("the two families do not intersect")
    top = max(fval(X) for X in joint)
    star = min((X for X in joint if fval(X) == top), key=canon)

    zero = {u: Fraction(0) for u in F.ground}
    if split_is_valid(zero, fam1, F):
        return zero

    # feasibility system: star must top the prices over fam1 and the
    # discounted values over the domain; a solution exists whenever F
    # passes the exchange check (rejected inputs surface as LP failure)
    idx = {u: j for j, u in enumerate(F.ground)}
    nv = len(F.ground)
    constraints = []
    seen_rows = set()
    for Y in fam1:
        coeffs = {}
        for u in star - Y:
            coeffs[idx[u]] = coeffs.get(idx[u], 0) + 1
        for u in Y - star:
            coeffs[idx[u]] = coeffs.get(idx[u], 0) - 1
        key = (tuple(sorted(coeffs.items())), 0)
        if coeffs and key not in seen_rows:
            seen_rows.add(key)
            constraints.append((coeffs, lp.GE, 0))
    for Z in F.domain:
        coeffs = {}
        for u in Z - star:
            coeffs[idx[u]] = coeffs.get(idx[u], 0) + 1
        for u in star - Z:
            coeffs[idx[u]] = coeffs.get(idx[u], 0) - 1
        b = fval(Z) - fval(star)
        key = (tuple(sorted(coeffs.items())), b)
        if (coeffs or b > 0) and key not in seen_rows:
            seen_rows.add(key)
            constraints.append((coeffs, lp.GE, b))

    _, x = lp.linprog_min([0] * nv, constraints, nv, free=range(nv))
    p = {u: x[idx[u]] for u in F.ground}
    if not split_is_valid(p, fam1, F):
        raise DomainError("splitting vector check failed; input is not exchange-closed")
    return p
