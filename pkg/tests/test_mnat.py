from fractions import Fraction

import pytest

from popmat.errors import DomainError, InfeasibleError, NoBaseError
from popmat.exhaustive import subsets_in_order
from popmat.matroids import UniformMatroid, base_exchange_holds, one_partition
from popmat.mnat import (
    ValuedFamily,
    base_family_from,
    is_mnat_concave,
    split_is_valid,
    weight_split,
)

from conftest import ids, random_matroid, random_mnat_table


def matroid_family(m, values=None):
    dom = [fs for fs in subsets_in_order(m.ground) if m._indep(fs)]
    return ValuedFamily(m.ground, dom, values)


def test_matroid_independents_are_exchange_closed(rng):
    for _ in range(25):
        m = random_matroid(rng, ids(rng.randint(1, 6)))
        ok, _ = is_mnat_concave(matroid_family(m))
        assert ok


def test_gap_family_fails_with_witness():
    F = ValuedFamily(["a", "b"], [set(), {"a", "b"}])
    ok, witness = is_mnat_concave(F)
    assert not ok
    X, Y, x = witness
    assert X == frozenset({"a", "b"}) and Y == frozenset() and x == "a"


def test_modular_values_on_matroid_family(rng):
    for _ in range(20):
        m = random_matroid(rng, ids(rng.randint(1, 6)))
        q = {u: Fraction(rng.randint(-3, 3)) for u in m.ground}
        dom = [fs for fs in subsets_in_order(m.ground) if m._indep(fs)]
        vals = {X: sum((q[u] for u in X), Fraction(0)) for X in dom}
        ok, witness = is_mnat_concave(ValuedFamily(m.ground, dom, vals))
        assert ok, witness


def test_maximize():
    F = matroid_family(UniformMatroid(["a", "b", "c"], 2))
    best, arg = F.maximize()
    assert best == 0 and len(arg) == len(F.domain)
    sized = ValuedFamily(F.ground, F.domain, {X: len(X) for X in F.domain})
    best, arg = sized.maximize()
    assert best == 2 and sorted(map(sorted, arg)) == [["a", "b"], ["a", "c"], ["b", "c"]]
    f = ValuedFamily(["a", "b"], [set(), {"a"}, {"b"}])
    shifted = f.shift({"a": 3, "b": -1})
    best, arg = shifted.maximize()
    assert best == 3 and arg == [frozenset({"a"})]


def test_shift_involution():
    F = random_mnat_table(__import__("random").Random(5))
    q = {u: Fraction(2, 3) for u in F.ground}
    back = F.shift(q).shift({u: -v for u, v in q.items()})
    assert all(back.value(X) == F.value(X) for X in F.domain)
    single = ValuedFamily(["a"], [{"a"}], {frozenset("a"): 5})
    assert single.shift({"a": 2}).value({"a"}) == 7


def test_argmax_family_stays_exchange_closed(rng):
    for _ in range(20):
        F = random_mnat_table(rng, max_n=5)
        ok, witness = is_mnat_concave(F.argmax_family())
        assert ok, witness


def test_base_family_from_examples():
    m = base_family_from([frozenset()], ["d"], 1)
    assert m.base_list == (frozenset({"d"}),)
    m = base_family_from([frozenset(), frozenset({"a"})], ["d"], 1)
    assert sorted(map(sorted, m.base_list)) == [["a"], ["d"]]
    with pytest.raises(NoBaseError):
        base_family_from([frozenset({"a"}), frozenset({"b"})], [], 2)


def test_base_family_passes_exchange_axiom(rng):
    for _ in range(20):
        F = random_mnat_table(rng, max_n=5)
        dummies = [f"d{i}" for i in range(rng.randint(0, 3))]
        t = rng.randint(0, 5)
        try:
            m = base_family_from(F, dummies, t)
        except NoBaseError:
            continue
        ok, witness = base_exchange_holds(m.base_list)
        assert ok, witness


def test_base_family_ground_override():
    m = base_family_from([frozenset({"a"})], ["d"], 2, ground=["a", "b"])
    assert m.ground == ("a", "b", "d")
    assert not m.is_independent({"b"})


def test_weight_split_zero_table():
    m2 = UniformMatroid(["a", "b"], 2)
    F = matroid_family(m2)
    m1 = one_partition([("a", "b")])
    fam1 = [fs for fs in subsets_in_order(m1.ground) if m1._indep(fs)]
    p = weight_split(fam1, F)
    assert split_is_valid(p, fam1, F)
    assert p == {"a": 0, "b": 0}


def test_weight_split_single_element_interval():
    F = ValuedFamily(["a"], [set(), {"a"}], {frozenset("a"): 1})
    fam1 = [frozenset(), frozenset({"a"})]
    p = weight_split(fam1, F)
    assert 0 <= p["a"] <= 1
    assert split_is_valid(p, fam1, F)


def test_weight_split_modular_forces_unique_argmax():
    # one part of capacity one over {a, b}; values 2 and 5
    F = ValuedFamily(
        ["a", "b"],
        [set(), {"a"}, {"b"}, {"a", "b"}],
        {frozenset("a"): 2, frozenset("b"): 5, frozenset(("a", "b")): 7},
    )
    fam1 = [frozenset(), frozenset({"a"}), frozenset({"b"})]
    p = weight_split(fam1, F)
    assert split_is_valid(p, fam1, F)
    price = lambda X: sum((p[u] for u in X), Fraction(0))
    arg1 = {Y for Y in fam1 if price(Y) == max(price(Z) for Z in fam1)}
    disc = {X: F.value(X) - price(X) for X in F.domain}
    arg2 = {X for X in F.domain if disc[X] == max(disc.values())}
    assert arg1 & arg2 == {frozenset({"b"})}


def test_weight_split_disjoint_families_raise():
    F = ValuedFamily(["a"], [{"a"}])
    with pytest.raises(InfeasibleError):
        weight_split([frozenset()], F)


def test_weight_split_random_extensional(rng):
    for _ in range(25):
        F = random_mnat_table(rng, max_n=6)
        parts = []
        rest = list(F.ground)
        while rest:
            k = rng.randint(1, 2)
            parts.append(tuple(rest[:k]))
            rest = rest[k:]
        m1 = one_partition(parts, ground=F.ground)
        fam1 = [fs for fs in subsets_in_order(F.ground) if m1._indep(fs)]
        if not any(X in F for X in fam1):
            continue
        p = weight_split(fam1, F)
        assert split_is_valid(p, fam1, F)


def test_desk_scale_guard():
    big = ids(15)
    F = ValuedFamily(big, [set()])
    with pytest.raises(DomainError):
        is_mnat_concave(F)
