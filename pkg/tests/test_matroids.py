import random

import pytest

from popmat.errors import DomainError, PreconditionError
from popmat.exhaustive import (
    independence_axioms_hold,
    rank_is_submodular,
    subsets_in_order,
)
from popmat.matroids import (
    ExplicitMatroid,
    FreeMatroid,
    GraphicMatroid,
    PartitionMatroid,
    UniformMatroid,
    base_exchange_holds,
    direct_sum,
    enumerate_bases,
    one_partition,
)

from conftest import ids, random_matroid


def triangle():
    return GraphicMatroid({"e1": ("u", "v"), "e2": ("v", "w"), "e3": ("w", "u")})


def test_uniform_independence():
    m = UniformMatroid(["a", "b", "c"], 2)
    assert m.is_independent({"a", "b"})
    assert not m.is_independent({"a", "b", "c"})
    assert m.rank() == 2
    assert m.rank(set()) == 0


def test_partition_capacity():
    m = PartitionMatroid([{"a", "b"}, {"c"}], [1, 1])
    assert not m.is_independent({"a", "b"})
    assert m.is_independent({"a", "c"})


def test_foreign_element_rejected():
    m = FreeMatroid(["a"])
    with pytest.raises(DomainError):
        m.is_independent({"zz"})


def test_contraction_uses_greedy_base():
    m = UniformMatroid(["a", "b", "c"], 2)
    c = m.contract({"a"})
    assert c.ground == ("b", "c")
    assert c.is_independent({"b"})
    assert not c.is_independent({"b", "c"})


def test_contraction_family_matches_definition():
    # brute force over every base of the contracted part
    rng = random.Random(7)
    for _ in range(30):
        ground = ids(rng.randint(2, 6))
        m = random_matroid(rng, ground)
        t = frozenset(u for u in ground if rng.random() < 0.4)
        c = m.contract(t)
        t_bases = [
            B
            for B in subsets_in_order(t)
            if m._indep(B) and not any(m._indep(B | {x}) for x in t - B)
        ]
        for X in subsets_in_order(set(ground) - t):
            expect = any(m._indep(B | X) for B in t_bases)
            assert c._indep(X) == expect


def test_minor_examples():
    assert FreeMatroid(["a", "b"]).restrict({"a"}).is_independent({"a"})
    assert not FreeMatroid(["a", "b", "c"]).truncate(2).is_independent({"a", "b", "c"})
    d = direct_sum([UniformMatroid(["a", "b"], 1), UniformMatroid(["c"], 1)])
    assert d.is_independent({"a", "c"})
    assert not d.is_independent({"a", "b"})


def test_graphic_rank_matches_forest_enumeration():
    tri = triangle()
    assert tri.rank({"e1", "e2", "e3"}) == 2
    forests = [X for X in subsets_in_order(tri.ground) if tri._indep(X)]
    assert max(len(X) for X in forests) == 2


def test_fundamental_circuit():
    assert UniformMatroid(["a", "b"], 1).fundamental_circuit({"a"}, "b") == {"a", "b"}
    assert triangle().fundamental_circuit({"e1", "e2"}, "e3") == {"e1", "e2", "e3"}
    assert PartitionMatroid([{"a", "b"}], [1]).fundamental_circuit({"a"}, "b") == {
        "a",
        "b",
    }
    with pytest.raises(PreconditionError):
        FreeMatroid(["a", "b"]).fundamental_circuit({"a"}, "b")


def test_fundamental_circuit_is_minimal_dependent(rng):
    for _ in range(40):
        ground = ids(rng.randint(2, 6))
        m = random_matroid(rng, ground)
        indep = [X for X in subsets_in_order(ground) if m._indep(X)]
        for I in indep:
            for v in set(ground) - I:
                if m._indep(I | {v}):
                    continue
                C = m.fundamental_circuit(I, v)
                assert v in C and C <= I | {v}
                assert not m._indep(C)
                for u in C:
                    assert m._indep(C - {u})


def test_greedy_choice():
    free = FreeMatroid(["a", "b"])
    assert free.greedy_choice({"a", "b"}, ["b", "a"]) == {"a", "b"}
    u1 = UniformMatroid(["a", "b"], 1)
    assert u1.greedy_choice({"a", "b"}, ["a", "b"]) == {"a"}
    assert triangle().greedy_choice({"e1", "e2", "e3"}, ["e1", "e2", "e3"]) == {
        "e1",
        "e2",
    }


def test_greedy_choice_max_cardinality_and_lex_best(rng):
    for _ in range(40):
        ground = ids(rng.randint(1, 6))
        m = random_matroid(rng, ground)
        order = list(ground)
        rng.shuffle(order)
        X = frozenset(u for u in ground if rng.random() < 0.7)
        got = m.greedy_choice(X, order)
        assert m._indep(got)
        best = max(
            (len(Y) for Y in subsets_in_order(X) if m._indep(Y)), default=0
        )
        assert len(got) == best
        # lexicographically best in preference order among maximum ones
        pos = {u: i for i, u in enumerate(order)}
        key = lambda Y: sorted(pos[u] for u in Y)
        rivals = [
            Y for Y in subsets_in_order(X) if m._indep(Y) and len(Y) == best
        ]
        assert key(got) == min(key(Y) for Y in rivals)


def test_explicit_validation():
    with pytest.raises(DomainError):
        ExplicitMatroid(["a", "b"], independent=[{"a", "b"}])  # not downward closed
    with pytest.raises(DomainError):
        ExplicitMatroid(["a", "b"], bases=[{"a"}, {"a", "b"}])  # unequal sizes
    m = ExplicitMatroid(["a", "b"], bases=[{"a"}, {"b"}])
    ok, _ = base_exchange_holds(m.base_list)
    assert ok


def test_axioms_on_random_zoo(rng):
    for _ in range(60):
        ground = ids(rng.randint(1, 7))
        m = random_matroid(rng, ground)
        ok, witness = independence_axioms_hold(m)
        assert ok, (m, witness)


def test_rank_submodular_on_random_zoo(rng):
    for _ in range(15):
        ground = ids(rng.randint(1, 6))
        m = random_matroid(rng, ground)
        ok, witness = rank_is_submodular(m)
        assert ok, (m, witness)


def test_minor_composition_extensional(rng):
    # restricting then contracting matches the definitions applied directly
    for _ in range(20):
        ground = ids(rng.randint(3, 6))
        m = random_matroid(rng, ground)
        cut = ground[: len(ground) // 2]
        rest = m.restrict(ground[:-1]).contract(cut[:1])
        ok, witness = independence_axioms_hold(rest)
        assert ok, witness


def test_enumerate_bases_matches_rank(rng):
    for _ in range(20):
        ground = ids(rng.randint(1, 6))
        m = random_matroid(rng, ground)
        bases = enumerate_bases(m)
        r = m.full_rank()
        assert all(len(B) == r for B in bases)
        assert bases


def test_one_partition_helper():
    m = one_partition([("a", "b"), ("c",)])
    assert m.is_independent({"a", "c"})
    assert not m.is_independent({"a", "b"})
