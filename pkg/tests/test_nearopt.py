import random
from fractions import Fraction
from itertools import product

import pytest

from popmat.errors import DomainError, PreconditionError
from popmat.nearopt import (
    ColoredBipartite,
    PrefBipartite,
    cycle_gadget,
    delta_matchings,
    exact_matching_brute,
    exact_matching_via_reduction,
    matchings_with_weight_at_least,
    reduce_exact_matching,
    solve_near_opt_brute,
    special_edge,
    verify_k_popular,
    verify_k_popular_lp,
)


def marriage_graph():
    return PrefBipartite(
        ["a1", "a2"],
        ["b1", "b2"],
        [("a1", "b1"), ("a1", "b2"), ("a2", "b1"), ("a2", "b2")],
        {
            "a1": [["b1"], ["b2"]],
            "a2": [["b2"], ["b1"]],
            "b1": [["a2"], ["a1"]],
            "b2": [["a1"], ["a2"]],
        },
        two_sided=True,
    )


def random_pref_bipartite(rng, max_side=3, two_sided=True, ties=False):
    na, nb = rng.randint(1, max_side), rng.randint(1, max_side)
    a = [f"a{i}" for i in range(na)]
    b = [f"b{i}" for i in range(nb)]
    edges = [(x, y) for x in a for y in b if rng.random() < 0.7]
    nbrs = {v: [] for v in a + b}
    for x, y in edges:
        nbrs[x].append(y)
        nbrs[y].append(x)
    prefs = {}
    voters = a + b if two_sided else a
    for v in voters:
        ns = nbrs[v][:]
        rng.shuffle(ns)
        if ties and ns and rng.random() < 0.5:
            cut = rng.randint(1, len(ns))
            prefs[v] = [ns[:cut]] + [[u] for u in ns[cut:]]
        else:
            prefs[v] = [[u] for u in ns]
    return PrefBipartite(a, b, edges, prefs, two_sided=two_sided)


class TestModel:
    def test_prefs_must_cover_neighbors(self):
        with pytest.raises(DomainError):
            PrefBipartite(
                ["a"], ["b"], [("a", "b")], {"a": []}, two_sided=False
            )

    def test_ties_forbidden_two_sided(self):
        with pytest.raises(DomainError):
            PrefBipartite(
                ["a"],
                ["b", "c"],
                [("a", "b"), ("a", "c")],
                {"a": [["b", "c"]], "b": [["a"]], "c": [["a"]]},
                two_sided=True,
            )

    def test_stable_matching_is_popular_at_zero(self):
        G = marriage_graph()
        M = frozenset({("a1", "b1"), ("a2", "b2")})
        ok, _ = verify_k_popular(G, M, 0)
        assert ok

    def test_below_threshold_rejected(self):
        G = marriage_graph()
        with pytest.raises(PreconditionError):
            verify_k_popular(G, frozenset(), 1)

    def test_unique_candidate_is_popular(self):
        G = PrefBipartite(
            ["a"], ["b"], [("a", "b")], {"a": [["b"]], "b": [["a"]]}, two_sided=True
        )
        ok, _ = verify_k_popular(G, frozenset({("a", "b")}), 1)
        assert ok


class TestLpBackendAgreement:
    def test_random_instances_both_models(self, rng):
        checked = 0
        for _ in range(40):
            two = rng.random() < 0.5
            G = random_pref_bipartite(rng, two_sided=two, ties=not two)
            for k in range(0, min(len(G.a_side), len(G.b_side)) + 1):
                for M in matchings_with_weight_at_least(G, k):
                    ok_enum, _ = verify_k_popular(G, M, k)
                    ok_lp, rival = verify_k_popular_lp(G, M, k)
                    assert ok_enum == ok_lp
                    if not ok_lp:
                        assert len(rival) >= k
                        assert delta_matchings(G, M, rival) < 0
                    checked += 1
        assert checked > 200

    def test_lp_rejects_general_weights(self):
        G = PrefBipartite(
            ["a"], ["b"], [("a", "b")], {"a": [["b"]]},
            weights={("a", "b"): 0}, two_sided=False,
        )
        with pytest.raises(DomainError):
            verify_k_popular_lp(G, frozenset(), 0)


class TestGadgets:
    def test_special_edge_shapes(self):
        inner, edges, prefs = special_edge("u", "v", 1, "t")
        assert len(inner) == 2 and len(edges) == 3
        inner, edges, prefs = special_edge("u", "v", 2, "t")
        assert len(inner) == 4 and len(edges) == 5
        # two configurations: all inner pairs, or the corner-covering path
        pairs = {(f"t:{h}a", f"t:{h}b") for h in (1, 2)}
        assert pairs <= set(edges)

    def test_cycle_vertex_count(self):
        G = cycle_gadget(2, 2)
        assert len(G.a_side) + len(G.b_side) == 20
        G3 = cycle_gadget(3, 1)
        assert len(G3.a_side) + len(G3.b_side) == (2 * 1 + 1) * 6

    def test_cycle_no_instance_interval(self):
        # every integer strictly between 2lK and (2l+1)K is a no-instance
        G = cycle_gadget(2, 2)
        for k in range(9, 10):
            assert solve_near_opt_brute(G, k) is None

    def test_cycle_margin_has_solutions(self):
        G = cycle_gadget(2, 2)
        assert solve_near_opt_brute(G, 8) is not None

    def test_candidate_with_nine_edges_is_dominated(self):
        G = cycle_gadget(2, 2)
        include_e1 = [
            ("v1", "e1:1a"), ("e1:1b", "e1:2a"), ("e1:2b", "v2"),
        ]
        rest = [(f"e{i}:{h}a", f"e{i}:{h}b") for i in (2, 3, 4) for h in (1, 2)]
        known = set(G.edges)
        M = frozenset(
            e if e in known else (e[1], e[0]) for e in include_e1 + rest
        )
        assert G.is_matching(M) and len(M) == 9
        ok, rival = verify_k_popular(G, M, 9)
        assert not ok and len(rival) >= 9


class TestExactMatching:
    def test_single_edge_cases(self):
        red = ColoredBipartite(("a",), ("b",), (("a", "b", "red"),))
        assert exact_matching_brute(red, 1) is not None
        assert exact_matching_brute(red, 0) is None
        inst, _ = reduce_exact_matching(red, 1)
        assert len(inst.a_side) == len(inst.b_side) == 2
        assert inst.threshold == 2

        blue = ColoredBipartite(("a",), ("b",), (("a", "b", "blue"),))
        inst, _ = reduce_exact_matching(blue, 0)
        assert inst.threshold == 1

    def test_two_cycle_size(self):
        G = ColoredBipartite(
            ("a1", "a2"),
            ("b1", "b2"),
            (
                ("a1", "b1", "red"),
                ("a1", "b2", "blue"),
                ("a2", "b1", "blue"),
                ("a2", "b2", "red"),
            ),
        )
        inst, _ = reduce_exact_matching(G, 1)
        assert len(inst.a_side) == len(inst.b_side) == 8

    def test_unbalanced_rejected(self):
        with pytest.raises(DomainError):
            reduce_exact_matching(
                ColoredBipartite(("a1", "a2"), ("b1",), ()), 0
            )

    def test_reduction_agrees_with_brute_n2(self, rng):
        slots = [(a, b) for a in ("a1", "a2") for b in ("b1", "b2")]
        for colors in product([None, "red", "blue"], repeat=4):
            edges = tuple(
                (a, b, c) for (a, b), c in zip(slots, colors) if c is not None
            )
            G = ColoredBipartite(("a1", "a2"), ("b1", "b2"), edges)
            for k in range(0, 3):
                brute = exact_matching_brute(G, k)
                viared = exact_matching_via_reduction(G, k)
                assert (brute is None) == (viared is None), (edges, k)
                if viared is not None:
                    reds = {(a, b) for a, b, c in G.edges if c == "red"}
                    assert len(viared & reds) == k
