"""Shared random-instance machinery for the test suite.

Everything is seeded; corpora are deterministic across runs.
"""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from popmat.matroids import (
    ExplicitMatroid,
    FreeMatroid,
    GraphicMatroid,
    Matroid,
    PartitionMatroid,
    UniformMatroid,
    direct_sum,
)
from popmat.mnat import ValuedFamily, is_mnat_concave
from popmat.onesided import AgentOrder, OneSidedInstance
from popmat.twosided import OrderedMatroid
from popmat.exhaustive import subsets_in_order


def ids(n, prefix="e"):
    return [f"{prefix}{i}" for i in range(n)]


def random_partition(rng: random.Random, items):
    items = list(items)
    rng.shuffle(items)
    parts = []
    while items:
        take = min(len(items), rng.randint(1, 3))
        parts.append(tuple(items[:take]))
        items = items[take:]
    return parts


def random_matroid(rng: random.Random, ground, depth=1) -> Matroid:
    ground = list(ground)
    n = len(ground)
    kinds = ["free", "uniform", "partition", "graphic", "explicit"]
    if depth > 0 and n >= 2:
        kinds += ["truncation", "restriction", "contraction", "direct_sum"]
    kind = rng.choice(kinds)
    if kind == "free":
        return FreeMatroid(ground)
    if kind == "uniform":
        return UniformMatroid(ground, rng.randint(0, n))
    if kind == "partition":
        parts = random_partition(rng, ground)
        caps = [rng.randint(0, 2) for _ in parts]
        return PartitionMatroid(parts, caps, ground=ground)
    if kind == "graphic":
        nv = max(2, n // 2 + 1)
        verts = [f"v{i}" for i in range(nv)]
        endpoints = {e: (rng.choice(verts), rng.choice(verts)) for e in ground}
        return GraphicMatroid(endpoints, ground=ground)
    if kind == "explicit":
        base = random_matroid(rng, ground, depth=0)
        fam = [fs for fs in subsets_in_order(ground) if base._indep(fs)]
        return ExplicitMatroid(ground, independent=fam)
    if kind == "truncation":
        return random_matroid(rng, ground, depth - 1).truncate(rng.randint(0, n))
    if kind == "restriction":
        extra = [f"x{i}" for i in range(rng.randint(1, 2))]
        child = random_matroid(rng, ground + extra, depth - 1)
        return child.restrict(ground)
    if kind == "contraction":
        extra = [f"x{i}" for i in range(rng.randint(1, 2))]
        child = random_matroid(rng, extra + ground, depth - 1)
        return child.contract(extra)
    blocks = random_partition(rng, ground)
    return direct_sum([random_matroid(rng, b, depth=0) for b in blocks])


def random_agent_order(rng: random.Random, part) -> AgentOrder:
    # random priorities give an acyclic generator set, hence a partial order
    prio = {u: rng.random() for u in part}
    pairs = [
        (u, v)
        for u in part
        for v in part
        if u != v and prio[u] < prio[v] and rng.random() < 0.6
    ]
    return AgentOrder(part, pairs)


def random_one_sided(rng: random.Random, max_n=8) -> OneSidedInstance:
    n = rng.randint(2, max_n)
    ground = ids(n)
    parts = random_partition(rng, ground)
    agents = [random_agent_order(rng, p) for p in parts]
    m2 = random_matroid(rng, ground)
    w = {u: rng.randint(-3, 3) for u in ground}
    return OneSidedInstance(ground, agents, m2, weights=w)


def random_summand(rng: random.Random, block) -> Matroid:
    block = list(block)
    kind = rng.choice(["uniform", "uniform", "partition", "free1"])
    if kind == "uniform":
        return UniformMatroid(block, rng.randint(1, 2))
    if kind == "partition":
        parts = random_partition(rng, block)
        return PartitionMatroid(parts, [1] * len(parts), ground=block)
    return UniformMatroid(block, min(2, len(block)))


def random_two_sided(rng: random.Random, max_n=6):
    """Two ordered direct-sum matroids with summand ranks at most 2."""
    n = rng.randint(2, max_n)
    ground = ids(n)
    m_list = []
    for _ in range(2):
        blocks = random_partition(rng, ground)
        summands = [random_summand(rng, b) for b in blocks]
        order = list(ground)
        rng.shuffle(order)
        m_list.append(OrderedMatroid(summands, order))
    w = {u: rng.randint(-3, 3) for u in ground}
    return m_list[0], m_list[1], w


def random_mnat_table(rng: random.Random, max_n=7, max_domain=48) -> ValuedFamily:
    """Random verified exchange-closed value table.

    Candidate domains are matroid independent-set or base families,
    candidate values modular plus an optional concave size bonus;
    rejection sampling keeps only tables that pass the checker.
    """
    for _ in range(60):
        n = rng.randint(2, max_n)
        ground = ids(n)
        base = random_matroid(rng, ground)
        if rng.random() < 0.3:
            r = base.full_rank()
            dom = [
                fs
                for fs in subsets_in_order(ground)
                if len(fs) == r and base._indep(fs)
            ]
        else:
            dom = [fs for fs in subsets_in_order(ground) if base._indep(fs)]
        if not dom or len(dom) > max_domain:
            continue
        q = {u: Fraction(rng.randint(-3, 3)) for u in ground}
        mode = rng.random()
        if mode < 0.25:
            vals = {X: Fraction(0) for X in dom}
        elif mode < 0.7:
            vals = {X: sum((q[u] for u in X), Fraction(0)) for X in dom}
        else:
            c = rng.randint(0, 3)
            vals = {
                X: sum((q[u] for u in X), Fraction(0)) + c * len(X) - len(X) ** 2
                for X in dom
            }
        F = ValuedFamily(ground, dom, vals)
        ok, _ = is_mnat_concave(F)
        if ok:
            return F
    # matroid independents with zero values always pass
    ground = ids(rng.randint(2, 4))
    base = UniformMatroid(ground, 1)
    dom = [fs for fs in subsets_in_order(ground) if base._indep(fs)]
    return ValuedFamily(ground, dom)


@pytest.fixture
def rng():
    return random.Random(20240901)
