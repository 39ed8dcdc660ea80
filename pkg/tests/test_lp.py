from fractions import Fraction

import pytest

from popmat.errors import LPInfeasibleError, LPUnboundedError
from popmat.lp import EQ, GE, LE, linprog_min


def test_basic_min():
    v, x = linprog_min([-1, -1], [({0: 1, 1: 1}, LE, 3), ({0: 1}, LE, 2)], 2)
    assert v == -3


def test_exact_fractions():
    v, x = linprog_min(
        [Fraction(1, 3)], [({0: 1}, GE, Fraction(2, 7))], 1
    )
    assert v == Fraction(2, 21)
    assert x[0] == Fraction(2, 7)


def test_equality_rows():
    v, x = linprog_min([1, 1], [({0: 1, 1: 1}, EQ, 2), ({0: 1}, LE, 1)], 2)
    assert v == 2


def test_free_variables():
    v, x = linprog_min([1], [({0: 1}, GE, -5)], 1, free=[0])
    assert v == -5 and x[0] == -5


def test_infeasible():
    with pytest.raises(LPInfeasibleError):
        linprog_min([0], [({0: 1}, LE, -1), ({0: 1}, GE, 1)], 1)


def test_unbounded():
    with pytest.raises(LPUnboundedError):
        linprog_min([-1], [({0: -1}, LE, 0)], 1)


def test_degenerate_cycling_guard():
    # classic cycling-prone tableau; Bland's rule must terminate
    v, _ = linprog_min(
        [Fraction(-3, 4), 150, Fraction(-1, 50), 6],
        [
            ({0: Fraction(1, 4), 1: -60, 2: Fraction(-1, 25), 3: 9}, LE, 0),
            ({0: Fraction(1, 2), 1: -90, 2: Fraction(-1, 50), 3: 3}, LE, 0),
            ({2: 1}, LE, 1),
        ],
        4,
    )
    assert v == Fraction(-1, 20)


def test_redundant_equalities():
    v, x = linprog_min(
        [1, 1],
        [({0: 1, 1: 1}, EQ, 2), ({0: 2, 1: 2}, EQ, 4), ({0: 1}, GE, 0)],
        2,
    )
    assert v == 2
