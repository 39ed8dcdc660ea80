"""Exact linear programming over rationals.

A dense two-phase primal simplex with Bland's rule: slow by LP-solver
standards but exact, deterministic, and immune to cycling, which is all
the desk-scale duals and feasibility systems here need.  Free variables
are handled by sign splitting.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import LPError, LPInfeasibleError, LPUnboundedError

GE, LE, EQ = ">=", "<=", "=="

_ZERO = Fraction(0)
_ONE = Fraction(1)


def linprog_min(objective, constraints, n_vars, free=()):
    """Minimize objective . x subject to the given constraints.

    `objective` maps variable index to coefficient (dict or dense list);
    `constraints` is a list of (coeffs, sense, rhs) with sparse dict
    coeffs and sense one of ">=", "<=", "==".  Variables are nonnegative
    unless their index is listed in `free`.

    Returns (value, x) in exact Fractions.  Raises LPInfeasibleError or
    LPUnboundedError as appropriate.
    """
    free = set(free)
    neg_col = {}
    ncols = n_vars
    for j in sorted(free):
        if not 0 <= j < n_vars:
            raise LPError(f"free index {j} out of range")
        neg_col[j] = ncols
        ncols += 1

    if isinstance(objective, dict):
        cost = [Fraction(objective.get(j, 0)) for j in range(n_vars)]
    else:
        cost = [Fraction(v) for v in objective]
        if len(cost) != n_vars:
            raise LPError("objective length mismatch")
    cost += [-cost[j] for j in sorted(free)]

    rows, senses, rhs = [], [], []
    for coeffs, sense, b in constraints:
        if sense not in (GE, LE, EQ):
            raise LPError(f"bad sense {sense!r}")
        row = [_ZERO] * ncols
        for j, v in coeffs.items():
            fv = Fraction(v)
            row[j] += fv
            if j in neg_col:
                row[neg_col[j]] -= fv
        rows.append(row)
        senses.append(sense)
        rhs.append(Fraction(b))

    value, x = _two_phase(cost, rows, senses, rhs)
    out = []
    for j in range(n_vars):
        v = x[j]
        if j in neg_col:
            v = v - x[neg_col[j]]
        out.append(v)
    return value, out


def _two_phase(cost, rows, senses, rhs):
    m = len(rows)
    n = len(cost)
    width = n + m          # original columns plus slack/surplus
    total = width + m      # plus one artificial per row

    tab = []
    b = []
    for i in range(m):
        row = list(rows[i]) + [_ZERO] * (2 * m)
        if senses[i] == LE:
            row[n + i] = _ONE
        elif senses[i] == GE:
            row[n + i] = -_ONE
        bi = rhs[i]
        if bi < 0:
            row = [-v for v in row]
            bi = -bi
        row[width + i] = _ONE
        tab.append(row)
        b.append(bi)
    basis = [width + i for i in range(m)]

    def pivot(prow, pcol):
        inv = _ONE / tab[prow][pcol]
        tab[prow] = [v * inv for v in tab[prow]]
        b[prow] *= inv
        pr = tab[prow]
        pb = b[prow]
        for i in range(m):
            if i == prow:
                continue
            f = tab[i][pcol]
            if f:
                ri = tab[i]
                tab[i] = [a - f * c for a, c in zip(ri, pr)]
                b[i] -= f * pb
        basis[prow] = pcol

    def reduced(cvec):
        z = list(cvec) + [_ZERO] * (total - len(cvec))
        obj = _ZERO
        for i in range(m):
            f = z[basis[i]]
            if f:
                ri = tab[i]
                z = [a - f * c for a, c in zip(z, ri)]
                obj -= f * b[i]
        return z, obj

    def run(z, obj, limit):
        # Bland: entering = lowest eligible index, leaving = lowest basic index
        while True:
            enter = -1
            for j in range(limit):
                if z[j] < 0:
                    enter = j
                    break
            if enter < 0:
                return z, obj
            leave = -1
            best = None
            for i in range(m):
                a = tab[i][enter]
                if a > 0:
                    key = (b[i] / a, basis[i])
                    if best is None or key < best:
                        best = key
                        leave = i
            if leave < 0:
                raise LPUnboundedError("objective unbounded below")
            f = z[enter]
            pivot(leave, enter)
            if f:
                pr = tab[leave]
                z = [a - f * c for a, c in zip(z, pr)]
                obj -= f * b[leave]

    # phase 1: minimize the sum of artificials
    z, obj = reduced([_ZERO] * width + [_ONE] * m)
    z, obj = run(z, obj, total)
    if -obj != 0:
        raise LPInfeasibleError("constraints are infeasible")

    # pivot lingering zero-value artificials out where possible
    for i in range(m):
        if basis[i] >= width:
            col = next((j for j in range(width) if tab[i][j] != 0), None)
            if col is not None:
                pivot(i, col)
            elif b[i] != 0:
                raise LPError("artificial basic at nonzero value after phase 1")

    # phase 2 over original and slack columns only
    z, obj = reduced(cost)
    z, obj = run(z, obj, width)

    x = [_ZERO] * total
    for i in range(m):
        x[basis[i]] = b[i]
    return -obj, x[: len(cost)]
