"""Exact linear feasibility by phase-one simplex with Bland's rule.

Every decision procedure in the package that asks "is there a point with
these linear properties" ends up here.  Arithmetic is over Fractions, so the
answer is a certificate, not an estimate.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

ZERO = Fraction(0)

Constraint = tuple  # (coefficients, rhs)


def feasible_point(
    num_vars: int,
    equalities: Iterable[Constraint] = (),
    inequalities: Iterable[Constraint] = (),
    nonneg: bool = False,
) -> Optional[tuple[Fraction, ...]]:
    """Find x with ``a.x == b`` for every equality and ``a.x <= b`` for every
    inequality, or return None if no such x exists.

    Variables are free unless ``nonneg`` is set.
    """
    eqs = [(list(map(Fraction, a)), Fraction(b)) for a, b in equalities]
    ineqs = [(list(map(Fraction, a)), Fraction(b)) for a, b in inequalities]
    for a, _ in eqs + ineqs:
        if len(a) != num_vars:
            raise ValueError("constraint length does not match num_vars")

    # standard form columns: x (or x+ and x-), then one slack per inequality
    nx = num_vars if nonneg else 2 * num_vars
    ns = len(ineqs)
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []

    def expand(a):
        return list(a) if nonneg else list(a) + [-c for c in a]

    for a, b in eqs:
        rows.append(expand(a) + [ZERO] * ns)
        rhs.append(b)
    for k, (a, b) in enumerate(ineqs):
        slack = [ZERO] * ns
        slack[k] = Fraction(1)
        rows.append(expand(a) + slack)
        rhs.append(b)

    ncols = nx + ns
    if not rows:
        return tuple([ZERO] * num_vars)
    int_rows, int_rhs = [], []
    for row, b in zip(rows, rhs):
        ints = _row_ints(row + [b])
        if ints[-1] < 0:
            ints = [-c for c in ints]
        int_rows.append(ints[:-1])
        int_rhs.append(ints[-1])

    sol = _phase_one(int_rows, int_rhs, ncols)
    if sol is None:
        return None
    if nonneg:
        return tuple(sol[:num_vars])
    return tuple(sol[i] - sol[num_vars + i] for i in range(num_vars))


def _row_ints(row: list) -> list:
    den = 1
    for q in row:
        den = den * q.denominator // gcd(den, q.denominator)
    return [q.numerator * (den // q.denominator) for q in row]


def _phase_one(rows: list[list[int]], rhs: list[int], ncols: int):
    """Minimise the sum of artificials for A x = b, x >= 0, b >= 0.

    Integer-preserving pivoting: the tableau holds d * (true entries), where
    d is the previous pivot, so every update divides exactly and no
    fractions appear until the solution is read off.
    """
    m = len(rows)
    # tableau columns: originals, then artificials, then rhs
    tab = [rows[i] + [int(i == j) for j in range(m)] + [rhs[i]] for i in range(m)]
    total = ncols + m
    basis = [ncols + i for i in range(m)]
    # reduced costs of the phase-one objective (sum of artificials)
    cost = [0] * (total + 1)
    for row in tab:
        for j in range(ncols):
            cost[j] -= row[j]
        cost[total] -= row[total]
    d = 1

    while True:
        enter = next((j for j in range(total) if cost[j] < 0), None)
        if enter is None:
            break
        leave = -1
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                if leave < 0:
                    leave = i
                    continue
                # compare rhs_i / a with rhs_leave / a_leave
                lhs = tab[i][total] * tab[leave][enter]
                rhs_ = tab[leave][total] * a
                if lhs < rhs_ or (lhs == rhs_ and basis[i] < basis[leave]):
                    leave = i
        if leave < 0:
            # cannot happen: phase one is bounded below by zero
            raise ArithmeticError("unbounded phase-one problem")
        d = _pivot(tab, cost, leave, enter, d)
        basis[leave] = enter

    if cost[total] != 0:
        return None
    x = [ZERO] * ncols
    for i, b in enumerate(basis):
        if b < ncols:
            x[b] = Fraction(tab[i][total], d)
    return x


def _pivot(tab, cost, r, c, d):
    row = tab[r]
    p = row[c]
    for other in tab + [cost]:
        if other is row:
            continue
        f = other[c]
        if f:
            for j in range(len(other)):
                other[j] = (p * other[j] - f * row[j]) // d
        elif p != d:
            for j in range(len(other)):
                other[j] = other[j] * p // d
    return p


def in_convex_hull(point: Sequence[Fraction], generators: Sequence[Sequence[Fraction]]):
    """Convex coefficients expressing ``point`` in conv(generators), or None."""
    m = len(generators)
    if m == 0:
        return None
    n = len(point)
    eqs = [([g[i] for g in generators], point[i]) for i in range(n)]
    eqs.append(([1] * m, 1))
    return feasible_point(m, equalities=eqs, nonneg=True)
