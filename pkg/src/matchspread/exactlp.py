"""Exact rational linear programming at toy scale.

Dense two-phase simplex over Fractions with Bland's rule (finite
termination, no tolerances). Sized for the cover relaxations on ground
sets of at most 8 items; not a general-purpose LP code.
"""

from __future__ import annotations

from fractions import Fraction


class LPInfeasibleError(Exception):
    pass


class LPUnboundedError(Exception):
    pass


def _pivot(tableau, obj, basis, row, col):
    piv = tableau[row][col]
    inv = 1 / piv
    tableau[row] = [x * inv for x in tableau[row]]
    prow = tableau[row]
    for i, r in enumerate(tableau):
        if i != row and r[col] != 0:
            f = r[col]
            tableau[i] = [a - f * b for a, b in zip(r, prow)]
    if obj[col] != 0:
        f = obj[col]
        for j, b in enumerate(prow):
            obj[j] -= f * b
    basis[row] = col


def _iterate(tableau, obj, basis, allowed_cols):
    while True:
        enter = -1
        for j in allowed_cols:
            if obj[j] < 0:
                enter = j
                break
        if enter < 0:
            return
        leave = -1
        best = None
        for i, r in enumerate(tableau):
            if r[enter] > 0:
                ratio = r[-1] / r[enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            raise LPUnboundedError("objective unbounded below")
        _pivot(tableau, obj, basis, leave, enter)


def solve_min_geq(costs, rows, rhs):
    """min costs . x  subject to  rows x >= rhs, x >= 0, all Fractions.

    Returns (optimal value, x list). Raises LPInfeasibleError or
    LPUnboundedError.
    """
    m = len(rows)
    n = len(costs)
    costs = [Fraction(c) for c in costs]
    # columns: n structural, m surplus, m artificial, then RHS
    tableau = []
    for i in range(m):
        b = Fraction(rhs[i])
        row = [Fraction(x) for x in rows[i]]
        surplus = [Fraction(0)] * m
        surplus[i] = Fraction(-1)
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        full = row + surplus + art + [b]
        if b < 0:
            full = [-x for x in full[: n + m]] + full[n + m : -1] + [-b]
            full[n + m + i] = Fraction(1)
        tableau.append(full)
    width = n + 2 * m + 1
    basis = [n + m + i for i in range(m)]

    # phase 1: minimize the artificial total
    obj = [Fraction(0)] * width
    for j in range(n + m, n + 2 * m):
        obj[j] = Fraction(1)
    for r in tableau:  # canonicalize against the artificial basis
        obj = [a - b for a, b in zip(obj, r)]
    _iterate(tableau, obj, basis, range(n + m))
    if -obj[-1] != 0:
        raise LPInfeasibleError("phase 1 ended with positive artificial mass")
    for i in range(m):  # drive leftover artificials out of the basis
        if basis[i] >= n + m:
            for j in range(n + m):
                if tableau[i][j] != 0:
                    _pivot(tableau, obj, basis, i, j)
                    break

    # phase 2: the real objective
    obj = [Fraction(0)] * width
    for j in range(n):
        obj[j] = costs[j]
    for i, r in enumerate(tableau):
        if basis[i] < n and obj[basis[i]] != 0:
            f = obj[basis[i]]
            obj = [a - f * b for a, b in zip(obj, r)]
    _iterate(tableau, obj, basis, range(n + m))

    x = [Fraction(0)] * n
    for i, bi in enumerate(basis):
        if bi < n:
            x[bi] = tableau[i][-1]
    value = sum(c * v for c, v in zip(costs, x))
    return value, x
