"""Small exact simplex for the region-counting oracle.

Only LPs whose origin is feasible are needed (``A z <= b`` with ``b >= 0``),
so a single phase suffices.  Bland's rule keeps degenerate problems from
cycling.
"""
from __future__ import annotations

from fractions import Fraction


class Unbounded(Exception):
    pass


def maximize(c, A, b):
    """Maximise ``c.z`` subject to ``A z <= b``, ``z >= 0``, with ``b >= 0``.

    Returns ``(value, z)`` as exact fractions.  Raises :class:`Unbounded`.
    """
    m = len(A)
    n = len(c)
    if any(bi < 0 for bi in b):
        raise ValueError("origin must be feasible (b >= 0)")
    # tableau rows: A | I | b
    T = []
    for i in range(m):
        row = [Fraction(x) for x in A[i]] + [Fraction(0)] * m + [Fraction(b[i])]
        row[n + i] = Fraction(1)
        T.append(row)
    obj = [-Fraction(x) for x in c] + [Fraction(0)] * (m + 1)
    basis = [n + i for i in range(m)]
    width = n + m
    while True:
        enter = next((j for j in range(width) if obj[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            raise Unbounded()
        prow = T[leave]
        inv = 1 / prow[enter]
        prow = [x * inv for x in prow]
        T[leave] = prow
        for i in range(m):
            if i != leave:
                f = T[i][enter]
                if f:
                    T[i] = [x - f * y for x, y in zip(T[i], prow)]
        f = obj[enter]
        obj = [x - f * y for x, y in zip(obj, prow)]
        basis[leave] = enter
    z = [Fraction(0)] * width
    for i, j in enumerate(basis):
        z[j] = T[i][-1]
    return obj[-1], z[:n]


def strict_feasible_point(G, h):
    """A point x with ``G x + h > 0`` componentwise, or None if there is none.

    Homogenised as ``G x + h s >= t``, ``s >= t``, ``t <= 1``: the origin is
    feasible and the optimum ``t`` is positive iff the strict system is.
    """
    k = len(G[0]) if G else 0
    rows = len(G)
    # variables: x+ (k), x- (k), s, t
    A = []
    b = []
    for i in range(rows):
        g = G[i]
        A.append([-x for x in g] + list(g) + [-h[i], 1])
        b.append(0)
    A.append([0] * (2 * k) + [-1, 1])
    b.append(0)
    A.append([0] * (2 * k) + [0, 1])
    b.append(1)
    c = [0] * (2 * k) + [0, 1]
    val, z = maximize(c, A, b)
    if val <= 0:
        return None
    s = z[2 * k]
    return [(z[j] - z[k + j]) / s for j in range(k)]


def cone_is_trivial(G) -> bool:
    """True iff ``{d : G d >= 0} == {0}``; G must have full column rank."""
    k = len(G[0])
    total = [sum(G[i][j] for i in range(len(G))) for j in range(k)]
    A = []
    b = []
    for g in G:
        A.append([-x for x in g] + list(g))
        b.append(0)
    A.append(list(total) + [-x for x in total])
    b.append(1)
    c = list(total) + [-x for x in total]
    val, _ = maximize(c, A, b)
    return val == 0
