"""Pure-Python matroid kernels.

Reference implementation of the routines in ``_kernels.pyx``; it is what
``mldeg.kernels`` falls back to when the compiled extension is missing.
Bases are bitmasks over a ground set of at most 16 elements.
"""
from __future__ import annotations


def rank_table(bases, n):
    """Rank of every subset of ``range(n)``, indexed by bitmask."""
    if n < 0 or n > 16:
        raise ValueError("ground set must have at most 16 elements")
    size = 1 << n
    indep = bytearray(size)
    for b in bases:
        indep[b] = 1
    # downward closure: subsets of independent sets are independent
    for x in range(size - 1, 0, -1):
        if indep[x]:
            y = x
            while y:
                low = y & -y
                indep[x ^ low] = 1
                y ^= low
    rk = [0] * size
    for x in range(1, size):
        if indep[x]:
            rk[x] = bin(x).count("1")
        else:
            best = 0
            y = x
            while y:
                low = y & -y
                v = rk[x ^ low]
                if v > best:
                    best = v
                y ^= low
            rk[x] = best
    return rk


def beta_crapo(bases, n, r):
    """Crapo's beta invariant: (-1)^r * sum over subsets X of (-1)^|X| rank(X)."""
    rk = rank_table(bases, n)
    total = 0
    for x in range(1 << n):
        if bin(x).count("1") & 1:
            total -= rk[x]
        else:
            total += rk[x]
    return -total if r & 1 else total


def special_basis(bases, n, r):
    """Smallest basis B with every single exchange (B - i) + j a basis, or -1."""
    bset = set(bases)
    full = (1 << n) - 1
    for b in sorted(bset):
        ok = True
        inside = [1 << i for i in range(n) if b >> i & 1]
        outside = [1 << j for j in range(n) if not (b >> j & 1)]
        for i in inside:
            for j in outside:
                if (b ^ i) | j not in bset:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return b
    return -1


def beta_many(basis_lists, n, r):
    return [beta_crapo(bs, n, r) for bs in basis_lists]
