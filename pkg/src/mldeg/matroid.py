"""Linear matroids with explicit bitmask bases.

Elements are ``0 .. n-1``; a subset is an ``int`` bitmask.  Ground sets stay
small (at most 16 elements) so bases are always enumerated explicitly.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

from . import kernels
from .exact import as_matrix, det, det_int, rank

MAX_GROUND = 16


def mask(elements) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


def elements(m: int) -> tuple[int, ...]:
    return tuple(i for i in range(m.bit_length()) if m >> i & 1)


def popcount(m: int) -> int:
    return bin(m).count("1")


@dataclass(frozen=True)
class LinearMatroid:
    ground_size: int
    rank: int
    bases: frozenset = field(repr=False)

    def __post_init__(self):
        if not self.bases:
            raise ValueError("a matroid needs at least one basis")
        if self.ground_size > MAX_GROUND:
            raise ValueError(f"ground sets above {MAX_GROUND} elements are not supported")
        top = 1 << self.ground_size
        for b in self.bases:
            if b >= top or popcount(b) != self.rank:
                raise ValueError(f"basis {elements(b)} is not a {self.rank}-subset of [{self.ground_size}]")

    def __repr__(self):
        return f"LinearMatroid(n={self.ground_size}, r={self.rank}, |B|={len(self.bases)})"

    @property
    def n(self) -> int:
        return self.ground_size

    def is_basis(self, subset) -> bool:
        return (subset if isinstance(subset, int) else mask(subset)) in self.bases

    def sorted_bases(self) -> list[int]:
        return sorted(self.bases)

    def loops(self) -> list[int]:
        union = 0
        for b in self.bases:
            union |= b
        return [e for e in range(self.n) if not union >> e & 1]

    def coloops(self) -> list[int]:
        inter = (1 << self.n) - 1
        for b in self.bases:
            inter &= b
        return list(elements(inter))

    def rank_of(self, subset) -> int:
        s = subset if isinstance(subset, int) else mask(subset)
        return max(popcount(s & b) for b in self.bases)

    def check_exchange(self) -> bool:
        """Verify the basis-exchange axiom exhaustively."""
        for b1 in self.bases:
            for b2 in self.bases:
                for x in elements(b1 & ~b2):
                    if not any((b1 ^ (1 << x)) | (1 << y) in self.bases for y in elements(b2 & ~b1)):
                        return False
        return True


def uniform_matroid(r: int, n: int) -> LinearMatroid:
    return LinearMatroid(n, r, frozenset(mask(c) for c in itertools.combinations(range(n), r)))


def matroid_from_matrix(M) -> LinearMatroid:
    """Column matroid of an exact matrix: bases are column sets with nonzero maximal minor."""
    M = as_matrix(M)
    r = rank(M)
    if r == 0:
        raise ValueError("the zero matrix has no column matroid")
    cols = list(range(M.cols))
    if all(isinstance(e, Fraction) for e in M.entries):
        # clearing denominators column by column leaves the matroid unchanged
        icols = []
        for j in cols:
            col = M.col(j)
            den = 1
            for e in col:
                den = den * e.denominator // _gcd(den, e.denominator)
            icols.append([int(e * den) for e in col])
        bases = set()
        rows_idx = _independent_rows(M, r)
        for cs in itertools.combinations(cols, r):
            sub = [[icols[j][i] for j in cs] for i in rows_idx]
            if det_int(sub) != 0:
                bases.add(mask(cs))
        return LinearMatroid(M.cols, r, frozenset(bases))
    rows_idx = _independent_rows(M, r)
    bases = frozenset(
        mask(cs) for cs in itertools.combinations(cols, r) if det(M.submatrix(rows_idx, cs)) != 0
    )
    return LinearMatroid(M.cols, r, bases)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _independent_rows(M, r):
    """Indices of r linearly independent rows (a maximal minor of the row space)."""
    chosen = []
    for i in range(M.rows):
        trial = chosen + [i]
        if rank(M.submatrix(trial, range(M.cols))) == len(trial):
            chosen = trial
        if len(chosen) == r:
            break
    return chosen


# ---------------------------------------------------------------------------
# Tutte polynomial
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TuttePolynomial:
    coefficients: dict  # (i, j) -> coefficient of x^i y^j

    def __call__(self, x, y):
        return sum(c * x**i * y**j for (i, j), c in self.coefficients.items())

    def coefficient(self, i: int, j: int) -> int:
        return self.coefficients.get((i, j), 0)

    @property
    def beta(self) -> int:
        return self.coefficient(1, 0)

    def __str__(self):
        terms = []
        for (i, j), c in sorted(self.coefficients.items(), reverse=True):
            mono = "".join(
                v if p == 1 else f"{v}^{p}" for v, p in (("x", i), ("y", j)) if p
            )
            terms.append(f"{c}{mono}" if mono and c != 1 else (mono or str(c)))
        return " + ".join(terms) or "0"


def _padd(p, q):
    out = dict(p)
    for k, v in q.items():
        out[k] = out.get(k, 0) + v
    return out


def _shift(p, dx, dy):
    return {(i + dx, j + dy): c for (i, j), c in p.items()}


@lru_cache(maxsize=200_000)
def _tutte_rec(n: int, bases: tuple) -> tuple:
    # deletion-contraction on the top element n-1; the key is the sorted basis list
    if n == 0:
        return (((0, 0), 1),)
    top = 1 << (n - 1)
    with_top = [b ^ top for b in bases if b & top]
    without = [b for b in bases if not b & top]
    if not with_top:  # loop
        p = dict(_tutte_rec(n - 1, tuple(without)))
        return tuple(sorted(_shift(p, 0, 1).items()))
    if not without:  # coloop
        p = dict(_tutte_rec(n - 1, tuple(sorted(with_top))))
        return tuple(sorted(_shift(p, 1, 0).items()))
    p = _padd(dict(_tutte_rec(n - 1, tuple(without))), dict(_tutte_rec(n - 1, tuple(sorted(with_top)))))
    return tuple(sorted(p.items()))


def tutte(M: LinearMatroid) -> TuttePolynomial:
    """Tutte polynomial by memoised deletion-contraction."""
    return TuttePolynomial(dict(_tutte_rec(M.n, tuple(M.sorted_bases()))))


def beta_invariant(M: LinearMatroid) -> int:
    """Beta invariant, the coefficient of x in the Tutte polynomial.

    Evaluated through Crapo's rank formula in the compiled kernel; ``tutte``
    gives the same number and serves as the cross-check.
    """
    return kernels.beta_crapo(M.sorted_bases(), M.n, M.rank)


# ---------------------------------------------------------------------------
# structure
# ---------------------------------------------------------------------------

def is_special(M: LinearMatroid):
    """Return ``(True, witness)`` if some basis survives every single exchange."""
    b = kernels.special_basis(M.sorted_bases(), M.n, M.rank)
    if b < 0:
        return False, None
    return True, elements(b)


def dual(M: LinearMatroid) -> LinearMatroid:
    full = (1 << M.n) - 1
    return LinearMatroid(M.n, M.n - M.rank, frozenset(full ^ b for b in M.bases))


def delete(M: LinearMatroid, e: int) -> LinearMatroid:
    """Deletion M \\ e, relabelling elements above e down by one."""
    keep = [b for b in M.bases if not b >> e & 1]
    r = M.rank
    if not keep:  # coloop
        keep = [b ^ (1 << e) for b in M.bases]
        r -= 1
    return LinearMatroid(M.n - 1, r, frozenset(_squeeze(b, e) for b in keep))


def contract(M: LinearMatroid, e: int) -> LinearMatroid:
    """Contraction M / e, relabelling elements above e down by one."""
    keep = [b ^ (1 << e) for b in M.bases if b >> e & 1]
    r = M.rank - 1
    if not keep:  # loop
        keep = list(M.bases)
        r = M.rank
    return LinearMatroid(M.n - 1, r, frozenset(_squeeze(b, e) for b in keep))


def _squeeze(b: int, e: int) -> int:
    low = b & ((1 << e) - 1)
    return low | ((b >> (e + 1)) << e)


def permute(M: LinearMatroid, perm) -> LinearMatroid:
    """Relabel element i as perm[i]."""
    return LinearMatroid(M.n, M.rank, frozenset(_apply(b, perm) for b in M.bases))


def _apply(b: int, perm) -> int:
    out = 0
    for i, p in enumerate(perm):
        if b >> i & 1:
            out |= 1 << p
    return out


def weak_order_le(M: LinearMatroid, N: LinearMatroid) -> bool:
    """M <= N in the weak order: every basis of M is a basis of N."""
    if M.n != N.n or M.rank != N.rank:
        raise ValueError("weak order compares matroids of equal ground size and rank")
    return M.bases <= N.bases


# ---------------------------------------------------------------------------
# isomorphism
# ---------------------------------------------------------------------------

def _profile(M: LinearMatroid):
    deg = [0] * M.n
    pair = [[0] * M.n for _ in range(M.n)]
    for b in M.bases:
        els = elements(b)
        for i in els:
            deg[i] += 1
            for j in els:
                pair[i][j] += 1
    return deg, pair


def _search_maps(M: LinearMatroid, N: LinearMatroid, exact: bool):
    """Yield injective relabellings perm with perm(B_M) == B_N (or a subset when not exact).

    Backtracking assigns elements in order; for ``exact`` it prunes on
    per-element and per-pair basis counts.
    """
    n = M.n
    dM, pM = _profile(M)
    dN, pN = _profile(N)
    if exact and sorted(dM) != sorted(dN):
        return
    order = sorted(range(n), key=lambda e: -dM[e]) if exact else list(range(n))
    perm = [-1] * n
    used = [False] * n
    target = N.bases

    def ok_partial(k):
        e = order[k]
        f = perm[e]
        if exact:
            if dM[e] != dN[f]:
                return False
            for t in range(k + 1):
                e2 = order[t]
                if pM[e][e2] != pN[f][perm[e2]]:
                    return False
        else:
            if dM[e] > dN[f]:
                return False
            for t in range(k):
                e2 = order[t]
                if pM[e][e2] > pN[f][perm[e2]]:
                    return False
        return True

    def rec(k):
        if k == n:
            img = frozenset(_apply(b, perm) for b in M.bases)
            if (img == target) if exact else (img <= target):
                yield list(perm)
            return
        e = order[k]
        for f in range(n):
            if used[f]:
                continue
            perm[e] = f
            used[f] = True
            if ok_partial(k):
                yield from rec(k + 1)
            used[f] = False
            perm[e] = -1

    yield from rec(0)


def are_isomorphic(M: LinearMatroid, N: LinearMatroid) -> bool:
    if M.n != N.n or M.rank != N.rank or len(M.bases) != len(N.bases):
        return False
    return next(_search_maps(M, N, exact=True), None) is not None


def weak_order_le_up_to_iso(M: LinearMatroid, N: LinearMatroid) -> bool:
    """True iff some relabelling of M is below N in the weak order."""
    if M.n != N.n or M.rank != N.rank:
        raise ValueError("weak order compares matroids of equal ground size and rank")
    if len(M.bases) > len(N.bases):
        return False
    return next(_search_maps(M, N, exact=False), None) is not None


def isomorphism_classes(matroids) -> list[int]:
    """Class id for each matroid (first-seen order)."""
    reps: list[LinearMatroid] = []
    ids = []
    for M in matroids:
        for k, R in enumerate(reps):
            if are_isomorphic(M, R):
                ids.append(k)
                break
        else:
            reps.append(M)
            ids.append(len(reps) - 1)
    return ids


def hasse_diagram(matroids) -> list[tuple[int, int]]:
    """Cover relations (i, j), meaning class i < class j, among pairwise non-isomorphic matroids."""
    k = len(matroids)
    le = [[i == j or weak_order_le_up_to_iso(matroids[i], matroids[j]) for j in range(k)] for i in range(k)]
    lt = [[le[i][j] and i != j for j in range(k)] for i in range(k)]
    edges = []
    for i in range(k):
        for j in range(k):
            if lt[i][j] and not any(lt[i][t] and lt[t][j] for t in range(k)):
                edges.append((i, j))
    return edges


def is_self_dual_up_to_iso(M: LinearMatroid) -> bool:
    return are_isomorphic(M, dual(M))


def max_beta_uniform(r: int, n: int) -> int:
    """beta(U_{r,n}) = C(n-2, r-1) for 1 <= r < n."""
    return comb(n - 2, r - 1)
