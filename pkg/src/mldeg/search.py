"""Search for Segre scalings with a prescribed ML degree.

For two rows there is a closed form.  Otherwise random integer matrices are
degenerated by a few moves that create special position among the columns of
``[I_m | w]`` (repeated columns, columns in the span of a few others,
vanishing 2-minors, repeated rows), and each candidate is checked with the
beta invariant.  A hit is verified independently by counting bounded regions
when the arrangement is small enough.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .arrangement import CapacityError, arrangement_from_scaling, bounded_regions
from .catalog import SEGRE33_SCALINGS, closed_form_segre2
from .models import Scaling, build_family, degree, ml_degree_combinatorial

STRATEGIES = ("closed_form", "randomized_arrangement", "table_lookup")
ENTRY_BOUNDS = (4, 12, 40)
CHUNK = 256


@dataclass
class SearchSpec:
    m: int
    n: int
    target_k: int
    budget: int = 10_000
    seed: int = 0
    strategy: str = "randomized_arrangement"
    workers: int = 1

    def __post_init__(self):
        F = build_family("segre", self.m, self.n)
        if not 1 <= self.target_k <= degree(F):
            raise ValueError(f"target must lie in 1..{degree(F)} for Segre({self.m},{self.n})")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.budget < 1:
            raise ValueError("budget must be positive")
        if self.workers < 1:
            raise ValueError("workers must be positive")


@dataclass
class SearchResult:
    scaling: Optional[Scaling]
    candidates_tried: int
    verified_by: tuple = ()

    @property
    def found(self) -> bool:
        return self.scaling is not None


def verify(w: Scaling, k: int) -> tuple:
    """Methods that confirm ML degree ``k``; raises AssertionError on disagreement."""
    methods = []
    b = ml_degree_combinatorial(w)
    if b != k:
        raise AssertionError(f"beta invariant is {b}, expected {k}")
    methods.append("beta")
    if w.is_real:
        try:
            reg = bounded_regions(arrangement_from_scaling(w.matrix()))
        except CapacityError:
            reg = None
        if reg is not None:
            if reg != k:
                raise AssertionError(f"bounded regions {reg} disagree with beta {k}")
            methods.append("regions")
    return tuple(methods)


def _rand_entry(rng, bound):
    v = int(rng.integers(1, bound + 1))
    return v if rng.random() < 0.5 else -v


def _degenerate(W, rng, bound):
    """Apply one random special-position move in place.  Returns False if it
    would create a zero entry."""
    m, n = len(W), len(W[0])
    move = rng.integers(4)
    if move == 0 and n >= 2:                      # repeated (parallel) column
        a, b = rng.choice(n, 2, replace=False)
        s = Fraction(_rand_entry(rng, 3))
        for i in range(m):
            W[i][b] = W[i][a] * s
    elif move == 1:                               # column in the span of others
        j = int(rng.integers(n))
        size = int(rng.integers(2, m + 1)) if m >= 2 else 1
        pool = [("e", i) for i in range(m)] + [("w", c) for c in range(n) if c != j]
        picks = rng.choice(len(pool), min(size, len(pool)), replace=False)
        new = [Fraction(0)] * m
        for p in picks:
            kind, idx = pool[p]
            c = Fraction(_rand_entry(rng, 3))
            for i in range(m):
                new[i] += c * ((1 if i == idx else 0) if kind == "e" else W[i][idx])
        if any(x == 0 for x in new):
            return False
        for i in range(m):
            W[i][j] = new[i]
    elif move == 2 and n >= 2:                    # vanishing 2-minor
        a, b = rng.choice(m, 2, replace=False)
        c, d = rng.choice(n, 2, replace=False)
        W[a][d] = W[a][c] * W[b][d] / W[b][c]
    elif move == 3:                               # proportional rows
        a, b = rng.choice(m, 2, replace=False)
        s = Fraction(_rand_entry(rng, 3))
        W[b] = [x * s for x in W[a]]
    return True


def candidates(m: int, n: int, rng, bound: int):
    """Endless stream of nonzero rational m x n matrices."""
    while True:
        W = [[Fraction(_rand_entry(rng, bound)) for _ in range(n)] for _ in range(m)]
        moves = int(rng.integers(0, 2 * (m + n)))
        ok = True
        for _ in range(moves):
            if not _degenerate(W, rng, bound):
                ok = False
                break
        if ok and all(x != 0 for row in W for x in row):
            yield W


def find_scaling(spec: SearchSpec) -> SearchResult:
    """First scaling (by candidate index) with beta invariant ``target_k``."""
    m, n, k = spec.m, spec.n, spec.target_k
    strategy = spec.strategy
    if strategy == "closed_form" or (strategy != "table_lookup" and m == 2):
        if m != 2:
            raise ValueError("the closed form is for two-row scalings")
        w = Scaling.segre(closed_form_segre2(n, k))
        return SearchResult(w, 1, verify(w, k))
    if strategy == "table_lookup":
        if (m, n) != (3, 3):
            raise ValueError("table lookup covers Segre(3,3) only")
        w = Scaling.segre(SEGRE33_SCALINGS[k - 1])
        return SearchResult(w, 1, verify(w, k))
    rng = np.random.default_rng(spec.seed)
    tried = 0
    stage = max(1, spec.budget // len(ENTRY_BOUNDS))
    pool = ProcessPoolExecutor(spec.workers) if spec.workers > 1 else None
    try:
        for s, bound in enumerate(ENTRY_BOUNDS):
            left = spec.budget - tried
            quota = min(stage, left) if s < len(ENTRY_BOUNDS) - 1 else left
            gen = candidates(m, n, rng, bound)
            while quota > 0:
                # candidates are drawn in order, so the first hit by index is
                # the same however the chunk is evaluated
                chunk = [next(gen) for _ in range(min(CHUNK, quota))]
                quota -= len(chunk)
                betas = pool.map(_beta_of, chunk, chunksize=16) if pool else map(_beta_of, chunk)
                for t, b in enumerate(betas):
                    if b == k:
                        w = Scaling.segre(chunk[t])
                        return SearchResult(w, tried + t + 1, verify(w, k))
                tried += len(chunk)
    finally:
        if pool:
            pool.shutdown(cancel_futures=True)
    return SearchResult(None, tried)


def _beta_of(W) -> int:
    return ml_degree_combinatorial(Scaling.segre(W))
