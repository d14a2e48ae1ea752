"""Randomised probes of open statements about ML degrees.

Each experiment returns a plain dict with the instances checked and any
violation seen.  Nothing here asserts that a statement is true.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from fractions import Fraction
from math import comb

import numpy as np

from .catalog import SEGRE33_EXTRA, SEGRE33_SCALINGS
from .matroid import beta_invariant, dual, hasse_diagram, isomorphism_classes, matroid_from_matrix
from .models import Scaling, extended_matrix, hypersimplex_signature, triple_signature
from .solver import InconsistentCount, ml_degree_numeric

EXPERIMENTS = ("signature_determines_mldeg", "weak_order_monotone", "hypersimplex_min", "slice_conjecture")


def segre33_poset_matroids():
    """The eight Segre(3,3) matroids: six scalings, the dual of the third, one more."""
    Ms = [matroid_from_matrix(extended_matrix(Scaling.segre(w))) for w in SEGRE33_SCALINGS]
    Ms.append(dual(Ms[2]))
    Ms.append(matroid_from_matrix(extended_matrix(Scaling.segre(SEGRE33_EXTRA))))
    return Ms


def weak_order_monotone(matroids=None) -> dict:
    """Does every cover relation of the weak order strictly raise the beta invariant?"""
    Ms = matroids if matroids is not None else segre33_poset_matroids()
    classes = isomorphism_classes(Ms)
    reps = sorted(set(classes))
    rep_ms = [Ms[i] for i in reps]
    betas = [beta_invariant(M) for M in rep_ms]
    edges = hasse_diagram(rep_ms)
    violations = [(reps[a], reps[b], betas[a], betas[b]) for a, b in edges if not betas[a] < betas[b]]
    return {"experiment": "weak_order_monotone", "classes": len(reps), "representatives": reps,
            "betas": betas, "edges": [(reps[a], reps[b]) for a, b in edges], "checked": len(edges),
            "violations": violations}


def slice_conjecture(n: int = 3, ds=None, trials: int = 2, seed=0) -> dict:
    """Solver ML degree of ``w_ijk = k`` for ``k <= d`` and ``i = 2``, 1 otherwise."""
    ds = list(ds) if ds is not None else list(range(1, n + 1))
    rows = []
    for d in ds:
        w = Scaling.triple([[[1] * n for _ in (1, 2)], [[k if k <= d else 1 for k in range(1, n + 1)]
                                                        for _ in (1, 2)]])
        try:
            got = ml_degree_numeric(w.family, w, trials=trials, seed=seed)
        except InconsistentCount as exc:
            got = [r.ml_degree for r in exc.reports]
        rows.append({"d": d, "ml_degree": got, "matches": got == d})
    return {"experiment": "slice_conjecture", "n": n, "checked": len(rows), "rows": rows,
            "violations": [r for r in rows if not r["matches"]]}


def _small_tensor(n, rng):
    vals = [1, 2, 3]
    return [[[int(rng.choice(vals)) for _ in range(n)] for _ in (1, 2)] for _ in (1, 2)]


def signature_determines_mldeg(n: int = 2, samples: int = 60, trials: int = 1, seed=0,
                               max_pairs: int = 20) -> dict:
    """Compare solver ML degrees across random tensors with equal vanishing patterns."""
    rng = np.random.default_rng(seed)
    buckets = defaultdict(list)
    seen = set()
    for _ in range(samples):
        t = _small_tensor(n, rng)
        key = str(t)
        if key in seen:
            continue
        seen.add(key)
        w = Scaling.triple(t)
        buckets[triple_signature(w).pattern()].append(w)
    pairs = [(ws[0], ws[1]) for ws in buckets.values() if len(ws) >= 2][:max_pairs]
    violations, checked = [], 0
    cache = {}

    def deg(w):
        if w.values not in cache:
            try:
                cache[w.values] = ml_degree_numeric(w.family, w, trials=trials, seed=seed)
            except InconsistentCount as exc:
                cache[w.values] = tuple(r.ml_degree for r in exc.reports)
        return cache[w.values]

    for a, b in pairs:
        checked += 1
        da, db = deg(a), deg(b)
        if da != db:
            violations.append({"w": [str(x) for x in a.values], "w_prime": [str(x) for x in b.values],
                               "ml_degrees": [da, db]})
    return {"experiment": "signature_determines_mldeg", "n": n, "patterns": len(buckets),
            "checked": checked, "violations": violations}


def _degenerate_hypersimplex(d, rng):
    """Random small-integer hollow scaling, with some 4-minors forced to vanish."""
    vals = {p: Fraction(int(rng.integers(1, 6)) * (1 if rng.random() < 0.5 else -1))
            for p in itertools.combinations(range(1, d + 1), 2)}
    for _ in range(int(rng.integers(0, d))):
        E = sorted(rng.choice(np.arange(1, d + 1), 4, replace=False).tolist())
        a, b, c, e = E
        # det of the hollow 4x4 block is X^2+Y^2+Z^2-2XY-2XZ-2YZ with
        # X = w_ab w_ce, Y = w_ac w_be, Z = w_ae w_bc; X=s^2, Y=t^2, Z=(s+t)^2 kills it
        s = Fraction(int(rng.integers(1, 4)))
        t = Fraction(int(rng.integers(1, 4))) * (1 if rng.random() < 0.5 else -1)
        if s + t == 0:
            continue
        vals[(c, e)] = s * s / vals[(a, b)]
        vals[(b, e)] = t * t / vals[(a, c)]
        vals[(b, c)] = (s + t) ** 2 / vals[(a, e)]
    return Scaling.hypersimplex(d, vals)


def hypersimplex_min(d: int = 4, samples: int = 20, trials: int = 1, seed=0) -> dict:
    """Look for scalings of Hypersimplex2(d) with ML degree below binom(d-1, 2)."""
    rng = np.random.default_rng(seed)
    bound = comb(d - 1, 2)
    seen, rows = [], []
    for _ in range(samples):
        w = _degenerate_hypersimplex(d, rng)
        try:
            got = ml_degree_numeric(w.family, w, trials=trials, seed=seed)
        except InconsistentCount:
            continue
        rows.append({"signature": hypersimplex_signature(w).pattern_string(), "ml_degree": got,
                     "scaling": [str(x) for x in w.values]})
        seen.append(got)
    below = [r for r in rows if r["ml_degree"] < bound]
    return {"experiment": "hypersimplex_min", "d": d, "bound": bound, "checked": len(rows),
            "min_found": min(seen) if seen else None, "violations": below}


def run_experiment(name: str, **params) -> dict:
    fns = {"signature_determines_mldeg": signature_determines_mldeg,
           "weak_order_monotone": weak_order_monotone,
           "hypersimplex_min": hypersimplex_min, "slice_conjecture": slice_conjecture}
    if name not in fns:
        raise ValueError(f"unknown experiment {name!r}; choose from {EXPERIMENTS}")
    return fns[name](**params)
