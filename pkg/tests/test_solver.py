import random

import numpy as np
import pytest

from mldeg.arrangement import CapacityError
from mldeg.catalog import HYPERSIMPLEX5_SCALINGS
from mldeg.exact import RatMatrix, det, rank
from mldeg import solver
from mldeg.models import Scaling, build_family, degree, ml_degree_combinatorial
from mldeg.solver import (
    InconsistentCount, LikelihoodSystem, Tolerances, build_system, ml_degree_numeric, solve,
)


def probabilities(S, phi):
    C = np.asarray(S.C, dtype=float)
    return np.asarray(S.weights) * np.exp(np.log(np.asarray(phi, dtype=complex)) @ C)


@pytest.mark.parametrize("kind,params,r", [("segre", (2, 2), 3), ("hypersimplex", (4,), 4),
                                           ("triple", (3,), 5), ("segre", (3, 4), 6)])
def test_lattice_rank(kind, params, r):
    F = build_family(kind, *params)
    S = build_system(F, Scaling(F, [1] * F.num_columns), seed=0)
    assert S.num_unknowns == r == rank(F.A)


@pytest.mark.parametrize("kind,params", [("segre", (3, 3)), ("hypersimplex", (5,)), ("triple", (3,))])
def test_exponents_generate_the_lattice(kind, params):
    F = build_family(kind, *params)
    S = build_system(F, Scaling(F, [1] * F.num_columns), seed=1)
    C = RatMatrix.from_rows(S.C)
    r = len(S.C)
    # some r x r minor is +-1, so the columns generate Z^r
    rng = random.Random(0)
    cols = list(range(C.cols))
    found = any(abs(det(C.columns(sorted(rng.sample(cols, r))))) == 1 for _ in range(2000))
    assert found
    # each column of A is an integer combination of the columns of C: same row space
    stacked = RatMatrix.from_rows(S.C + F.A.tolist())
    assert rank(stacked) == r


def test_system_json_roundtrip():
    F = build_family("segre", 2, 3)
    S = build_system(F, Scaling.segre([[1, 2, 3], [4, 5, 7]]), u=[3, 1, 4, 1, 5, 9])
    T = LikelihoodSystem.from_json(S.to_json())
    assert T.C == S.C and T.rows == S.rows and T.data_u == S.data_u
    assert T.degrees == S.degrees
    a, b = solve(S, seed=4), solve(T, seed=4)
    assert a.ml_degree == b.ml_degree == 3


def test_build_system_validation():
    F = build_family("segre", 2, 2)
    w = Scaling.segre([[1, 1], [1, 1]])
    with pytest.raises(ValueError):
        build_system(F, w, u=[1, 2, 3])
    with pytest.raises(ValueError):
        build_system(F, w, u=[1, 0, 3, 4])
    with pytest.raises(ValueError):
        build_system(F, w, u="uniform")
    with pytest.raises(ValueError):
        build_system(build_family("segre", 2, 3), w)


def test_independence_model_closed_form():
    # all-ones scaling: the unique critical point is the product of the marginals
    F = build_family("segre", 3, 4)
    u = [5, 2, 9, 4, 7, 1, 3, 8, 6, 2, 2, 10]
    S = build_system(F, Scaling(F, [1] * 12), u=u)
    rep = solve(S, seed=2)
    assert rep.ml_degree == 1
    U = np.array(u, dtype=float).reshape(3, 4)
    expected = np.outer(U.sum(1), U.sum(0)) / U.sum() ** 2
    got = probabilities(S, rep.solutions[0]).reshape(3, 4)
    assert np.allclose(got, expected, rtol=1e-9)


def test_birch_moments_at_solutions():
    F = build_family("hypersimplex", 5)
    w = Scaling.hypersimplex(5, {"34": 4, "35": 4})
    S = build_system(F, w, seed=3)
    rep = solve(S, seed=3)
    assert rep.ml_degree == 9
    for phi in rep.solutions:
        assert S.moment_residual(np.asarray(phi), F.A) < 1e-9
    assert rep.residual_max < Tolerances().residual


def test_solutions_distinct():
    F = build_family("segre", 3, 3)
    S = build_system(F, Scaling.segre([[1, 2, 3], [2, 3, 1], [1, 1, 1]]), seed=5)
    rep = solve(S, seed=5)
    sols = np.asarray(rep.solutions)
    assert len(sols) == 6
    for i in range(6):
        for j in range(i):
            assert np.linalg.norm(sols[i] - sols[j]) > 1e-6


def test_seed_independence():
    F = build_family("segre", 3, 4)
    w = Scaling.segre([[1, 2, 3, 1], [2, 1, 5, 1], [1, 1, 1, 1]])
    S = build_system(F, w, seed=9)
    counts = {solve(S, seed=s).ml_degree for s in range(3)}
    assert counts == {ml_degree_combinatorial(w)}


def test_predictors_agree():
    F = build_family("hypersimplex", 4)
    S = build_system(F, Scaling(F, [2, 3, 5, 7, 11, 13]), seed=0)
    e = solve(S, seed=0, predictor="euler")
    k = solve(S, seed=0, predictor="rk4")
    assert e.ml_degree == k.ml_degree == 4
    with pytest.raises(ValueError):
        solve(S, predictor="heun")


def test_report_fields():
    F = build_family("segre", 2, 3)
    S = build_system(F, Scaling.segre([[1, 1, 1], [1, 2, 3]]), seed=0)
    rep = solve(S, seed=0)
    assert rep.paths_tracked == rep.bezout_number == S.bezout_number == len(rep.path_status)
    assert rep.path_status.count("solution") == rep.ml_degree == 3
    assert not rep.flagged
    assert '"ml_degree": 3' in rep.to_json()


@pytest.mark.parametrize("w,expected", [
    ([[1, 1, 1], [1, 2, 3]], 3),
    ([[1, 1, 1], [1, 2, 2]], 2),
    ([[1, 1], [1, 1]], 1),
    ([[1, 2], [3, 5]], 2),
    ([[1, 2, 1], [2, 3, 1], [1, 1, 1]], 5),
])
def test_numeric_segre(w, expected):
    s = Scaling.segre(w)
    assert ml_degree_numeric(s.family, s, trials=2, seed=11) == expected == ml_degree_combinatorial(s)


def test_random_segre_matches_beta():
    rng = random.Random(12)
    for _ in range(6):
        m, n = rng.choice([(2, 4), (3, 3), (3, 4)])
        w = [[rng.choice([1, 2, 3, -1, -2]) for _ in range(n)] for _ in range(m)]
        s = Scaling.segre(w)
        assert ml_degree_numeric(s.family, s, trials=1, seed=rng.randrange(1000)) == ml_degree_combinatorial(s)


@pytest.mark.parametrize("kind,params", [("segre", (2, 4)), ("segre", (3, 3)), ("hypersimplex", (4,)),
                                         ("hypersimplex", (5,))])
def test_generic_count_equals_degree(kind, params):
    F = build_family(kind, *params)
    rng = np.random.default_rng(7)
    w = Scaling(F, rng.integers(2, 40, size=F.num_columns).tolist())
    assert ml_degree_numeric(F, w, trials=2, seed=7) == degree(F)


def test_complex_scaling():
    e, _, mld = HYPERSIMPLEX5_SCALINGS[5]
    w = Scaling.hypersimplex(5, e)
    assert ml_degree_numeric(w.family, w, trials=1, seed=0) == mld


def test_capacity(monkeypatch):
    F = build_family("segre", 3, 3)
    S = build_system(F, Scaling(F, [1] * 9), seed=0)
    monkeypatch.setattr(solver, "MAX_PATHS", S.bezout_number - 1)
    with pytest.raises(CapacityError):
        solve(S)


def test_inconsistent_count_message():
    class R:
        def __init__(self, k):
            self.ml_degree = k
    err = InconsistentCount([R(3), R(4)])
    assert "[3, 4]" in str(err)
    with pytest.raises(ValueError):
        F = build_family("segre", 2, 2)
        ml_degree_numeric(F, Scaling(F, [1] * 4), trials=0)
