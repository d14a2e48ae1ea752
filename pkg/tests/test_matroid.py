import itertools
import random
from math import comb

import pytest
from hypothesis import given, strategies as st

from mldeg.catalog import SEGRE33_EXTRA, SEGRE33_HASSE, SEGRE33_SCALINGS
from mldeg.matroid import (
    LinearMatroid, are_isomorphic, beta_invariant, contract, delete, dual, elements, hasse_diagram,
    is_special, isomorphism_classes, mask, matroid_from_matrix, max_beta_uniform, permute, popcount,
    tutte, uniform_matroid, weak_order_le, weak_order_le_up_to_iso,
)
from mldeg.models import Scaling, extended_matrix


def rank_generating(M, x, y):
    """Whitney rank-generating form of the Tutte polynomial, summed over all subsets."""
    total = 0
    for s in range(1 << M.n):
        r = M.rank_of(s)
        total += (x - 1) ** (M.rank - r) * (y - 1) ** (popcount(s) - r)
    return total


def brute_special(M):
    for b in M.bases:
        ok = True
        for x in elements(b):
            for y in range(M.n):
                if b >> y & 1:
                    continue
                if (b ^ (1 << x) | (1 << y)) not in M.bases:
                    ok = False
        if ok:
            return True
    return False


def segre_matroid(w):
    return matroid_from_matrix(extended_matrix(Scaling.segre(w)))


small_int_matrix = st.integers(2, 3).flatmap(
    lambda m: st.integers(2, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-3, 3).filter(bool), min_size=n, max_size=n),
                           min_size=m, max_size=m)))


@given(small_int_matrix)
def test_tutte_matches_rank_generating_sum(w):
    M = segre_matroid(w)
    T = tutte(M)
    for x, y in [(2, 2), (3, 1), (0, 2), (2, -1), (5, 7)]:
        assert T(x, y) == rank_generating(M, x, y)
    assert T(2, 2) == 2 ** M.n
    assert T(1, 1) == len(M.bases)


@given(small_int_matrix)
def test_crapo_beta_equals_tutte_coefficient(w):
    M = segre_matroid(w)
    assert beta_invariant(M) == tutte(M).beta


@pytest.mark.parametrize("r,n", [(1, 2), (2, 4), (2, 5), (3, 6), (4, 8), (3, 5)])
def test_uniform_beta(r, n):
    M = uniform_matroid(r, n)
    assert beta_invariant(M) == comb(n - 2, r - 1) == max_beta_uniform(r, n)
    assert tutte(M).beta == comb(n - 2, r - 1)


def test_tutte_u24_string():
    assert str(tutte(uniform_matroid(2, 4))) == "x^2 + 2x + y^2 + 2y"


def test_segre33_table_betas():
    assert [beta_invariant(segre_matroid(w)) for w in SEGRE33_SCALINGS] == [1, 2, 3, 4, 5, 6]


@given(small_int_matrix)
def test_dual_has_same_beta(w):
    M = segre_matroid(w)
    D = dual(M)
    assert dual(D) == M
    assert beta_invariant(D) == beta_invariant(M)
    T, TD = tutte(M), tutte(D)
    assert all(TD.coefficient(j, i) == c for (i, j), c in T.coefficients.items())


@given(small_int_matrix, st.data())
def test_deletion_contraction(w, data):
    M = segre_matroid(w)
    e = data.draw(st.integers(0, M.n - 1))
    if e in M.loops() or e in M.coloops():
        return
    lhs = tutte(M)
    rhs_d, rhs_c = tutte(delete(M, e)), tutte(contract(M, e))
    for x, y in [(2, 3), (3, 2), (-1, 4)]:
        assert lhs(x, y) == rhs_d(x, y) + rhs_c(x, y)


@given(small_int_matrix, st.randoms(use_true_random=False))
def test_permutation_invariance(w, rnd):
    M = segre_matroid(w)
    perm = list(range(M.n))
    rnd.shuffle(perm)
    P = permute(M, perm)
    assert are_isomorphic(M, P)
    assert beta_invariant(P) == beta_invariant(M)
    assert is_special(P)[0] == is_special(M)[0]
    assert P.check_exchange()


@given(small_int_matrix)
def test_is_special_matches_brute_force(w):
    M = segre_matroid(w)
    flag, witness = is_special(M)
    assert flag == brute_special(M)
    if flag:
        assert mask(witness) in M.bases


def test_uniform_is_special():
    assert is_special(uniform_matroid(4, 8))[0]


def test_non_special_example():
    # two parallel pairs in rank 2; swapping into the partner of the kept element fails
    M = LinearMatroid(4, 2, frozenset(mask(b) for b in [(0, 2), (0, 3), (1, 2), (1, 3)]))
    assert is_special(M) == (False, None)
    assert not brute_special(M)


def test_matroid_validation():
    with pytest.raises(ValueError):
        LinearMatroid(3, 2, frozenset())
    with pytest.raises(ValueError):
        LinearMatroid(3, 2, frozenset({mask((0, 1, 2))}))
    with pytest.raises(ValueError):
        matroid_from_matrix([[0, 0], [0, 0]])


def test_matrix_matroid_exchange_axiom():
    rng = random.Random(5)
    for _ in range(20):
        w = [[rng.choice([-2, -1, 1, 2]) for _ in range(4)] for _ in range(3)]
        assert segre_matroid(w).check_exchange()


def test_weak_order_basic():
    U = uniform_matroid(2, 4)
    M = segre_matroid([[1, 1], [1, 1]])
    assert weak_order_le(M, U)
    assert not weak_order_le(U, M)
    with pytest.raises(ValueError):
        weak_order_le(U, uniform_matroid(2, 5))


def test_weak_order_up_to_iso_uses_relabelling():
    U = uniform_matroid(2, 4)
    # 0 and 1 parallel, versus 2 and 3 parallel
    A = LinearMatroid(4, 2, frozenset(b for b in U.bases if b != mask((0, 1))))
    B = LinearMatroid(4, 2, frozenset(b for b in U.bases if b != mask((2, 3))))
    assert not weak_order_le(A, B)
    assert weak_order_le_up_to_iso(A, B)
    assert are_isomorphic(A, B)


def test_figure_poset():
    Ms = [segre_matroid(w) for w in SEGRE33_SCALINGS]
    Ms.append(dual(Ms[2]))
    Ms.append(segre_matroid(SEGRE33_EXTRA))
    assert isomorphism_classes(Ms) == list(range(8))
    assert sorted(beta_invariant(M) for M in Ms) == [1, 2, 3, 3, 3, 4, 5, 6]
    assert sorted(hasse_diagram(Ms)) == sorted(SEGRE33_HASSE)


def test_isomorphism_rejects_different():
    assert not are_isomorphic(uniform_matroid(2, 4), segre_matroid([[1, 1], [1, 1]]))
    assert not are_isomorphic(uniform_matroid(2, 4), uniform_matroid(2, 5))


def test_delete_contract_shapes():
    M = uniform_matroid(2, 4)
    assert delete(M, 0) == uniform_matroid(2, 3)
    assert contract(M, 0) == uniform_matroid(1, 3)
    # coloop deletion drops the rank
    C = LinearMatroid(3, 2, frozenset({mask((0, 2)), mask((1, 2))}))
    assert C.coloops() == [2]
    assert delete(C, 2).rank == 1


def test_loops_detected():
    M = matroid_from_matrix([[1, 0, 0], [0, 1, 0]])
    assert M.loops() == [2]
    assert tutte(M).coefficients == {(2, 1): 1}
    assert beta_invariant(M) == 0
