import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import assume, given, settings, strategies as st

from mldeg.arrangement import (
    Arrangement, CapacityError, add_hyperplane, apply_affine, arrangement_from_scaling,
    bounded_regions, characteristic_beta, regions,
)
from mldeg.exact import QI3
from mldeg.lp import Unbounded, cone_is_trivial, maximize, strict_feasible_point
from mldeg.models import Scaling, ml_degree_combinatorial


def generic_lines(k, seed):
    rng = random.Random(seed)
    while True:
        forms = [(rng.randint(-20, 20), [rng.randint(-20, 20), rng.randint(-20, 20)]) for _ in range(k)]
        arr = Arrangement.from_forms(forms)
        hs = arr.hyperplanes
        if any(a == (0, 0) for _, a in hs):
            continue
        ok = True
        for i in range(k):
            for j in range(i + 1, k):
                (c1, a1), (c2, a2) = hs[i], hs[j]
                if a1[0] * a2[1] - a1[1] * a2[0] == 0:
                    ok = False
                for t in range(j + 1, k):
                    c3, a3 = hs[t]
                    det3 = (c1 * (a2[0] * a3[1] - a2[1] * a3[0]) - a1[0] * (c2 * a3[1] - a2[1] * c3)
                            + a1[1] * (c2 * a3[0] - a2[0] * c3))
                    if det3 == 0:
                        ok = False
        if ok:
            return arr


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6])
def test_generic_lines(k):
    arr = generic_lines(k, k)
    assert len(regions(arr)) == 1 + k + comb(k, 2)
    assert bounded_regions(arr) == comb(k - 1, 2)


def test_points_on_a_line():
    arr = Arrangement.from_forms([(c, [1]) for c in (0, -1, -3, 5)])
    assert len(regions(arr)) == 5
    assert bounded_regions(arr) == 3


def test_parallel_lines_have_no_bounded_region():
    arr = Arrangement.from_forms([(c, [1, 2]) for c in (0, 1, 2)])
    assert len(regions(arr)) == 4
    assert bounded_regions(arr) == 0


def test_duplicate_forms_collapse():
    arr = Arrangement.from_forms([(0, [1, 0]), (0, [2, 0]), (0, [0, 1]), (-1, [1, 1])])
    assert len(arr.deduplicated()) == 3
    assert bounded_regions(arr) == 1


def test_region_points_are_interior():
    arr = generic_lines(5, 11)
    hs = [k for k, _ in arr.deduplicated()]
    sigs = set()
    for signs, q in regions(arr):
        sigs.add(signs)
        for s, (c, a) in zip(signs, hs):
            assert s * (c + sum(x * y for x, y in zip(a, q))) > 0
    assert len(sigs) == len(regions(arr))


small_scaling = st.integers(2, 4).flatmap(
    lambda m: st.integers(2, 5 if m < 4 else 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-4, 4).filter(bool), min_size=n, max_size=n),
                           min_size=m, max_size=m)))


@settings(deadline=None)
@given(small_scaling)
def test_bounded_regions_equal_beta(w):
    arr = arrangement_from_scaling(w)
    assume(len(arr.deduplicated()) <= 12)
    b = bounded_regions(arr)
    assert b == characteristic_beta(arr)
    assert b == ml_degree_combinatorial(Scaling.segre(w))


@settings(deadline=None, max_examples=25)
@given(small_scaling, st.data())
def test_patch_choice_does_not_matter(w, data):
    p = data.draw(st.integers(0, len(w) - 1))
    assert bounded_regions(arrangement_from_scaling(w, p)) == bounded_regions(arrangement_from_scaling(w))


@settings(deadline=None, max_examples=25)
@given(st.integers(0, 100), st.lists(st.integers(-3, 3), min_size=6, max_size=6))
def test_affine_invariance(seed, params):
    arr = generic_lines(4, seed)
    L = [params[0:2], params[2:4]]
    assume(L[0][0] * L[1][1] - L[0][1] * L[1][0] != 0)
    moved = apply_affine(arr, L, params[4:6])
    assert bounded_regions(moved) == bounded_regions(arr)
    assert len(regions(moved)) == len(regions(arr))


def test_add_hyperplane_through_vertex():
    arr = Arrangement.from_forms([(0, [1, 0]), (0, [0, 1]), (-1, [1, 1])])
    assert bounded_regions(arr) == 1
    more = add_hyperplane(arr, 0, [1, -1])  # through the origin vertex
    assert bounded_regions(more) == 2 == characteristic_beta(more)


def test_capacity_limits():
    with pytest.raises(CapacityError):
        regions(Arrangement.from_forms([(c, [1, 0]) for c in range(13)]))
    with pytest.raises(CapacityError):
        regions(Arrangement.from_forms([(1, [1, 0, 0, 0, 0])]))


def test_scaling_validation():
    with pytest.raises(ValueError):
        arrangement_from_scaling([[1, 0], [1, 1]])
    with pytest.raises(ValueError):
        arrangement_from_scaling([[QI3(1, 1), 1], [1, 1]])
    with pytest.raises(ValueError):
        arrangement_from_scaling([[1, 1], [1, 2]], patch_index=2)
    with pytest.raises(ValueError):
        Arrangement.from_forms([(0, [0, 0])])


def test_maximize_against_scipy():
    scipy_opt = pytest.importorskip("scipy.optimize")
    rng = random.Random(3)
    for _ in range(30):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        A = [[rng.randint(-3, 5) for _ in range(n)] for _ in range(m)]
        b = [rng.randint(0, 6) for _ in range(m)]
        c = [rng.randint(-3, 4) for _ in range(n)]
        ref = scipy_opt.linprog([-x for x in c], A_ub=A, b_ub=b, bounds=[(0, None)] * n, method="highs")
        if ref.status == 3:
            with pytest.raises(Unbounded):
                maximize(c, A, b)
            continue
        val, z = maximize(c, A, b)
        assert float(val) == pytest.approx(-ref.fun, abs=1e-9)
        assert all(x >= 0 for x in z)
        assert all(sum(Fraction(a) * x for a, x in zip(row, z)) <= bi for row, bi in zip(A, b))


def test_maximize_requires_feasible_origin():
    with pytest.raises(ValueError):
        maximize([1], [[1]], [-1])


def test_strict_feasibility():
    assert strict_feasible_point([[1], [-1]], [0, 0]) is None
    q = strict_feasible_point([[1, 0], [0, 1], [-1, -1]], [0, 0, 1])
    assert q[0] > 0 and q[1] > 0 and q[0] + q[1] < 1
    assert strict_feasible_point([[1], [-1]], [-1, 1]) is None  # x > 1 and x < 1


def test_cone_is_trivial():
    assert cone_is_trivial([[1, 0], [0, 1], [-1, -1]])
    assert not cone_is_trivial([[1, 0], [0, 1]])
    assert not cone_is_trivial([[1, 0], [-1, 0], [0, 1]])
