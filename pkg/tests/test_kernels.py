import itertools
import os
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from mldeg import _kernels_py, kernels
from mldeg.matroid import matroid_from_matrix

compiled = kernels.compiled_backend
needs_ext = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


def random_bases(draw_rows):
    M = matroid_from_matrix(draw_rows)
    return M.sorted_bases(), M.n, M.rank


matrices = st.integers(2, 3).flatmap(
    lambda r: st.integers(r, 7).flatmap(
        lambda n: st.lists(st.lists(st.integers(-2, 2), min_size=n, max_size=n), min_size=r, max_size=r)))


def _brute_rank(bases, n, subset):
    return max(bin(b & subset).count("1") for b in bases)


@given(matrices)
def test_rank_table_matches_brute_force(rows):
    try:
        bases, n, r = random_bases(rows)
    except ValueError:
        return
    rk = _kernels_py.rank_table(bases, n)
    for s in range(1 << n):
        assert rk[s] == _brute_rank(bases, n, s)


@needs_ext
@given(matrices)
def test_compiled_and_python_kernels_agree(rows):
    try:
        bases, n, r = random_bases(rows)
    except ValueError:
        return
    assert list(compiled.rank_table(bases, n)) == list(_kernels_py.rank_table(bases, n))
    assert compiled.beta_crapo(bases, n, r) == _kernels_py.beta_crapo(bases, n, r)
    assert compiled.special_basis(bases, n, r) == _kernels_py.special_basis(bases, n, r)


@needs_ext
def test_beta_many_agrees():
    sets = [[3, 5, 6, 9, 10, 12], [3, 5, 6], [3, 5], [5, 6, 9, 10, 12]]
    got = list(compiled.beta_many(sets, 4, 2))
    assert got == list(_kernels_py.beta_many(sets, 4, 2))
    assert got[0] == 2


def test_uniform_beta_closed_form():
    from math import comb
    for r, n in [(1, 3), (2, 4), (2, 6), (3, 6), (4, 8)]:
        bases = sorted(sum(1 << e for e in c) for c in itertools.combinations(range(n), r))
        assert kernels.beta_crapo(bases, n, r) == comb(n - 2, r - 1)


def test_special_basis_examples():
    assert kernels.special_basis([3, 5], 3, 2) == -1          # parallel pair + coloop
    assert kernels.special_basis([3, 5, 6], 3, 2) == 3        # U(2,3)


def test_ground_set_limit():
    with pytest.raises((ValueError, OverflowError)):
        kernels.rank_table([1], 17)


def test_pure_python_selected_by_environment():
    env = dict(os.environ, MLDEG_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import mldeg.kernels as k; print(k.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
