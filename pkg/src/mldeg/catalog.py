"""Reference scalings and tallies used by the CLI, the tests and the acceptance run."""
from __future__ import annotations

from fractions import Fraction

from .exact import QI3

# Segre(3,3): scalings with ML degree 1..6, in that order
SEGRE33_SCALINGS = [
    [[1, 1, 1], [1, 1, 1], [1, 1, 1]],
    [[1, 2, 1], [1, 1, 1], [1, 1, 1]],
    [[1, 2, 3], [1, 1, 1], [1, 1, 1]],
    [[1, 2, 3], [1, 2, 1], [1, 1, 1]],
    [[1, 2, 3], [2, 1, 1], [1, 1, 1]],
    [[1, 2, 3], [2, 3, 1], [1, 1, 1]],
]

# the remaining matroid of the Segre(3,3) weak-order poset (ML degree 3)
SEGRE33_EXTRA = [[1, 1, 1], [1, 2, 2], [1, 2, 1]]

# edges of the weak-order Hasse diagram on the 8 classes, indexed as
# SEGRE33_SCALINGS[0..5], dual of index 2, SEGRE33_EXTRA
SEGRE33_HASSE = [(0, 1), (0, 7), (1, 2), (1, 3), (1, 6), (2, 4), (3, 4), (4, 5), (6, 4), (7, 3)]


def closed_form_segre2(n: int, k: int) -> list[list[int]]:
    """2 x n scaling with exactly k distinct column ratios."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    return [[1] * n, list(range(1, k + 1)) + [1] * (n - k)]


# SegreTriple(3): flat weights (blocks of four per k) with ML degree 1..12
TRIPLE3_SCALINGS = [
    "1111 1111 1111", "1111 1111 1122", "1111 1111 1112", "1111 1111 1123",
    "1111 1111 1221", "1111 1112 1211", "1111 1112 1234", "1111 1112 1223",
    "1111 1112 1225", "1112 1213 1325", "1112 1325 2369", "1112 1325 1637",
]


def triple3_flat(i: int) -> list[int]:
    return [int(c) for c in TRIPLE3_SCALINGS[i] if c != " "]


_F = Fraction
# Hypersimplex2(5): upper-triangular weights (missing pairs are 1), with the
# expected (det W, W_11, ..., W_55) pattern and ML degree
HYPERSIMPLEX5_SCALINGS = [
    ({}, "(*,*,*,*,*,*)", 11),
    ({"12": _F(7, 8), "34": _F(32, 7)}, "(*,*,*,*,*,0)", 10),
    ({"34": 4, "35": 4}, "(*,*,*,*,0,0)", 9),
    ({"34": 4, "35": 4, "45": 4}, "(*,*,*,0,0,0)", 8),
    ({"13": _F(1, 4), "34": _F(1, 4), "35": _F(1, 4), "45": 4}, "(*,*,0,0,0,0)", 7),
    ({"12": -3, "13": _F(7, 2), "14": QI3(_F(21, 4), 0, 0, _F(-21, 4)),
      "15": QI3(_F(3, 4), 0, 0, _F(3, 4)), "23": -2, "24": QI3(-3, 0, 0, -3),
      "25": QI3(_F(-3, 7), 0, 0, _F(3, 7)), "34": -7, "35": -1, "45": 3}, "(*,0,0,0,0,0)", 6),
    ({"12": -4, "13": 1, "14": 4, "15": QI3(_F(-19, 4), -2), "23": -1, "24": -4,
      "25": QI3(_F(19, 4), -2), "34": 4, "35": -4, "45": -3}, "(0,0,0,0,0,0)", 6),
]

# Hypersimplex2(d): degree, minimal ML degree, drop, number of 4- and 6-minors
HYPERSIMPLEX_DROPS = {
    4: (4, 3, 1, 1, 0),
    5: (11, 6, 5, 5, 0),
    6: (26, 10, 16, 15, 1),
    7: (57, 15, 42, 35, 7),
    8: (120, 21, 99, 70, 28),
}

# beta invariant -> number of special matroids of rank 4 on 8 and 9 elements
SPECIAL_TALLY_8_4 = dict(zip(range(1, 21), [
    1, 6, 10, 16, 17, 26, 27, 33, 29, 47, 59, 74, 84, 67, 40, 20, 7, 3, 1, 1]))
SPECIAL_TOTAL_8_4 = (568, 940)
SPECIAL_TALLY_9_4 = dict(zip(range(1, 36), [
    1, 9, 20, 34, 48, 75, 93, 133, 168, 265, 361, 486, 636, 760, 845, 1180, 1827, 2881,
    4767, 7807, 11600, 17153, 25328, 33480, 33963, 24293, 11856, 3961, 967, 199, 42, 10, 3, 1, 1]))
SPECIAL_TOTAL_9_4 = (185253, 190214)
