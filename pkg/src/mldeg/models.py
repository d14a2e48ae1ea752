"""Model families, scalings and principal A-determinant factor signatures.

Three families are supported:

* ``segre``: P^{m-1} x P^{n-1}, columns ``(i, j)`` in i-major order.
* ``triple``: P^1 x P^1 x P^{n-1}, columns ``(i, j, k)`` ordered by k, then i,
  then j (flat index ``4k + 2i + j`` when 0-based).  This is the order in
  which the exponent matrix and both hyperdeterminant formulas are printed.
* ``hypersimplex``: second hypersimplex of the uniform matroid U(2, d),
  columns ``{i, j}`` with i < j in lexicographic order.

Labels are 1-based throughout.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .exact import QI3, RatMatrix, as_matrix, det, parse_scalar, scalar_to_json
from .matroid import beta_invariant, matroid_from_matrix

KINDS = ("segre", "triple", "hypersimplex")


@dataclass(frozen=True)
class ModelFamily:
    kind: str
    params: tuple
    A: RatMatrix = field(repr=False, compare=False)
    labels: tuple = field(repr=False, compare=False)

    @property
    def num_columns(self) -> int:
        return self.A.cols

    def index(self, label) -> int:
        return self.labels.index(tuple(label))

    def describe(self) -> str:
        return f"{self.kind}{self.params}"


def _segre_family(m: int, n: int) -> ModelFamily:
    if m < 2 or n < 2:
        raise ValueError("Segre(m, n) needs m, n >= 2")
    labels = tuple((i, j) for i in range(1, m + 1) for j in range(1, n + 1))
    rows = [[int(lab[0] == i) for lab in labels] for i in range(1, m + 1)]
    rows += [[int(lab[1] == j) for lab in labels] for j in range(1, n + 1)]
    return ModelFamily("segre", (m, n), RatMatrix.from_rows(rows), labels)


def _triple_family(n: int) -> ModelFamily:
    if n < 1:
        raise ValueError("SegreTriple(n) needs n >= 1")
    labels = tuple((i, j, k) for k in range(1, n + 1) for i in (1, 2) for j in (1, 2))
    rows = [[int(lab[2] == k) for lab in labels] for k in range(1, n)]
    rows.append([int(lab[0] == 1) for lab in labels])
    rows += [[int(lab[1] == j) for lab in labels] for j in (1, 2)]
    return ModelFamily("triple", (n,), RatMatrix.from_rows(rows), labels)


def _hypersimplex_family(d: int) -> ModelFamily:
    if d < 4:
        raise ValueError("Hypersimplex2(d) needs d >= 4")
    labels = tuple(itertools.combinations(range(1, d + 1), 2))
    rows = [[int(t in lab) for lab in labels] for t in range(1, d + 1)]
    return ModelFamily("hypersimplex", (d,), RatMatrix.from_rows(rows), labels)


def build_family(kind: str, *params: int) -> ModelFamily:
    """``build_family("segre", 3, 3)``, ``("triple", 3)``, ``("hypersimplex", 5)``."""
    builders = {"segre": (_segre_family, 2), "triple": (_triple_family, 1),
                "hypersimplex": (_hypersimplex_family, 1)}
    if kind not in builders:
        raise ValueError(f"unknown family {kind!r}; expected one of {KINDS}")
    fn, nargs = builders[kind]
    if len(params) != nargs:
        raise ValueError(f"{kind} takes {nargs} parameter(s), got {len(params)}")
    return fn(*(int(p) for p in params))


def degree(F: ModelFamily) -> int:
    if F.kind == "segre":
        m, n = F.params
        return comb(n + m - 2, m - 1)
    if F.kind == "triple":
        (n,) = F.params
        return n * n + n
    (d,) = F.params
    return 2 ** (d - 1) - d


# ---------------------------------------------------------------------------
# scalings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Scaling:
    family: ModelFamily
    values: tuple

    def __post_init__(self):
        vals = tuple(parse_scalar(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != self.family.num_columns:
            raise ValueError(f"{self.family.describe()} needs {self.family.num_columns} "
                             f"weights, got {len(vals)}")
        if any(v == 0 for v in vals):
            raise ValueError("scaling entries must be nonzero")

    def __getitem__(self, label):
        return self.values[self.family.index(label)]

    @property
    def is_real(self) -> bool:
        return not any(isinstance(v, QI3) for v in self.values)

    def as_complex(self) -> list[complex]:
        return [complex(v) if isinstance(v, QI3) else complex(float(v)) for v in self.values]

    # constructors ---------------------------------------------------------

    @classmethod
    def segre(cls, w) -> "Scaling":
        M = as_matrix(w)
        F = build_family("segre", M.rows, M.cols)
        return cls(F, M.entries)

    @classmethod
    def triple(cls, tensor) -> "Scaling":
        """From nested lists indexed ``[i][j][k]`` (shape 2 x 2 x n)."""
        if len(tensor) != 2 or any(len(t) != 2 for t in tensor):
            raise ValueError("SegreTriple tensor must have shape 2 x 2 x n")
        n = len(tensor[0][0])
        if any(len(t[j]) != n for t in tensor for j in (0, 1)):
            raise ValueError("ragged SegreTriple tensor")
        F = build_family("triple", n)
        return cls(F, [tensor[i - 1][j - 1][k - 1] for i, j, k in F.labels])

    @classmethod
    def triple_flat(cls, values: Sequence) -> "Scaling":
        """From the flat list in column order (blocks of four per k)."""
        if len(values) % 4:
            raise ValueError("flat SegreTriple scaling length must be a multiple of 4")
        return cls(build_family("triple", len(values) // 4), values)

    @classmethod
    def hypersimplex(cls, d: int, entries) -> "Scaling":
        """From a mapping ``{(i, j): w_ij}`` or ``{"ij": w_ij}``; missing pairs default to 1."""
        F = build_family("hypersimplex", d)
        table = {}
        for key, v in dict(entries).items():
            if isinstance(key, str):
                key = key.replace(",", " ").split() if ("," in key or " " in key) else list(key)
            i, j = sorted(int(t) for t in key)
            if not 1 <= i < j <= d:
                raise ValueError(f"bad hypersimplex index {key!r}")
            table[(i, j)] = v
        return cls(F, [table.get(lab, 1) for lab in F.labels])

    # views ----------------------------------------------------------------

    def matrix(self) -> RatMatrix:
        if self.family.kind != "segre":
            raise ValueError("matrix view is for Segre scalings")
        m, n = self.family.params
        return RatMatrix(m, n, self.values)

    def tensor(self) -> list:
        if self.family.kind != "triple":
            raise ValueError("tensor view is for SegreTriple scalings")
        (n,) = self.family.params
        return [[[self[(i, j, k)] for k in range(1, n + 1)] for j in (1, 2)] for i in (1, 2)]

    def hollow_matrix(self) -> RatMatrix:
        if self.family.kind != "hypersimplex":
            raise ValueError("hollow matrix view is for hypersimplex scalings")
        (d,) = self.family.params
        W = [[Fraction(0)] * d for _ in range(d)]
        for (i, j), v in zip(self.family.labels, self.values):
            W[i - 1][j - 1] = W[j - 1][i - 1] = v
        return RatMatrix.from_rows(W)

    def to_json(self):
        return {"family": self.family.kind, "params": list(self.family.params),
                "values": [scalar_to_json(v) for v in self.values]}

    @classmethod
    def from_json(cls, obj) -> "Scaling":
        return cls(build_family(obj["family"], *obj["params"]), obj["values"])


# ---------------------------------------------------------------------------
# signatures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Factor:
    face_label: tuple
    polynomial_id: str
    value: object
    vanished: bool


@dataclass(frozen=True)
class FactorSignature:
    factors: tuple

    def pattern(self) -> tuple:
        """``'*'`` for a nonzero factor, ``'0'`` for a vanished one."""
        return tuple("0" if f.vanished else "*" for f in self.factors)

    def pattern_string(self) -> str:
        return "(" + ",".join(self.pattern()) + ")"

    def vanished(self) -> list[Factor]:
        return [f for f in self.factors if f.vanished]

    @property
    def num_vanished(self) -> int:
        return sum(f.vanished for f in self.factors)

    def __len__(self):
        return len(self.factors)


def _factor(label, pid, value) -> Factor:
    if isinstance(value, QI3):
        value = value.simplify()
    return Factor(tuple(label), pid, value, value == 0)


def _require(w: Scaling, kind: str):
    if w.family.kind != kind:
        raise ValueError(f"expected a {kind} scaling, got {w.family.kind}")


def segre_signature(w: Scaling) -> FactorSignature:
    """Every minor of the scaling matrix, by size, then rows, then columns."""
    _require(w, "segre")
    M = w.matrix()
    out = []
    for size in range(1, min(M.shape) + 1):
        for rs in itertools.combinations(range(M.rows), size):
            for cs in itertools.combinations(range(M.cols), size):
                val = det(M.submatrix(rs, cs))
                out.append(_factor((tuple(r + 1 for r in rs), tuple(c + 1 for c in cs)),
                                   f"minor{size}", val))
    return FactorSignature(tuple(out))


_HYPERDET_222_TERMS = (
    (1, (3, 3, 4, 4)),
    (1, (2, 2, 5, 5)),
    (1, (1, 1, 6, 6)),
    (1, (0, 0, 7, 7)),
    (-2, (2, 3, 4, 5)),
    (-2, (1, 3, 4, 6)),
    (-2, (1, 2, 5, 6)),
    (-2, (0, 3, 4, 7)),
    (-2, (0, 2, 5, 7)),
    (-2, (0, 1, 6, 7)),
    (4, (0, 3, 5, 6)),
    (4, (1, 2, 4, 7)),
)

_HYPERDET_223_TERMS = (
    (1, (3, 3, 5, 6, 8, 8)),
    (-1, (2, 3, 5, 7, 8, 8)),
    (-1, (1, 3, 6, 7, 8, 8)),
    (1, (1, 2, 7, 7, 8, 8)),
    (-1, (3, 3, 4, 6, 8, 9)),
    (-1, (2, 3, 5, 6, 8, 9)),
    (1, (1, 3, 6, 6, 8, 9)),
    (1, (2, 3, 4, 7, 8, 9)),
    (1, (2, 2, 5, 7, 8, 9)),
    (-1, (1, 2, 6, 7, 8, 9)),
    (1, (0, 3, 6, 7, 8, 9)),
    (-1, (0, 2, 7, 7, 8, 9)),
    (1, (2, 3, 4, 6, 9, 9)),
    (-1, (0, 3, 6, 6, 9, 9)),
    (-1, (2, 2, 4, 7, 9, 9)),
    (1, (0, 2, 6, 7, 9, 9)),
    (-1, (3, 3, 4, 5, 8, 10)),
    (1, (2, 3, 5, 5, 8, 10)),
    (-1, (1, 3, 5, 6, 8, 10)),
    (1, (1, 3, 4, 7, 8, 10)),
    (-1, (1, 2, 5, 7, 8, 10)),
    (1, (0, 3, 5, 7, 8, 10)),
    (1, (1, 1, 6, 7, 8, 10)),
    (-1, (0, 1, 7, 7, 8, 10)),
    (1, (3, 3, 4, 4, 9, 10)),
    (-1, (2, 3, 4, 5, 9, 10)),
    (-1, (1, 3, 4, 6, 9, 10)),
    (2, (0, 3, 5, 6, 9, 10)),
    (2, (1, 2, 4, 7, 9, 10)),
    (-2, (0, 3, 4, 7, 9, 10)),
    (-1, (0, 2, 5, 7, 9, 10)),
    (-1, (0, 1, 6, 7, 9, 10)),
    (1, (0, 0, 7, 7, 9, 10)),
    (1, (1, 3, 4, 5, 10, 10)),
    (-1, (0, 3, 5, 5, 10, 10)),
    (-1, (1, 1, 4, 7, 10, 10)),
    (1, (0, 1, 5, 7, 10, 10)),
    (1, (2, 3, 4, 5, 8, 11)),
    (-1, (2, 2, 5, 5, 8, 11)),
    (1, (1, 3, 4, 6, 8, 11)),
    (2, (1, 2, 5, 6, 8, 11)),
    (-2, (0, 3, 5, 6, 8, 11)),
    (-1, (1, 1, 6, 6, 8, 11)),
    (-2, (1, 2, 4, 7, 8, 11)),
    (1, (0, 2, 5, 7, 8, 11)),
    (1, (0, 1, 6, 7, 8, 11)),
    (-1, (2, 3, 4, 4, 9, 11)),
    (1, (2, 2, 4, 5, 9, 11)),
    (-1, (1, 2, 4, 6, 9, 11)),
    (1, (0, 3, 4, 6, 9, 11)),
    (-1, (0, 2, 5, 6, 9, 11)),
    (1, (0, 1, 6, 6, 9, 11)),
    (1, (0, 2, 4, 7, 9, 11)),
    (-1, (0, 0, 6, 7, 9, 11)),
    (-1, (1, 3, 4, 4, 10, 11)),
    (-1, (1, 2, 4, 5, 10, 11)),
    (1, (0, 3, 4, 5, 10, 11)),
    (1, (0, 2, 5, 5, 10, 11)),
    (1, (1, 1, 4, 6, 10, 11)),
    (-1, (0, 1, 5, 6, 10, 11)),
    (1, (0, 1, 4, 7, 10, 11)),
    (-1, (0, 0, 5, 7, 10, 11)),
    (1, (1, 2, 4, 4, 11, 11)),
    (-1, (0, 2, 4, 5, 11, 11)),
    (-1, (0, 1, 4, 6, 11, 11)),
    (1, (0, 0, 5, 6, 11, 11)),
)


def _poly_eval(terms, t):
    total = 0
    for coef, idx in terms:
        p = coef
        for v in idx:
            p = p * t[v]
        total = total + p
    return total.simplify() if isinstance(total, QI3) else Fraction(total)


def hyperdet_222(t: Sequence) -> object:
    """Cayley's 2x2x2 hyperdeterminant of 8 weights in column order."""
    if len(t) != 8:
        raise ValueError("hyperdet_222 takes 8 values")
    return _poly_eval(_HYPERDET_222_TERMS, [parse_scalar(x) for x in t])


def hyperdet_223(t: Sequence) -> object:
    """The 2x2x3 hyperdeterminant of 12 weights in column order."""
    if len(t) != 12:
        raise ValueError("hyperdet_223 takes 12 values")
    return _poly_eval(_HYPERDET_223_TERMS, [parse_scalar(x) for x in t])


def _sub_tensor(w: Scaling, ks) -> list:
    return [w[(i, j, k)] for k in ks for i in (1, 2) for j in (1, 2)]


def _slice_minors(w: Scaling):
    """``(label, value)`` for every 2-minor of every axis-parallel slice.

    Labels are ``("i", i, (k, k'))``, ``("j", j, (k, k'))`` and ``("k", k)``.
    """
    (n,) = w.family.params
    out = []
    for i in (1, 2):
        for k1, k2 in itertools.combinations(range(1, n + 1), 2):
            v = w[(i, 1, k1)] * w[(i, 2, k2)] - w[(i, 1, k2)] * w[(i, 2, k1)]
            out.append((("i", i, (k1, k2)), v))
    for j in (1, 2):
        for k1, k2 in itertools.combinations(range(1, n + 1), 2):
            v = w[(1, j, k1)] * w[(2, j, k2)] - w[(1, j, k2)] * w[(2, j, k1)]
            out.append((("j", j, (k1, k2)), v))
    for k in range(1, n + 1):
        v = w[(1, 1, k)] * w[(2, 2, k)] - w[(1, 2, k)] * w[(2, 1, k)]
        out.append((("k", k), v))
    return out


def triple_signature(w: Scaling) -> FactorSignature:
    """Slice 2-minors, then D_K for |K| = 2, then D_K for |K| = 3."""
    _require(w, "triple")
    (n,) = w.family.params
    out = [_factor(lab, "minor2", v) for lab, v in _slice_minors(w)]
    for K in itertools.combinations(range(1, n + 1), 2):
        out.append(_factor(("D", K), "hyperdet222", hyperdet_222(_sub_tensor(w, K))))
    for K in itertools.combinations(range(1, n + 1), 3):
        out.append(_factor(("D", K), "hyperdet223", hyperdet_223(_sub_tensor(w, K))))
    return FactorSignature(tuple(out))


def _minor_support(label) -> frozenset:
    """The four tensor positions a slice 2-minor involves."""
    if label[0] == "i":
        _, i, (k1, k2) = label
        return frozenset((i, j, k) for j in (1, 2) for k in (k1, k2))
    if label[0] == "j":
        _, j, (k1, k2) = label
        return frozenset((i, j, k) for i in (1, 2) for k in (k1, k2))
    _, k = label
    return frozenset((i, j, k) for i in (1, 2) for j in (1, 2))


@dataclass(frozen=True)
class SquareCup:
    K: tuple
    minors: tuple  # three slice-minor labels


def detect_square_cups(w: Scaling) -> list[SquareCup]:
    """Triples of distinct vanished 2-minors inside one 2x2x2 sub-tensor,
    two of which share no variable."""
    _require(w, "triple")
    (n,) = w.family.params
    minors = dict(_slice_minors(w))
    cups = []
    for K in itertools.combinations(range(1, n + 1), 2):
        pos = frozenset((i, j, k) for i in (1, 2) for j in (1, 2) for k in K)
        inside = [lab for lab in minors if _minor_support(lab) <= pos and minors[lab] == 0]
        for trio in itertools.combinations(inside, 3):
            sup = [_minor_support(lab) for lab in trio]
            if any(not (a & b) for a, b in itertools.combinations(sup, 2)):
                cups.append(SquareCup(K, trio))
    return cups


@dataclass
class ImplicationReport:
    checked: int = 0  # number of antecedents that fired
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_hyperdet_implications(w: Scaling) -> ImplicationReport:
    """Check the vanishing implications among slice minors and hyperdeterminants.

    * a square cup in the K sub-tensor forces D_K = 0 (|K| = 2);
    * D_{K'} = 0 for a 2-subset K' of K forces D_K = 0 (|K| = 3);
    * two vanished 2-minors in one 1x2x3 slice of the K sub-tensor force D_K = 0.

    Any violation signals a bug in the evaluation code.
    """
    _require(w, "triple")
    (n,) = w.family.params
    rep = ImplicationReport()
    minors = dict(_slice_minors(w))
    d2 = {K: hyperdet_222(_sub_tensor(w, K)) for K in itertools.combinations(range(1, n + 1), 2)}
    for cup in detect_square_cups(w):
        rep.checked += 1
        if d2[cup.K] != 0:
            rep.violations.append(("square_cup", cup.K, cup.minors))
    for K in itertools.combinations(range(1, n + 1), 3):
        dk = hyperdet_223(_sub_tensor(w, K))
        for sub in itertools.combinations(K, 2):
            if d2[sub] == 0:
                rep.checked += 1
                if dk != 0:
                    rep.violations.append(("sub_hyperdet", K, sub))
        for axis in ("i", "j"):
            for fixed in (1, 2):
                zeros = [p for p in itertools.combinations(K, 2) if minors[(axis, fixed, p)] == 0]
                if len(zeros) >= 2:
                    rep.checked += 1
                    if dk != 0:
                        rep.violations.append(("slice_pair", K, (axis, fixed, tuple(zeros))))
    return rep


def is_slice_constant(w: Scaling) -> bool:
    """True if, along some axis, every slice perpendicular to it is constant."""
    _require(w, "triple")
    (n,) = w.family.params
    for axis, size in ((0, 2), (1, 2), (2, n)):
        ok = True
        for t in range(1, size + 1):
            vals = {v for lab, v in zip(w.family.labels, w.values) if lab[axis] == t}
            if len(vals) > 1:
                ok = False
                break
        if ok:
            return True
    return False


def hypersimplex_subsets(d: int) -> list[tuple]:
    """Subsets E of [d] with |E| >= 4: largest first, then by complement."""
    out = []
    full = range(1, d + 1)
    for size in range(d, 3, -1):
        for drop in itertools.combinations(full, d - size):
            out.append(tuple(x for x in full if x not in drop))
    return out


def hypersimplex_signature(w: Scaling) -> FactorSignature:
    """det of every principal submatrix W_E of the hollow matrix, |E| >= 4.

    For d = 5 the order is (det W, W_11, ..., W_55) with W_ii the 4-minor
    that deletes index i.
    """
    _require(w, "hypersimplex")
    (d,) = w.family.params
    W = w.hollow_matrix()
    out = []
    for E in hypersimplex_subsets(d):
        idx = [e - 1 for e in E]
        out.append(_factor(E, f"det{len(E)}", det(W.submatrix(idx, idx))))
    return FactorSignature(tuple(out))


def signature(w: Scaling) -> FactorSignature:
    return {"segre": segre_signature, "triple": triple_signature,
            "hypersimplex": hypersimplex_signature}[w.family.kind](w)


def extended_matrix(w: Scaling) -> RatMatrix:
    """``[I_m | w]``."""
    M = w.matrix()
    return RatMatrix.identity(M.rows).hstack(M)


def ml_degree_combinatorial(w: Scaling) -> int:
    """ML degree of a scaled Segre model as the beta invariant of ``[I_m | w]``."""
    _require(w, "segre")
    return beta_invariant(matroid_from_matrix(extended_matrix(w)))


def ml_degree_upper_bound(w: Scaling) -> int:
    """Degree minus the number of vanished 4x4 principal minors."""
    _require(w, "hypersimplex")
    sig = hypersimplex_signature(w)
    return degree(w.family) - sum(f.vanished for f in sig.factors if len(f.face_label) == 4)
