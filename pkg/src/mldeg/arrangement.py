"""Real affine hyperplane arrangements and an exact bounded-region count.

A hyperplane is stored as ``(const, coeffs)`` meaning
``const + coeffs . x = 0``.  Regions are found by incremental splitting with
exact LP feasibility, so no tolerance enters the count.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import QI3, RatMatrix, as_matrix, rank
from .lp import cone_is_trivial, strict_feasible_point
from .matroid import beta_invariant, matroid_from_matrix

MAX_DIM = 4
MAX_HYPERPLANES = 12


class CapacityError(RuntimeError):
    """Instance is beyond the desk-scale limits of the region counter."""


@dataclass(frozen=True)
class Arrangement:
    ambient_dim: int
    hyperplanes: tuple  # of (const, coeffs-tuple)
    labels: tuple

    def __post_init__(self):
        if len(self.hyperplanes) != len(self.labels):
            raise ValueError("one label per hyperplane")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be distinct")
        for c, a in self.hyperplanes:
            if len(a) != self.ambient_dim:
                raise ValueError("coefficient vector has wrong length")
            if c == 0 and all(x == 0 for x in a):
                raise ValueError("zero linear form")

    @classmethod
    def from_forms(cls, forms, labels=None) -> "Arrangement":
        hs = tuple((Fraction(c), tuple(Fraction(x) for x in a)) for c, a in forms)
        dim = len(hs[0][1]) if hs else 0
        return cls(dim, hs, tuple(labels) if labels is not None else tuple(range(len(hs))))

    def deduplicated(self):
        """Distinct hyperplanes (up to nonzero scaling) with their multiplicities.

        Forms with zero coefficient vector (parallel to the patch at infinity)
        are dropped: they meet the affine patch nowhere.
        """
        seen: dict = {}
        order = []
        for (c, a), lab in zip(self.hyperplanes, self.labels):
            if all(x == 0 for x in a):
                continue
            key = _normalise(c, a)
            if key not in seen:
                seen[key] = [lab]
                order.append(key)
            else:
                seen[key].append(lab)
        return [(k, seen[k]) for k in order]


def _normalise(c, a):
    lead = next(x for x in a if x != 0)
    return (c / lead, tuple(x / lead for x in a))


def arrangement_from_scaling(w, patch_index: int = 0) -> Arrangement:
    """Affine arrangement of the columns of ``[I_m | w]`` on the chart ``x_patch = 1``.

    The chart coordinates are the remaining ``m-1`` homogeneous coordinates in
    order.  The coordinate hyperplane of the patched coordinate lies at
    infinity and is omitted.  Labels are column indices of ``[I_m | w]``.
    ``patch_index`` is 0-based.
    """
    w = as_matrix(w)
    m, n = w.shape
    if any(isinstance(e, QI3) for e in w.entries):
        raise ValueError("region counting needs a real scaling")
    if any(e == 0 for e in w.entries):
        raise ValueError("scaling has a zero entry")
    if not 0 <= patch_index < m:
        raise ValueError(f"patch_index must lie in 0..{m - 1}")
    others = [k for k in range(m) if k != patch_index]
    forms, labels = [], []
    for k in others:
        forms.append((0, [1 if t == k else 0 for t in others]))
        labels.append(k)
    for j in range(n):
        forms.append((w[patch_index, j], [w[k, j] for k in others]))
        labels.append(m + j)
    return Arrangement.from_forms(forms, labels)


def _sign(x):
    return (x > 0) - (x < 0)


def regions(arr: Arrangement):
    """All regions of the complement as ``(sign_vector, interior_point)``.

    Sign vectors index the deduplicated hyperplanes.
    """
    hs = [k for k, _ in arr.deduplicated()]
    if arr.ambient_dim > MAX_DIM or len(hs) > MAX_HYPERPLANES:
        raise CapacityError(
            f"arrangement of {len(hs)} hyperplanes in dimension {arr.ambient_dim} exceeds "
            f"the limits ({MAX_HYPERPLANES} hyperplanes, dimension {MAX_DIM})"
        )
    k = arr.ambient_dim
    found = [((), [Fraction(0)] * k)]
    for idx, (c, a) in enumerate(hs):
        prev_rows = [(hs[t][1], hs[t][0]) for t in range(idx)]
        nxt = []
        for signs, pt in found:
            v = c + sum(x * y for x, y in zip(a, pt))
            side = _sign(v)
            if side:
                nxt.append((signs + (side,), pt))
                todo = (-side,)
            else:
                todo = (1, -1)
            for s in todo:
                G = [[sg * x for x in row] for sg, (row, _) in zip(signs, prev_rows)]
                h = [sg * const for sg, (_, const) in zip(signs, prev_rows)]
                G.append([s * x for x in a])
                h.append(s * c)
                q = strict_feasible_point(G, h)
                if q is not None:
                    nxt.append((signs + (s,), q))
        found = nxt
    return found


def bounded_regions(arr: Arrangement) -> int:
    """Number of bounded connected components of the complement."""
    hs = [k for k, _ in arr.deduplicated()]
    if not hs:
        return 0
    normals = RatMatrix.from_rows([list(a) for _, a in hs])
    if rank(normals) < arr.ambient_dim:
        return 0  # every region contains a line
    count = 0
    for signs, _ in regions(arr):
        G = [[s * x for x in a] for s, (_, a) in zip(signs, hs)]
        if cone_is_trivial(G):
            count += 1
    return count


def projective_matrix(arr: Arrangement) -> RatMatrix:
    """Columns ``(const, coeffs)`` of every hyperplane plus the hyperplane at infinity."""
    cols = [[Fraction(1)] + [Fraction(0)] * arr.ambient_dim]
    for c, a in arr.hyperplanes:
        cols.append([c] + list(a))
    return RatMatrix.from_rows([[col[i] for col in cols] for i in range(arr.ambient_dim + 1)])


def characteristic_beta(arr: Arrangement) -> int:
    """Beta invariant of the matroid of the projectivised arrangement."""
    return beta_invariant(matroid_from_matrix(projective_matrix(arr)))


def apply_affine(arr: Arrangement, L: Sequence[Sequence], t: Sequence) -> Arrangement:
    """Pull the arrangement back along ``x = L y + t`` (``L`` invertible)."""
    L = as_matrix(L)
    forms = []
    for c, a in arr.hyperplanes:
        new_a = [sum(a[i] * L[i, j] for i in range(len(a))) for j in range(L.cols)]
        new_c = c + sum(a[i] * Fraction(t[i]) for i in range(len(a)))
        forms.append((new_c, new_a))
    return Arrangement.from_forms(forms, arr.labels)


def add_hyperplane(arr: Arrangement, const, coeffs, label=None) -> Arrangement:
    label = label if label is not None else max(arr.labels, default=-1) + 1
    forms = list(arr.hyperplanes) + [(const, coeffs)]
    return Arrangement.from_forms(forms, list(arr.labels) + [label])
