"""Exact scalars and fraction-free linear algebra.

Everything here works over :class:`fractions.Fraction` and, where a scaling
needs it, over :class:`QI3`, the field Q(sqrt 3, i).  Integer inputs are
promoted to ``Fraction`` on construction so that results never depend on
floating point.
"""
from __future__ import annotations

import itertools
import math
import re
from fractions import Fraction
from typing import Iterable, Sequence


class DimensionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Q(sqrt3, i)
# ---------------------------------------------------------------------------

class QI3:
    """Exact element ``a + b*sqrt3 + (c + d*sqrt3)*i`` with rational a, b, c, d."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=0, b=0, c=0, d=0):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.c = Fraction(c)
        self.d = Fraction(d)

    @classmethod
    def coerce(cls, x) -> "QI3":
        if isinstance(x, QI3):
            return x
        return cls(Fraction(x))

    def is_rational(self) -> bool:
        return self.b == 0 and self.c == 0 and self.d == 0

    def simplify(self):
        """Return a plain ``Fraction`` when the value is rational."""
        return self.a if self.is_rational() else self

    def __repr__(self):
        return f"QI3({self.a}, {self.b}, {self.c}, {self.d})"

    def __str__(self):
        parts = []
        for coef, unit in ((self.a, ""), (self.b, "*s3"), (self.c, "*i"), (self.d, "*s3*i")):
            if coef:
                parts.append(f"{coef}{unit}")
        return " + ".join(parts) if parts else "0"

    def __eq__(self, other):
        try:
            o = QI3.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (o.a, o.b, o.c, o.d)

    def __hash__(self):
        if self.is_rational():
            return hash(self.a)
        return hash((self.a, self.b, self.c, self.d))

    def __bool__(self):
        return bool(self.a or self.b or self.c or self.d)

    def __neg__(self):
        return QI3(-self.a, -self.b, -self.c, -self.d)

    def __add__(self, other):
        o = QI3.coerce(other)
        return QI3(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-QI3.coerce(other))

    def __rsub__(self, other):
        return QI3.coerce(other) - self

    def __mul__(self, other):
        o = QI3.coerce(other)
        # (p + q i)(r + s i) with p, q, r, s in Q(sqrt3)
        p, q, r, s = (self.a, self.b), (self.c, self.d), (o.a, o.b), (o.c, o.d)
        pr, qs, ps, qr = _m3(p, r), _m3(q, s), _m3(p, s), _m3(q, r)
        return QI3(pr[0] - qs[0], pr[1] - qs[1], ps[0] + qr[0], ps[1] + qr[1])

    __rmul__ = __mul__

    def inverse(self) -> "QI3":
        if not self:
            raise ZeroDivisionError("QI3 division by zero")
        # 1/(p + q i) = (p - q i)/(p^2 + q^2); then rationalise the Q(sqrt3) norm
        p, q = (self.a, self.b), (self.c, self.d)
        n = _m3(p, p)
        n2 = _m3(q, q)
        n = (n[0] + n2[0], n[1] + n2[1])
        denom = n[0] * n[0] - 3 * n[1] * n[1]
        ninv = (n[0] / denom, -n[1] / denom)
        re_ = _m3(p, ninv)
        im_ = _m3(q, ninv)
        return QI3(re_[0], re_[1], -im_[0], -im_[1])

    def __truediv__(self, other):
        return self * QI3.coerce(other).inverse()

    def __rtruediv__(self, other):
        return QI3.coerce(other) * self.inverse()

    def __complex__(self):
        s3 = math.sqrt(3.0)
        return complex(float(self.a) + float(self.b) * s3, float(self.c) + float(self.d) * s3)

    def to_json(self):
        return {"a": str(self.a), "b": str(self.b), "c": str(self.c), "d": str(self.d)}


def _m3(x, y):
    # product in Q(sqrt3) of pairs (re, sqrt3-coefficient)
    return (x[0] * y[0] + 3 * x[1] * y[1], x[0] * y[1] + x[1] * y[0])


_RAT_RE = re.compile(r"^\s*[-+]?\d+(\s*/\s*[-+]?\d+)?\s*$")


def parse_scalar(x):
    """Parse an exact scalar from a JSON/CSV value.

    Accepts ints, ``"p/q"`` strings, decimal strings (converted exactly) and
    dicts ``{"a":..,"b":..,"c":..,"d":..}`` meaning a + b*sqrt3 + (c + d*sqrt3)*i.
    Floats are refused: they would silently break exactness.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, QI3):
        return x.simplify()
    if isinstance(x, str):
        s = x.strip()
        if _RAT_RE.match(s):
            return Fraction(s.replace(" ", ""))
        try:
            return Fraction(s)
        except ValueError:
            raise ValueError(f"cannot parse exact scalar {x!r}") from None
    if isinstance(x, dict):
        unknown = set(x) - {"a", "b", "c", "d"}
        if unknown:
            raise ValueError(f"unknown keys in scalar {x!r}")
        q = QI3(*(parse_scalar(x.get(k, 0)) for k in "abcd"))
        return q.simplify()
    if isinstance(x, float):
        raise TypeError(f"float {x!r} is not an exact scalar; quote it as 'p/q'")
    raise TypeError(f"cannot parse exact scalar {x!r}")


def scalar_to_json(x):
    if isinstance(x, QI3):
        return x.to_json()
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def to_complex(x) -> complex:
    return complex(x) if isinstance(x, QI3) else complex(float(Fraction(x)))


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

def _exact(x):
    if isinstance(x, QI3):
        return x.simplify()
    if isinstance(x, float):
        raise TypeError("float entries are not allowed in RatMatrix")
    return Fraction(x)


class RatMatrix:
    """Immutable dense matrix of exact scalars, stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(_exact(e) for e in entries)
        if len(entries) != rows * cols:
            raise DimensionError(f"expected {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RatMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        return cls(len(rows), ncols, (e for r in rows for e in r))

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, (1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j):
        return self.entries[j::self.cols]

    def tolist(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows,
                         (self[i, j] for j in range(self.cols) for i in range(self.rows)))

    T = property(transpose)

    def submatrix(self, rowset: Sequence[int], colset: Sequence[int]) -> "RatMatrix":
        return RatMatrix(len(rowset), len(colset), (self[i, j] for i in rowset for j in colset))

    def columns(self, colset: Sequence[int]) -> "RatMatrix":
        return self.submatrix(range(self.rows), colset)

    def hstack(self, other: "RatMatrix") -> "RatMatrix":
        if other.rows != self.rows:
            raise DimensionError("row counts differ")
        return RatMatrix.from_rows([list(self.row(i)) + list(other.row(i)) for i in range(self.rows)])

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for i in range(self.rows):
            r = self.row(i)
            for j in range(other.cols):
                c = other.col(j)
                out.append(sum((a * b for a, b in zip(r, c)), Fraction(0)))
        return RatMatrix(self.rows, other.cols, out)

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"RatMatrix({self.tolist()!r})"

    def is_integer(self) -> bool:
        return all(isinstance(e, Fraction) and e.denominator == 1 for e in self.entries)


def as_matrix(M) -> RatMatrix:
    return M if isinstance(M, RatMatrix) else RatMatrix.from_rows(M)


# ---------------------------------------------------------------------------
# determinants, rank, minors
# ---------------------------------------------------------------------------

def _bareiss(a: list[list], n: int):
    """In-place Bareiss elimination on a square list-of-lists; returns det."""
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) / prev
        prev = akk
    d = a[n - 1][n - 1] if n else Fraction(1)
    return -d if sign < 0 else d


def det(M) -> Fraction:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    M = as_matrix(M)
    if M.rows != M.cols:
        raise DimensionError(f"det of non-square {M.rows}x{M.cols} matrix")
    if M.is_integer():
        return Fraction(det_int([[int(e) for e in M.row(i)] for i in range(M.rows)]))
    d = _bareiss(M.tolist(), M.rows)
    return d.simplify() if isinstance(d, QI3) else d


def det_int(a: list[list[int]]) -> int:
    """Bareiss on a square list of int rows (copied); every division is exact."""
    n = len(a)
    if n == 0:
        return 1
    a = [list(r) for r in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def det_cofactor(M) -> Fraction:
    """Laplace expansion along the first row. Slow; used as an oracle."""
    M = as_matrix(M)
    if M.rows != M.cols:
        raise DimensionError("det of non-square matrix")
    rows = M.tolist()

    def rec(rs):
        n = len(rs)
        if n == 0:
            return Fraction(1)
        if n == 1:
            return rs[0][0]
        total = Fraction(0)
        for j, a in enumerate(rs[0]):
            if a == 0:
                continue
            sub = [r[:j] + r[j + 1:] for r in rs[1:]]
            term = a * rec(sub)
            total = total + term if j % 2 == 0 else total - term
        return total

    return rec(rows)


def rank(M) -> int:
    """Exact rank via Gaussian elimination."""
    M = as_matrix(M)
    a = M.tolist()
    r = 0
    for c in range(M.cols):
        piv = next((i for i in range(r, M.rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pr = a[r]
        inv = 1 / pr[c]
        for i in range(r + 1, M.rows):
            if a[i][c] != 0:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], pr)]
        r += 1
        if r == M.rows:
            break
    return r


def minor(M, rowset: Sequence[int], colset: Sequence[int]) -> Fraction:
    M = as_matrix(M)
    rowset, colset = list(rowset), list(colset)
    if len(rowset) != len(colset) or not rowset:
        raise DimensionError("minor needs equally sized, nonempty row and column sets")
    if not all(0 <= i < M.rows for i in rowset) or not all(0 <= j < M.cols for j in colset):
        raise DimensionError("minor index out of range")
    return det(M.submatrix(rowset, colset))


def all_minors(M, size: int):
    """Yield ``(rows, cols, value)`` for every ``size`` x ``size`` minor, lexicographically."""
    M = as_matrix(M)
    for rs in itertools.combinations(range(M.rows), size):
        for cs in itertools.combinations(range(M.cols), size):
            yield rs, cs, det(M.submatrix(rs, cs))


def solve(M, b) -> list:
    """Solve the square nonsingular system ``M x = b`` exactly."""
    M = as_matrix(M)
    n = M.rows
    if M.cols != n or len(b) != n:
        raise DimensionError("solve needs a square system")
    a = [list(M.row(i)) + [_exact(b[i])] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [a[i][n] for i in range(n)]


def nullspace(M) -> list[list]:
    """Basis of the right kernel of ``M`` (reduced row echelon construction)."""
    M = as_matrix(M)
    a = M.tolist()
    pivots = []
    r = 0
    for c in range(M.cols):
        piv = next((i for i in range(r, M.rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(M.rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == M.rows:
            break
    free = [c for c in range(M.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * M.cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -a[i][f]
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# Hermite normal form
# ---------------------------------------------------------------------------

def hermite_normal_form(M) -> tuple[RatMatrix, RatMatrix]:
    """Column-style Hermite normal form.

    Returns ``(H, U)`` with ``M @ U == H`` and ``U`` unimodular.  ``H`` is in
    lower column-echelon form: the pivot of each nonzero column lies strictly
    below the pivot of the previous one, pivots are positive, and entries to
    the left of a pivot are reduced into ``[0, pivot)``.  Zero columns come
    last, so the nonzero columns of ``H`` are a basis of the column lattice.
    """
    M = as_matrix(M)
    if not M.is_integer():
        raise ValueError("hermite_normal_form needs an integer matrix")
    m, n = M.rows, M.cols
    # work on columns as lists of ints
    H = [[int(M[i, j]) for i in range(m)] for j in range(n)]
    U = [[1 if i == j else 0 for i in range(n)] for j in range(n)]

    def colop(j, k, a, b, c, d):
        # (col_j, col_k) <- (a col_j + b col_k, c col_j + d col_k)
        for X in (H, U):
            cj, ck = X[j], X[k]
            X[j] = [a * x + b * y for x, y in zip(cj, ck)]
            X[k] = [c * x + d * y for x, y in zip(cj, ck)]

    piv_col = 0
    pivots = []
    for i in range(m):
        if piv_col >= n:
            break
        for k in range(piv_col + 1, n):
            b = H[k][i]
            if b == 0:
                continue
            a = H[piv_col][i]
            g, x, y = _xgcd(a, b)
            # [a b] @ [[x, -b/g], [y, a/g]] = [g, 0]
            colop(piv_col, k, x, y, -b // g, a // g)
        if H[piv_col][i] == 0:
            continue
        if H[piv_col][i] < 0:
            H[piv_col] = [-v for v in H[piv_col]]
            U[piv_col] = [-v for v in U[piv_col]]
        p = H[piv_col][i]
        for k in range(piv_col):
            q = H[k][i] // p
            if q:
                H[k] = [x - q * y for x, y in zip(H[k], H[piv_col])]
                U[k] = [x - q * y for x, y in zip(U[k], U[piv_col])]
        pivots.append(i)
        piv_col += 1

    Hm = RatMatrix(m, n, (H[j][i] for i in range(m) for j in range(n)))
    Um = RatMatrix(n, n, (U[j][i] for i in range(n) for j in range(n)))
    return Hm, Um


def _xgcd(a: int, b: int):
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def lattice_basis(M) -> RatMatrix:
    """Nonzero columns of the Hermite normal form: a basis of the column lattice."""
    H, _ = hermite_normal_form(M)
    keep = [j for j in range(H.cols) if any(H[i, j] != 0 for i in range(H.rows))]
    return H.columns(keep)
