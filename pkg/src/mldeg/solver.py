"""Counting critical points of the likelihood function by homotopy continuation.

The model is parametrised on its torus as ``p_i = w_i * phi^{c_i}`` where the
columns ``c_i`` of the reduced exponent matrix ``C`` are a generating set of
``Z^r``, so every torus point of the affine cone has exactly one preimage.
The likelihood equations are ``R p(phi) = R u / sum(u)`` for ``r`` rows ``R``
spanning the row space of ``A``; each one is multiplied by a monomial to
clear negative exponents.

The square polynomial system is solved with a total-degree homotopy in
projective coordinates on a random affine chart (gamma trick), tracked in
batches with numpy.  Endpoints are refined, filtered to nonsingular points of
the torus and deduplicated.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .arrangement import CapacityError
from .exact import RatMatrix, as_matrix, det, lattice_basis, rank, solve as exact_solve
from .models import ModelFamily, Scaling


MAX_PATHS = 50_000


@dataclass
class Tolerances:
    track: float = 1e-7        # corrector acceptance along the path
    refine: float = 1e-12      # Newton refinement target at t = 1
    residual: float = 1e-10    # accepted relative residual
    dedup: float = 1e-8        # relative distance for equal solutions
    torus: float = 1e-8        # relative size below which a coordinate counts as 0
    infinity: float = 1e-8     # chart coordinate size below which a point is at infinity
    condition: float = 1e12    # Jacobian condition number cutoff (log coordinates)
    min_step: float = 1e-13
    max_step: float = 0.05
    max_failure_rate: float = 0.05
    stall: float = 1e-6        # a path stalling this close to t = 1 ends at a singular point
    drift: float = 1e-5        # max relative move of a regular endpoint under refinement


# ---------------------------------------------------------------------------
# system construction
# ---------------------------------------------------------------------------

@dataclass
class LikelihoodSystem:
    C: list                 # r x N integer matrix, columns generate Z^r
    weights: list           # N complex weights
    data_u: list            # N positive integers
    rows: list              # r x N integer row combinations of A (equation rows)
    rhs: list               # r floats, rows @ u / sum(u)
    shifts: list            # r monomial exponents used to clear each equation
    equations: list = field(repr=False, default_factory=list)  # [(coeffs, exps)]

    @property
    def num_unknowns(self) -> int:
        return len(self.C)

    @property
    def degrees(self) -> list[int]:
        return [int(max(sum(e) for e in exps)) for _, exps in self.equations]

    @property
    def bezout_number(self) -> int:
        return math.prod(self.degrees)

    def to_json(self) -> str:
        return json.dumps({
            "C": self.C, "weights": [[z.real, z.imag] for z in self.weights],
            "data_u": self.data_u, "rows": self.rows, "rhs": self.rhs, "shifts": self.shifts,
        })

    @classmethod
    def from_json(cls, text: str) -> "LikelihoodSystem":
        d = json.loads(text)
        S = cls(d["C"], [complex(a, b) for a, b in d["weights"]], d["data_u"],
                d["rows"], d["rhs"], d["shifts"])
        S.equations = _assemble(S)
        return S

    def laurent_residual(self, phi: np.ndarray) -> np.ndarray:
        """Relative residuals of ``R p(phi) - rhs`` for one point."""
        C = np.asarray(self.C, dtype=float)
        p = np.asarray(self.weights) * np.exp(np.log(phi.astype(complex)) @ C)
        R = np.asarray(self.rows, dtype=float)
        lhs = R @ p
        scale = np.abs(R) @ np.abs(p) + np.abs(self.rhs)
        return np.abs(lhs - np.asarray(self.rhs)) / scale

    def moment_residual(self, phi: np.ndarray, A) -> float:
        """Max of ``|A p - A u / sum(u)|`` (Birch check)."""
        A = np.asarray(as_matrix(A).tolist(), dtype=float)
        C = np.asarray(self.C, dtype=float)
        p = np.asarray(self.weights) * np.exp(np.log(phi.astype(complex)) @ C)
        u = np.asarray(self.data_u, dtype=float)
        return float(np.max(np.abs(A @ p - A @ u / u.sum())))


def _to_int_rows(M: RatMatrix) -> list[list[int]]:
    return [[int(x) for x in M.row(i)] for i in range(M.rows)]


def _coordinates(B: RatMatrix, A: RatMatrix) -> RatMatrix:
    """Integer coordinates of the columns of A in the lattice basis B (full column rank)."""
    # least-squares-free exact solve through a square row subset of B
    r = B.cols
    rows = []
    for i in range(B.rows):
        if rank(B.submatrix(rows + [i], range(r))) > len(rows):
            rows.append(i)
        if len(rows) == r:
            break
    Bs = B.submatrix(rows, range(r))
    cols = [exact_solve(Bs, [A[i, j] for i in rows]) for j in range(A.cols)]
    return RatMatrix.from_rows([[cols[j][k] for j in range(A.cols)] for k in range(r)])


def _cleared(row_vec, C):
    """Shift and cleared degree of the equation ``sum_i row_i p_i = const``."""
    support = [i for i, x in enumerate(row_vec) if x != 0]
    r = len(C)
    pts = [tuple(0 for _ in range(r))] + [tuple(C[k][i] for k in range(r)) for i in support]
    shift = [min(p[k] for p in pts) for k in range(r)]
    deg = max(sum(p[k] - shift[k] for k in range(r)) for p in pts)
    return shift, deg, len(support)


def _select_rows(pool, C):
    """Greedy choice of r independent rows with the lowest cleared degree."""
    r = len(C)
    scored = sorted(((_cleared(v, C)[1], _cleared(v, C)[2], t) for t, v in enumerate(pool)))
    chosen = []
    for _, _, t in scored:
        trial = chosen + [pool[t]]
        if rank(RatMatrix.from_rows(trial)) == len(trial):
            chosen = trial
        if len(chosen) == r:
            break
    return chosen


def _candidate_bases(A: RatMatrix, C0: RatMatrix, rng, tries: int):
    """Reduced exponent matrices: the HNF coordinates and unimodular column subsets."""
    r, N = C0.shape
    yield C0
    seen = set()
    combos = []
    if math.comb(N, r) <= tries:
        combos = list(itertools.combinations(range(N), r))
    else:
        while len(combos) < tries:
            combos.append(tuple(sorted(rng.choice(N, r, replace=False).tolist())))
    for cols in combos:
        if cols in seen:
            continue
        seen.add(cols)
        sub = C0.columns(cols)
        if abs(det(sub)) != 1:
            continue
        inv_cols = [exact_solve(sub, [C0[k, j] for k in range(r)]) for j in range(N)]
        yield RatMatrix.from_rows([[inv_cols[j][k] for j in range(N)] for k in range(r)])


def _assemble(S: LikelihoodSystem):
    """Cleared polynomial equations as ``(coeffs, exps)`` arrays."""
    eqs = []
    r = len(S.C)
    for row, b, shift in zip(S.rows, S.rhs, S.shifts):
        coeffs, exps = [], []
        for i, x in enumerate(row):
            if x:
                coeffs.append(x * S.weights[i])
                exps.append([S.C[k][i] - shift[k] for k in range(r)])
        coeffs.append(-complex(b))
        exps.append([-s for s in shift])
        eqs.append((np.asarray(coeffs, dtype=complex), np.asarray(exps, dtype=np.int64)))
    return eqs


def build_system(F: ModelFamily, w: Scaling, u="random", seed=None,
                 basis_tries: int = 400) -> LikelihoodSystem:
    """Likelihood equations of ``X_{A,w}`` for data ``u``.

    ``u`` is a sequence of positive integers or ``"random"`` (uniform in
    [1, 1000]).  Among lattice bases taken from columns of A (plus the HNF
    basis), the one giving the smallest Bezout number is kept.
    """
    if w.family != F:
        raise ValueError("scaling belongs to a different family")
    rng = np.random.default_rng(seed)
    A = F.A
    N = A.cols
    if rank(A) < 2:
        raise ValueError("degenerate exponent matrix (rank < 2)")
    if isinstance(u, str):
        if u != "random":
            raise ValueError("u must be a sequence or 'random'")
        u = rng.integers(1, 1001, size=N).tolist()
    u = [int(x) for x in u]
    if len(u) != N or any(x <= 0 for x in u):
        raise ValueError("u must be N positive integers")
    B = lattice_basis(A)
    C0 = _coordinates(B, A)
    if not C0.is_integer():
        raise AssertionError("lattice coordinates are not integral")
    pool = [list(A.row(i)) for i in range(A.rows)] + [[Fraction(1)] * N]
    best = None
    for Cm in _candidate_bases(A, C0, rng, basis_tries):
        C = _to_int_rows(Cm)
        rows = _select_rows(pool, C)
        if len(rows) < len(C):
            continue
        key = (math.prod(_cleared(v, C)[1] for v in rows), sum(_cleared(v, C)[2] for v in rows))
        if best is None or key < best[0]:
            best = (key, C, rows)
    _, C, rows = best
    total = sum(u)
    rhs = [float(sum(Fraction(x) * y for x, y in zip(v, u)) / total) for v in rows]
    S = LikelihoodSystem(
        C=C, weights=w.as_complex(), data_u=u,
        rows=[[int(x) for x in v] for v in rows], rhs=rhs,
        shifts=[_cleared(v, C)[0] for v in rows],
    )
    S.equations = _assemble(S)
    return S


# ---------------------------------------------------------------------------
# batched polynomial evaluation
# ---------------------------------------------------------------------------

class _Batch:
    """Homogenised system plus its Jacobian, evaluated on many points at once.

    Variables are ``(x_0, x_1, ..., x_r)`` with ``phi_j = x_j / x_0``.
    """

    def __init__(self, equations):
        self.neq = len(equations)
        self.nv = self.neq + 1
        self.degs = np.array([int(e.sum(axis=1).max()) for _, e in equations])
        E_rows, owner, coef = [], [], []
        for k, (c, e) in enumerate(equations):
            h = self.degs[k] - e.sum(axis=1)
            E_rows.append(np.hstack([h[:, None], e]))
            owner += [k] * len(c)
            coef.append(c)
        self.E = np.vstack(E_rows)
        self.coef = np.concatenate(coef)
        T = len(self.coef)
        self.assign = np.zeros((T, self.neq), dtype=complex)
        self.assign[np.arange(T), owner] = self.coef
        self.dE = []
        self.dassign = []
        for j in range(self.nv):
            Ej = self.E.copy()
            Ej[:, j] = np.maximum(Ej[:, j] - 1, 0)
            a = np.zeros_like(self.assign)
            a[np.arange(T), owner] = self.coef * self.E[:, j]
            self.dE.append(Ej)
            self.dassign.append(a)
        self.maxdeg = int(self.degs.max())

    def _powers(self, X):
        # P[d] = X ** d, shape (maxdeg+1, npts, nv)
        P = np.empty((self.maxdeg + 1,) + X.shape, dtype=complex)
        P[0] = 1.0
        for d in range(1, self.maxdeg + 1):
            P[d] = P[d - 1] * X
        return P

    def _monomials(self, P, E):
        cols = np.arange(self.nv)
        out = P[E[:, 0], :, 0]
        for j in range(1, self.nv):
            out = out * P[E[:, j], :, cols[j]]
        return out.T  # (npts, T)

    def eval(self, X):
        P = self._powers(X)
        return self._monomials(P, self.E) @ self.assign

    def eval_jac(self, X):
        P = self._powers(X)
        F = self._monomials(P, self.E) @ self.assign
        J = np.empty((X.shape[0], self.neq, self.nv), dtype=complex)
        for j in range(self.nv):
            J[:, :, j] = self._monomials(P, self.dE[j]) @ self.dassign[j]
        return F, J


class _StartSystem:
    """``x_k^{d_k} - x_0^{d_k}``."""

    def __init__(self, degs):
        self.degs = np.asarray(degs)
        self.neq = len(degs)

    def eval_jac(self, X):
        n = X.shape[0]
        x0 = X[:, :1]
        xs = X[:, 1:]
        d = self.degs[None, :]
        G = xs ** d - x0 ** d
        J = np.zeros((n, self.neq, self.neq + 1), dtype=complex)
        J[:, :, 0] = -d * x0 ** (d - 1)
        idx = np.arange(self.neq)
        J[:, idx, idx + 1] = d * xs ** (d - 1)
        return G, J


class _Homotopy:
    """``H = (1 - t) * gamma * G + t * F`` plus the affine chart ``a . x = 1``."""

    def __init__(self, target: _Batch, start: _StartSystem, gamma: complex, chart: np.ndarray):
        self.F = target
        self.G = start
        self.gamma = gamma
        self.chart = chart

    def parts(self, X, t):
        Fv, FJ = self.F.eval_jac(X)
        Gv, GJ = self.G.eval_jac(X)
        t = t[:, None]
        Hv = (1 - t) * self.gamma * Gv + t * Fv
        HJ = (1 - t[:, :, None]) * self.gamma * GJ + t[:, :, None] * FJ
        Ht = Fv - self.gamma * Gv
        n = X.shape[0]
        chart_val = X @ self.chart - 1.0
        Hv = np.hstack([Hv, chart_val[:, None]])
        HJ = np.concatenate([HJ, np.broadcast_to(self.chart, (n, 1, len(self.chart)))], axis=1)
        Ht = np.hstack([Ht, np.zeros((n, 1))])
        return Hv, HJ, Ht

    def velocity(self, X, t):
        _, HJ, Ht = self.parts(X, t)
        return -_batched_solve(HJ, Ht)


def _batched_solve(J, b):
    try:
        return np.linalg.solve(J, b[..., None])[..., 0]
    except np.linalg.LinAlgError:
        out = np.empty_like(b)
        for i in range(len(b)):
            out[i] = np.linalg.lstsq(J[i], b[i], rcond=None)[0]
        return out


def _track(hom: _Homotopy, X0: np.ndarray, tol: Tolerances, predictor: str, max_steps: int = 20000):
    """Track every start point from t = 0 to t = 1.

    Returns ``(X, t_reached, ok)``.  Each path keeps its own step size: a step
    is accepted when at most three Newton corrections bring the relative
    update below ``tol.track``; rejected steps halve the step size and
    accepted ones grow it after a run of successes.
    """
    n = X0.shape[0]
    X = X0.copy()
    t = np.zeros(n)
    h = np.full(n, min(0.01, tol.max_step))
    streak = np.zeros(n, dtype=int)
    active = np.ones(n, dtype=bool)
    ok = np.zeros(n, dtype=bool)
    for _ in range(max_steps):
        idx = np.nonzero(active)[0]
        if not len(idx):
            break
        x, tt, hh = X[idx], t[idx], np.minimum(h[idx], 1.0 - t[idx])
        with np.errstate(all="ignore"):
            k1 = hom.velocity(x, tt)
            if predictor == "euler":
                xp = x + hh[:, None] * k1
            else:
                k2 = hom.velocity(x + 0.5 * hh[:, None] * k1, tt + 0.5 * hh)
                k3 = hom.velocity(x + 0.5 * hh[:, None] * k2, tt + 0.5 * hh)
                k4 = hom.velocity(x + hh[:, None] * k3, tt + hh)
                xp = x + hh[:, None] / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            t1 = tt + hh
            good = np.zeros(len(idx), dtype=bool)
            xc = xp
            for _it in range(3):
                Hv, HJ, _ = hom.parts(xc, t1)
                dx = _batched_solve(HJ, Hv)
                xc = xc - dx
                rel = np.linalg.norm(dx, axis=1) / np.maximum(1.0, np.linalg.norm(xc, axis=1))
                good |= rel < tol.track
            # a step is good only if the last update is tiny and values finite
            good &= np.isfinite(xc).all(axis=1)
            good &= rel < tol.track
        acc = idx[good]
        rej = idx[~good]
        X[acc] = xc[good]
        t[acc] = t1[good]
        streak[acc] += 1
        grow = acc[streak[acc] >= 3]
        h[grow] = np.minimum(h[grow] * 2.0, tol.max_step)
        streak[grow] = 0
        h[rej] *= 0.5
        streak[rej] = 0
        done = acc[t[acc] >= 1.0 - 1e-15]
        ok[done] = True
        active[done] = False
        dead = rej[h[rej] < tol.min_step]
        active[dead] = False
    return X, t, ok


# ---------------------------------------------------------------------------
# endgame
# ---------------------------------------------------------------------------

def _newton_affine(target: _Batch, phi: np.ndarray, tol: Tolerances, iters: int = 20):
    """Refine affine solutions of the cleared system (chart x_0 = 1)."""
    x = phi.copy()
    for _ in range(iters):
        X = np.hstack([np.ones((x.shape[0], 1)), x])
        Fv, J = target.eval_jac(X)
        with np.errstate(all="ignore"):
            dx = _batched_solve(J[:, :, 1:], Fv)
        x = x - dx
        step = np.linalg.norm(dx, axis=1) / np.maximum(1.0, np.linalg.norm(x, axis=1))
        if np.all(~np.isfinite(step) | (step < tol.refine)):
            break
    return x


def _log_condition(target: _Batch, phi: np.ndarray) -> np.ndarray:
    X = np.hstack([np.ones((phi.shape[0], 1)), phi])
    _, J = target.eval_jac(X)
    Jl = J[:, :, 1:] * phi[:, None, :]
    out = np.empty(phi.shape[0])
    for i in range(phi.shape[0]):
        with np.errstate(all="ignore"):
            out[i] = np.linalg.cond(Jl[i]) if np.isfinite(Jl[i]).all() else np.inf
    return out


@dataclass
class SolveReport:
    paths_tracked: int
    solutions: list
    failures: int
    ml_degree: int
    residual_max: float
    dedup_tolerance: float
    path_status: list = field(default_factory=list)
    bezout_number: int = 0
    seed: object = None
    flagged: bool = False
    retracks: int = 0

    def to_json(self) -> str:
        d = asdict(self)
        d["solutions"] = [[[z.real, z.imag] for z in s] for s in self.solutions]
        return json.dumps(d)


def _dedup(points: np.ndarray, tol: float) -> tuple[list[int], list[int]]:
    """Indices of distinct points (first occurrence) and of the duplicates."""
    keep, dups = [], []
    for i, p in enumerate(points):
        scale = max(1.0, float(np.linalg.norm(p)))
        if any(np.linalg.norm(p - points[k]) <= tol * scale for k in keep):
            dups.append(i)
        else:
            keep.append(i)
    return keep, dups


def solve(S: LikelihoodSystem, seed=None, tol: Tolerances | None = None,
          predictor: str = "euler", max_retracks: int = 2) -> SolveReport:
    """Count the nonsingular torus solutions of the likelihood equations."""
    if predictor not in ("rk4", "euler"):
        raise ValueError("predictor must be 'rk4' or 'euler'")
    tol = tol or Tolerances()
    rng = np.random.default_rng(seed)
    target = _Batch(S.equations)
    r = target.neq
    degs = target.degs
    start = _StartSystem(degs)
    gamma = np.exp(2j * np.pi * rng.random())
    chart = rng.normal(size=r + 1) + 1j * rng.normal(size=r + 1)
    hom = _Homotopy(target, start, gamma, chart)

    if math.prod(int(d) for d in degs) > MAX_PATHS:
        raise CapacityError(f"Bezout number {math.prod(int(d) for d in degs)} exceeds {MAX_PATHS} paths")
    roots = [np.exp(2j * np.pi * np.arange(d) / d) for d in degs]
    Y = np.array(list(itertools.product(*roots)), dtype=complex).reshape(-1, r)
    X0 = np.hstack([np.ones((len(Y), 1)), Y])
    X0 = X0 / (X0 @ chart)[:, None]
    npaths = len(X0)

    X, t_end, ok = _track(hom, X0, tol, predictor)
    retracks = 0
    cur = tol
    while True:
        status, sols, res = _classify(S, target, chart, X, t_end, ok, cur)
        good = [i for i, s in enumerate(status) if s == "solution"]
        keep, dups = _dedup(sols[good], tol.dedup) if good else ([], [])
        if not dups or retracks >= max_retracks:
            break
        # duplicate regular endpoints mean two paths merged: retrack tighter
        retracks += 1
        cur = Tolerances(**{**asdict(cur), "track": cur.track * 1e-2,
                            "max_step": cur.max_step / 4})
        bad = sorted({good[i] for i in dups} | {good[k] for k in keep
                      if any(np.linalg.norm(sols[good[k]] - sols[good[d]])
                             <= tol.dedup * max(1.0, np.linalg.norm(sols[good[k]])) for d in dups)})
        Xr, tr, okr = _track(hom, X0[bad], cur, predictor)
        X[bad], t_end[bad], ok[bad] = Xr, tr, okr

    for d in dups:
        status[good[d]] = "duplicate"
    distinct = [sols[good[k]] for k in keep]
    failures = sum(s in ("failed", "residual") for s in status)
    resid = [res[good[k]] for k in keep]
    return SolveReport(
        paths_tracked=npaths,
        solutions=[list(map(complex, s)) for s in distinct],
        failures=int(failures),
        ml_degree=len(distinct),
        residual_max=float(max(resid)) if resid else 0.0,
        dedup_tolerance=tol.dedup,
        path_status=status,
        bezout_number=int(npaths),
        seed=seed if seed is None or isinstance(seed, int) else str(seed),
        flagged=failures > tol.max_failure_rate * npaths,
        retracks=retracks,
    )


def _classify(S, target, chart, X, t_end, ok, tol):
    """Per-path status and refined affine endpoints.

    A path that stalls within ``tol.stall`` of t = 1 is heading into a
    singular endpoint (a regular endpoint has an invertible Jacobian and is
    reached without trouble), so it is not counted as a failure.  A finished
    path whose endpoint moves under refinement was not at a regular
    solution either.
    """
    n, nv = X.shape
    scale = np.linalg.norm(X, axis=1)
    at_inf = np.abs(X[:, 0]) < tol.infinity * scale
    with np.errstate(all="ignore"):
        phi = X[:, 1:] / X[:, :1]
    status = ["pending"] * n
    cand = np.nonzero(ok & ~at_inf & np.isfinite(phi).all(axis=1))[0]
    sols = np.full((n, nv - 1), np.nan, dtype=complex)
    res = np.full(n, np.inf)
    if len(cand):
        sols[cand] = _newton_affine(target, phi[cand], tol)
    for i in range(n):
        if not ok[i]:
            status[i] = "singular_endpoint" if t_end[i] >= 1.0 - tol.stall else "failed"
            continue
        if at_inf[i]:
            status[i] = "infinity"
            continue
        p = sols[i]
        if not np.isfinite(p).all():
            status[i] = "singular_endpoint"
            continue
        Xr = np.concatenate([[1.0], p])
        with np.errstate(all="ignore"):
            Xr = Xr / (Xr @ chart)
        if not np.linalg.norm(Xr - X[i]) <= tol.drift * scale[i]:
            status[i] = "singular_endpoint"
            continue
        if np.min(np.abs(p)) < tol.torus * max(1.0, float(np.max(np.abs(p)))):
            status[i] = "off_torus"
            continue
        cond = _log_condition(target, p[None, :])[0]
        if not cond < tol.condition:
            status[i] = "singular"
            continue
        r = float(np.max(S.laurent_residual(p)))
        res[i] = r
        if r > tol.residual:
            status[i] = "residual"
            continue
        status[i] = "solution"
    return status, sols, res


class InconsistentCount(RuntimeError):
    def __init__(self, reports):
        self.reports = reports
        counts = [r.ml_degree for r in reports]
        super().__init__(f"solution counts disagree across trials: {counts}")


def ml_degree_numeric(F: ModelFamily, w: Scaling, trials: int = 2, seed=None,
                      predictor: str = "euler") -> int:
    """Solver ML degree, required to agree over ``trials`` random data vectors."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    ss = np.random.SeedSequence(seed)
    reports = []
    for child in ss.spawn(trials):
        sub = np.random.default_rng(child)
        S = build_system(F, w, "random", seed=sub.integers(2**63))
        reports.append(solve(S, seed=int(sub.integers(2**63)), predictor=predictor))
    counts = {r.ml_degree for r in reports}
    if len(counts) != 1:
        raise InconsistentCount(reports)
    return reports[0].ml_degree
