"""Per-scaling stratification reports."""
from __future__ import annotations

from .dataio import StratReport
from .matroid import hasse_diagram, isomorphism_classes, matroid_from_matrix
from .models import (degree, extended_matrix, ml_degree_combinatorial, ml_degree_upper_bound,
                     signature)
from .scalingio import dump_scaling
from .solver import InconsistentCount, ml_degree_numeric


def stratify(kind: str, items, trials: int = 2, seed=0) -> StratReport:
    """One row per scaling: signature, ML degree and (Segre) matroid class.

    ``items`` is a list of ``(Scaling or None, error or None)``.  Rows with
    errors are kept so that a bad line does not stop the run.  For Segre
    files the weak-order Hasse diagram on the classes is stored under
    ``extra["hasse"]``.
    """
    rows, errors = [], []
    matroids, owners = [], []
    for idx, (w, err) in enumerate(items):
        if err is not None:
            rows.append({"index": idx, "error": err})
            errors.append({"index": idx, "error": err})
            continue
        if w.family.kind != kind:
            msg = f"expected {kind}, got {w.family.kind}"
            rows.append({"index": idx, "error": msg})
            errors.append({"index": idx, "error": msg})
            continue
        row = {"index": idx, "scaling": dump_scaling(w), "signature": signature(w).pattern_string()}
        try:
            if kind == "segre":
                row["ml_degree"] = ml_degree_combinatorial(w)
                row["method"] = "beta"
                matroids.append(matroid_from_matrix(extended_matrix(w)))
                owners.append(len(rows))
            else:
                row["ml_degree"] = ml_degree_numeric(w.family, w, trials=trials, seed=seed)
                row["method"] = "solve"
                if kind == "hypersimplex":
                    row["upper_bound"] = ml_degree_upper_bound(w)
        except InconsistentCount as exc:
            row["error"] = str(exc)
            errors.append({"index": idx, "error": str(exc)})
        row["degree"] = degree(w.family)
        rows.append(row)
    extra = {}
    if kind == "segre" and matroids:
        classes = isomorphism_classes(matroids)
        reps = sorted(set(classes))
        ids = {r: t for t, r in enumerate(reps)}
        for pos, c in zip(owners, classes):
            rows[pos]["iso_class"] = ids[c]
        edges = hasse_diagram([matroids[r] for r in reps])
        extra["classes"] = len(reps)
        extra["hasse"] = [list(e) for e in edges]
        extra["class_ml_degree"] = [rows[owners[r]]["ml_degree"] for r in reps]
    params = {"family": kind, "scalings": len(items)}
    return StratReport("scalings", params, rows=rows, errors=errors, extra=extra)
