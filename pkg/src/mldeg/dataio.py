"""Matroid database files and stratification reports.

A database line lists, for every r-subset of ``{1..n}`` in reverse
lexicographic order, whether it is a basis.  Reverse lexicographic means
subsets are compared by their largest element first, so for ``(n, r) = (4, 2)``
the order starts ``12, 13, 23, 14, 24, 34``.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Iterator

from . import kernels
from .arrangement import CapacityError
from .matroid import LinearMatroid

SCHEMA = "mldeg.stratreport/1"
BASIS_CHARS = {"0": False, "1": True, "*": True}

# largest database handled: rank 4 on 9 elements (the P^3 x P^4 case)
MAX_POSITIONS = comb(9, 4)


def revlex_subsets(n: int, r: int) -> list[tuple[int, ...]]:
    """All r-subsets of ``range(n)`` (0-based) in reverse lexicographic order."""
    return sorted(itertools.combinations(range(n), r), key=lambda s: s[::-1])


class MatroidParseError(ValueError):
    def __init__(self, line: int, msg: str):
        self.line = line
        super().__init__(f"line {line}: {msg}")


@dataclass(frozen=True)
class MatroidRecord:
    ground_size: int
    rank: int
    bits: str          # '0'/'1' per revlex position
    source_line: int = 0

    def basis_masks(self) -> list[int]:
        return [m for m, c in zip(_position_masks(self.ground_size, self.rank), self.bits) if c == "1"]

    def to_matroid(self) -> LinearMatroid:
        return LinearMatroid(self.ground_size, self.rank, frozenset(self.basis_masks()))

    def serialize(self) -> str:
        return self.bits

    @classmethod
    def from_matroid(cls, M: LinearMatroid, source_line: int = 0) -> "MatroidRecord":
        bits = "".join("1" if m in M.bases else "0" for m in _position_masks(M.n, M.rank))
        return cls(M.n, M.rank, bits, source_line)


_MASK_CACHE: dict = {}


def _position_masks(n: int, r: int) -> list[int]:
    key = (n, r)
    if key not in _MASK_CACHE:
        _MASK_CACHE[key] = [sum(1 << e for e in s) for s in revlex_subsets(n, r)]
    return _MASK_CACHE[key]


def check_capacity(n: int, r: int) -> None:
    if comb(n, r) > MAX_POSITIONS:
        extra = " (there are 4 886 380 924 matroids of rank 4 on 10 elements)" if (n, r) == (10, 4) else ""
        raise CapacityError(f"matroids of rank {r} on {n} elements are beyond desk scale{extra}")


def parse_line(text: str, n: int, r: int, line: int = 0) -> MatroidRecord:
    s = text.strip()
    expected = comb(n, r)
    if len(s) != expected:
        raise MatroidParseError(line, f"expected {expected} characters for (n, r) = ({n}, {r}), got {len(s)}")
    bad = set(s) - set(BASIS_CHARS)
    if bad:
        raise MatroidParseError(line, f"unexpected characters {sorted(bad)!r}")
    bits = "".join("1" if BASIS_CHARS[c] else "0" for c in s)
    if "1" not in bits:
        raise MatroidParseError(line, "no basis")
    return MatroidRecord(n, r, bits, line)


def parse_matroid_db(path, n: int, r: int) -> Iterator[MatroidRecord]:
    """Lazily yield one record per nonempty line of the file."""
    check_capacity(n, r)
    with open(path, "r", encoding="ascii") as fh:
        for lineno, text in enumerate(fh, start=1):
            if text.strip():
                yield parse_line(text, n, r, lineno)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass
class StratReport:
    kind: str                      # "tally" or "scalings"
    params: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)
    tallies: dict = field(default_factory=dict)   # beta -> count
    total_records: int = 0
    special_records: int = 0
    errors: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA, "kind": self.kind, "params": self.params, "rows": self.rows,
            "tallies": {str(k): v for k, v in sorted(self.tallies.items())},
            "total_records": self.total_records, "special_records": self.special_records,
            "errors": self.errors, "extra": self.extra,
        }


def special_beta_tally(records: Iterable[MatroidRecord], limit: int | None = None,
                       special_only: bool = True) -> StratReport:
    """Tally beta invariants over the (special) records."""
    tallies: Counter = Counter()
    total = special = 0
    params: dict = {}
    for rec in records:
        if limit is not None and total >= limit:
            break
        params = {"n": rec.ground_size, "rank": rec.rank}
        total += 1
        bases = rec.basis_masks()
        is_sp = kernels.special_basis(bases, rec.ground_size, rec.rank) >= 0
        special += is_sp
        if is_sp or not special_only:
            tallies[kernels.beta_crapo(bases, rec.ground_size, rec.rank)] += 1
    params["special_only"] = special_only
    return StratReport("tally", params, tallies=dict(tallies), total_records=total,
                       special_records=special)


SCALING_COLUMNS = ("index", "scaling", "signature", "ml_degree", "method", "iso_class", "error")
TALLY_COLUMNS = ("beta", "count")


def emit_report(R: StratReport, fmt: str = "json") -> str:
    """Serialise a report.

    CSV columns: for scaling reports ``index, scaling, signature, ml_degree,
    method, iso_class, error``; for tallies ``beta, count``.
    """
    if fmt == "json":
        return json.dumps(R.to_dict(), indent=2, sort_keys=True)
    if fmt == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        if R.kind == "tally":
            wr.writerow(TALLY_COLUMNS)
            for b, c in sorted(R.tallies.items()):
                wr.writerow((b, c))
        else:
            wr.writerow(SCALING_COLUMNS)
            for row in R.rows:
                wr.writerow(tuple(_cell(row.get(c)) for c in SCALING_COLUMNS))
        return buf.getvalue()
    if fmt == "text":
        lines = [f"{R.kind} report {json.dumps(R.params, sort_keys=True)}"]
        if R.kind == "tally":
            lines.append(f"records: {R.total_records}  special: {R.special_records}")
            for b, c in sorted(R.tallies.items()):
                lines.append(f"beta {b:>3}: {c}")
        else:
            for row in R.rows:
                if row.get("error"):
                    lines.append(f"[{row['index']}] error: {row['error']}")
                else:
                    iso = f"  class {row['iso_class']}" if row.get("iso_class") is not None else ""
                    lines.append(f"[{row['index']}] {row['signature']}  ML degree {row['ml_degree']}"
                                 f" ({row['method']}){iso}")
        for key, val in sorted(R.extra.items()):
            lines.append(f"{key}: {json.dumps(val)}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (list, tuple, dict)):
        return json.dumps(v)
    return v
