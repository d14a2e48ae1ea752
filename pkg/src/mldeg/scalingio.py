"""Reading and writing scaling files.

* Segre: CSV matrix, one row per line; several matrices are separated by a
  blank line.  Entries are integers, ``p/q`` or decimals.
* SegreTriple: JSON nested arrays ``[i][j][k]``, or ``{"flat": [...]}`` in
  column order (blocks of four per k).
* Hypersimplex2: JSON ``{"d": 5, "w": {"12": .., "13": .., ...}}``; missing
  pairs default to 1.

Any of the JSON forms may also be given as a list, or as
``{"scalings": [...]}``, to hold several scalings.  Non-rational entries use
``{"a":..,"b":..,"c":..,"d":..}`` for a + b*sqrt3 + (c + d*sqrt3)*i.
"""
from __future__ import annotations

import csv
import io
import json

from .exact import scalar_to_json
from .models import Scaling


def _csv_blocks(text: str) -> list[list[str]]:
    blocks, cur = [], []
    for line in text.splitlines():
        if line.strip().startswith("#"):
            continue
        if not line.strip():
            if cur:
                blocks.append(cur)
                cur = []
            continue
        cur.append(line)
    if cur:
        blocks.append(cur)
    return blocks


def _csv_scaling(block: list[str]) -> Scaling:
    rows = [[c.strip() for c in r] for r in csv.reader(io.StringIO("\n".join(block)))]
    return Scaling.segre(rows)


def parse_segre_csv(text: str) -> list[Scaling]:
    return [_csv_scaling(b) for b in _csv_blocks(text)]


def _one(kind: str, obj) -> Scaling:
    if kind == "segre":
        return Scaling.segre(obj)
    if kind == "triple":
        if isinstance(obj, dict):
            return Scaling.triple_flat(obj["flat"])
        return Scaling.triple(obj)
    if kind == "hypersimplex":
        return Scaling.hypersimplex(int(obj["d"]), obj.get("w", {}))
    raise ValueError(f"unknown family {kind!r}")


def _items(kind: str, data) -> list:
    if isinstance(data, dict) and "scalings" in data:
        return list(data["scalings"])
    if kind == "segre" and isinstance(data, list) and data and isinstance(data[0], list) \
            and data[0] and not isinstance(data[0][0], list):
        return [data]  # a single matrix
    if kind == "triple" and isinstance(data, list) and len(data) == 2 \
            and all(isinstance(x, list) and x and isinstance(x[0], list) for x in data) \
            and not isinstance(data[0][0][0], list):
        return [data]  # a single tensor
    if isinstance(data, list):
        return data
    return [data]


def load_scalings(path, kind: str):
    """All scalings in a file as a list of ``(Scaling or None, error or None)``."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    if kind == "segre" and not stripped.startswith(("[", "{")):
        out = []
        for block in _csv_blocks(text):
            try:
                out.append((_csv_scaling(block), None))
            except (ValueError, TypeError, ZeroDivisionError) as exc:
                out.append((None, f"{type(exc).__name__}: {exc}"))
        return out
    data = json.loads(text)
    out = []
    for item in _items(kind, data):
        try:
            out.append((_one(kind, item), None))
        except (ValueError, TypeError, KeyError, IndexError) as exc:
            out.append((None, f"{type(exc).__name__}: {exc}"))
    return out


def load_scaling(path, kind: str) -> Scaling:
    items = load_scalings(path, kind)
    if len(items) != 1:
        raise ValueError(f"expected exactly one scaling in {path}, found {len(items)}")
    w, err = items[0]
    if err:
        raise ValueError(err)
    return w


def dump_scaling(w: Scaling):
    """JSON-ready object in the family's file format."""
    kind = w.family.kind
    if kind == "segre":
        M = w.matrix()
        return [[scalar_to_json(x) for x in M.row(i)] for i in range(M.rows)]
    if kind == "triple":
        return [[[scalar_to_json(x) for x in row] for row in plane] for plane in w.tensor()]
    (d,) = w.family.params
    return {"d": d, "w": {f"{i}{j}": scalar_to_json(v) for (i, j), v in zip(w.family.labels, w.values)}}


def segre_to_csv(w: Scaling) -> str:
    M = w.matrix()
    return "\n".join(",".join(scalar_to_json(x) for x in M.row(i)) for i in range(M.rows)) + "\n"
