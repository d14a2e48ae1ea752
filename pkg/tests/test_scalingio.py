import json
from importlib import resources

import pytest

from mldeg.catalog import HYPERSIMPLEX5_SCALINGS, SEGRE33_SCALINGS, triple3_flat
from mldeg.exact import QI3
from mldeg.models import Scaling
from mldeg.scalingio import dump_scaling, load_scaling, load_scalings, parse_segre_csv, segre_to_csv

DATA = resources.files("mldeg") / "data"


def test_bundled_segre():
    items = load_scalings(DATA / "segre33.csv", "segre")
    assert [w for w, _ in items] == [Scaling.segre(w) for w in SEGRE33_SCALINGS]


def test_bundled_triple():
    items = load_scalings(DATA / "triple3.json", "triple")
    assert [w for w, _ in items] == [Scaling.triple_flat(triple3_flat(i)) for i in range(12)]


def test_bundled_hypersimplex():
    items = load_scalings(DATA / "hypersimplex5.json", "hypersimplex")
    assert [w for w, _ in items] == [Scaling.hypersimplex(5, e) for e, _, _ in HYPERSIMPLEX5_SCALINGS]


def test_csv_roundtrip_and_comments():
    w = Scaling.segre([["1/2", 3, -4], [5, "0.25", 7]])
    text = "# comment\n" + segre_to_csv(w) + "\n\n" + segre_to_csv(w)
    assert parse_segre_csv(text) == [w, w]


def test_bad_block_does_not_stop_the_file(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text("1,2\n3,4\n\n1,0\n1,1\n\n1,1,1\n1,2,3\n")
    items = load_scalings(p, "segre")
    assert items[0][1] is None and items[2][1] is None
    assert items[1][0] is None and "nonzero" in items[1][1]


def test_json_forms(tmp_path):
    p = tmp_path / "t.json"
    p.write_text(json.dumps([[[1, 2], [3, 4]], [[5, 6], [7, 8]]]))
    (w, err), = load_scalings(p, "triple")
    assert err is None and w.tensor() == [[[1, 2], [3, 4]], [[5, 6], [7, 8]]]
    p.write_text(json.dumps({"d": 4, "w": {"12": {"a": 1, "b": 0, "c": 0, "d": 1}}}))
    h = load_scaling(p, "hypersimplex")
    assert h[(1, 2)] == QI3(1, 0, 0, 1)
    p.write_text(json.dumps({"scalings": [{"d": 4}, {"d": 3}]}))
    items = load_scalings(p, "hypersimplex")
    assert items[0][1] is None and items[1][0] is None
    with pytest.raises(ValueError):
        load_scaling(p, "hypersimplex")


def test_dump_roundtrip(tmp_path):
    for w in [Scaling.segre([[1, 2], [3, "1/3"]]), Scaling.triple_flat(triple3_flat(9)),
              Scaling.hypersimplex(5, HYPERSIMPLEX5_SCALINGS[6][0])]:
        p = tmp_path / "x.json"
        p.write_text(json.dumps(dump_scaling(w)))
        assert load_scaling(p, w.family.kind) == w
