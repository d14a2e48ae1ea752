import csv
import io
import json
import random
from collections import Counter
from math import comb

import pytest
from hypothesis import given, strategies as st

from mldeg.arrangement import CapacityError
from mldeg.catalog import SPECIAL_TALLY_8_4, SPECIAL_TALLY_9_4, SPECIAL_TOTAL_8_4, SPECIAL_TOTAL_9_4
from mldeg.dataio import (
    SCALING_COLUMNS, SCHEMA, MatroidParseError, MatroidRecord, StratReport, check_capacity,
    emit_report, parse_line, parse_matroid_db, revlex_subsets, special_beta_tally,
)
from mldeg.matroid import beta_invariant, is_special, mask, matroid_from_matrix, uniform_matroid


def random_matroid(rng, n, r):
    while True:
        M = [[rng.choice([0, 0, 1, -1, 2]) for _ in range(n)] for _ in range(r)]
        try:
            mat = matroid_from_matrix(M)
        except ValueError:
            continue
        if mat.rank == r:
            return mat


def test_revlex_prefix():
    got = ["".join(str(e + 1) for e in s) for s in revlex_subsets(4, 2)]
    assert got == ["12", "13", "23", "14", "24", "34"]


@pytest.mark.parametrize("n,r", [(5, 2), (6, 3), (8, 4), (7, 1)])
def test_revlex_is_bitmask_order(n, r):
    subs = revlex_subsets(n, r)
    assert len(subs) == comb(n, r)
    keys = [mask(s) for s in subs]
    assert keys == sorted(keys)


def test_parse_line_and_stars():
    rec = parse_line("*0*1**", 4, 2, line=3)
    assert rec.bits == "101111" and rec.source_line == 3
    assert rec.to_matroid().bases == frozenset(mask(s) for s in [(0, 1), (1, 2), (0, 3), (1, 3), (2, 3)])


@pytest.mark.parametrize("text,msg", [("10101", "expected 6"), ("10102x", "unexpected"),
                                      ("000000", "no basis")])
def test_parse_errors(text, msg):
    with pytest.raises(MatroidParseError) as exc:
        parse_line(text, 4, 2, line=7)
    assert msg in str(exc.value) and exc.value.line == 7


@given(st.integers(0, 10_000), st.sampled_from([(4, 2), (5, 2), (5, 3), (6, 3)]))
def test_record_roundtrip(seed, nr):
    n, r = nr
    M = random_matroid(random.Random(seed), n, r)
    rec = MatroidRecord.from_matroid(M)
    back = parse_line(rec.serialize(), n, r)
    assert back.to_matroid() == M


def test_file_parsing(tmp_path):
    p = tmp_path / "db.txt"
    p.write_text("111111\n\n011111\n")
    recs = list(parse_matroid_db(p, 4, 2))
    assert [r.source_line for r in recs] == [1, 3]
    e = tmp_path / "empty.txt"
    e.write_text("")
    assert list(parse_matroid_db(e, 4, 2)) == []
    bad = tmp_path / "bad.txt"
    bad.write_text("111111\n11\n")
    with pytest.raises(MatroidParseError) as exc:
        list(parse_matroid_db(bad, 4, 2))
    assert exc.value.line == 2


def test_capacity():
    check_capacity(9, 4)
    with pytest.raises(CapacityError, match="4 886 380 924"):
        check_capacity(10, 4)
    with pytest.raises(CapacityError):
        next(parse_matroid_db("missing-file-never-opened", 10, 4))


def test_uniform_record_is_special():
    rep = special_beta_tally([MatroidRecord.from_matroid(uniform_matroid(4, 8))])
    assert rep.special_records == 1 and rep.tallies == {comb(6, 3): 1}


def test_tally_matches_direct_computation():
    rng = random.Random(21)
    Ms = [random_matroid(rng, 7, 3) for _ in range(60)]
    recs = [MatroidRecord.from_matroid(M) for M in Ms]
    rep = special_beta_tally(recs)
    expected = Counter(beta_invariant(M) for M in Ms if is_special(M)[0])
    assert rep.tallies == dict(expected)
    assert rep.total_records == 60
    assert rep.special_records == sum(is_special(M)[0] for M in Ms)
    full = special_beta_tally(recs, special_only=False)
    assert full.tallies == dict(Counter(beta_invariant(M) for M in Ms))
    assert special_beta_tally(recs, limit=10).total_records == 10


def test_reference_tallies_are_consistent():
    assert sum(SPECIAL_TALLY_8_4.values()) == SPECIAL_TOTAL_8_4[0] == 568
    assert sum(SPECIAL_TALLY_9_4.values()) == SPECIAL_TOTAL_9_4[0] == 185253
    assert max(SPECIAL_TALLY_8_4) == comb(6, 3)
    assert max(SPECIAL_TALLY_9_4) == comb(7, 3)


def test_emit_formats():
    rep = StratReport("tally", {"n": 4, "rank": 2}, tallies={2: 1, 1: 3}, total_records=5,
                      special_records=4)
    d = json.loads(emit_report(rep, "json"))
    assert d["schema"] == SCHEMA and d["tallies"] == {"1": 3, "2": 1}
    rows = list(csv.reader(io.StringIO(emit_report(rep, "csv"))))
    assert rows == [["beta", "count"], ["1", "3"], ["2", "1"]]
    text = emit_report(rep, "text")
    assert "special: 4" in text and "beta   2: 1" in text
    with pytest.raises(ValueError):
        emit_report(rep, "xml")


def test_emit_scaling_rows():
    rep = StratReport("scalings", {"family": "segre"},
                      rows=[{"index": 0, "scaling": [[1, 2], [3, 4]], "signature": "(*)", "ml_degree": 2,
                             "method": "beta", "iso_class": 0},
                            {"index": 1, "error": "bad"}])
    rows = list(csv.reader(io.StringIO(emit_report(rep, "csv"))))
    assert tuple(rows[0]) == SCALING_COLUMNS
    assert rows[1][1] == "[[1, 2], [3, 4]]" and rows[2][-1] == "bad"
    text = emit_report(rep, "text")
    assert "ML degree 2 (beta)  class 0" in text and "[1] error: bad" in text
