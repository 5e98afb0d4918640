import json

import pytest

from primsieve.criteria import EVEN_R, char_bound, hypersieve_witness
from primsieve.fixtures import (
    FixtureParseError,
    FixtureSet,
    FixtureValidationError,
    bundled_fixtures,
    parse_fixture_text,
    parse_fixtures,
    serialize_fixtures,
)
from primsieve.numtheory import factorize
from primsieve.tables import FactorSource, build_table, compress, r_scope
from reference_values import POSSIBLE, TABLE3, TABLE4, TABLE5


def test_parse_examples():
    fx = parse_fixture_text("5 4 2^4 3 13\n3 2 2^3  # eight\n\n# comment only\n")
    assert fx.get(5, 4).factors == ((2, 4), (3, 1), (13, 1))
    assert fx.get(3, 2).n == 8
    assert len(fx) == 2 and (5, 4) in fx


@pytest.mark.parametrize(
    "text,err,needle",
    [
        ("5 4 2^4 3 14", FixtureValidationError, "14 is not prime"),
        ("5 4 2^4 3 11", FixtureValidationError, "multiply"),
        ("5 4 2^4 3 13\n5 4 2^4 3 13", FixtureValidationError, "duplicate"),
        ("5 4 2^4 2^1 3 13", FixtureValidationError, "twice"),
        ("5 4", FixtureParseError, ":1:"),
        ("3 2 2^3\n5 4 2^x", FixtureParseError, ":2:"),
        ("1 4 2", FixtureParseError, "bad (q, r)"),
    ],
)
def test_parse_errors(text, err, needle):
    with pytest.raises(err, match=None) as info:
        parse_fixture_text(text)
    assert needle in str(info.value)


def test_validation_error_names_pair():
    with pytest.raises(FixtureValidationError) as info:
        parse_fixture_text("5 4 2^4 3 14")
    assert info.value.key == (5, 4)


def test_round_trip(tmp_path):
    fx = bundled_fixtures()
    text = serialize_fixtures(fx)
    again = parse_fixture_text(text)
    assert again.entries == fx.entries
    assert serialize_fixtures(again) == text
    path = tmp_path / "f.txt"
    path.write_text(text)
    assert parse_fixtures(path).entries == fx.entries


def test_bundled_fixtures_are_exact():
    fx = bundled_fixtures()
    assert len(fx) > 100
    for (q, r), f in fx.entries.items():
        assert f.n == q**r - 1
    # a sample of entries against an independent factorization
    for (q, r) in [(4, 20), (3, 24), (4, 33), (3, 40)]:
        assert fx.get(q, r).factors == factorize(q**r - 1).factors


def test_merge_prefers_new_entries():
    a = parse_fixture_text("5 4 2^4 3 13")
    b = parse_fixture_text("3 2 2^3")
    m = a.merged(b)
    assert set(m.entries) == {(5, 4), (3, 2)}


def test_compress():
    assert compress([1, 2, 3, 5, 7, 8]) == "1-3,5,7,8"
    assert compress([]) == "none"
    assert compress([4]) == "4"


def test_table1_and_table2():
    t1 = build_table("1")
    assert [(row["q"], row["N"]) for row in t1.rows] == [(5, 61367), (7, 1316), (8, 756), (9, 541)]
    t2 = {row["q"]: row for row in build_table("2").rows}
    assert (t2[7]["omega_threshold"], t2[7]["r_threshold"]) == (31, 52)
    assert build_table("2").to_tsv() == build_table("2").to_tsv()


@pytest.fixture(scope="module")
def source():
    return FactorSource()


def _rows(table_id, source):
    return {row["q"]: row for row in build_table(table_id, source).rows}


@pytest.mark.parametrize("q", [9, 8, 7, 5])
def test_table3_rows(source, q):
    row = _rows("3", source)[q]
    (lo, hi), eliminated = TABLE3[q]
    assert row["checked"] == [lo, hi]
    assert row["eliminated"] == eliminated


@pytest.mark.parametrize("q", [9, 7, 5])
def test_table4_rows(source, q):
    row = _rows("4", source)[q]
    (lo, hi), eliminated = TABLE4[q]
    assert row["checked"] == [lo, hi]
    assert row["eliminated"] == eliminated


def test_q8_r18_passes_even_bound(source):
    # (8, 18) satisfies the even-r inequality at s = 4, so the sieve lists it
    f = source.get(8, 18)
    assert hypersieve_witness(8, 18, f, char_bound(EVEN_R, 8, 18)) == 4
    assert 18 in _rows("4", source)[8]["eliminated"]


@pytest.mark.parametrize("q", [9, 8, 7, 5])
def test_table5_rows(source, q):
    row = _rows("5", source)[q]
    (lo, hi), eliminated = TABLE5[q]
    assert row["checked"] == [lo, hi]
    assert row["eliminated"] == eliminated


def test_table5_criterion_labels(source):
    row = _rows("5", source)[8]
    assert set(row["criterion"]) == {str(r) for r in row["eliminated"]}
    assert set(row["criterion"].values()) <= {"fr_criterion1", "fr_criterion2"}


def test_small_q_rows_up_to_40(source):
    cap = 40
    t3, t4, t5 = _rows("3", source), _rows("4", source), _rows("5", source)
    for q in (4, 3):
        if q in TABLE3:
            assert [r for r in t3[q]["eliminated"] if r <= cap] == [r for r in TABLE3[q][1] if r <= cap]
        assert [r for r in t4[q]["eliminated"] if r <= cap] == [r for r in TABLE4[q][1] if r <= cap]
        assert [r for r in t5[q]["eliminated"] if r <= cap] == [r for r in TABLE5[q][1] if r <= cap]


def test_small_q_full_rows(source):
    t3, t4, t5 = _rows("3", source), _rows("4", source), _rows("5", source)
    assert t4[3]["eliminated"] == TABLE4[3][1] and t4[3]["checked"] == [4, 268]
    for q in (4, 3):
        assert (t5[q]["checked"], t5[q]["eliminated"]) == (list(TABLE5[q][0]), TABLE5[q][1])
    # the optimal-k bound also removes 122, 134 and 210 for q = 4 (r = 2 mod 4,
    # where it halves the ceiling bound); each of them falls to the even-r bound anyway
    extra = sorted(set(t3[4]["eliminated"]) - set(TABLE3[4][1]))
    assert extra == [122, 134, 210] and set(TABLE3[4][1]) <= set(t3[4]["eliminated"])
    assert set(extra) <= set(TABLE4[4][1])
    # hence the even-r pass for q = 4 stops at 180 rather than 210
    assert t4[4]["checked"] == [2, 180]
    assert t4[4]["eliminated"] == [r for r in TABLE4[4][1] if r <= 180]


def test_partial_rows_are_all_settled(source):
    row = _rows("3", source)[4]
    assert len(row["partial_factorization"]) == 25 and row["partial_unsettled"] == []


def test_main_lists(source):
    rows = _rows("main", source)
    for q in (5, 7, 8, 9):
        assert rows[q]["possible_exceptions"] == POSSIBLE[q]
        assert rows[q]["unresolved"] == []
    for q in (3, 4):
        assert rows[q]["possible_exceptions"] == POSSIBLE[q]
        assert rows[q]["unresolved"] == []
    assert rows[5]["genuine"] == [2]
    assert rows[3]["genuine"] == [2, 3] and rows[3]["odd_r_open"]


def test_missing_factorizations_are_reported():
    src = FactorSource(FixtureSet(), compute=False)
    art = build_table("main", src)
    assert art.missing and all(key in src.missing for key in art.missing)
    row = {r["q"]: r for r in art.rows}[9]
    assert row["unresolved"] == r_scope(9)
    tsv = art.to_tsv()
    assert tsv.splitlines()[-1].startswith("# missing factorizations: ")
    assert "9,13" in tsv.splitlines()[-1]
    assert json.loads(art.to_json())["missing"][0] == list(art.missing[0])


def test_small_q_is_never_computed():
    src = FactorSource(FixtureSet(), partials={})
    assert src.get(4, 50) is None and (4, 50) in src.missing
    assert src.get(5, 6) is not None


def test_table_rendering_is_stable(source):
    a = build_table("5", source)
    b = build_table("5", source)
    assert a.to_json() == b.to_json() and a.to_tsv() == b.to_tsv()
    payload = json.loads(a.to_json())
    assert payload["schema"] == 1 and payload["table"] == "5"


def test_unknown_table_id():
    with pytest.raises(ValueError):
        build_table("6")
