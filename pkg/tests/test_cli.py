from __future__ import annotations

import csv
import io
import json

import pytest
from hypothesis import given, settings, strategies as st

from sidonlab import constructions
from sidonlab.cli import OutputRecord, ParseError, parse_set_text, run
from sidonlab.search import clear_cache
from sidonlab.sets import CertifiedSet, ConstructionCertificate, IntegerSet


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def as_json(*argv):
    code, out, _ = call(*argv, "--format", "json")
    return code, json.loads(out)


def test_construct_ruzsa_default_theta():
    code, rec = as_json("construct", "ruzsa", "--p", "13")
    assert code == 0
    assert rec["result"]["elements"] == [10, 16, 57, 59, 90, 99, 115, 134, 144, 145, 149, 152]
    assert rec["result"]["certificate"]["modulus"] == 156 and rec["result"]["verified"]
    assert rec["provenance"]["version"] and "wall_time" in rec["provenance"]


@pytest.mark.parametrize("argv", [
    ["construct", "greedy", "--count", "11"],
    ["construct", "bose", "--q", "7"],
    ["construct", "bose", "--q", "5", "--K", "1,2"],
    ["construct", "singer", "--q", "4"],
    ["construct", "erdos-turan", "--p", "11"],
    ["construct", "ruzsa", "--p", "7", "--K", "1,2,3"],
])
def test_construct_outputs_verify(argv):
    code, rec = as_json(*argv)
    assert code == 0 and rec["result"]["verified"]


def test_greedy_plain_output():
    code, out, _ = call("construct", "greedy", "--count", "11")
    assert code == 0
    assert out.splitlines()[0] == "1 2 4 8 13 21 31 45 66 81 97"


def test_construct_from_files(tmp_path):
    a = tmp_path / "a.txt"
    a.write_text("# a Sidon set\n1\n2\n4\n8\n")
    code, rec = as_json("construct", "interleave", "--file", str(a), "--m", "3")
    assert code == 0 and rec["result"]["certificate"]["g"] == 6 and rec["result"]["size"] == 12
    x, y = tmp_path / "x.txt", tmp_path / "y.txt"
    x.write_text("mod 7\n0\n1\n3\n")
    y.write_text("mod 13\n0\n1\n3\n9\n")
    code, rec = as_json("construct", "crt", "--file-a", str(x), "--file-b", str(y))
    assert code == 0 and rec["result"]["modulus"] == 91 and rec["result"]["verified"]
    code, _, err = call("construct", "crt", "--file-a", str(a), "--file-b", str(y))
    assert code == 2 and "mod N" in err


def test_random_is_deterministic_under_seed():
    argv = ["construct", "random", "--g", "4", "--epsilon", "0.3", "--N", "2000", "--seed", "11"]
    c1, r1 = as_json(*argv)
    c2, r2 = as_json(*argv)
    assert c1 == c2 == 0
    assert r1["result"] == r2["result"] and r1["provenance"]["seed"] == 11


def test_verify_exit_codes(tmp_path):
    good, bad = tmp_path / "good.txt", tmp_path / "bad.txt"
    good.write_text("0\n1\n4\n6\n")
    bad.write_text("0\n1\n2\n")
    code, rec = as_json("verify", "--file", str(good))
    assert code == 0 and rec["result"]["verdict"] == "PASS"
    code, rec = as_json("verify", "--file", str(bad))
    assert code == 1 and rec["result"]["verdict"] == "FAIL" and rec["result"]["worst"] == [2, 3]
    code, rec = as_json("verify", "--file", str(bad), "--g", "3")
    assert code == 0


def test_verify_modular(tmp_path):
    f = tmp_path / "s.txt"
    f.write_text("mod 7\n0\n1\n3\n")
    code, rec = as_json("verify", "--file", str(f))
    assert code == 0 and rec["parameters"]["mod"] == 7


def test_usage_errors(tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("1\nx\n")
    assert call("verify", "--file", str(f))[0] == 2
    assert call("verify", "--file", str(tmp_path / "missing.txt"))[0] == 2
    assert call("construct", "ruzsa", "--p", "15")[0] == 2
    assert call("search", "R")[0] == 2
    assert call("bogus")[0] == 2


def test_internal_inconsistency_exit_code(monkeypatch):
    def broken(p):
        return CertifiedSet(IntegerSet([1, 2, 3]), ConstructionCertificate(2, 2, None, "erdos_turan"))

    monkeypatch.setattr(constructions, "erdos_turan_set", broken)
    code, _, err = call("construct", "erdos-turan", "--p", "5")
    assert code == 3 and "re-verification" in err


def test_search_commands():
    code, rec = as_json("search", "R", "--n", "20")
    assert code == 0 and rec["result"]["optimum"] == 6 and rec["result"]["exactness"] == "EXACT"
    code, rec = as_json("search", "C", "--n", "13")
    assert code == 0 and rec["result"]["optimum"] == 4
    code, rec = as_json("search", "shortest", "--k", "7", "--all-witnesses")
    assert rec["result"]["optimum"] == 25 and len(rec["result"]["witnesses"]) == 5
    code, rec = as_json("search", "shortest", "--k", "7", "--count-only")
    assert rec["result"]["count"] == 5 and rec["result"]["witnesses"] == []


def test_search_budget_and_strict():
    clear_cache()
    code, rec = as_json("search", "shortest", "--k", "14", "--budget", "0.2")
    assert code == 0 and rec["result"]["exactness"] == "LOWER_BOUND" and rec["result"]["budget_exhausted"]
    clear_cache()
    code, _, _ = call("search", "shortest", "--k", "14", "--budget", "0.2", "--strict")
    assert code == 4


def test_search_checkpoint_cli(tmp_path):
    path = str(tmp_path / "ck.json")
    for _ in range(100):
        clear_cache()
        code, rec = as_json("search", "shortest", "--k", "10", "--budget", "0.2", "--checkpoint", path)
        assert code == 0
        if rec["result"]["exactness"] == "EXACT" and not rec["result"].get("budget_exhausted"):
            break
    assert rec["result"]["optimum"] == 55


def test_tables_csv():
    code, out, _ = call("tables", "shortest-sidon", "--max-k", "6", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["k", "diameter", "exactness", "witness"]
    assert [int(r[1]) for r in rows[1:]] == [1, 3, 6, 11, 17]
    code, out, _ = call("tables", "min-n", "--max-g", "3", "--max-k", "5", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert {(r["g"], r["k"]): r["min_n"] for r in rows}[("3", "5")] == "8"
    code, out, _ = call("tables", "greedy-growth", "--count", "10", "--format", "csv")
    assert code == 0 and out.count("\n") == 10


def test_analyze(tmp_path):
    f = tmp_path / "a.txt"
    f.write_text("1\n2\n4\n8\n13\n")
    code, rec = as_json("analyze", "sumset-intervals", "--file", str(f))
    assert code == 0 and rec["result"]["count"] == len(rec["result"]["intervals"])
    code, rec = as_json("analyze", "residues", "--file", str(f), "--m", "2")
    assert rec["result"]["class_counts"] == [3, 2] and rec["result"]["parity_gap"] == 1
    code, rec = as_json("analyze", "reciprocal", "--file", str(f), "--prefixes", "1,3")
    assert [s[1] for s in rec["result"]["partial_sums"]] == ["1/1", "7/4"]
    g = tmp_path / "z.txt"
    g.write_text("0\n1\n")
    assert call("analyze", "reciprocal", "--file", str(g))[0] == 2


json_values = st.recursive(
    st.none() | st.booleans() | st.integers() | st.text(max_size=8)
    | st.floats(allow_nan=False, allow_infinity=False),
    lambda kids: st.lists(kids, max_size=4) | st.dictionaries(st.text(max_size=5), kids, max_size=4),
    max_leaves=12,
)


@settings(max_examples=200, deadline=None)
@given(st.text(max_size=10), st.dictionaries(st.text(max_size=5), json_values, max_size=4),
       st.dictionaries(st.text(max_size=5), json_values, max_size=4))
def test_output_record_round_trip(command, params, result):
    rec = OutputRecord(command, params, result, {"version": "x", "seed": None})
    assert OutputRecord.from_json(rec.to_json()) == rec


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 10**6), max_size=20), st.one_of(st.none(), st.integers(1, 10**6)))
def test_set_file_round_trip(els, modulus):
    text = ("mod %d\n" % modulus if modulus else "") + "# comment\n" + "\n".join(f"{a}  # x" for a in els)
    got, mod = parse_set_text(text)
    assert got == els and mod == modulus


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_set_text("mod zero\n1\n")
    with pytest.raises(ParseError):
        parse_set_text("1.5\n")
