import json
import os

from flagtype.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_command(capsys):
    code, out, _ = run(capsys, "classify", "--n", "7",
                       "--triple", "(7)|(4)|(1,1,1,4)")
    assert code == 0
    assert out.startswith("Finite")
    code, out, _ = run(capsys, "classify", "--n", "3", "--triple",
                       "(2)|(2)|(2)")
    assert code == 0 and out.startswith("Infinite")


def test_classify_usage_error(capsys):
    code, _, err = run(capsys, "classify", "--n", "3", "--triple", "oops")
    assert code == 2 and "usage error" in err


def test_classify_json_and_store(tmp_path, capsys):
    out_path = os.path.join(tmp_path, "store", "v.json")
    code, out, _ = run(capsys, "classify", "--n", "6", "--triple",
                       "(6)|(4)|(2,2,2)", "--json", "--out", out_path)
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "Infinite"
    assert json.load(open(out_path))["verdict"] == "Infinite"


def test_invariants_command(capsys):
    code, out, _ = run(capsys, "invariants", "--n", "3", "--q", "5",
                       "--u-plus",
                       "[[1,0,0,0,0,0],[0,1,0,0,0,0],[0,0,1,0,0,0]]",
                       "--u-minus", "[[1,0,0,0,0,0],[0,0,0,1,0,0]]")
    assert code == 0
    assert json.loads(out)["theta"] == [1, 1, 0, 1, 0]


def test_canonical_command(capsys):
    code, out, _ = run(capsys, "canonical", "--n", "2", "--q", "3",
                       "--b", "0,0,0,0,0,0,0,0,0,0,0,0,0,0,2")
    assert code == 0
    data = json.loads(out)
    assert data["representative"]["basis"] == [[1, 0, 1, 0], [0, 1, 0, 2]]
    assert data["layout"]["I"]["15"] == [1, 2]


def test_normalize_command(capsys):
    code, out, _ = run(capsys, "normalize", "--n", "2", "--q", "3",
                       "--u-plus", "[[1,0,0,0],[0,1,0,0]]",
                       "--u-minus", "[[0,0,1,0],[0,0,0,1]]")
    assert code == 0
    assert json.loads(out)["theta"] == [0, 0, 0, 2, 0]


def test_census_command(capsys):
    code, out, _ = run(capsys, "census", "--n", "2", "--q", "3",
                       "--space", "(2)", "--group", "P")
    assert code == 0
    data = json.loads(out)
    assert data["orbit_count"] == 3 and data["total"] == 8
    code, out, _ = run(capsys, "census", "--n", "2", "--q", "3",
                       "--space", "(2)", "--group", "P", "--csv")
    assert code == 0 and "orbit_count" in out.splitlines()[0]


def test_witness_command(capsys):
    code, out, _ = run(capsys, "witness", "--list")
    assert code == 0 and "O6_L322_sq" in out
    code, out, _ = run(capsys, "witness", "--family", "O4_L31_0", "--q", "3")
    assert code == 0
    assert len(json.loads(out)["classes"]) == 3
    code, _, err = run(capsys, "witness", "--family", "nope")
    assert code == 2


def test_verify_and_report(tmp_path, capsys):
    store = os.path.join(tmp_path, "store", "roundtrip.json")
    code, out, _ = run(capsys, "verify", "--suite", "roundtrip",
                       "--out", store)
    assert code == 0
    assert "PASS" in out and "FAIL" not in out
    code, out, _ = run(capsys, "report", "--store", os.path.dirname(store))
    assert code == 0 and "scoreboard" in out
    code, _, err = run(capsys, "report", "--store",
                       os.path.join(tmp_path, "empty"))
    assert code == 2


def test_jobs_flag(capsys):
    code, out, _ = run(capsys, "--jobs", "2", "classify", "--n", "4",
                       "--triple", "(4)|(4)|(4)")
    assert code == 0 and out.startswith("Finite")
    code, _, err = run(capsys, "--jobs", "0", "classify", "--n", "4",
                       "--triple", "(4)|(4)|(4)")
    assert code == 2
