import io as stdio
import json
import subprocess
import sys

import pytest

from qbs import io
from qbs.cli import run

from conftest import FIXTURES

ALL = sorted(p.stem for p in FIXTURES.glob("*.json"))
VERBS = ["check-simple", "check-reduced", "check-cofree", "decompositions", "flat-locus"]


def call(*argv):
    out, err = stdio.StringIO(), stdio.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def fx(name):
    return FIXTURES / f"{name}.json"


def test_check_simple_example():
    code, out, _ = call("check-simple", fx("a2_cycle"))
    assert code == 0 and out.strip() == "simple: true (family: cyclic, α=1)"


def test_negative_verdict_exit_code():
    code, out, _ = call("check-simple", fx("neg_path"))
    assert code == 1 and out.startswith("simple: false")
    assert call("check-reduced", fx("artin"))[0] == 1


def test_fibers_artin_json():
    code, out, _ = call("fibers", fx("artin"), "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["schema"] == io.SCHEMA and data["verb"] == "fibers"
    comps = data["result"]["components"]
    assert len(comps) == 2
    assert all(c["betti"] == [1, 1] and c["dimension"] == 1 for c in comps)


def test_missing_file():
    code, _, err = call("check-cofree", "nonexistent.json")
    assert code == 2 and "file not found" in err


def test_unknown_verb_before_io():
    code, _, err = call("explode", "nonexistent.json")
    assert code == 2 and "usage" in err and "file not found" not in err


def test_unknown_flag():
    assert call("check-simple", fx("artin"), "--colour")[0] == 2


def test_parse_error_position(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": [\n  {"id": "a", "dim": 1},\n  oops]}\n', encoding="utf-8")
    code, _, err = call("check-simple", bad)
    assert code == 2 and "line 3" in err and "column 3" in err


def test_invalid_setting(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(io.dumps({"vertices": [{"id": "a", "dim": 1}], "arrows": [["a", "z"]]}))
    assert call("check-simple", bad)[0] == 2


def test_oracle_budget_zero():
    code, _, err = call("oracle", "--budget", "0")
    assert code == 2 and "budget exceeded" in err


def test_env_budget(monkeypatch):
    monkeypatch.setenv("QBS_BUDGET", "1")
    code, _, err = call("decompositions", fx("sec4_example"))
    assert code == 2 and "budget" in err


def test_oracle_artin():
    code, out, _ = call("oracle", fx("artin"), "--format", "json")
    assert code == 0
    checks = {c["check"]: c for c in json.loads(out)["result"]["checks"]}
    assert len(checks["minimal-connecting:0"]["fast"]) == 2 == checks["betti-sum:0"]["fast"]
    assert all(c["ok"] for c in checks.values())


def test_oracle_catalog_small():
    code, out, _ = call("oracle", "--max-vertices", "3", "--max-dim", "2", "--max-arrows", "3")
    assert code == 0 and out.startswith("oracle: pass")


def test_gamma_override():
    code, out, _ = call("fibers", fx("artin"), "--gamma", "a=2,b=1", "--format", "json")
    assert code == 0
    data = json.loads(out)["result"]
    assert data["n"] == 3 and data["dimension"] == 2


def test_decomposition_selector():
    code, out, _ = call("local-quiver", fx("artin"), "--decomposition", "finest")
    assert code == 0 and "2 vertices" in out
    code, out, _ = call("local-quiver", fx("artin"), "--decomposition", "0")
    assert code == 0 and "1 vertices" in out
    assert call("local-quiver", fx("artin"), "--decomposition", "7")[0] == 2


@pytest.mark.parametrize("name", ALL)
def test_fixture_round_trip(name):
    text = fx(name).read_text(encoding="utf-8")
    S, gamma = io.setting_from_json(io.loads(text))
    assert io.dumps(io.setting_to_json(S, gamma)) == text


@pytest.mark.parametrize("verb", VERBS + ["local-quiver"])
def test_report_round_trip(verb):
    _, out, _ = call(verb, fx("sum_a1_a2"), "--format", "json")
    assert io.dumps(io.loads(out)) == out


def verdict_from_text(verb, text):
    first = text.splitlines()[0]
    if verb in ("check-simple", "check-reduced", "check-cofree"):
        return first.split(":")[1].split()[0] == "true"
    if verb == "decompositions":
        return int(first.split(":")[1])
    counts = first[first.index("(") + 1:first.index(")")]
    return dict((k, int(v)) for k, v in (part.split("=") for part in counts.split(", ")))


def verdict_from_json(verb, data):
    key = {"check-simple": "simple", "check-reduced": "reduced", "check-cofree": "cofree",
           "decompositions": "count", "flat-locus": "counts"}[verb]
    return data[key]


@pytest.mark.parametrize("verb", VERBS)
@pytest.mark.parametrize("name", [n for n in ALL if n != "sec4_example_literal"])
def test_text_json_parity(verb, name):
    if verb in ("decompositions", "flat-locus") and name.startswith("sec4"):
        pytest.skip("decomposition enumeration of the large example is exercised elsewhere")
    c1, text, _ = call(verb, fx(name))
    c2, js, _ = call(verb, fx(name), "--format", "json")
    assert c1 == c2
    if c1 == 2:
        return
    assert verdict_from_text(verb, text) == verdict_from_json(verb, json.loads(js)["result"])


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "qbs", "check-simple", str(fx("a1_cycle"))],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "simple: true" in res.stdout
