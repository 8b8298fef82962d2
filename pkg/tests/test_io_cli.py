from __future__ import annotations

import json

import pytest

from eckit import io
from eckit.cli import main
from eckit.difftest import GenConfig, gen_automaton, gen_up_word
from eckit.translate import remove_all_event_clocks

from conftest import FIXTURES, fixture


def f(name):
    return str(FIXTURES / name)


def test_round_trip_generated():
    cfg = GenConfig(mixed=True)
    for seed in range(50):
        a = gen_automaton(cfg, seed)
        assert io.loads(io.dumps(io.to_document(a)), "automaton")[1] == a
        w = gen_up_word(cfg, seed)
        assert io.loads(io.dumps(io.to_document(w)), "upword")[1] == w
        assert io.loads(io.dumps(io.to_document(w.prefix)), "word")[1] == w.prefix


def test_translated_automaton_round_trips_by_name():
    b, _ = remove_all_event_clocks(fixture("ecna.json"))
    doc = io.automaton_json(b)
    again = io.parse_automaton(json.loads(json.dumps(doc)))
    assert io.automaton_json(again) == doc


def test_parse_errors_name_the_location():
    with pytest.raises(io.ParseError) as e:
        io.load(FIXTURES / "malformed.json")
    assert "$.payload.transitions[0]" in str(e.value)
    with pytest.raises(io.ParseError) as e:
        io.load(FIXTURES / "broken_syntax.json")
    assert "line" in str(e.value)
    with pytest.raises(io.ParseError):
        io.loads('{"kind": "upword", "version": 1, "payload": {}}', "automaton")
    with pytest.raises(io.ParseError):
        io.loads('{"kind": "automaton", "version": 7, "payload": {}}')


def test_member(capsys):
    assert main(["member", f("ecna.json"), f("word_near.json")]) == 0
    assert capsys.readouterr().out.startswith("ACCEPT")
    assert main(["member", f("ecna.json"), f("word_far.json"), "-v"]) == 1
    out = capsys.readouterr().out
    assert out.startswith("REJECT") and "boundary nodes" in out


def test_translate_writes_equivalent_automaton(tmp_path, capsys):
    out = tmp_path / "t.json"
    assert main(["translate", f("ecna.json"), "--all", "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["stats"]["bounds_ok"] and doc["stats"]["constant_ok"]
    assert main(["member", str(out), f("word_near.json")]) == 0
    assert main(["member", str(out), f("word_nested.json")]) == 1
    assert main(["translate", f("ecna.json"), "--clock", "ya_p"]) == 0
    assert '"kind": "automaton"' in capsys.readouterr().out
    assert main(["translate", f("ecna.json"), "--clock", "c"]) == 2
    assert main(["translate", f("ecna.json"), "--clock", "nope"]) == 2


def test_run(capsys):
    assert main(["run", f("ecna.json"), f("word_finite.json")]) in (0, 1)
    assert "configuration(s)" in capsys.readouterr().err


def test_stats(capsys):
    assert main(["stats", f("ecna.json"), "--json"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["out_clocks"] == d["n_clocks"] - 1 + 5
    assert main(["stats", f("ecna.json")]) == 0
    assert "remove ya_p" in capsys.readouterr().out


def test_validate(capsys):
    assert main(["validate", f("ecna.json")]) == 0
    assert main(["validate", f("word_near.json")]) == 0
    assert main(["validate", f("malformed.json")]) == 2


def test_usage_errors_exit_two(capsys):
    assert main([]) == 2
    assert main(["member", f("ecna.json")]) == 2
    assert main(["member", f("missing.json"), f("word_near.json")]) == 2
    assert main(["member", f("word_near.json"), f("ecna.json")]) == 2
    assert main(["difftest", "--mutation", "bogus"]) == 2
    assert main(["--help"]) == 0


def test_difftest_command(tmp_path, capsys, monkeypatch):
    report = tmp_path / "r.json"
    args = ["difftest", "--cases", "3", "--words", "5", "--kind", "abs_predictor"]
    assert main(args + ["--report", str(report)]) == 0
    assert "PASS" in capsys.readouterr().out
    first = report.read_text()
    monkeypatch.setenv("ECKIT_SEED", "0")
    assert main(args + ["--seed", "9", "--report", str(report)]) == 0
    assert report.read_text() == first
    assert main(args + ["--mutation", "drop_bad", "--cases", "6", "--words", "20"]) == 1
