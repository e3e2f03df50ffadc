import json
import subprocess
import sys
from pathlib import Path

import pytest

from boxlogic.cli import main

DATA = Path(__file__).resolve().parent.parent / "data" / "liar"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_parse(capsys):
    code, out = run_json(capsys, "parse", "[]p1 -> ~(p2)")
    assert code == 0 and out["formula"] == "[]p1 -> ~p2" and out["increasing"]
    code, out = run_json(capsys, "parse", "p1 & ")
    assert code == 2 and out["error"] == "ParseError" and out["column"] == 6


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as e:
        main(["prove", "--logic", "modal", "p1"])
    assert e.value.code == 2
    out = json.loads(capsys.readouterr().out)
    assert out["error"] == "UsageError" and "modal" in out["reason"]
    with pytest.raises(SystemExit):
        main(["game", "frobnicate"])
    assert json.loads(capsys.readouterr().out)["error"] == "UsageError"


def test_theory_check(capsys, tmp_path):
    assert run_json(capsys, "theory", "check", str(DATA / "liar.thy"))[0] == 0
    bad = tmp_path / "bad.thy"
    bad.write_text("p3 := ~p3\n")
    code, out = run_json(capsys, "theory", "check", str(bad))
    assert code == 1 and out["violations"][0]["path"] == "P"


def test_derive_check(capsys, tmp_path):
    for name in ("weakly_false.drv", "negation_refuted.drv", "reflection_refuted.drv"):
        code, out = run_json(capsys, "derive", "check", "--theory", str(DATA / "liar.thy"), str(DATA / name))
        assert code == 0 and out["ok"]
    lines = (DATA / "weakly_false.drv").read_text().splitlines()
    obj = json.loads(lines[2])
    obj["formula"] = "p1"
    broken = tmp_path / "broken.drv"
    broken.write_text("\n".join(lines[:2] + [json.dumps(obj)] + lines[3:]) + "\n")
    code, out = run_json(capsys, "derive", "check", "--theory", str(DATA / "liar.thy"), str(broken))
    assert code == 1 and out["line"] == 3 and out["reason"]
    missing = tmp_path / "nope.drv"
    assert run_json(capsys, "derive", "check", str(missing))[0] == 2


def test_filter(capsys, tmp_path):
    thy = tmp_path / "pair.thy"
    thy.write_text("p4 := []p5\np5 := ~[]p4\n")
    fig = tmp_path / "trace.png"
    code, out = run_json(capsys, "filter", "--theory", str(thy), "--seeds", "[]p4, p4 -> p5",
                         "--variant", "strengthened", "--figure", str(fig))
    assert code == 0 and out["passed"] and out["variant"] == "strengthened"
    assert out["entry_stages"]["[][][]bot"] == 4
    assert fig.stat().st_size > 1000
    code, out = run_json(capsys, "filter", "--theory", str(thy), "--max-stages", "2")
    assert code == 1 and "stages" in out["reason"]


def test_prove(capsys):
    code, out = run_json(capsys, "prove", "--logic", "minimal", "bot -> p1")
    assert code == 1 and out["verdict"] == "unprovable"
    code, out = run_json(capsys, "prove", "--logic", "intuitionistic", "bot -> p1")
    assert code == 0 and out["verdict"] == "provable" and out["checked"]
    code, out = run_json(capsys, "prove", "--logic", "classical", "p1 => p2, p1")
    assert code == 0


def test_game(capsys, tmp_path):
    code, out = run_json(capsys, "game", "extract", "p1 & p2 -> p2 & p1")
    assert code == 0 and out["strategy"]["moves"] == {"2": {"move": 1}, "3": {"move": 0}}
    cert = tmp_path / "cert.drv"
    code, out = run_json(capsys, "game", "certify", "p1 -> p2 -> p1", "--seed", "3", "--out", str(cert))
    assert code == 0 and out["certified"]
    assert run_json(capsys, "derive", "check", str(cert))[0] == 0
    code, out = run_json(capsys, "game", "certify", "(p1 -> p2) -> p1 -> p2")
    assert code == 1 and out["error"] == "StrategyExtractionError"
    code, out = run_json(capsys, "game", "certify", "--boxed", "[]bot -> bot")
    assert code == 1 and not out["certified"]
    defender = json.dumps({"player": "defender", "moves": {"1": {"plus": [{"move": 0}, 1]}}})
    code, out = run_json(capsys, "game", "play", "p1 -> p1", "--defender", defender, "--attacker-const", "2")
    assert code == 0 and out["boxed"] == "[][]p1 -> [][][]p1"


def test_interp(capsys, tmp_path):
    out_file = tmp_path / "lift.drv"
    code, out = run_json(capsys, "interp", "run", "--axiom", "[]p1", "--axiom", "[](p1 -> p2)",
                         "--goal", "p2", "--out", str(out_file))
    assert code == 0 and out["b_boxed"] == "[]p2"
    code, out = run_json(capsys, "interp", "transfer", "--axiom", "[]p1", "--axiom", "[](p1 -> bot)")
    assert code == 0 and out["conclusion"] == "bot" and out["unboxes"] >= 1
    code, out = run_json(capsys, "interp", "run", "--axiom", "[](p1 -> p2) -> p3", "--goal", "p3")
    assert code == 2 and out["error"] == "NotIncreasing"


def test_pretty(capsys):
    code, out = run(capsys, "prove", "--pretty", "p1 -> p1")
    assert code == 0 and out.strip() == "provable"


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "boxlogic.cli", "parse", "~~p1"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["formula"] == "~~p1"


@pytest.mark.parametrize("argv", [
    ["game", "certify", "p1 & (p1 -> p2) -> p2", "--seed", "11"],
    ["filter", "--theory", str(DATA / "liar.thy"), "--seeds", "p1,[]p1"],
    ["interp", "run", "--axiom", "[][]p1", "--axiom", "p1 -> []p2", "--goal", "p2 & p1"],
])
def test_repeatable_output(capsys, argv):
    assert run(capsys, *argv) == run(capsys, *argv)
