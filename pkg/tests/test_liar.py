import json
from pathlib import Path

import pytest

from boxlogic.formula import parse
from boxlogic.liar import FILES, liar_theory, write_files
from boxlogic.theory import check_derivation, load_derivation, load_theory, loads_derivation

DATA = Path(__file__).resolve().parent.parent / "data" / "liar"
CONCLUSIONS = {
    "weakly_false.drv": "p1 -> []bot",
    "negation_refuted.drv": "~~p1",
    "reflection_refuted.drv": "~~[]bot",
}


def test_shipped_files_are_current(tmp_path):
    write_files(tmp_path)
    for p in tmp_path.iterdir():
        assert (DATA / p.name).read_text() == p.read_text(), p.name


def test_theory_file():
    assert load_theory(DATA / "liar.thy") == liar_theory()


@pytest.mark.parametrize("name", sorted(FILES))
def test_file_checks(name):
    d = load_derivation(DATA / name)
    assert d.conclusion == parse(CONCLUSIONS[name])
    assert check_derivation(load_theory(DATA / "liar.thy"), d)


def _mutations(raw: str):
    obj = json.loads(raw)
    yield dict(obj, formula="[](" + obj["formula"] + ")")
    if obj["refs"]:
        yield dict(obj, refs=[r + 1 for r in obj["refs"]])
    if obj["rule"] == "def":
        yield dict(obj, dir="<-" if obj["dir"] == "->" else "->")


@pytest.mark.parametrize("name", sorted(FILES))
def test_every_single_line_mutation_fails(name):
    t = liar_theory()
    lines = (DATA / name).read_text().splitlines()
    tried = 0
    for i, raw in enumerate(lines):
        for m in _mutations(raw):
            text = "\n".join(lines[:i] + [json.dumps(m, sort_keys=True)] + lines[i + 1:])
            v = check_derivation(t, loads_derivation(text))
            assert not v.ok, (name, i + 1, m)
            assert v.line == i + 1
            tried += 1
    assert tried >= len(lines)
