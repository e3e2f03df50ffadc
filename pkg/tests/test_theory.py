import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boxlogic.formula import BOT, Box, Imp, Var, boxes, parse
from boxlogic.theory import (
    SCHEMATA,
    Axiom,
    DefiningAxiom,
    Derivation,
    DerivationFormatError,
    InvalidTheory,
    Line,
    Logic,
    ModusPonens,
    SchemaError,
    Theory,
    Unbox,
    Variant,
    allowed_schemata,
    check_derivation,
    dump_theory,
    dumps_derivation,
    loads_derivation,
    logical_axiom_instance,
    match_schema,
    parse_theory,
    schema_metavars,
    validate_theory,
)
from conftest import formulas

p1, p2 = Var(1), Var(2)


def test_validate_examples():
    assert validate_theory(parse_theory("p1 := ~[]p1")) == []
    assert validate_theory(parse_theory("p4 := []p5\np5 := ~[]p4")) == []
    bad = validate_theory(parse_theory("p3 := ~p3"))
    assert len(bad) == 1
    assert bad[0].axiom == 3 and bad[0].path == ("P",)


def test_validate_indexing():
    assert any("duplicate" in v.message for v in validate_theory(parse_theory("p1 := []p1\np1 := []bot")))
    assert any("undeclared" in v.message for v in validate_theory(parse_theory("p1 := []p2")))
    assert validate_theory(parse_theory("p2 := []~p2")) == []


def test_theory_file_round_trip():
    t = parse_theory("variant: strengthened\n# liar pair\np4 := []p5\np5 := ~[]p4\n")
    assert t.variant is Variant.STRENGTHENED
    assert parse_theory(dump_theory(t)) == t


def test_schema_examples():
    assert logical_axiom_instance("B4", {"A": BOT}) == Imp(BOT, Box(BOT))
    assert logical_axiom_instance("B3", {"A": p1, "B": BOT}) == parse("[](p1 -> bot) -> []p1 -> []bot")
    assert logical_axiom_instance("K", {"A": p1, "B": p2}) == parse("p1 -> p2 -> p1")
    with pytest.raises(SchemaError):
        logical_axiom_instance("K", {"A": p1})
    with pytest.raises(SchemaError):
        logical_axiom_instance("NOPE", {})


def test_variant_schemata():
    std = allowed_schemata(Variant.STANDARD)
    strong = allowed_schemata(Variant.STRENGTHENED)
    assert "EFQ" not in std and "B3r" not in std
    assert {"EFQ", "B3r"} <= strong
    assert "DNE" in allowed_schemata(Variant.STANDARD, Logic.CLASSICAL)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(sorted(SCHEMATA)), st.data())
def test_every_instance_checks_alone(schema, data):
    subst = {m: data.draw(formulas(max_leaves=5)) for m in schema_metavars(schema)}
    f = logical_axiom_instance(schema, subst)
    assert match_schema(schema, f) is not None
    t = Theory((), Variant.STRENGTHENED)
    d = Derivation((Line(f, Axiom(schema, tuple(sorted(subst.items())))),))
    assert check_derivation(t, d, logic=Logic.CLASSICAL).ok


def test_b4_shape_mismatch():
    d = Derivation((Line(Box(BOT), Axiom("B4", (("A", BOT),))),))
    v = check_derivation(Theory(), d)
    assert not v.ok and v.line == 1


def test_efq_only_when_strengthened():
    d = Derivation((Line(parse("bot -> p1"), Axiom("EFQ", (("A", p1),))),))
    assert not check_derivation(Theory(), d).ok
    assert check_derivation(Theory((), Variant.STRENGTHENED), d).ok
    assert check_derivation(Theory(), d, logic=Logic.INTUITIONISTIC).ok


@pytest.mark.parametrize("k", range(1, 11))
def test_unbox_chain(k):
    # []^k bot as a premise, then k unboxes down to bot
    lines = [Line(boxes(BOT, k), Axiom("B4", None))]
    d_bad = Derivation(tuple(lines))
    assert not check_derivation(Theory(), d_bad).ok
    from boxlogic.theory import Premise
    lines = [Line(boxes(BOT, k), Premise())]
    for i in range(k):
        lines.append(Line(boxes(BOT, k - i - 1), Unbox(i + 1)))
    d = Derivation(tuple(lines))
    assert check_derivation(Theory(), d, premises=[boxes(BOT, k)]).ok
    assert not check_derivation(Theory(), d).ok


def test_modus_ponens_and_defining_axioms():
    t = parse_theory("p1 := []~p1")
    d = Derivation((
        Line(parse("[]~p1 -> p1"), DefiningAxiom(1, "<-")),
        Line(parse("~p1 -> []~p1"), Axiom("B4", (("A", parse("~p1")),))),
        Line(parse("p1"), ModusPonens(1, 3)),
    ))
    v = check_derivation(t, d)
    assert not v.ok and v.line == 3 and "earlier" in v.reason
    d2 = Derivation(d.lines[:2] + (Line(parse("p1"), ModusPonens(1, 2)),))
    assert not check_derivation(t, d2).ok


def test_invalid_theory_is_refused():
    with pytest.raises(InvalidTheory):
        check_derivation(parse_theory("p3 := ~p3"), Derivation((Line(BOT, Unbox(1)),)))


def test_derivation_json_round_trip():
    from boxlogic.liar import weakly_false
    d = weakly_false()
    assert loads_derivation(dumps_derivation(d)) == d
    unknown = loads_derivation(json.dumps({"formula": "p1", "rule": "zzz", "refs": []}))
    assert "unknown schema" in check_derivation(Theory(), unknown).reason
    with pytest.raises(DerivationFormatError):
        loads_derivation(json.dumps({"rule": "mp", "refs": [1, 2]}))
    with pytest.raises(DerivationFormatError):
        loads_derivation(json.dumps({"formula": "p1", "rule": "mp", "refs": [1]}))
