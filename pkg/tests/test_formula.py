import pytest
from hypothesis import given

from boxlogic.formula import (
    BOT,
    And,
    Box,
    Imp,
    Or,
    ParseError,
    Player,
    Polarity,
    Var,
    atomic_occurrences,
    box_atoms,
    is_boxing_of,
    is_increasing,
    parse,
    render,
    strip_boxes,
    subformula_at,
    subformulas,
)
from boxlogic.theory import Theory, UndeclaredVariable, level
from conftest import formulas

p1, p2, p3 = Var(1), Var(2), Var(3)


@pytest.mark.parametrize("text, expected", [
    ("bot", BOT),
    ("[]p1 -> ~p2", Imp(Box(p1), Imp(p2, BOT))),
    ("p1 -> p2 -> p3", Imp(p1, Imp(p2, p3))),
    ("p1 & p2 | p3", Or(And(p1, p2), p3)),
    ("p1 | p2 & p3", Or(p1, And(p2, p3))),
    ("~[]p1", Imp(Box(p1), BOT)),
    ("[]~p1", Box(Imp(p1, BOT))),
    ("(p1 -> p2) -> p3", Imp(Imp(p1, p2), p3)),
    ("  p12\n&\tp3 ", And(Var(12), p3)),
])
def test_parse(text, expected):
    assert parse(text) == expected


@pytest.mark.parametrize("f, text", [
    (BOT, "bot"),
    (Imp(p1, BOT), "~p1"),
    (Box(And(p1, p2)), "[](p1 & p2)"),
    (Imp(Imp(p1, p2), p3), "(p1 -> p2) -> p3"),
    (And(p1, Or(p2, p3)), "p1 & (p2 | p3)"),
    (Imp(Imp(p1, p2), BOT), "~(p1 -> p2)"),
])
def test_render(f, text):
    assert render(f) == text


@pytest.mark.parametrize("text, line, column", [
    ("p1 ->", 1, 6),
    ("p1 &\n& p2", 2, 1),
    ("p0", 1, 1),
    ("(p1", 1, 4),
    ("p1 p2", 1, 4),
])
def test_parse_errors_carry_position(text, line, column):
    with pytest.raises(ParseError) as e:
        parse(text)
    assert (e.value.line, e.value.column) == (line, column)
    if text != "p0":
        assert e.value.expected


@given(formulas())
def test_round_trip(f):
    assert parse(render(f)) == f


@given(formulas())
def test_strip_idempotent_and_box_free(f):
    s = strip_boxes(f)
    assert strip_boxes(s) == s
    assert not any(isinstance(g, Box) for g in subformulas(s))


@given(formulas())
def test_occurrences_match_leaves_and_polarity(f):
    occs = atomic_occurrences(f)
    leaves = [g for g in _leaves(f)]
    assert [o.atom for o in occs] == leaves
    for o in occs:
        premise_crossings = sum(1 for i, step in enumerate(o.path) if step == "P")
        expect = Polarity.POSITIVE if premise_crossings % 2 == 0 else Polarity.NEGATIVE
        assert o.polarity is expect
        assert o.mover is (Player.DEFENDER if expect is Polarity.POSITIVE else Player.ATTACKER)
        assert subformula_at(f, o.path) == o.atom


@given(formulas(boxes=False))
def test_box_atoms_is_a_boxing(f):
    counts = {o.path: i % 3 for i, o in enumerate(atomic_occurrences(f))}
    boxed = box_atoms(f, counts)
    assert is_boxing_of(f, boxed)
    assert strip_boxes(boxed) == f


def _leaves(f):
    if isinstance(f, (Var, type(BOT))):
        yield f
    elif isinstance(f, Box):
        yield from _leaves(f.body)
    else:
        yield from _leaves(f.children[0])
        yield from _leaves(f.children[1])


def test_occurrence_schedule_examples():
    assert [(o.path, o.polarity, o.mover) for o in atomic_occurrences(p1)] == [
        ((), Polarity.POSITIVE, Player.DEFENDER)]
    assert [(o.path, o.mover) for o in atomic_occurrences(Imp(p1, p2))] == [
        (("P",), Player.ATTACKER), (("C",), Player.DEFENDER)]
    pols = [o.polarity for o in atomic_occurrences(Imp(Imp(p1, p2), p3))]
    assert pols == [Polarity.POSITIVE, Polarity.NEGATIVE, Polarity.POSITIVE]


@pytest.mark.parametrize("text, expected", [
    ("p1 -> p2 -> p3", True),
    ("(p1 -> p2) -> p3", False),
    ("~~p1", False),
    ("p1 & []p2 -> p3 | p1", True),
    ("[](p1 -> p2) -> p2", False),
])
def test_is_increasing(text, expected):
    assert is_increasing(parse(text)) is expected


def test_strip_examples():
    assert strip_boxes(Box(Box(BOT))) == BOT
    assert strip_boxes(Imp(Box(p1), p2)) == Imp(p1, p2)


def _manual_level(f, t):
    # direct transcription of the level clauses
    if f == BOT or isinstance(f, Box):
        return 1
    if isinstance(f, Var):
        return _manual_level(t.body(f.index), t) + 1
    return max(_manual_level(c, t) for c in f.children) + 1


def test_level():
    liar = Theory.of({1: parse("~[]p1")})
    assert level(BOT, Theory()) == 1
    assert level(parse("[](p1 -> p2)"), Theory()) == 1
    # []p1 = 1, ~[]p1 = 2, p1 = 3 by the clauses
    assert level(p1, liar) == _manual_level(p1, liar) == 3


def test_level_undeclared():
    with pytest.raises(UndeclaredVariable):
        level(p2, Theory.of({1: parse("[]p1")}))
