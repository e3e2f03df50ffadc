import pytest

from boxlogic.formula import parse
from boxlogic.modal_search import bounded_modal_prove
from boxlogic.theory import Logic, Theory, check_derivation, parse_theory

EMPTY = Theory()


@pytest.mark.parametrize("text", [
    "[][]p1 -> [][]p1",
    "p1 -> [][][]p1",
    "[](p1 & p2) -> []p2 & []p1",
    "[](p1 -> p2) -> [][]p1 -> [][]p2",
    "[]p1 | []p2 -> [](p2 | p1)",
    "bot -> []bot",
])
def test_found_and_checked(text):
    goal = parse(text)
    d = bounded_modal_prove(EMPTY, goal, budget=4)
    assert d is not None and d.conclusion == goal
    assert check_derivation(EMPTY, d)


@pytest.mark.parametrize("text", ["[]bot -> bot", "[]p1 -> p1", "[][]p1 -> []p1", "p1 -> p2"])
def test_never_found(text):
    assert bounded_modal_prove(EMPTY, parse(text), budget=5) is None


def test_liar_theory_weakly_false():
    t = parse_theory("p1 := []~p1")
    d = bounded_modal_prove(t, parse("p1 -> []bot"), budget=5)
    assert d is not None and check_derivation(t, d)


def test_premises_and_unbox():
    d = bounded_modal_prove(EMPTY, parse("p2"), budget=4, premises=[parse("[][]p2")])
    assert d is not None
    assert check_derivation(EMPTY, d, [parse("[][]p2")])
    assert bounded_modal_prove(EMPTY, parse("p2"), budget=4) is None


def test_logic_override():
    goal = parse("~p1 -> p1 -> p2")
    assert bounded_modal_prove(EMPTY, goal, budget=4) is None
    d = bounded_modal_prove(EMPTY, goal, budget=4, logic=Logic.INTUITIONISTIC)
    assert d is not None and check_derivation(EMPTY, d, logic=Logic.INTUITIONISTIC)
