import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boxlogic.formula import (
    BOT,
    Box,
    Imp,
    Var,
    atomic_occurrences,
    box_atoms,
    boxes,
    has_implication,
    is_boxing_of,
    parse,
    strip_boxes,
    unbox_prefix,
)
from boxlogic.interp import (
    InterpretationError,
    NotIncreasing,
    SandwichError,
    TheoryPair,
    check_in_t2,
    consistency_transfer,
    sandwich_exponent,
    sandwich_j,
    strip_theory,
    weak_interpret,
)
from boxlogic.sequent import parse_sequent, prove
from boxlogic.theory import Logic, Theory, check_derivation
from conftest import formulas

M = Logic.MINIMAL


def pair(*axioms):
    return TheoryPair.of(parse(a) for a in axioms)


def test_strip_theory():
    assert strip_theory([parse("[]p1 & [][]p2"), parse("p1 -> []p2")]) == (
        parse("p1 & p2"), parse("p1 -> p2"))
    with pytest.raises(NotIncreasing) as e:
        strip_theory([parse("p1"), parse("[](p1 -> p2) -> p3")])
    assert e.value.index == 1


@pytest.mark.parametrize("axioms", [("[]p1", "[](p1 -> p2)"), ("[](p1 -> p2)", "[]p1")])
def test_modus_ponens_lifts(axioms):
    res = weak_interpret(pair(*axioms), Var(2))
    assert res.b_boxed == Box(Var(2))
    assert check_in_t2(res.pair, res.derivation, M)
    assert res.derivation.conclusion == res.b_boxed


@pytest.mark.parametrize("axioms, goal", [
    (("[][]p1", "p1 -> []p2", "[]p2 -> p3 & []p1"), "p3"),
    (("[]p1 & []p2",), "p2 & p1"),
    (("[]p1 | [][]p2", "[]p1 -> p3", "p2 -> p3"), "p3"),
    (("p1", "[]p1 -> p2"), "p2 | p3"),
])
def test_lifting_checks(axioms, goal):
    pr = pair(*axioms)
    b = parse(goal)
    res = weak_interpret(pr, b)
    assert is_boxing_of(b, res.b_boxed)
    assert strip_boxes(res.b_boxed) == b
    assert check_in_t2(pr, res.derivation, M)
    # every axiom guarantee is a T2 theorem whose stripping is the T1 axiom
    for g in res.guarantees:
        assert check_derivation(Theory(), g)


def test_unprovable_goal():
    with pytest.raises(InterpretationError):
        weak_interpret(pair("[]p1"), Var(2))


def test_supplied_proof():
    pr = pair("[]p1", "[](p1 -> p2)")
    d1 = prove(parse_sequent("p1 -> p2, p1 => p2"), M)
    res = weak_interpret(pr, Var(2), d1)
    assert res.b_boxed == Box(Var(2))
    wrong = prove(parse_sequent("p3 => p3"), M)
    with pytest.raises(InterpretationError):
        weak_interpret(pr, Var(3), wrong)


def test_transfer():
    pr = pair("[]p1", "[](p1 -> bot)")
    tr = consistency_transfer(pr)
    assert tr.unboxes >= 1
    assert tr.derivation.conclusion == BOT
    assert check_in_t2(pr, tr.derivation, M)
    k, core = unbox_prefix(tr.interpretation.b_boxed)
    assert core == BOT and k == tr.unboxes


def test_transfer_needs_inconsistency():
    with pytest.raises(InterpretationError):
        consistency_transfer(pair("[]p1", "p1 -> []p2"))


@pytest.mark.parametrize("c, cb, j", [
    ("p1", "[][][]p1", 3),
    ("p1 & p2", "[]p1 & p2", 1),
    ("p1 | p2", "p1 | p2", 0),
    ("[]p1 & p2", "[][]p1 & []p2", 1),
])
def test_sandwich(c, cb, j):
    s = sandwich_exponent(parse(c), parse(cb))
    assert s.j == j == sandwich_j(parse(c), parse(cb))
    assert s.up.conclusion == Imp(parse(c), parse(cb))
    assert s.down.conclusion == Imp(parse(cb), boxes(parse(c), j))
    assert check_derivation(Theory(), s.up) and check_derivation(Theory(), s.down)


def test_sandwich_errors():
    with pytest.raises(SandwichError):
        sandwich_exponent(parse("p1 -> p2"), parse("p1 -> []p2"))
    with pytest.raises(SandwichError):
        sandwich_exponent(parse("p1"), parse("[]p2"))


def test_single_axiom_cases():
    res = weak_interpret(pair("[]p1"), Var(1))
    assert strip_boxes(res.b_boxed) == Var(1)
    tr = consistency_transfer(pair("[]bot"))
    assert tr.unboxes == 1 and tr.derivation.conclusion == BOT


@settings(max_examples=60, deadline=None)
@given(formulas(max_leaves=5, variables=3, boxes=False).filter(lambda f: not has_implication(f)),
       st.data())
def test_sandwich_j_grows_with_boxes(c, data):
    occs = atomic_occurrences(c)
    lo = {o.path: data.draw(st.integers(0, 2)) for o in occs}
    hi = {p: k + data.draw(st.integers(0, 2)) for p, k in lo.items()}
    c_lo, c_hi = box_atoms(c, lo), box_atoms(c, hi)
    assert sandwich_j(c, c_lo) <= sandwich_j(c, c_hi)
    s = sandwich_exponent(c, c_hi)
    assert check_derivation(Theory(), s.up) and check_derivation(Theory(), s.down)
