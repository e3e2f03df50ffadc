import random

import pytest
from hypothesis import given, settings

from boxlogic.formula import BOT, Var, parse
from boxlogic.sampling import random_formula
from boxlogic.sequent import (
    BoxedInput,
    ProofTree,
    Sequent,
    check_tree,
    is_tautology,
    parse_sequent,
    prove,
    provable,
)
from boxlogic.theory import Logic
from conftest import formulas

M, I, C = Logic.MINIMAL, Logic.INTUITIONISTIC, Logic.CLASSICAL
PEIRCE = "((p1 -> p2) -> p1) -> p1"


@pytest.mark.parametrize("text, verdicts", [
    ("p1 & p2 -> p1", (True, True, True)),
    ("bot -> p1", (False, True, True)),
    (PEIRCE, (False, False, True)),
    ("p1 | ~p1", (False, False, True)),
    ("~~p1 -> p1", (False, False, True)),
    ("~~(p1 | ~p1)", (True, True, True)),
    ("~~~p1 -> ~p1", (True, True, True)),
    ("(p1 -> p2) -> ~p2 -> ~p1", (True, True, True)),
    ("p1 | p2 -> ~p1 -> p2", (False, True, True)),
    ("p1 -> p2", (False, False, False)),
    ("(~p1 -> p1) -> p1", (False, False, True)),
])
def test_verdicts(text, verdicts):
    f = parse(text)
    for logic, expect in zip((M, I, C), verdicts):
        tr = prove(f, logic)
        assert (tr is not None) is expect, (text, logic)
        if tr is not None:
            assert check_tree(tr, logic), check_tree(tr, logic)


def test_sequent_syntax():
    s = parse_sequent("p1, p1 -> p2 => p2")
    assert s.antecedent == (Var(1), parse("p1 -> p2")) and s.succedent == (Var(2),)
    assert parse_sequent("p1 -> p1") == Sequent((), (parse("p1 -> p1"),))
    tr = prove(s, M)
    assert tr is not None and tr.sequent.same(s)


def test_classical_multi_succedent():
    tr = prove(parse_sequent("=> p1, ~p1"), C)
    assert tr is not None and check_tree(tr, C)
    assert prove(parse_sequent("p1 | p2 => p1, p2"), C) is not None


def test_boxes_rejected():
    with pytest.raises(BoxedInput):
        prove(parse("[]p1 -> []p1"), M)


def test_checker_rejects_bot_axiom_in_minimal():
    tr = prove(parse("bot -> p1"), I)
    assert any(n.rule == "BotAx" for n in tr.nodes())
    v = check_tree(tr, M)
    assert not v.ok and "minimal" in v.reason


def test_checker_rejects_bad_trees():
    leaf = ProofTree("Ax", parse_sequent("p1 => p2"), Var(1))
    assert not check_tree(leaf, M)
    compound = ProofTree("Ax", parse_sequent("p1 & p2 => p1 & p2"), parse("p1 & p2"))
    assert not check_tree(compound, M)
    tr = prove(parse("p1 -> p1 | p2"), M)
    bent = ProofTree(tr.rule, parse_sequent("=> p1 -> p2 | p1"), tr.principal, tr.children)
    assert not check_tree(bent, M)


def test_tree_json_round_trip():
    tr = prove(parse(PEIRCE), C)
    assert ProofTree.from_json(tr.to_json()) == tr


def test_axioms_are_atomic():
    for text in ("(p1 -> p2) -> p1 -> p2", "p1 & p2 -> p2 & p1", "bot -> p1 & p2"):
        tr = prove(parse(text), I)
        for n in tr.nodes():
            if n.rule in ("Ax", "BotAx"):
                assert n.principal.__class__.__name__ in ("Var", "Bottom")
                assert n.sequent.succedent[0].__class__.__name__ in ("Var", "Bottom")


@settings(max_examples=120, deadline=None)
@given(formulas(max_leaves=6, variables=3, boxes=False))
def test_hierarchy_and_oracle(f):
    m, i, c = provable(f, M), provable(f, I), provable(f, C)
    assert (not m or i) and (not i or c)
    assert c == is_tautology(f)
    for logic, ok in ((M, m), (I, i), (C, c)):
        if ok:
            assert check_tree(prove(f, logic), logic)


def test_classical_agreement_sample():
    rng = random.Random(7)
    for _ in range(200):
        f = random_formula(rng, rng.randint(1, 7))
        assert provable(f, C) == is_tautology(f), f


def test_truth_table():
    assert is_tautology(parse(PEIRCE))
    assert not is_tautology(BOT)
    assert not is_tautology(parse("p1 -> p2"))
