import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boxlogic.corpus import SAMPLE_THEORIES
from boxlogic.formula import BOT, And, Box, Bottom, Imp, Or, Var, boxes, parse, subformulas
from boxlogic.semantic import (
    NEVER,
    NotStabilized,
    StageOracle,
    boxed_bottoms,
    build_closure,
    consistency_report,
    entry_of,
    in_Fk,
    run_filter,
    stabilize,
)
from boxlogic.theory import Theory, UndeclaredVariable, Variant, level, parse_theory
from conftest import formulas

LIAR_NEG_BOX = parse_theory("p1 := ~[]p1")


def _guard(f):
    """Box every variable occurrence that is not already under a box."""
    if isinstance(f, Var):
        return Box(f)
    if isinstance(f, (Box, Bottom)):
        return f
    return type(f)(_guard(f.children[0]), _guard(f.children[1]))


@st.composite
def theories(draw, size=3):
    n = draw(st.integers(1, size))
    bodies = [_guard(draw(formulas(max_leaves=5, variables=n))) for _ in range(n)]
    return Theory.of({i + 1: b for i, b in enumerate(bodies)})


def test_closure_examples():
    c = build_closure(LIAR_NEG_BOX, [Var(1)])
    assert {Var(1), parse("~[]p1"), parse("[]p1"), BOT} <= c.formulas
    assert build_closure(Theory(), [BOT]).formulas == {BOT}
    assert build_closure(Theory(), [boxes(BOT, 2)]).formulas == {boxes(BOT, 2), Box(BOT), BOT}
    with pytest.raises(UndeclaredVariable):
        build_closure(LIAR_NEG_BOX, [Var(2)])


def test_in_fk_examples():
    assert in_Fk(Theory(), BOT, 1)
    for a in (BOT, Var(1), parse("p1 -> bot")):
        assert not in_Fk(LIAR_NEG_BOX, Box(a), 1)
    assert in_Fk(LIAR_NEG_BOX, Var(1), 1)


def test_trace_examples():
    _, trace, report = run_filter(LIAR_NEG_BOX, [Var(1)] + boxed_bottoms(10))
    assert trace.entry_stage[Var(1)] == 1
    assert trace.entry_stage[Box(Var(1))] == 2
    assert trace.entry_stage[LIAR_NEG_BOX.axiom(1, "->")] is NEVER
    assert trace.entry_stage[LIAR_NEG_BOX.axiom(1, "<-")] is NEVER
    for k in range(11):
        assert trace.entry_stage[boxes(BOT, k)] == k + 1
    assert report.passed


def test_report_on_empty_theory():
    c = build_closure(Theory(), [Box(BOT)])
    trace = stabilize(Theory(), c)
    rep = consistency_report(Theory(), c, trace)
    assert rep.checks["bottom_rejected"]
    assert trace.in_F(Box(BOT))
    assert rep.passed and rep.instances_checked > 0


@pytest.mark.parametrize("name", sorted(SAMPLE_THEORIES))
@pytest.mark.parametrize("variant", list(Variant))
def test_reports_pass(name, variant):
    t = parse_theory(SAMPLE_THEORIES[name]).with_variant(variant)
    c, trace, report = run_filter(t, [Var(i) for i, _ in t.definitions] + boxed_bottoms(4))
    assert report.passed, report.violations[:3]
    assert trace.stabilized_at <= len(c) + 1


def test_not_stabilized_is_reported():
    c = build_closure(Theory(), boxed_bottoms(6))
    with pytest.raises(NotStabilized) as e:
        stabilize(Theory(), c, max_stages=3)
    assert len(e.value.stages) >= 3


@settings(max_examples=25, deadline=None)
@given(theories())
def test_trace_laws(t):
    seeds = [Var(i) for i, _ in t.definitions] + t.axiom_directions() + [Box(BOT)]
    c = build_closure(t, seeds)
    trace = stabilize(t, c)
    assert trace.stabilized_at <= len(c) + 1
    oracle = StageOracle(t)
    last = trace.stabilized_at + 2
    for f in c.formulas:
        # two code paths agree
        for k in range(1, last + 1):
            assert oracle(f, k) == (f in trace.stage(k)), (f, k)
        # monotone in k
        hits = [oracle(f, k) for k in range(1, last + 1)]
        assert hits == sorted(hits)
        # stage-1 law
        if level(f, t) == 1 and f != BOT:
            assert f not in trace.stage(1)
    assert consistency_report(t, c, trace).passed


@settings(max_examples=40, deadline=None)
@given(theories(), st.data())
def test_entry_of_outside_closure(t, data):
    c = build_closure(t, [Var(i) for i, _ in t.definitions])
    trace = stabilize(t, c)
    n = len(t.definitions)
    f = data.draw(formulas(max_leaves=8, variables=n))
    e = entry_of(trace, f)
    oracle = StageOracle(t)
    horizon = trace.stabilized_at + sum(isinstance(g, Box) for g in subformulas(f)) + 2
    if e is NEVER:
        assert not oracle(f, horizon)
    else:
        assert oracle(f, e) and (e == 1 or not oracle(f, e - 1))


def test_entry_of_rules():
    c = build_closure(Theory(), [BOT])
    trace = stabilize(Theory(), c)
    assert entry_of(trace, And(Box(BOT), BOT)) == 1
    assert entry_of(trace, Or(Box(BOT), BOT)) == 2
    assert entry_of(trace, Imp(Box(BOT), BOT)) == 1
    assert entry_of(trace, Imp(BOT, Box(BOT))) is NEVER
