"""Bounded, sound-only proof search for P.

The search works backwards over sequents ``hyps => goal`` and builds proof
terms, which are compiled and re-checked before anything is returned.  A
failed search says nothing about provability.

Box goals use one rule: to get ``[]C`` from the context ``G``, prove ``C``
from ``G`` together with ``A`` for every ``[]A`` in ``G``.  Hypotheses taken
from ``G`` itself are boxed by B4, the others are already boxed, and B3
distributes the box over the closed proof of ``C``.
"""

from __future__ import annotations

from typing import Iterable

from .formula import BOT, And, Box, Formula, Imp, Or, Var, render, unbox_prefix
from .terms import (
    Def,
    Given,
    Hyp,
    Lam,
    Term,
    UnboxT,
    and_intro,
    and_left,
    and_right,
    ax,
    b4,
    box_split_and,
    box_split_imp,
    box_split_or,
    compile_term,
    efq,
    or_elim,
    or_left,
    or_right,
)
from .theory import Derivation, Logic, Theory, check_derivation, require_valid

_MAX_CONTEXT = 64


class _Prover:
    def __init__(self, t: Theory, logic: Logic):
        self.t = t
        self.bodies = t.bodies
        self.efq = logic is not Logic.MINIMAL

    def saturate(self, ctx: dict[Formula, Term]) -> dict[Formula, Term]:
        ctx = dict(ctx)
        todo = list(ctx.items())
        while todo and len(ctx) < _MAX_CONTEXT:
            f, t = todo.pop()
            new: list[tuple[Formula, Term]] = []
            n, core = unbox_prefix(f)
            if isinstance(core, And):
                if n == 0:
                    new += [(core.left, and_left(t)), (core.right, and_right(t))]
                else:
                    a, b = box_split_and(t, n)
                    new += [(a.formula, a), (b.formula, b)]
            elif isinstance(core, Imp) and n > 0:
                s = box_split_imp(t, n)
                new.append((s.formula, s))
            elif isinstance(core, Or) and n > 0:
                s = box_split_or(t, n)
                new.append((s.formula, s))
            elif isinstance(core, Var) and n == 0 and core.index in self.bodies:
                d = Def(core.index, "->", self.t.axiom(core.index, "->"))
                new.append((self.bodies[core.index], d(t)))
            for g, s in new:
                if g not in ctx:
                    ctx[g] = s
                    todo.append((g, s))
        return ctx

    def prove(self, ctx: dict[Formula, Term], goal: Formula, budget: int,
              history: frozenset = frozenset()) -> Term | None:
        ctx = self.saturate(ctx)
        if goal in ctx:
            return ctx[goal]
        if self.efq and BOT in ctx:
            return efq(ctx[BOT], goal)
        key = (frozenset(ctx), goal)
        if key in history:
            return None
        history = history | {key}
        if isinstance(goal, Imp):
            h = Hyp(goal.premise)
            body = self.prove({**ctx, goal.premise: h}, goal.conclusion, budget, history)
            return None if body is None else Lam(h, body)
        if isinstance(goal, And):
            a = self.prove(ctx, goal.left, budget, history)
            b = a and self.prove(ctx, goal.right, budget, history)
            return and_intro(a, b) if b else None
        if isinstance(goal, Var) and goal.index in self.bodies:
            body = self.prove(ctx, self.bodies[goal.index], budget, history)
            if body is not None:
                return Def(goal.index, "<-", self.t.axiom(goal.index, "<-"))(body)
        for f in sorted(ctx, key=render):
            if isinstance(f, Or) and f.left not in ctx and f.right not in ctx:
                ha, hb = Hyp(f.left), Hyp(f.right)
                ta = self.prove({**ctx, f.left: ha}, goal, budget, history)
                tb = ta and self.prove({**ctx, f.right: hb}, goal, budget, history)
                return or_elim(ctx[f], Lam(ha, ta), Lam(hb, tb)) if tb else None
        if budget <= 0:
            return None
        budget -= 1
        if isinstance(goal, Or):
            for side in (goal.left, goal.right):
                s = self.prove(ctx, side, budget, history)
                if s is not None:
                    return or_left(s, goal.right) if side is goal.left else or_right(goal.left, s)
        if isinstance(goal, Box):
            s = self.box_step(ctx, goal.body, budget, history)
            if s is not None:
                return s
        for f in sorted(ctx, key=render):
            if isinstance(f, Imp) and f.conclusion not in ctx:
                a = self.prove(ctx, f.premise, budget, history)
                if a is None:
                    continue
                b = self.prove({**ctx, f.conclusion: ctx[f](a)}, goal, budget, history)
                if b is not None:
                    return b
        if all(not t.free for t in ctx.values()):
            s = self.prove(ctx, Box(goal), budget, history)
            if s is not None and not s.free:
                return UnboxT(s)
        return None

    def box_step(self, ctx: dict[Formula, Term], inner_goal: Formula, budget: int,
                 history: frozenset) -> Term | None:
        providers: dict[Formula, Term] = {}
        for f, t in ctx.items():
            providers.setdefault(f, b4(t))
        for f, t in ctx.items():
            if isinstance(f, Box):
                providers[f.body] = t
        hyps = {f: Hyp(f) for f in providers}
        body = self.prove(dict(hyps), inner_goal, budget, history)
        if body is None:
            return None
        used = [f for f in providers if hyps[f] in body.free]
        closed = body
        for f in reversed(used):
            closed = Lam(hyps[f], closed)
        out = b4(closed)
        for f in used:
            x, y = out.formula.body.premise, out.formula.body.conclusion
            out = ax("B3", A=x, B=y)(out)(providers[f])
        return out


def bounded_modal_prove(t: Theory, goal: Formula, budget: int = 6,
                        premises: Iterable[Formula] = (), logic: Logic | None = None) -> Derivation | None:
    """A checked derivation of ``goal`` found within ``budget``, or ``None``.

    ``budget`` bounds the nesting of non-invertible steps; the search runs
    with budgets ``0..budget`` in turn.  ``premises`` are usable as given
    lines.
    """
    require_valid(t)
    logic = logic or t.logic
    premises = tuple(premises)
    prover = _Prover(t, logic)
    start = {p: Given(p) for p in premises}
    for b in range(budget + 1):
        term = prover.prove(start, goal, b)
        if term is not None:
            d = compile_term(term)
            verdict = check_derivation(t, d, premises, logic=logic)
            if not verdict or d.conclusion != goal:
                raise AssertionError(f"search produced an invalid derivation: {verdict}")
            return d
    return None
