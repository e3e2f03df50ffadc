"""Proof terms over system P and their compilation to Hilbert derivations.

Terms are built bottom-up; every constructor checks its typing, so an
ill-formed proof fails at construction time rather than in the checker.
``Lam`` discharges a hypothesis; :func:`compile_term` removes it by bracket
abstraction with the K and S schemata, then lays the term out as lines.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .formula import BOT, And, Box, Formula, Imp, Or, boxes, render
from .theory import (
    Axiom,
    DefiningAxiom,
    Derivation,
    Line,
    ModusPonens,
    Premise,
    Theory,
    Unbox,
    logical_axiom_instance,
    schema_metavars,
)


class ProofTypeError(TypeError):
    pass


class Term:
    formula: Formula
    free: frozenset

    def __call__(self, arg: Term) -> Term:
        return MP(self, arg)


_hyp_ids = itertools.count()


@dataclass(frozen=True, eq=False)
class Hyp(Term):
    formula: Formula
    label: str = ""
    uid: int = field(default_factory=lambda: next(_hyp_ids))

    @property
    def free(self) -> frozenset:
        return frozenset((self,))

    def __repr__(self) -> str:
        return f"Hyp({self.label or self.uid}: {render(self.formula)})"


@dataclass(frozen=True)
class Ax(Term):
    schema: str
    subst: tuple[tuple[str, Formula], ...]
    formula: Formula = field(init=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "formula", logical_axiom_instance(self.schema, dict(self.subst)))

    free = frozenset()


@dataclass(frozen=True)
class Def(Term):
    index: int
    direction: str
    formula: Formula

    free = frozenset()


@dataclass(frozen=True)
class Given(Term):
    """An admitted premise."""

    formula: Formula
    free = frozenset()


@dataclass(frozen=True, eq=False)
class MP(Term):
    fun: Term
    arg: Term
    formula: Formula = field(init=False, compare=False)
    free: frozenset = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        f = self.fun.formula
        if not isinstance(f, Imp) or f.premise != self.arg.formula:
            raise ProofTypeError(
                f"cannot apply {render(f)} to {render(self.arg.formula)}")
        object.__setattr__(self, "formula", f.conclusion)
        object.__setattr__(self, "free", self.fun.free | self.arg.free)


@dataclass(frozen=True, eq=False)
class UnboxT(Term):
    proof: Term
    formula: Formula = field(init=False, compare=False)
    free: frozenset = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        f = self.proof.formula
        if not isinstance(f, Box):
            raise ProofTypeError(f"unbox needs a boxed formula, got {render(f)}")
        if self.proof.free:
            raise ProofTypeError("unbox applies only to closed proofs")
        object.__setattr__(self, "formula", f.body)
        object.__setattr__(self, "free", frozenset())


@dataclass(frozen=True, eq=False)
class Lam(Term):
    hyp: Hyp
    body: Term
    formula: Formula = field(init=False, compare=False)
    free: frozenset = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "formula", Imp(self.hyp.formula, self.body.formula))
        object.__setattr__(self, "free", self.body.free - {self.hyp})


# ---------------------------------------------------------------------------
# constructors


def ax(schema: str, **subst: Formula) -> Ax:
    wanted = schema_metavars(schema)
    return Ax(schema, tuple((k, subst[k]) for k in wanted))


def hyp(f: Formula, label: str = "") -> Hyp:
    return Hyp(f, label)


def lam(h: Hyp, body: Term) -> Lam:
    return Lam(h, body)


def fun(premise: Formula, build, label: str = "") -> Term:
    """``fun(A, lambda x: t)`` is the proof ``A -> type(t)`` discharging ``x``."""
    h = Hyp(premise, label)
    return Lam(h, build(h))


def identity(f: Formula) -> Term:
    return fun(f, lambda x: x)


def compose(f: Term, g: Term) -> Term:
    """From ``A -> B`` and ``B -> C`` get ``A -> C``."""
    a = f.formula.premise
    return fun(a, lambda x: g(f(x)))


def b4(t: Term) -> Term:
    """``A`` to ``[]A``."""
    return ax("B4", A=t.formula)(t)


def add_boxes(t: Term, k: int) -> Term:
    for _ in range(k):
        t = b4(t)
    return t


def box_lift(imp: Term, n: int) -> Term:
    """From ``A -> B`` get ``[]^n A -> []^n B`` (B4 then B3, ``n`` times)."""
    t = imp
    for _ in range(n):
        a, b = t.formula.premise, t.formula.conclusion
        t = ax("B3", A=a, B=b)(b4(t))
    return t


def box_mp(f: Term, a: Term, n: int) -> Term:
    """From ``A -> B`` and ``[]^n A`` get ``[]^n B``."""
    return box_lift(f, n)(a) if n else f(a)


def and_intro(a: Term, b: Term) -> Term:
    return ax("AND_I", A=a.formula, B=b.formula)(a)(b)


def and_left(t: Term) -> Term:
    f = t.formula
    return ax("AND_E1", A=f.left, B=f.right)(t)


def and_right(t: Term) -> Term:
    f = t.formula
    return ax("AND_E2", A=f.left, B=f.right)(t)


def or_left(t: Term, other: Formula) -> Term:
    return ax("OR_I1", A=t.formula, B=other)(t)


def or_right(other: Formula, t: Term) -> Term:
    return ax("OR_I2", A=other, B=t.formula)(t)


def or_elim(d: Term, f: Term, g: Term) -> Term:
    """Case split ``A | B`` with ``A -> C`` and ``B -> C``."""
    a, b = d.formula.left, d.formula.right
    c = f.formula.conclusion
    return ax("OR_E", A=a, B=b, C=c)(f)(g)(d)


def efq(t: Term, goal: Formula) -> Term:
    return ax("EFQ", A=goal)(t)


def dne(t: Term) -> Term:
    """From ``~~A`` get ``A`` (classical only)."""
    return ax("DNE", A=t.formula.premise.premise)(t)


def box_split_and(t: Term, n: int) -> tuple[Term, Term]:
    """``[]^n (A & B)`` to ``[]^n A`` and ``[]^n B``."""
    inner = _peel(t.formula, n)
    a, b = inner.left, inner.right
    return (box_mp(ax("AND_E1", A=a, B=b), t, n), box_mp(ax("AND_E2", A=a, B=b), t, n))


def box_join_and(x: Term, y: Term, n: int) -> Term:
    """``[]^n A`` and ``[]^n B`` to ``[]^n (A & B)`` (uses B2r)."""
    if n == 0:
        return and_intro(x, y)
    a, b = _peel(x.formula, n), _peel(y.formula, n)
    step = _join_and_lemma(a, b, n)
    return step(and_intro(x, y))


def _join_and_lemma(a: Formula, b: Formula, n: int) -> Term:
    # closed proof of []^n a & []^n b -> []^n (a & b)
    if n == 0:
        return identity(And(a, b))
    outer = ax("B2r", A=boxes(a, n - 1), B=boxes(b, n - 1))
    if n == 1:
        return outer
    inner = box_lift(_join_and_lemma(a, b, n - 1), 1)
    return compose(outer, inner)


def box_split_or(t: Term, n: int) -> Term:
    """``[]^n (A | B)`` to ``[]^n A | []^n B`` (uses B1)."""
    if n == 0:
        return t
    inner = _peel(t.formula, n)
    return _split_or_lemma(inner.left, inner.right, n)(t)


def _split_or_lemma(a: Formula, b: Formula, n: int) -> Term:
    if n == 0:
        return identity(Or(a, b))
    outer = ax("B1", A=boxes(a, n - 1), B=boxes(b, n - 1))
    if n == 1:
        return outer
    lifted = box_lift(_split_or_lemma(a, b, n - 1), 1)
    return compose(lifted, outer)


def box_join_or(t: Term, n: int) -> Term:
    """``[]^n A | []^n B`` to ``[]^n (A | B)`` (no B1r needed)."""
    a, b = _peel(t.formula.left, n), _peel(t.formula.right, n)
    left = box_lift(ax("OR_I1", A=a, B=b), n)
    right = box_lift(ax("OR_I2", A=a, B=b), n)
    return or_elim(t, left, right)


def box_split_imp(t: Term, n: int) -> Term:
    """``[]^n (A -> B)`` to ``[]^n A -> []^n B`` (B3 chain)."""
    if n == 0:
        return t
    inner = _peel(t.formula, n)
    return _split_imp_lemma(inner.premise, inner.conclusion, n)(t)


def _split_imp_lemma(a: Formula, b: Formula, n: int) -> Term:
    if n == 0:
        return identity(Imp(a, b))
    outer = ax("B3", A=boxes(a, n - 1), B=boxes(b, n - 1))
    if n == 1:
        return outer
    lifted = box_lift(_split_imp_lemma(a, b, n - 1), 1)
    return compose(lifted, outer)


def _peel(f: Formula, n: int) -> Formula:
    for _ in range(n):
        if not isinstance(f, Box):
            raise ProofTypeError(f"expected {n} boxes on {render(f)}")
        f = f.body
    return f


def box_efq(t: Term, n: int, goal: Formula) -> Term:
    """``[]^n bot`` to ``[]^n goal``."""
    return box_mp(ax("EFQ", A=goal), t, n)


# ---------------------------------------------------------------------------
# compilation


class CompileError(ValueError):
    pass


def _k(body: Term, h: Hyp) -> Term:
    return ax("K", A=body.formula, B=h.formula)(body)


def _i(f: Formula) -> Term:
    ff = Imp(f, f)
    s = ax("S", A=f, B=ff, C=f)
    return s(ax("K", A=f, B=ff))(ax("K", A=f, B=f))


def _abstract(h: Hyp, t: Term, memo: dict) -> Term:
    key = (h, id(t))
    hit = memo.get(key)
    if hit is not None:
        return hit[1]
    if h not in t.free:
        out = _k(t, h)
    elif t is h:
        out = _i(h.formula)
    elif isinstance(t, MP):
        if t.arg is h and h not in t.fun.free:
            out = t.fun
        else:
            f = _abstract(h, t.fun, memo)
            a = _abstract(h, t.arg, memo)
            s = ax("S", A=h.formula, B=t.arg.formula, C=t.formula)
            out = s(f)(a)
    elif isinstance(t, Lam):
        out = _abstract(h, _eliminate(t, memo), memo)
    else:
        raise CompileError(f"cannot discharge {h!r} through {type(t).__name__}")
    memo[key] = (t, out)
    return out


def _eliminate(t: Term, memo: dict) -> Term:
    """Rewrite away every Lam, leaving axioms, MP, unbox and leaves."""
    key = ("elim", id(t))
    hit = memo.get(key)
    if hit is not None:
        return hit[1]
    if isinstance(t, Lam):
        out = _abstract(t.hyp, _eliminate(t.body, memo), memo)
    elif isinstance(t, MP):
        f, a = _eliminate(t.fun, memo), _eliminate(t.arg, memo)
        out = t if (f is t.fun and a is t.arg) else MP(f, a)
    elif isinstance(t, UnboxT):
        p = _eliminate(t.proof, memo)
        out = t if p is t.proof else UnboxT(p)
    else:
        out = t
    memo[key] = (t, out)
    return out


def compile_term(t: Term) -> Derivation:
    """Lay a closed proof term out as a checkable derivation.

    Each formula is proved once; later uses refer back to the first line
    that established it.
    """
    if t.free:
        names = ", ".join(render(h.formula) for h in t.free)
        raise CompileError(f"open hypotheses remain: {names}")
    flat = _eliminate(t, {})
    lines: list[Line] = []
    where: dict[Formula, int] = {}

    stack: list[tuple[Term, bool]] = [(flat, False)]
    while stack:
        node, ready = stack.pop()
        if node.formula in where:
            continue
        if isinstance(node, MP) and not ready:
            stack.append((node, True))
            stack.append((node.arg, False))
            stack.append((node.fun, False))
            continue
        if isinstance(node, UnboxT) and not ready:
            stack.append((node, True))
            stack.append((node.proof, False))
            continue
        if isinstance(node, Ax):
            j = Axiom(node.schema, node.subst)
        elif isinstance(node, Def):
            j = DefiningAxiom(node.index, node.direction)
        elif isinstance(node, Given):
            j = Premise()
        elif isinstance(node, MP):
            j = ModusPonens(where[node.fun.formula], where[node.arg.formula])
        elif isinstance(node, UnboxT):
            j = Unbox(where[node.proof.formula])
        else:
            raise CompileError(f"unexpected node {node!r}")
        lines.append(Line(node.formula, j))
        where[node.formula] = len(lines)
    if lines[-1].formula != flat.formula:
        # the goal was reached earlier inside the proof; restate it last
        lines.append(lines[where[flat.formula] - 1])
    return Derivation(tuple(lines))


def definition(t: Theory, i: int, direction: str) -> Def:
    return Def(i, direction, t.axiom(i, direction))


def given(f: Formula) -> Given:
    return Given(f)


def unbox(t: Term) -> Term:
    return UnboxT(t)


def neg_intro(premise: Formula, build, label: str = "") -> Term:
    """``~A`` from a proof of ``bot`` under ``A``."""
    t = fun(premise, build, label)
    if t.formula.conclusion != BOT:
        raise ProofTypeError("negation introduction needs a proof of bot")
    return t
