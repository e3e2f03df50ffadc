"""G1-style sequent calculi for minimal, intuitionistic and classical logic.

Search runs over set-based sequents with the principal formula kept in the
premises, so contexts only grow and the search space is finite.  Minimal and
intuitionistic search is goal-directed with a loop check on the branch;
classical search saturates with invertible rules only.  A successful search
is then rewritten into an explicit G1 tree over multisets, with weakening
and contraction steps made visible, for the game extraction to walk.

G1 rules used here share contexts between premises:

====  ==================================================================
Ax    ``p => p`` for atomic ``p`` (``bot`` counts as atomic)
BotAx ``bot => p`` for atomic ``p`` (not in minimal logic)
L&    ``G, A_i => D``  gives  ``G, A0 & A1 => D``
R&    ``G => A, D`` and ``G => B, D``  give  ``G => A & B, D``
L|    ``G, A => D`` and ``G, B => D``  give  ``G, A | B => D``
R|    ``G => A_i, D``  gives  ``G => A0 | A1, D``
L->   ``G => A, D`` and ``G, B => D``  give  ``G, A -> B => D``
R->   ``G, A => B, D``  gives  ``G => A -> B, D``
====  ==================================================================

In the single-succedent calculi ``D`` is empty in R-rules and the left
premise of L-> has the succedent ``A`` alone.  Structural rules are LW, RW,
LC and RC; RW and RC are classical only.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .formula import And, Bottom, Box, Formula, Imp, Or, Var, is_atomic, parse, render, subformulas
from .theory import Logic

RULES = ("Ax", "BotAx", "L&", "R&", "L|", "R|", "L->", "R->", "LW", "RW", "LC", "RC")


class BoxedInput(ValueError):
    """The propositional calculi here do not handle boxes."""


def _key(f: Formula) -> str:
    return render(f)


def _sorted(fs: Iterable[Formula]) -> tuple[Formula, ...]:
    return tuple(sorted(fs, key=_key))


@dataclass(frozen=True)
class Sequent:
    antecedent: tuple[Formula, ...]
    succedent: tuple[Formula, ...]

    @classmethod
    def of(cls, antecedent: Iterable[Formula], succedent: Formula | Iterable[Formula]) -> Sequent:
        suc = (succedent,) if isinstance(succedent, Formula) else tuple(succedent)
        return cls(tuple(antecedent), suc)

    @property
    def ant(self) -> Counter:
        return Counter(self.antecedent)

    @property
    def suc(self) -> Counter:
        return Counter(self.succedent)

    def same(self, other: Sequent) -> bool:
        return self.ant == other.ant and self.suc == other.suc

    def formulas(self) -> tuple[Formula, ...]:
        return self.antecedent + self.succedent

    def __str__(self) -> str:
        left = ", ".join(render(f) for f in self.antecedent)
        right = ", ".join(render(f) for f in self.succedent)
        return f"{left} => {right}".strip()

    def to_json(self) -> dict:
        return {"antecedent": [render(f) for f in self.antecedent],
                "succedent": [render(f) for f in self.succedent]}

    @classmethod
    def from_json(cls, obj: dict) -> Sequent:
        return cls(tuple(parse(s) for s in obj["antecedent"]), tuple(parse(s) for s in obj["succedent"]))


def parse_sequent(text: str) -> Sequent:
    """``A, B => C`` with ``,`` separating formulas; no ``=>`` means ``=> text``."""
    if "=>" in text:
        left, right = text.split("=>", 1)
    else:
        left, right = "", text

    def items(s: str) -> tuple[Formula, ...]:
        return tuple(parse(x) for x in _split_commas(s) if x.strip())

    return Sequent(items(left), items(right))


def _split_commas(s: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


@dataclass(frozen=True)
class ProofTree:
    rule: str
    sequent: Sequent
    principal: Formula | None = None
    children: tuple[ProofTree, ...] = ()

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def height(self) -> int:
        return 1 + max((c.height() for c in self.children), default=0)

    def nodes(self):
        stack = [self]
        while stack:
            n = stack.pop()
            yield n
            stack.extend(reversed(n.children))

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "principal": None if self.principal is None else render(self.principal),
            "sequent": self.sequent.to_json(),
            "children": [c.to_json() for c in self.children],
        }

    @classmethod
    def from_json(cls, obj: dict) -> ProofTree:
        p = obj.get("principal")
        return cls(obj["rule"], Sequent.from_json(obj["sequent"]),
                   None if p is None else parse(p),
                   tuple(cls.from_json(c) for c in obj.get("children", ())))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _has_box(s: Sequent) -> bool:
    return any(isinstance(g, Box) for f in s.formulas() for g in subformulas(f))


# ---------------------------------------------------------------------------
# multiset G1 construction helpers


def _mk(rule: str, ant: Counter, suc: Counter, principal=None, children=()) -> ProofTree:
    return ProofTree(rule, Sequent(_sorted(ant.elements()), _sorted(suc.elements())), principal, tuple(children))


def adjust(tr: ProofTree, ant: Counter, suc: Counter, logic: Logic) -> ProofTree:
    """Extend ``tr`` with contractions and weakenings until it proves ``ant => suc``."""
    cur_a, cur_s = tr.sequent.ant, tr.sequent.suc
    for f in _sorted(set(cur_a) | set(ant)):
        have, want = cur_a[f], ant[f]
        if have > want:
            if want == 0:
                raise ValueError(f"cannot remove {render(f)} from the antecedent")
            for _ in range(have - want):
                cur_a[f] -= 1
                tr = _mk("LC", cur_a, cur_s, f, [tr])
        for _ in range(want - have):
            cur_a[f] += 1
            tr = _mk("LW", cur_a, cur_s, f, [tr])
    for f in _sorted(set(cur_s) | set(suc)):
        have, want = cur_s[f], suc[f]
        if have != want and logic is not Logic.CLASSICAL:
            raise ValueError("single-succedent sequents cannot be restructured on the right")
        if have > want:
            if want == 0:
                raise ValueError(f"cannot remove {render(f)} from the succedent")
            for _ in range(have - want):
                cur_s[f] -= 1
                tr = _mk("RC", cur_a, cur_s, f, [tr])
        for _ in range(want - have):
            cur_s[f] += 1
            tr = _mk("RW", cur_a, cur_s, f, [tr])
    return tr


def _plus(c: Counter, *fs: Formula) -> Counter:
    out = Counter(c)
    for f in fs:
        out[f] += 1
    return out


def _minus(c: Counter, f: Formula) -> Counter:
    out = Counter(c)
    out[f] -= 1
    if out[f] <= 0:
        del out[f]
    return out


def bot_left(goal: Formula, logic: Logic) -> ProofTree:
    """G1 proof of ``bot => goal`` built from atomic ``bot``-axioms."""
    one = Counter([Bottom()])
    if is_atomic(goal):
        if isinstance(goal, Bottom):
            return _mk("Ax", one, Counter([goal]), goal)
        return _mk("BotAx", one, Counter([goal]), Bottom())
    if isinstance(goal, And):
        return _mk("R&", one, Counter([goal]), goal, [bot_left(goal.left, logic), bot_left(goal.right, logic)])
    if isinstance(goal, Or):
        return _mk("R|", one, Counter([goal]), goal, [bot_left(goal.left, logic)])
    if isinstance(goal, Imp):
        inner = adjust(bot_left(goal.conclusion, logic), _plus(one, goal.premise), Counter([goal.conclusion]), logic)
        return _mk("R->", one, Counter([goal]), goal, [inner])
    raise BoxedInput("box in sequent")


# ---------------------------------------------------------------------------
# search


@dataclass(frozen=True)
class _Node:
    """Set-sequent search result: rule name, principal, children."""
    rule: str
    gamma: frozenset
    delta: frozenset
    principal: Formula | None
    children: tuple
    extra: object = None


class _Search:
    def __init__(self, logic: Logic):
        self.logic = logic
        self.proved: dict = {}
        self.failed: set = set()

    # single succedent ------------------------------------------------------
    def single(self, gamma: frozenset, goal: Formula, history: frozenset) -> tuple[_Node | None, bool]:
        """Returns ``(node or None, depends_on_loop_check)``."""
        key = (gamma, goal)
        if key in self.proved:
            return self.proved[key], False
        if key in self.failed:
            return None, False
        if key in history:
            return None, True
        history = history | {key}
        node, looped = self._single(gamma, goal, history)
        if node is not None:
            self.proved[key] = node
        elif not looped:
            self.failed.add(key)
        return node, looped

    def _single(self, gamma, goal, history):
        d = frozenset([goal])
        if is_atomic(goal) and goal in gamma:
            return _Node("Ax", gamma, d, goal, ()), False
        if self.logic is not Logic.MINIMAL and Bottom() in gamma:
            return _Node("Bot", gamma, d, Bottom(), ()), False
        ordered = _sorted(gamma)
        # invertible steps
        for f in ordered:
            if isinstance(f, And) and not (f.left in gamma and f.right in gamma):
                sub, lp = self.single(gamma | {f.left, f.right}, goal, history)
                return (None if sub is None else _Node("L&", gamma, d, f, (sub,))), lp
        if isinstance(goal, Imp):
            sub, lp = self.single(gamma | {goal.premise}, goal.conclusion, history)
            return (None if sub is None else _Node("R->", gamma, d, goal, (sub,))), lp
        if isinstance(goal, And):
            a, l1 = self.single(gamma, goal.left, history)
            if a is None:
                return None, l1
            b, l2 = self.single(gamma, goal.right, history)
            return (None if b is None else _Node("R&", gamma, d, goal, (a, b))), l2
        for f in ordered:
            if isinstance(f, Or) and f.left not in gamma and f.right not in gamma:
                a, l1 = self.single(gamma | {f.left}, goal, history)
                if a is None:
                    return None, l1
                b, l2 = self.single(gamma | {f.right}, goal, history)
                return (None if b is None else _Node("L|", gamma, d, f, (a, b))), l2
        # choices
        looped = False
        if isinstance(goal, Or):
            for side, part in (("L", goal.left), ("R", goal.right)):
                sub, lp = self.single(gamma, part, history)
                looped |= lp
                if sub is not None:
                    return _Node("R|", gamma, d, goal, (sub,), side), False
        for f in ordered:
            if isinstance(f, Imp) and f.conclusion not in gamma:
                a, l1 = self.single(gamma, f.premise, history)
                looped |= l1
                if a is None:
                    continue
                b, l2 = self.single(gamma | {f.conclusion}, goal, history)
                looped |= l2
                if b is not None:
                    return _Node("L->", gamma, d, f, (a, b)), False
        return None, looped

    # multi succedent -------------------------------------------------------
    def multi(self, gamma: frozenset, delta: frozenset) -> _Node | None:
        key = (gamma, delta)
        if key in self.proved:
            return self.proved[key]
        if key in self.failed:
            return None
        node = self._multi(gamma, delta)
        if node is None:
            self.failed.add(key)
        else:
            self.proved[key] = node
        return node

    def _multi(self, gamma, delta):
        for p in _sorted(gamma & delta):
            if is_atomic(p):
                return _Node("Ax", gamma, delta, p, ())
        if Bottom() in gamma:
            return _Node("Bot", gamma, delta, Bottom(), ())
        for f in _sorted(gamma):
            if isinstance(f, And) and not (f.left in gamma and f.right in gamma):
                sub = self.multi(gamma | {f.left, f.right}, delta)
                return None if sub is None else _Node("L&", gamma, delta, f, (sub,))
        for f in _sorted(delta):
            if isinstance(f, Or) and not (f.left in delta and f.right in delta):
                sub = self.multi(gamma, delta | {f.left, f.right})
                return None if sub is None else _Node("R|", gamma, delta, f, (sub,))
            if isinstance(f, Imp) and not (f.premise in gamma and f.conclusion in delta):
                sub = self.multi(gamma | {f.premise}, delta | {f.conclusion})
                return None if sub is None else _Node("R->", gamma, delta, f, (sub,))
        for f in _sorted(delta):
            if isinstance(f, And) and f.left not in delta and f.right not in delta:
                a = self.multi(gamma, delta | {f.left})
                b = a and self.multi(gamma, delta | {f.right})
                return None if not b else _Node("R&", gamma, delta, f, (a, b))
        for f in _sorted(gamma):
            if isinstance(f, Or) and f.left not in gamma and f.right not in gamma:
                a = self.multi(gamma | {f.left}, delta)
                b = a and self.multi(gamma | {f.right}, delta)
                return None if not b else _Node("L|", gamma, delta, f, (a, b))
            if isinstance(f, Imp) and f.premise not in delta and f.conclusion not in gamma:
                a = self.multi(gamma, delta | {f.premise})
                b = a and self.multi(gamma | {f.conclusion}, delta)
                return None if not b else _Node("L->", gamma, delta, f, (a, b))
        return None


# ---------------------------------------------------------------------------
# translation into G1


class _Translator:
    def __init__(self, logic: Logic):
        self.logic = logic
        self.memo: dict[int, ProofTree] = {}

    def to_g1(self, n: _Node) -> ProofTree:
        hit = self.memo.get(id(n))
        if hit is None:
            hit = self.memo[id(n)] = self._to_g1(n)
        return hit

    def _fit(self, n: _Node, ant: Counter, suc: Counter) -> ProofTree:
        return adjust(self.to_g1(n), ant, suc, self.logic)

    def _to_g1(self, n: _Node) -> ProofTree:
        lg = self.logic
        G, D = Counter(n.gamma), Counter(n.delta)
        P = n.principal
        if n.rule == "Ax":
            return adjust(_mk("Ax", Counter([P]), Counter([P]), P), G, D, lg)
        if n.rule == "Bot":
            target = next((f for f in _sorted(n.delta) if is_atomic(f)), _sorted(n.delta)[0])
            return adjust(bot_left(target, lg), G, D, lg)
        if n.rule == "L&":
            (c,) = n.children
            new = [x for x in (P.left, P.right) if x not in n.gamma]
            tr = self._fit(c, _plus(G, *new), D)
            ant = _plus(G, *new)
            for x in new:
                ant = _plus(_minus(ant, x), P)
                tr = _mk("L&", ant, D, P, [tr])
            return adjust(tr, G, D, lg)
        if n.rule == "L|":
            a, b = n.children
            ta = self._fit(a, _plus(G, P.left), D)
            tb = self._fit(b, _plus(G, P.right), D)
            return adjust(_mk("L|", _plus(G, P), D, P, [ta, tb]), G, D, lg)
        if n.rule == "L->":
            a, b = n.children
            left_suc = _plus(D, P.premise) if lg is Logic.CLASSICAL else Counter([P.premise])
            ta = self._fit(a, G, left_suc)
            tb = self._fit(b, _plus(G, P.conclusion), D)
            return adjust(_mk("L->", _plus(G, P), D, P, [ta, tb]), G, D, lg)
        base = D if lg is Logic.CLASSICAL else Counter()
        if n.rule == "R->":
            (c,) = n.children
            tr = self._fit(c, _plus(G, P.premise), _plus(base, P.conclusion))
            return adjust(_mk("R->", G, _plus(base, P), P, [tr]), G, D, lg)
        if n.rule == "R&":
            a, b = n.children
            ta = self._fit(a, G, _plus(base, P.left))
            tb = self._fit(b, G, _plus(base, P.right))
            return adjust(_mk("R&", G, _plus(base, P), P, [ta, tb]), G, D, lg)
        if n.rule == "R|":
            (c,) = n.children
            if lg is not Logic.CLASSICAL:
                part = P.left if n.extra == "L" else P.right
                tr = self._fit(c, G, Counter([part]))
                return _mk("R|", G, Counter([P]), P, [tr])
            suc = _plus(D, P.left, P.right)
            tr = self._fit(c, G, suc)
            for x in (P.left, P.right):
                suc = _plus(_minus(suc, x), P)
                tr = _mk("R|", G, suc, P, [tr])
            return adjust(tr, G, D, lg)
        raise AssertionError(n.rule)


def prove(s: Sequent | Formula, logic: Logic | str = Logic.MINIMAL) -> ProofTree | None:
    """A checked-shape G1 proof of ``s``, or ``None`` when none exists.

    The search is complete for each calculus, so ``None`` is a definite
    verdict that the sequent is not derivable.
    """
    logic = Logic(logic)
    if isinstance(s, Formula):
        s = Sequent((), (s,))
    if _has_box(s):
        raise BoxedInput("boxes are not allowed in sequent proofs")
    search = _Search(logic)
    gamma = frozenset(s.antecedent)
    if logic is Logic.CLASSICAL:
        if not s.succedent:
            return None
        node = search.multi(gamma, frozenset(s.succedent))
    else:
        if len(s.succedent) != 1:
            raise ValueError("single-succedent calculus needs exactly one formula on the right")
        node, _ = search.single(gamma, s.succedent[0], frozenset())
    if node is None:
        return None
    tr = _Translator(logic).to_g1(node)
    return adjust(tr, s.ant, s.suc, logic)


def provable(f: Formula, logic: Logic | str = Logic.MINIMAL) -> bool:
    return prove(f, logic) is not None


# ---------------------------------------------------------------------------
# checking


@dataclass(frozen=True)
class TreeVerdict:
    ok: bool
    path: tuple[int, ...] = ()
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _one_of(child: Sequent, options: Sequence[tuple[Counter, Counter]]) -> bool:
    return any(child.ant == a and child.suc == s for a, s in options)


def _check_node(n: ProofTree, logic: Logic) -> str | None:
    s, P, kids = n.sequent, n.principal, n.children
    G, D = s.ant, s.suc
    if logic is not Logic.CLASSICAL and len(s.succedent) != 1:
        return "single-succedent calculus needs exactly one formula on the right"
    if n.rule not in RULES:
        return f"unknown rule {n.rule!r}"
    arity = {"Ax": 0, "BotAx": 0, "R&": 2, "L|": 2, "L->": 2}.get(n.rule, 1)
    if len(kids) != arity:
        return f"{n.rule} needs {arity} premise(s)"
    if P is None:
        return "missing principal formula"
    if n.rule == "Ax":
        ok = is_atomic(P) and G == Counter([P]) and D == Counter([P])
        return None if ok else "axiom must be p => p with p atomic"
    if n.rule == "BotAx":
        if logic is Logic.MINIMAL:
            return "bot => p is not an axiom of minimal logic"
        (goal,) = s.succedent if len(s.succedent) == 1 else (None,)
        ok = isinstance(P, Bottom) and G == Counter([P]) and goal is not None and is_atomic(goal)
        return None if ok else "bot axiom must be bot => p with p atomic"
    left_rules = {"L&": And, "L|": Or, "L->": Imp, "LW": Formula, "LC": Formula}
    right_rules = {"R&": And, "R|": Or, "R->": Imp, "RW": Formula, "RC": Formula}
    if n.rule in left_rules:
        if not isinstance(P, left_rules[n.rule]) or G[P] < 1:
            return "principal formula missing from the antecedent"
    else:
        if not isinstance(P, right_rules[n.rule]) or D[P] < 1:
            return "principal formula missing from the succedent"
    if n.rule in ("RW", "RC") and logic is not Logic.CLASSICAL:
        return "right structural rules are classical only"
    c = kids[0].sequent
    G0, D0 = _minus(G, P), _minus(D, P)
    if n.rule == "LW":
        return None if _one_of(c, [(G0, D)]) else "weakening premise mismatch"
    if n.rule == "RW":
        return None if _one_of(c, [(G, D0)]) else "weakening premise mismatch"
    if n.rule == "LC":
        return None if _one_of(c, [(_plus(G, P), D)]) else "contraction premise mismatch"
    if n.rule == "RC":
        return None if _one_of(c, [(G, _plus(D, P))]) else "contraction premise mismatch"
    if n.rule == "L&":
        ok = _one_of(c, [(_plus(G0, P.left), D), (_plus(G0, P.right), D)])
        return None if ok else "L& premise mismatch"
    if n.rule == "L|":
        ok = _one_of(c, [(_plus(G0, P.left), D)]) and _one_of(kids[1].sequent, [(_plus(G0, P.right), D)])
        return None if ok else "L| premise mismatch"
    if n.rule == "L->":
        left_suc = _plus(D, P.premise) if logic is Logic.CLASSICAL else Counter([P.premise])
        ok = _one_of(c, [(G0, left_suc)]) and _one_of(kids[1].sequent, [(_plus(G0, P.conclusion), D)])
        return None if ok else "L-> premise mismatch"
    if n.rule == "R->":
        ok = _one_of(c, [(_plus(G, P.premise), _plus(D0, P.conclusion))])
        return None if ok else "R-> premise mismatch"
    if n.rule == "R&":
        ok = _one_of(c, [(G, _plus(D0, P.left))]) and _one_of(kids[1].sequent, [(G, _plus(D0, P.right))])
        return None if ok else "R& premise mismatch"
    if n.rule == "R|":
        ok = _one_of(c, [(G, _plus(D0, P.left)), (G, _plus(D0, P.right))])
        return None if ok else "R| premise mismatch"
    raise AssertionError(n.rule)


def check_tree(tr: ProofTree, logic: Logic | str = Logic.MINIMAL) -> TreeVerdict:
    """Validate every rule application; reports the first bad node's path."""
    logic = Logic(logic)
    stack: list[tuple[ProofTree, tuple[int, ...]]] = [(tr, ())]
    while stack:
        n, path = stack.pop()
        if _has_box(n.sequent):
            return TreeVerdict(False, path, "boxes are not allowed in sequent proofs")
        why = _check_node(n, logic)
        if why:
            return TreeVerdict(False, path, why)
        for i in reversed(range(len(n.children))):
            stack.append((n.children[i], path + (i,)))
    return TreeVerdict(True)


# ---------------------------------------------------------------------------
# truth tables, used as an oracle for the classical calculus


def truth_value(f: Formula, valuation: dict[int, bool]) -> bool:
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Var):
        return valuation[f.index]
    if isinstance(f, And):
        return truth_value(f.left, valuation) and truth_value(f.right, valuation)
    if isinstance(f, Or):
        return truth_value(f.left, valuation) or truth_value(f.right, valuation)
    if isinstance(f, Imp):
        return (not truth_value(f.premise, valuation)) or truth_value(f.conclusion, valuation)
    raise BoxedInput("box in truth-table evaluation")


def is_tautology(f: Formula) -> bool:
    import itertools

    idx = sorted({g.index for g in subformulas(f) if isinstance(g, Var)})
    return all(truth_value(f, dict(zip(idx, bits)))
               for bits in itertools.product((False, True), repeat=len(idx)))
