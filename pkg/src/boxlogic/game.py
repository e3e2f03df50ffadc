"""The box-insertion game between Attacker and Defender.

Each atomic occurrence of the subject is a slot.  Slots are played in a
fixed left-to-right order; the owner of a slot picks how many boxes to put
in front of that occurrence.  Positive occurrences belong to Defender,
negative ones to Attacker.  Defender wins when the boxed result is a theorem
of the base logic plus the box axioms.

Strategies are small terms over the history of earlier moves.  From a G1
proof of the subject we read off a Defender strategy that copies (or takes
the maximum of) the Attacker moves linked to each Defender slot by the
axioms of the proof, together with a builder that turns any concrete play
into a checkable derivation of the boxed formula.
"""

from __future__ import annotations

import itertools
import json
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .formula import (
    BOT,
    And,
    Bottom,
    Box,
    Formula,
    Imp,
    Occurrence,
    Or,
    Player,
    atomic_occurrences,
    box_atoms,
    disj,
    imp_chain,
    is_atomic,
    neg,
    render,
    strip_boxes,
)
from .sequent import ProofTree, Sequent, check_tree
from .terms import (
    Hyp,
    Lam,
    Term,
    add_boxes,
    and_intro,
    and_left,
    and_right,
    box_efq,
    box_lift,
    compile_term,
    dne,
    efq,
    fun,
    or_elim,
    or_left,
    or_right,
)
from .theory import Derivation, Logic, Theory, Variant, check_derivation

Path = tuple[str, ...]


# ---------------------------------------------------------------------------
# arenas


@dataclass(frozen=True)
class Arena:
    """A subject formula with its slot schedule.

    A sequent ``G1, ..., Gn => C`` is played as ``G1 -> ... -> Gn -> C``,
    which puts the antecedent block first with roles switched.
    """

    subject: Formula
    sequent: Sequent | None = None

    @classmethod
    def of_formula(cls, f: Formula) -> Arena:
        return cls(f)

    @classmethod
    def of_sequent(cls, s: Sequent) -> Arena:
        if len(s.succedent) > 1:
            goal = disj(s.succedent)
        elif s.succedent:
            goal = s.succedent[0]
        else:
            goal = BOT
        return cls(imp_chain(s.antecedent, goal), s)

    @property
    def schedule(self) -> list[Occurrence]:
        return atomic_occurrences(self.subject)

    def slots(self, player: Player | None = None) -> list[int]:
        return [i for i, o in enumerate(self.schedule) if player is None or o.mover is player]

    def slot_of(self, path: Path) -> int:
        for i, o in enumerate(self.schedule):
            if o.path == path:
                return i
        raise KeyError(f"no atomic occurrence at {path}")

    def boxed(self, transcript: Sequence[int]) -> Formula:
        sched = self.schedule
        if len(transcript) != len(sched):
            raise ValueError("transcript length does not match the schedule")
        counts = {o.path: k for o, k in zip(sched, transcript)}
        return box_atoms(self.subject, counts)

    def table(self) -> str:
        rows = ["slot  mover     polarity  atom  path"]
        for i, o in enumerate(self.schedule):
            rows.append(f"{i:>4}  {o.mover.value:<8}  {o.polarity.value:<8}  {render(o.atom):<4}  "
                        f"{'.'.join(o.path) or '-'}")
        return "\n".join(rows)

    def to_json(self) -> dict:
        return {
            "subject": render(self.subject),
            "schedule": [{"slot": i, "mover": o.mover.value, "polarity": o.polarity.value,
                          "atom": render(o.atom), "path": list(o.path)}
                         for i, o in enumerate(self.schedule)],
        }


# ---------------------------------------------------------------------------
# strategy terms


class StrategyError(ValueError):
    pass


@dataclass(frozen=True)
class Const:
    value: int

    def __post_init__(self) -> None:
        if self.value < 0:
            raise StrategyError("box counts are non-negative")


@dataclass(frozen=True)
class Move:
    slot: int


@dataclass(frozen=True)
class Max:
    args: tuple

    def __post_init__(self) -> None:
        if not self.args:
            raise StrategyError("Max needs at least one argument")


@dataclass(frozen=True)
class Plus:
    term: object
    const: int

    def __post_init__(self) -> None:
        if self.const < 0:
            raise StrategyError("Plus adds a non-negative constant")


STerm = Const | Move | Max | Plus


def evaluate(t: STerm, history: Sequence[int]) -> int:
    if isinstance(t, Const):
        return t.value
    if isinstance(t, Move):
        return history[t.slot]
    if isinstance(t, Max):
        return max(evaluate(a, history) for a in t.args)
    if isinstance(t, Plus):
        return evaluate(t.term, history) + t.const
    raise StrategyError(f"not a strategy term: {t!r}")


def refs(t: STerm) -> set[int]:
    if isinstance(t, Move):
        return {t.slot}
    if isinstance(t, Max):
        return set().union(*(refs(a) for a in t.args))
    if isinstance(t, Plus):
        return refs(t.term)
    return set()


def term_to_json(t: STerm):
    if isinstance(t, Const):
        return {"const": t.value}
    if isinstance(t, Move):
        return {"move": t.slot}
    if isinstance(t, Max):
        return {"max": [term_to_json(a) for a in t.args]}
    return {"plus": [term_to_json(t.term), t.const]}


def term_from_json(obj) -> STerm:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise StrategyError(f"bad strategy term {obj!r}")
    (k, v), = obj.items()
    if k == "const":
        return Const(int(v))
    if k == "move":
        return Move(int(v))
    if k == "max":
        return Max(tuple(term_from_json(a) for a in v))
    if k == "plus":
        return Plus(term_from_json(v[0]), int(v[1]))
    raise StrategyError(f"unknown strategy term {k!r}")


def show_term(t: STerm) -> str:
    if isinstance(t, Const):
        return str(t.value)
    if isinstance(t, Move):
        return f"#{t.slot}"
    if isinstance(t, Max):
        return "max(" + ", ".join(show_term(a) for a in t.args) + ")"
    return f"{show_term(t.term)}+{t.const}"


@dataclass(frozen=True)
class Strategy:
    player: Player
    moves: tuple[tuple[int, STerm], ...]

    @classmethod
    def of(cls, player: Player, moves: Mapping[int, STerm]) -> Strategy:
        return cls(player, tuple(sorted(moves.items())))

    @classmethod
    def constant(cls, arena: Arena, player: Player, k: int | Sequence[int]) -> Strategy:
        own = arena.slots(player)
        ks = [k] * len(own) if isinstance(k, int) else list(k)
        return cls.of(player, {s: Const(v) for s, v in zip(own, ks)})

    def term(self, slot: int) -> STerm:
        return dict(self.moves)[slot]

    @property
    def table(self) -> dict[int, STerm]:
        return dict(self.moves)

    def validate(self, arena: Arena) -> None:
        own = set(arena.slots(self.player))
        have = {s for s, _ in self.moves}
        if have != own:
            raise StrategyError(f"{self.player.value} strategy covers slots {sorted(have)}, "
                                f"expected {sorted(own)}")
        for s, t in self.moves:
            bad = [r for r in refs(t) if not 0 <= r < s]
            if bad:
                raise StrategyError(f"slot {s} refers to slot(s) {bad}, which are not earlier")

    def to_json(self) -> dict:
        return {"player": self.player.value,
                "moves": {str(s): term_to_json(t) for s, t in self.moves}}

    @classmethod
    def from_json(cls, obj: dict) -> Strategy:
        return cls.of(Player(obj["player"]), {int(s): term_from_json(t) for s, t in obj["moves"].items()})

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


# ---------------------------------------------------------------------------
# play


@dataclass
class PlayResult:
    arena: Arena
    transcript: tuple[int, ...]
    boxed: Formula
    certificate: Derivation | None = None
    logic: Logic = Logic.MINIMAL

    def to_json(self) -> dict:
        return {"subject": render(self.arena.subject), "transcript": list(self.transcript),
                "boxed": render(self.boxed), "certified_by": None if self.certificate is None
                else len(self.certificate.lines)}


def play(arena: Arena, defender: Strategy, attacker: Strategy) -> PlayResult:
    """Run both strategies over the schedule and assemble the boxed formula."""
    if defender.player is not Player.DEFENDER or attacker.player is not Player.ATTACKER:
        raise StrategyError("strategy roles are swapped")
    defender.validate(arena)
    attacker.validate(arena)
    table = {**attacker.table, **defender.table}
    history: list[int] = []
    for slot in range(len(arena.schedule)):
        history.append(evaluate(table[slot], history))
    return PlayResult(arena, tuple(history), arena.boxed(history))


def transcript_play(arena: Arena, transcript: Sequence[int]) -> PlayResult:
    """The play whose moves are exactly ``transcript``."""
    return PlayResult(arena, tuple(transcript), arena.boxed(transcript))


# ---------------------------------------------------------------------------
# extraction


class StrategyExtractionError(ValueError):
    """The proof links a Defender slot to a later Attacker slot.

    Copying strategies cannot answer a move that has not been made yet.
    """


class CertificateError(ValueError):
    pass


@dataclass(frozen=True)
class _Occ:
    formula: Formula
    tag: Path
    term: Term | None = None


def _take(occs: list[_Occ], f: Formula) -> tuple[_Occ, list[_Occ]]:
    for i, o in enumerate(occs):
        if o.formula == f:
            return o, occs[:i] + occs[i + 1:]
    raise CertificateError(f"{render(f)} not found in the tagged sequent")


def _same(occs: list[_Occ], fs: Sequence[Formula]) -> bool:
    return Counter(o.formula for o in occs) == Counter(fs)


def _link_axioms(tr: ProofTree, ant: list[_Occ], suc: list[_Occ], logic: Logic,
                 out: list[tuple[Path, Path]]) -> None:
    """Collect ``(defender_tag, attacker_tag)`` pairs from the axioms of ``tr``."""
    stack = [(tr, ant, suc)]
    while stack:
        n, ant, suc = stack.pop()
        for (kid, a, s) in _premises(n, ant, suc, logic):
            stack.append((kid, a, s))
        if n.rule in ("Ax", "BotAx"):
            out.append((suc[0].tag, ant[0].tag))


def _premises(n: ProofTree, ant: list[_Occ], suc: list[_Occ], logic: Logic):
    """Tagged premise sequents of node ``n`` (terms are not tracked here)."""
    P, kids = n.principal, n.children
    r = n.rule
    if r in ("Ax", "BotAx"):
        return []
    if r in ("LW", "LC", "L&", "L|", "L->"):
        o, rest = _take(ant, P)
    else:
        o, rest = _take(suc, P)
    t = o.tag
    if r == "LW":
        return [(kids[0], rest, suc)]
    if r == "RW":
        return [(kids[0], ant, rest)]
    if r == "LC":
        return [(kids[0], ant + [o], suc)]
    if r == "RC":
        return [(kids[0], ant, suc + [o])]
    if r == "L&":
        left = rest + [_Occ(P.left, t + ("L",))]
        if _same(left, kids[0].sequent.antecedent):
            return [(kids[0], left, suc)]
        return [(kids[0], rest + [_Occ(P.right, t + ("R",))], suc)]
    if r == "L|":
        return [(kids[0], rest + [_Occ(P.left, t + ("L",))], suc),
                (kids[1], rest + [_Occ(P.right, t + ("R",))], suc)]
    if r == "L->":
        a = _Occ(P.premise, t + ("P",))
        left_suc = suc + [a] if logic is Logic.CLASSICAL else [a]
        return [(kids[0], rest, left_suc),
                (kids[1], rest + [_Occ(P.conclusion, t + ("C",))], suc)]
    if r == "R->":
        return [(kids[0], ant + [_Occ(P.premise, t + ("P",))], rest + [_Occ(P.conclusion, t + ("C",))])]
    if r == "R&":
        return [(kids[0], ant, rest + [_Occ(P.left, t + ("L",))]),
                (kids[1], ant, rest + [_Occ(P.right, t + ("R",))])]
    if r == "R|":
        left = rest + [_Occ(P.left, t + ("L",))]
        if _same(left, kids[0].sequent.succedent):
            return [(kids[0], ant, left)]
        return [(kids[0], ant, rest + [_Occ(P.right, t + ("R",))])]
    raise CertificateError(f"unknown rule {r}")


def _root_occurrences(arena: Arena, s: Sequent) -> tuple[list[_Occ], list[_Occ]]:
    ant = [_Occ(f, ("C",) * i + ("P",)) for i, f in enumerate(s.antecedent)]
    suc = [_Occ(s.succedent[0], ("C",) * len(s.antecedent))]
    return ant, suc


@dataclass
class Extraction:
    """A Defender strategy read off a proof, plus the certificate builder."""

    arena: Arena
    strategy: Strategy
    tree: ProofTree
    logic: Logic
    links: dict[int, tuple[int, ...]] = field(default_factory=dict)

    def certificate_term(self, transcript: Sequence[int]) -> Term:
        return build_certificate(self.arena, self.tree, self.logic, transcript)

    def certificate(self, transcript: Sequence[int]) -> Derivation:
        return compile_term(self.certificate_term(transcript))

    def play(self, attacker: Strategy, certify: bool = True) -> PlayResult:
        r = play(self.arena, self.strategy, attacker)
        r.logic = self.logic
        if certify:
            r.certificate = self.certificate(r.transcript)
        return r

    def to_json(self) -> dict:
        return {"arena": self.arena.to_json(), "logic": self.logic.value,
                "strategy": self.strategy.to_json(),
                "links": {str(d): list(a) for d, a in sorted(self.links.items())}}


def extract_defender_strategy(tr: ProofTree, logic: Logic | str = Logic.MINIMAL) -> Extraction:
    """Defender's copy-and-max strategy for the end sequent of ``tr``.

    Each Defender slot answers with the maximum of the Attacker slots that
    reach it through an axiom of the proof, and with 0 when the occurrence
    is weakened away everywhere.
    """
    logic = Logic(logic)
    verdict = check_tree(tr, logic)
    if not verdict:
        raise CertificateError(f"proof tree rejected at {verdict.path}: {verdict.reason}")
    root = tr.sequent
    if len(root.succedent) != 1:
        raise CertificateError("extraction needs exactly one formula on the right of the end sequent")
    arena = Arena.of_sequent(root) if root.antecedent else Arena.of_formula(root.succedent[0])
    ant, suc = _root_occurrences(arena, root)
    pairs: list[tuple[Path, Path]] = []
    _link_axioms(tr, ant, suc, logic, pairs)
    slot = {o.path: i for i, o in enumerate(arena.schedule)}
    links: dict[int, set[int]] = {i: set() for i in arena.slots(Player.DEFENDER)}
    for d, a in pairs:
        links[slot[d]].add(slot[a])
    moves: dict[int, STerm] = {}
    for d, attackers in links.items():
        late = sorted(a for a in attackers if a > d)
        if late:
            raise StrategyExtractionError(
                f"defender slot {d} must answer attacker slot(s) {late}, which are played later")
        ordered = sorted(attackers)
        if not ordered:
            moves[d] = Const(0)
        elif len(ordered) == 1:
            moves[d] = Move(ordered[0])
        else:
            moves[d] = Max(tuple(Move(a) for a in ordered))
    return Extraction(arena, Strategy.of(Player.DEFENDER, moves), tr, logic,
                      {d: tuple(sorted(a)) for d, a in links.items()})


def order_respecting(tr: ProofTree, logic: Logic | str = Logic.MINIMAL) -> bool:
    try:
        extract_defender_strategy(tr, logic)
    except StrategyExtractionError:
        return False
    return True


# ---------------------------------------------------------------------------
# certificates


def build_certificate(arena: Arena, tr: ProofTree, logic: Logic, transcript: Sequence[int]) -> Term:
    """Closed proof term of ``arena.boxed(transcript)`` following ``tr``."""
    counts = {o.path: k for o, k in zip(arena.schedule, transcript)}

    def bx(o: _Occ) -> Formula:
        return box_atoms(o.formula, counts, o.tag)

    root = tr.sequent
    ant, suc = _root_occurrences(arena, root)
    hyps = [Hyp(bx(o)) for o in ant]
    ant = [_Occ(o.formula, o.tag, h) for o, h in zip(ant, hyps)]

    def raise_to(t: Term, a: int, d: int, goal_atom: Formula, src_atom: Formula) -> Term:
        if d < a:
            raise CertificateError(f"defender played {d} boxes against {a}")
        if isinstance(src_atom, Bottom) and goal_atom != src_atom:
            t = box_efq(t, a, goal_atom) if a else efq(t, goal_atom)
        return add_boxes(t, d - a)

    def axiom_term(n: ProofTree, a_occ: _Occ, d_occ: _Occ) -> Term:
        a = counts[a_occ.tag]
        d = counts[d_occ.tag]
        return raise_to(a_occ.term, a, d, d_occ.formula, a_occ.formula)

    if logic is Logic.CLASSICAL:
        u = Hyp(neg(bx(suc[0])))
        body = _classical(tr, ant, [_Occ(suc[0].formula, suc[0].tag, u)], bx, axiom_term)
        term = dne(Lam(u, body))
    else:
        term = _direct(tr, ant, suc[0], bx, axiom_term)
    for h in reversed(hyps):
        term = Lam(h, term)
    return term


def _direct(tr: ProofTree, ant: list[_Occ], goal: _Occ, bx, axiom_term) -> Term:
    """Minimal/intuitionistic certificate: a term for the boxed goal."""
    n, P, r = tr, tr.principal, tr.rule
    if r == "Ax" or r == "BotAx":
        return axiom_term(n, ant[0], goal)
    if r in ("LW", "LC", "L&", "L|", "L->"):
        o, rest = _take(ant, P)
        t = o.tag
        if r == "LW":
            return _direct(n.children[0], rest, goal, bx, axiom_term)
        if r == "LC":
            return _direct(n.children[0], ant + [o], goal, bx, axiom_term)
        if r == "L&":
            left = Counter(x.formula for x in rest) + Counter([P.left])
            if left == n.children[0].sequent.ant:
                new = _Occ(P.left, t + ("L",), and_left(o.term))
            else:
                new = _Occ(P.right, t + ("R",), and_right(o.term))
            return _direct(n.children[0], rest + [new], goal, bx, axiom_term)
        if r == "L|":
            a, b = _Occ(P.left, t + ("L",)), _Occ(P.right, t + ("R",))
            ha, hb = Hyp(bx(a)), Hyp(bx(b))
            ta = _direct(n.children[0], rest + [_Occ(a.formula, a.tag, ha)], goal, bx, axiom_term)
            tb = _direct(n.children[1], rest + [_Occ(b.formula, b.tag, hb)], goal, bx, axiom_term)
            return or_elim(o.term, Lam(ha, ta), Lam(hb, tb))
        a_goal = _Occ(P.premise, t + ("P",))
        arg = _direct(n.children[0], rest, a_goal, bx, axiom_term)
        b = _Occ(P.conclusion, t + ("C",), o.term(arg))
        return _direct(n.children[1], rest + [b], goal, bx, axiom_term)
    t = goal.tag
    if r == "R->":
        a = _Occ(P.premise, t + ("P",))
        h = Hyp(bx(a))
        body = _direct(n.children[0], ant + [_Occ(a.formula, a.tag, h)],
                       _Occ(P.conclusion, t + ("C",)), bx, axiom_term)
        return Lam(h, body)
    if r == "R&":
        x = _direct(n.children[0], ant, _Occ(P.left, t + ("L",)), bx, axiom_term)
        y = _direct(n.children[1], ant, _Occ(P.right, t + ("R",)), bx, axiom_term)
        return and_intro(x, y)
    if r == "R|":
        left = _Occ(P.left, t + ("L",))
        right = _Occ(P.right, t + ("R",))
        if n.children[0].sequent.succedent[0] == P.left:
            return or_left(_direct(n.children[0], ant, left, bx, axiom_term), bx(right))
        return or_right(bx(left), _direct(n.children[0], ant, right, bx, axiom_term))
    raise CertificateError(f"rule {r} cannot appear in a single-succedent proof")


def _classical(tr: ProofTree, ant: list[_Occ], suc: list[_Occ], bx, axiom_term) -> Term:
    """Classical certificate: a proof of ``bot`` from the boxed antecedent and
    the negations of the boxed succedent formulas (carried as ``term``)."""
    n, P, r = tr, tr.principal, tr.rule
    kids = n.children
    if r in ("Ax", "BotAx"):
        d = suc[0]
        return d.term(axiom_term(n, ant[0], d))
    if r in ("LW", "LC", "L&", "L|", "L->"):
        o, rest = _take(ant, P)
        t = o.tag
        if r == "LW":
            return _classical(kids[0], rest, suc, bx, axiom_term)
        if r == "LC":
            return _classical(kids[0], ant + [o], suc, bx, axiom_term)
        if r == "L&":
            left = Counter(x.formula for x in rest) + Counter([P.left])
            if left == kids[0].sequent.ant:
                new = _Occ(P.left, t + ("L",), and_left(o.term))
            else:
                new = _Occ(P.right, t + ("R",), and_right(o.term))
            return _classical(kids[0], rest + [new], suc, bx, axiom_term)
        if r == "L|":
            a, b = _Occ(P.left, t + ("L",)), _Occ(P.right, t + ("R",))
            ha, hb = Hyp(bx(a)), Hyp(bx(b))
            ta = _classical(kids[0], rest + [_Occ(a.formula, a.tag, ha)], suc, bx, axiom_term)
            tb = _classical(kids[1], rest + [_Occ(b.formula, b.tag, hb)], suc, bx, axiom_term)
            return or_elim(o.term, Lam(ha, ta), Lam(hb, tb))
        a = _Occ(P.premise, t + ("P",))
        u = Hyp(neg(bx(a)))
        t1 = _classical(kids[0], rest, suc + [_Occ(a.formula, a.tag, u)], bx, axiom_term)
        arg = dne(Lam(u, t1))
        b = _Occ(P.conclusion, t + ("C",), o.term(arg))
        return _classical(kids[1], rest + [b], suc, bx, axiom_term)
    o, rest = _take(suc, P)
    t = o.tag
    if r == "RW":
        return _classical(kids[0], ant, rest, bx, axiom_term)
    if r == "RC":
        return _classical(kids[0], ant, suc + [o], bx, axiom_term)
    if r == "R->":
        a, b = _Occ(P.premise, t + ("P",)), _Occ(P.conclusion, t + ("C",))
        x, u = Hyp(bx(a)), Hyp(neg(bx(b)))
        body = _classical(kids[0], ant + [_Occ(a.formula, a.tag, x)],
                          rest + [_Occ(b.formula, b.tag, u)], bx, axiom_term)
        return o.term(Lam(x, dne(Lam(u, body))))
    if r == "R&":
        parts = []
        for kid, f, step in ((kids[0], P.left, "L"), (kids[1], P.right, "R")):
            u = Hyp(neg(bx(_Occ(f, t + (step,)))))
            body = _classical(kid, ant, rest + [_Occ(f, t + (step,), u)], bx, axiom_term)
            parts.append(dne(Lam(u, body)))
        return o.term(and_intro(*parts))
    if r == "R|":
        left = Counter(x.formula for x in rest) + Counter([P.left])
        a, b = _Occ(P.left, t + ("L",)), _Occ(P.right, t + ("R",))
        if left == kids[0].sequent.suc:
            refute = fun(bx(a), lambda x: o.term(or_left(x, bx(b))))
            new = _Occ(a.formula, a.tag, refute)
        else:
            refute = fun(bx(b), lambda y: o.term(or_right(bx(a), y)))
            new = _Occ(b.formula, b.tag, refute)
        return _classical(kids[0], ant, rest + [new], bx, axiom_term)
    raise CertificateError(f"unknown rule {r}")


def certificate_theory(logic: Logic) -> tuple[Theory, Logic]:
    """The empty theory and checking logic used for game certificates."""
    variant = Variant.STANDARD if logic is Logic.MINIMAL else Variant.STRENGTHENED
    return Theory((), variant), logic


def certify_play(r: PlayResult, logic: Logic | str | None = None, fallback: bool = False,
                 budget: int = 6) -> bool:
    """Whether ``r.boxed`` is established by its certificate (or a bounded proof).

    ``False`` only means "not certified"; it is not a refutation.
    """
    logic = Logic(logic) if logic is not None else r.logic
    t, lg = certificate_theory(logic)
    d = r.certificate
    if d is None and fallback:
        from .modal_search import bounded_modal_prove

        d = bounded_modal_prove(t, r.boxed, budget)
        lg = Logic.MINIMAL if logic is Logic.MINIMAL else logic
    if d is None or not d.lines or d.conclusion != r.boxed:
        return False
    return bool(check_derivation(t, d, logic=lg))


# ---------------------------------------------------------------------------
# strategy comparison and monotonicity


def sample_histories(arena: Arena, rng: random.Random, count: int, max_value: int = 6) -> list[list[int]]:
    n = len(arena.schedule)
    out = [[0] * n, [max_value] * n]
    out += [[rng.randint(0, max_value) for _ in range(n)] for _ in range(max(0, count - 2))]
    return out[:count] if count >= 2 else out[:count]


def dominates(hi: Strategy, lo: Strategy, histories: Iterable[Sequence[int]]) -> bool:
    """``lo <= hi`` pointwise at every owned slot on every sampled history."""
    if hi.player is not lo.player or {s for s, _ in hi.moves} != {s for s, _ in lo.moves}:
        return False
    th, tl = hi.table, lo.table
    return all(evaluate(th[s], h) >= evaluate(tl[s], h) for h in histories for s in th)


def monotone_term(f: Formula, lo: Mapping[Path, int], hi: Mapping[Path, int], path: Path = ()) -> Term:
    """Closed proof of ``f[lo] -> f[hi]``.

    Needs ``hi >= lo`` on positive occurrences and ``hi <= lo`` on negative
    ones (boxes already in ``f`` are kept as they are).
    """
    a = box_atoms(f, lambda p: lo.get(p, 0), path)
    b = box_atoms(f, lambda p: hi.get(p, 0), path)
    if a == b:
        return fun(a, lambda x: x)
    if isinstance(f, Box):
        return box_lift(monotone_term(f.body, lo, hi, path + ("B",)), 1)
    if is_atomic(f):
        # premises arrive here with lo and hi already swapped
        k_lo, k_hi = lo.get(path, 0), hi.get(path, 0)
        if k_hi < k_lo:
            raise CertificateError(f"occurrence at {'.'.join(path) or 'root'} moves the wrong way")
        return fun(a, lambda x: add_boxes(x, k_hi - k_lo))
    if isinstance(f, And):
        ml = monotone_term(f.left, lo, hi, path + ("L",))
        mr = monotone_term(f.right, lo, hi, path + ("R",))
        return fun(a, lambda x: and_intro(ml(and_left(x)), mr(and_right(x))))
    if isinstance(f, Or):
        ml = monotone_term(f.left, lo, hi, path + ("L",))
        mr = monotone_term(f.right, lo, hi, path + ("R",))
        bl = box_atoms(f.left, lambda p: hi.get(p, 0), path + ("L",))
        br = box_atoms(f.right, lambda p: hi.get(p, 0), path + ("R",))
        return fun(a, lambda x: or_elim(x, fun(ml.formula.premise, lambda y: or_left(ml(y), br)),
                                        fun(mr.formula.premise, lambda z: or_right(bl, mr(z)))))
    if isinstance(f, Imp):
        back = monotone_term(f.premise, hi, lo, path + ("P",))
        fwd = monotone_term(f.conclusion, lo, hi, path + ("C",))
        return fun(a, lambda g: fun(back.formula.premise, lambda y: fwd(g(back(y)))))
    raise CertificateError(f"cannot relate {render(f)}")


def _counts(arena: Arena, transcript: Sequence[int]) -> dict[Path, int]:
    return {o.path: k for o, k in zip(arena.schedule, transcript)}


def monotonicity_certificate(arena: Arena, lo: Sequence[int], hi: Sequence[int]) -> Derivation:
    """Derivation of ``boxed(lo) -> boxed(hi)``."""
    return compile_term(monotone_term(arena.subject, _counts(arena, lo), _counts(arena, hi)))


def check_implication(arena: Arena, lo: Sequence[int], hi: Sequence[int],
                      logic: Logic = Logic.MINIMAL) -> bool:
    d = monotonicity_certificate(arena, lo, hi)
    goal = Imp(arena.boxed(lo), arena.boxed(hi))
    t, lg = certificate_theory(logic)
    return d.conclusion == goal and bool(check_derivation(t, d, logic=lg))


# ---------------------------------------------------------------------------
# random strategies


def random_term(rng: random.Random, slot: int, max_const: int = 3, depth: int = 2) -> STerm:
    choices = ["const"] + (["move"] if slot > 0 else [])
    if depth > 0:
        choices += ["max", "plus"]
    kind = rng.choice(choices)
    if kind == "const":
        return Const(rng.randint(0, max_const))
    if kind == "move":
        return Move(rng.randrange(slot))
    if kind == "max":
        return Max((random_term(rng, slot, max_const, depth - 1), random_term(rng, slot, max_const, depth - 1)))
    return Plus(random_term(rng, slot, max_const, depth - 1), rng.randint(0, max_const))


def random_strategy(arena: Arena, player: Player, rng: random.Random, max_const: int = 3,
                    depth: int = 2) -> Strategy:
    return Strategy.of(player, {s: random_term(rng, s, max_const, depth) for s in arena.slots(player)})


def all_constant_attackers(arena: Arena, max_const: int = 3) -> Iterable[Strategy]:
    own = arena.slots(Player.ATTACKER)
    for ks in itertools.product(range(max_const + 1), repeat=len(own)):
        yield Strategy.of(Player.ATTACKER, {s: Const(k) for s, k in zip(own, ks)})


def bump(strategy: Strategy, rng: random.Random, max_const: int = 3) -> Strategy:
    """A strategy that dominates ``strategy`` slot by slot."""
    out = {}
    for s, t in strategy.moves:
        kind = rng.choice(("same", "plus", "max"))
        if kind == "plus":
            out[s] = Plus(t, rng.randint(1, max_const))
        elif kind == "max":
            out[s] = Max((t, random_term(rng, s, max_const, 1)))
        else:
            out[s] = t
    return Strategy.of(strategy.player, out)


def strip_check(r: PlayResult) -> bool:
    return strip_boxes(r.boxed) == strip_boxes(r.arena.subject)
