"""Weak interpretation of a box-free theory in a boxed one.

``T2`` is a finite list of increasing axioms that may contain boxes; ``T1``
deletes every box from them.  Any theorem ``b`` of ``T1`` comes back as a
boxing of ``b`` derivable in ``T2``: play the box game on
``A1 -> ... -> An -> b`` with Defender's strategy read off a sequent proof and
an Attacker who boxes each ``Ai`` so that the T2 axiom implies it.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .formula import (
    And,
    Bottom,
    Formula,
    Imp,
    Or,
    Player,
    has_implication,
    is_atomic,
    is_boxing_of,
    non_increasing_paths,
    render,
    strip_boxes,
    unbox_prefix,
)
from .game import (
    Arena,
    Const,
    Max,
    Move,
    Plus,
    STerm,
    Strategy,
    StrategyExtractionError,
    extract_defender_strategy,
    play,
    show_term,
)
from .sequent import ProofTree, Sequent, check_tree, prove
from .terms import (
    Given,
    Term,
    add_boxes,
    and_intro,
    and_left,
    and_right,
    ax,
    box_join_and,
    box_lift,
    box_split_and,
    box_split_imp,
    box_split_or,
    compile_term,
    fun,
    identity,
    or_elim,
    or_left,
    or_right,
)
from .theory import Derivation, Line, Logic, Theory, Unbox, Variant, check_derivation

Path = tuple[str, ...]


class NotIncreasing(ValueError):
    def __init__(self, index: int, path: tuple[str, ...], axiom: Formula):
        super().__init__(f"axiom {index + 1} ({render(axiom)}) has an implication inside a premise "
                         f"at {'.'.join(path) or 'root'}")
        self.index = index
        self.path = path


class SandwichError(ValueError):
    pass


def strip_theory(axioms: Sequence[Formula]) -> tuple[Formula, ...]:
    """Delete every box, after checking each axiom is increasing."""
    for i, a in enumerate(axioms):
        bad = non_increasing_paths(a)
        if bad:
            raise NotIncreasing(i, bad[0], a)
    return tuple(strip_boxes(a) for a in axioms)


@dataclass(frozen=True)
class TheoryPair:
    t2: tuple[Formula, ...]
    t1: tuple[Formula, ...]

    @classmethod
    def of(cls, t2: Iterable[Formula]) -> TheoryPair:
        t2 = tuple(t2)
        return cls(t2, strip_theory(t2))


# ---------------------------------------------------------------------------
# sandwich lemma


def _align(c: Formula, cb: Formula) -> tuple[int, int, Formula, Formula]:
    """Split ``c = []^a X`` and ``cb = []^(a+r) Y`` with X, Y box-free at the top."""
    a, x = unbox_prefix(c)
    b, y = unbox_prefix(cb)
    if b < a or type(x) is not type(y) or (is_atomic(x) and x != y):
        raise SandwichError(f"{render(cb)} is not a boxing of {render(c)}")
    return a, b - a, x, y


def _up(c: Formula, cb: Formula) -> Term:
    """Closed proof of ``c -> cb``."""
    a, r, x, y = _align(c, cb)
    if is_atomic(x):
        inner = identity(x)
    elif isinstance(x, And):
        pl, pr = _up(x.left, y.left), _up(x.right, y.right)
        inner = fun(x, lambda h: and_intro(pl(and_left(h)), pr(and_right(h))))
    elif isinstance(x, Or):
        pl, pr = _up(x.left, y.left), _up(x.right, y.right)
        inner = fun(x, lambda h: or_elim(h, fun(x.left, lambda u: or_left(pl(u), y.right)),
                                         fun(x.right, lambda v: or_right(y.left, pr(v)))))
    else:
        raise SandwichError("the sandwich lemma needs an implication-free formula")
    lifted = box_lift(inner, a)
    return fun(c, lambda h: add_boxes(lifted(h), r))


def _down(c: Formula, cb: Formula) -> tuple[int, Term]:
    """``j`` and a closed proof of ``cb -> []^j c``."""
    a, r, x, y = _align(c, cb)
    if is_atomic(x):
        j, inner = 0, identity(y)
    elif isinstance(x, (And, Or)):
        jl, dl = _down(x.left, y.left)
        jr, dr = _down(x.right, y.right)
        j = max(jl, jr)
        lift_l = fun(y.left, lambda u: add_boxes(dl(u), j - jl))
        lift_r = fun(y.right, lambda v: add_boxes(dr(v), j - jr))
        if isinstance(x, And):
            inner = fun(y, lambda h: box_join_and(lift_l(and_left(h)), lift_r(and_right(h)), j))
        else:
            into_l = box_lift(ax("OR_I1", A=x.left, B=x.right), j)
            into_r = box_lift(ax("OR_I2", A=x.left, B=x.right), j)
            inner = fun(y, lambda h: or_elim(h, fun(y.left, lambda u: into_l(lift_l(u))),
                                             fun(y.right, lambda v: into_r(lift_r(v)))))
    else:
        raise SandwichError("the sandwich lemma needs an implication-free formula")
    # inner : Y -> []^j X ; lift by a+r gives []^(a+r) Y -> []^(a+r+j) X = []^(r+j) c
    return r + j, box_lift(inner, a + r)


@dataclass
class Sandwich:
    j: int
    up: Derivation
    down: Derivation


def sandwich_exponent(c: Formula, c_boxed: Formula) -> Sandwich:
    """Least ``j`` from the lemma's recursion, with derivations of
    ``c -> c_boxed`` and ``c_boxed -> []^j c``."""
    if has_implication(c):
        raise SandwichError("the sandwich lemma needs an implication-free formula")
    if not is_boxing_of(c, c_boxed):
        raise SandwichError(f"{render(c_boxed)} is not a boxing of {render(c)}")
    j, down = _down(c, c_boxed)
    return Sandwich(j, compile_term(_up(c, c_boxed)), compile_term(down))


def sandwich_j(c: Formula, c_boxed: Formula) -> int:
    return _down(c, c_boxed)[0]


# ---------------------------------------------------------------------------
# attacker strategy on the axioms


def _slots_under(arena: Arena, path: Path) -> list[int]:
    n = len(path)
    return [i for i, o in enumerate(arena.schedule) if o.path[:n] == path]


def _prefix_term(base: STerm | None, extra: int) -> STerm:
    if base is None:
        return Const(extra)
    return Plus(base, extra) if extra else base


def guarantee_moves(arena: Arena, boxed_axiom: Formula, path: Path,
                    prefix: STerm | None = None) -> dict[int, STerm]:
    """Attacker terms on the occurrences below ``path`` that make the boxed
    axiom imply whatever the play produces there."""
    r, core = unbox_prefix(boxed_axiom)
    here = _prefix_term(prefix, r)
    if is_atomic(core):
        return {arena.slot_of(path): here}
    if isinstance(core, (And, Or)):
        out = guarantee_moves(arena, core.left, path + ("L",), here)
        out.update(guarantee_moves(arena, core.right, path + ("R",), here))
        return out
    if isinstance(core, Imp):
        premise_slots = _slots_under(arena, path + ("P",))
        j = Max(tuple(Move(s) for s in premise_slots))
        n = Max((here, j))
        return guarantee_moves(arena, core.conclusion, path + ("C",), n)
    raise ValueError(f"cannot play on {render(core)}")


def guarantee_term(arena: Arena, boxed_axiom: Formula, path: Path, counts: dict[Path, int],
                   hyp: Term, prefix: int = 0) -> Term:
    """From ``hyp : []^prefix boxed_axiom`` derive the played formula at ``path``."""
    r, core = unbox_prefix(boxed_axiom)
    n = prefix + r
    if is_atomic(core):
        want = counts[path]
        if want < n:
            raise StrategyExtractionError("attacker played fewer boxes than guaranteed")
        return add_boxes(hyp, want - n)
    if isinstance(core, And):
        x, y = box_split_and(hyp, n)
        return and_intro(guarantee_term(arena, core.left, path + ("L",), counts, x, n),
                         guarantee_term(arena, core.right, path + ("R",), counts, y, n))
    if isinstance(core, Or):
        split = box_split_or(hyp, n)
        left_played = _played(arena, path + ("L",), strip_boxes(core.left), counts)
        right_played = _played(arena, path + ("R",), strip_boxes(core.right), counts)
        return or_elim(
            split,
            fun(split.formula.left,
                lambda u: or_left(guarantee_term(arena, core.left, path + ("L",), counts, u, n), right_played)),
            fun(split.formula.right,
                lambda v: or_right(left_played, guarantee_term(arena, core.right, path + ("R",), counts, v, n))))
    if isinstance(core, Imp):
        plain = strip_boxes(core.premise)
        c_played = _played(arena, path + ("P",), plain, counts)
        j, down = _down(plain, c_played)
        big = max(n, j)
        to_axiom = box_lift(_up(plain, core.premise), j)       # []^j C -> []^j C''
        full = add_boxes(hyp, big - n)                           # []^big (C'' -> D'')
        split = box_split_imp(full, big)                         # []^big C'' -> []^big D''

        def body(c):
            cb = add_boxes(to_axiom(down(c)), big - j)           # []^big C''
            return guarantee_term(arena, core.conclusion, path + ("C",), counts, split(cb), big)

        return fun(c_played, body)
    raise ValueError(f"cannot play on {render(core)}")


def _played(arena: Arena, path: Path, plain: Formula, counts: dict[Path, int]) -> Formula:
    from .formula import box_atoms

    return box_atoms(plain, counts, path)


# ---------------------------------------------------------------------------
# pipeline


@dataclass
class Interpretation:
    pair: TheoryPair
    b: Formula
    order: tuple[int, ...]
    arena: Arena
    defender: Strategy
    attacker: Strategy
    transcript: tuple[int, ...]
    b_boxed: Formula
    derivation: Derivation
    guarantees: list[Derivation]
    logic: Logic

    def to_json(self) -> dict:
        return {
            "axioms": [render(a) for a in self.pair.t2],
            "stripped": [render(a) for a in self.pair.t1],
            "goal": render(self.b),
            "axiom_order": [i + 1 for i in self.order],
            "logic": self.logic.value,
            "arena": render(self.arena.subject),
            "defender": {str(s): show_term(t) for s, t in self.defender.moves},
            "attacker": {str(s): show_term(t) for s, t in self.attacker.moves},
            "transcript": list(self.transcript),
            "b_boxed": render(self.b_boxed),
            "derivation_lines": len(self.derivation.lines),
        }


class InterpretationError(ValueError):
    pass


def _checking_theory(logic: Logic) -> Theory:
    return Theory((), Variant.STANDARD if logic is Logic.MINIMAL else Variant.STRENGTHENED)


def check_in_t2(pair: TheoryPair, d: Derivation, logic: Logic) -> bool:
    return bool(check_derivation(_checking_theory(logic), d, pair.t2, logic=logic))


def weak_interpret(pair: TheoryPair, b: Formula, d1: ProofTree | None = None,
                   logic: Logic | str = Logic.MINIMAL) -> Interpretation:
    """Lift the T1-theorem ``b`` to a boxing of ``b`` derivable from the T2 axioms.

    ``d1`` proves ``A1, ..., An => b`` over the stripped axioms (in any
    order); without it the sequent prover is asked.  Axiom orders are tried
    until the copying Defender strategy only answers earlier moves.
    """
    logic = Logic(logic)
    n = len(pair.t1)
    if d1 is None:
        d1 = prove(Sequent(pair.t1, (b,)), logic)
        if d1 is None:
            raise InterpretationError(f"{render(b)} does not follow from the stripped axioms")
    verdict = check_tree(d1, logic)
    if not verdict:
        raise InterpretationError(f"proof rejected at {verdict.path}: {verdict.reason}")
    root = d1.sequent
    if root.succedent != (b,):
        raise InterpretationError("proof does not end in the requested goal")
    if Counter(root.antecedent) - Counter(pair.t1):
        raise InterpretationError("proof uses assumptions outside the stripped axioms")
    used = list(root.antecedent)
    # map each antecedent formula back to a T2 axiom index
    pool = list(range(n))
    owner = []
    for f in used:
        i = next(k for k in pool if pair.t1[k] == f)
        pool.remove(i)
        owner.append(i)

    last_error: Exception | None = None
    for perm in itertools.permutations(range(len(used))):
        seq = Sequent(tuple(used[k] for k in perm), (b,))
        tree = ProofTree(d1.rule, seq, d1.principal, d1.children)
        try:
            ext = extract_defender_strategy(tree, logic)
        except StrategyExtractionError as e:
            last_error = e
            continue
        order = tuple(owner[k] for k in perm)
        return _run(pair, b, ext, order, logic)
    raise InterpretationError(f"no axiom order lets Defender copy earlier moves: {last_error}")


def _run(pair: TheoryPair, b: Formula, ext, order: tuple[int, ...], logic: Logic) -> Interpretation:
    arena = ext.arena
    moves: dict[int, STerm] = {}
    for pos, i in enumerate(order):
        moves.update(guarantee_moves(arena, pair.t2[i], ("C",) * pos + ("P",)))
    for s in arena.slots(Player.ATTACKER):
        moves.setdefault(s, Const(0))
    attacker = Strategy.of(Player.ATTACKER, moves)
    result = play(arena, ext.strategy, attacker)
    counts = {o.path: k for o, k in zip(arena.schedule, result.transcript)}

    whole = ext.certificate_term(result.transcript)         # A1' -> ... -> An' -> b'
    guarantees = []
    for pos, i in enumerate(order):
        path = ("C",) * pos + ("P",)
        g = guarantee_term(arena, pair.t2[i], path, counts, Given(pair.t2[i]))
        whole = whole(g)
        played = _played(arena, path, pair.t1[i], counts)
        guarantees.append(compile_term(fun(pair.t2[i], lambda h, i=i, path=path:
                                           guarantee_term(arena, pair.t2[i], path, counts, h))))
        if g.formula != played:
            raise InterpretationError("guarantee does not match the played axiom")
    b_boxed = whole.formula
    d = compile_term(whole)
    if not check_in_t2(pair, d, logic):
        raise InterpretationError("lifted derivation failed to check")
    if strip_boxes(b_boxed) != strip_boxes(b):
        raise InterpretationError("lifted formula is not a boxing of the goal")
    return Interpretation(pair, b, order, arena, ext.strategy, attacker, result.transcript,
                          b_boxed, d, guarantees, logic)


@dataclass
class Transfer:
    interpretation: Interpretation
    unboxes: int
    derivation: Derivation


def consistency_transfer(pair: TheoryPair, d1: ProofTree | None = None,
                         logic: Logic | str = Logic.MINIMAL) -> Transfer:
    """A T2 derivation of ``bot`` from a T1 proof of ``bot``."""
    logic = Logic(logic)
    interp = weak_interpret(pair, Bottom(), d1, logic)
    k, core = unbox_prefix(interp.b_boxed)
    if not isinstance(core, Bottom):
        raise InterpretationError(f"expected a boxed bot, got {render(interp.b_boxed)}")
    d = interp.derivation
    lines = list(d.lines)
    for _ in range(k):
        lines.append(Line(lines[-1].formula.body, Unbox(len(lines))))
    out = Derivation(tuple(lines))
    if not check_in_t2(pair, out, logic):
        raise InterpretationError("transfer derivation failed to check")
    return Transfer(interp, k, out)
