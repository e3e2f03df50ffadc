"""Propositional formulas with a provability box.

Formulas are immutable trees built from ``Bottom``, ``Var``, ``And``, ``Or``,
``Imp`` and ``Box``.  Negation is not a node: ``~A`` is ``Imp(A, Bottom)``.

Concrete syntax (ASCII)::

    formula := imp
    imp     := or [ "->" imp ]
    or      := and { "|" and }
    and     := unary { "&" unary }
    unary   := "[]" unary | "~" unary | atom
    atom    := "bot" | "p" digits | "(" formula ")"
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, NamedTuple, Sequence


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __or__(self, other: Formula) -> Formula:
        return Or(self, other)

    def __rshift__(self, other: Formula) -> Formula:
        return Imp(self, other)

    def __invert__(self) -> Formula:
        return Imp(self, BOT)

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, repr=False)
class Bottom(Formula):
    def __hash__(self) -> int:
        return 0x5EED

    def __repr__(self) -> str:
        return "Bottom()"


@dataclass(frozen=True, repr=False)
class Var(Formula):
    index: int

    def __post_init__(self) -> None:
        if not isinstance(self.index, int) or self.index < 1:
            raise ValueError(f"variable index must be a positive int, got {self.index!r}")

    def __hash__(self) -> int:
        return hash(("p", self.index))

    def __repr__(self) -> str:
        return f"Var({self.index})"


class _Binary(Formula):
    __slots__ = ()
    _tag = ""

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.children[0]!r}, {self.children[1]!r})"


@dataclass(frozen=True, repr=False)
class And(_Binary):
    left: Formula
    right: Formula
    _h: int = field(init=False, compare=False, default=0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_h", hash(("&", self.left, self.right)))

    def __hash__(self) -> int:
        return self._h

    @property
    def children(self) -> tuple[Formula, Formula]:
        return (self.left, self.right)


@dataclass(frozen=True, repr=False)
class Or(_Binary):
    left: Formula
    right: Formula
    _h: int = field(init=False, compare=False, default=0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_h", hash(("|", self.left, self.right)))

    def __hash__(self) -> int:
        return self._h

    @property
    def children(self) -> tuple[Formula, Formula]:
        return (self.left, self.right)


@dataclass(frozen=True, repr=False)
class Imp(_Binary):
    premise: Formula
    conclusion: Formula
    _h: int = field(init=False, compare=False, default=0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_h", hash(("->", self.premise, self.conclusion)))

    def __hash__(self) -> int:
        return self._h

    @property
    def children(self) -> tuple[Formula, Formula]:
        return (self.premise, self.conclusion)


@dataclass(frozen=True, repr=False)
class Box(Formula):
    body: Formula
    _h: int = field(init=False, compare=False, default=0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_h", hash(("[]", self.body)))

    def __hash__(self) -> int:
        return self._h

    def __repr__(self) -> str:
        return f"Box({self.body!r})"


BOT = Bottom()


def is_atomic(f: Formula) -> bool:
    return isinstance(f, (Bottom, Var))


def neg(f: Formula) -> Formula:
    return Imp(f, BOT)


def boxes(f: Formula, k: int) -> Formula:
    """Prefix ``f`` with ``k`` boxes."""
    for _ in range(k):
        f = Box(f)
    return f


def unbox_prefix(f: Formula) -> tuple[int, Formula]:
    """Split ``[]^k g`` into ``(k, g)`` with ``g`` not a box."""
    k = 0
    while isinstance(f, Box):
        f = f.body
        k += 1
    return k, f


def conj(fs: Sequence[Formula]) -> Formula:
    """Right-nested conjunction; a single formula is returned as is."""
    if not fs:
        raise ValueError("empty conjunction")
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = And(f, out)
    return out


def disj(fs: Sequence[Formula]) -> Formula:
    if not fs:
        raise ValueError("empty disjunction")
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Or(f, out)
    return out


def imp_chain(premises: Sequence[Formula], goal: Formula) -> Formula:
    """``A1 -> (A2 -> ... -> goal)``."""
    out = goal
    for f in reversed(premises):
        out = Imp(f, out)
    return out


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order walk over all subformula occurrences."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, Box):
            stack.append(g.body)
        elif isinstance(g, _Binary):
            stack.append(g.children[1])
            stack.append(g.children[0])


def variables(f: Formula) -> set[int]:
    return {g.index for g in subformulas(f) if isinstance(g, Var)}


def size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


def connectives(f: Formula) -> int:
    return sum(1 for g in subformulas(f) if not is_atomic(g))


# ---------------------------------------------------------------------------
# concrete syntax


class ParseError(ValueError):
    """Syntax error carrying a 1-based position and the expected tokens."""

    def __init__(self, message: str, line: int, column: int, expected: Sequence[str] = ()):
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{line}:{column}: {message}{detail}")


class _Tok(NamedTuple):
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<imp>->)|(?P<box>\[\])|(?P<bot>bot\b)|(?P<var>p\d+)"
    r"|(?P<op>[~&|()])"
)


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1,
                             ["bot", "p<k>", "~", "[]", "("])
        kind = m.lastgroup
        tok_text = m.group()
        if kind == "ws":
            for i, ch in enumerate(tok_text):
                if ch == "\n":
                    line += 1
                    line_start = pos + i + 1
        else:
            if kind == "op":
                kind = tok_text
            toks.append(_Tok(kind, tok_text, line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


_ATOM_START = ("bot", "p<k>", "~", "[]", "(")


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, expected: Sequence[str]) -> ParseError:
        tok = self.peek()
        what = "end of input" if tok.kind == "eof" else repr(tok.text)
        return ParseError(f"unexpected {what}", tok.line, tok.col, expected)

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.peek().kind == "imp":
            self.take()
            return Imp(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        out = self.conjunction()
        while self.peek().kind == "|":
            self.take()
            out = Or(out, self.conjunction())
        return out

    def conjunction(self) -> Formula:
        out = self.unary()
        while self.peek().kind == "&":
            self.take()
            out = And(out, self.unary())
        return out

    def unary(self) -> Formula:
        kind = self.peek().kind
        if kind == "box":
            self.take()
            return Box(self.unary())
        if kind == "~":
            self.take()
            return neg(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        tok = self.peek()
        if tok.kind == "bot":
            self.take()
            return BOT
        if tok.kind == "var":
            self.take()
            index = int(tok.text[1:])
            if index < 1:
                raise ParseError("variable indices start at 1", tok.line, tok.col)
            return Var(index)
        if tok.kind == "(":
            self.take()
            inner = self.formula()
            if self.peek().kind != ")":
                raise self.fail([")", "->", "|", "&"])
            self.take()
            return inner
        raise self.fail(_ATOM_START)


def parse(text: str) -> Formula:
    """Parse concrete syntax into a :class:`Formula`."""
    p = _Parser(text)
    f = p.formula()
    if p.peek().kind != "eof":
        raise p.fail(["->", "|", "&", "end of input"])
    return f


# precedence levels used by the printer
_P_IMP, _P_OR, _P_AND, _P_UNARY = 1, 2, 3, 4


def _prec(f: Formula) -> int:
    if isinstance(f, Imp):
        return _P_UNARY if f.conclusion == BOT else _P_IMP
    if isinstance(f, Or):
        return _P_OR
    if isinstance(f, And):
        return _P_AND
    return _P_UNARY


def render(f: Formula) -> str:
    """Print with the fewest parentheses that still parse back to ``f``."""

    def wrap(g: Formula, minimum: int) -> str:
        s = go(g)
        return f"({s})" if _prec(g) < minimum else s

    def go(g: Formula) -> str:
        if isinstance(g, Bottom):
            return "bot"
        if isinstance(g, Var):
            return f"p{g.index}"
        if isinstance(g, Box):
            return "[]" + wrap(g.body, _P_UNARY)
        if isinstance(g, Imp):
            if g.conclusion == BOT:
                return "~" + wrap(g.premise, _P_UNARY)
            return f"{wrap(g.premise, _P_OR)} -> {wrap(g.conclusion, _P_IMP)}"
        if isinstance(g, Or):
            return f"{wrap(g.left, _P_OR)} | {wrap(g.right, _P_AND)}"
        if isinstance(g, And):
            return f"{wrap(g.left, _P_AND)} & {wrap(g.right, _P_UNARY)}"
        raise TypeError(f"not a formula: {g!r}")

    return go(f)


# ---------------------------------------------------------------------------
# structural analyses


def strip_boxes(f: Formula) -> Formula:
    """Delete every box, recursively."""
    if isinstance(f, Box):
        return strip_boxes(f.body)
    if isinstance(f, And):
        return And(strip_boxes(f.left), strip_boxes(f.right))
    if isinstance(f, Or):
        return Or(strip_boxes(f.left), strip_boxes(f.right))
    if isinstance(f, Imp):
        return Imp(strip_boxes(f.premise), strip_boxes(f.conclusion))
    return f


def is_box_free(f: Formula) -> bool:
    return not any(isinstance(g, Box) for g in subformulas(f))


def has_implication(f: Formula) -> bool:
    return any(isinstance(g, Imp) for g in subformulas(f))


def non_increasing_paths(f: Formula) -> list[tuple[str, ...]]:
    """Paths of implications sitting inside the premise of another implication."""
    out: list[tuple[str, ...]] = []

    def go(g: Formula, path: tuple[str, ...], in_premise: bool) -> None:
        if isinstance(g, Imp):
            if in_premise:
                out.append(path)
            go(g.premise, path + ("P",), True)
            go(g.conclusion, path + ("C",), in_premise)
        elif isinstance(g, (And, Or)):
            go(g.left, path + ("L",), in_premise)
            go(g.right, path + ("R",), in_premise)
        elif isinstance(g, Box):
            go(g.body, path + ("B",), in_premise)

    go(f, (), False)
    return out


def is_increasing(f: Formula) -> bool:
    """True iff no implication occurs inside the premise of any implication."""
    return not non_increasing_paths(f)


class Polarity(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"

    def flip(self) -> Polarity:
        return Polarity.NEGATIVE if self is Polarity.POSITIVE else Polarity.POSITIVE


class Player(enum.Enum):
    DEFENDER = "defender"
    ATTACKER = "attacker"

    def other(self) -> Player:
        return Player.ATTACKER if self is Player.DEFENDER else Player.DEFENDER


class Occurrence(NamedTuple):
    """An atomic occurrence: its address, polarity and who boxes it."""

    path: tuple[str, ...]
    polarity: Polarity
    mover: Player
    atom: Formula


def atomic_occurrences(f: Formula) -> list[Occurrence]:
    """Atomic occurrences in game order.

    Left before right for ``&``/``|``; for ``->`` the premise comes first with
    polarity flipped.  Boxes are transparent.
    """
    out: list[Occurrence] = []

    def go(g: Formula, path: tuple[str, ...], pol: Polarity) -> None:
        if is_atomic(g):
            mover = Player.DEFENDER if pol is Polarity.POSITIVE else Player.ATTACKER
            out.append(Occurrence(path, pol, mover, g))
        elif isinstance(g, Box):
            go(g.body, path + ("B",), pol)
        elif isinstance(g, Imp):
            go(g.premise, path + ("P",), pol.flip())
            go(g.conclusion, path + ("C",), pol)
        else:
            go(g.left, path + ("L",), pol)
            go(g.right, path + ("R",), pol)

    go(f, (), Polarity.POSITIVE)
    return out


def subformula_at(f: Formula, path: Sequence[str]) -> Formula:
    for step in path:
        if step == "B" and isinstance(f, Box):
            f = f.body
        elif step in ("L", "R") and isinstance(f, (And, Or)):
            f = f.left if step == "L" else f.right
        elif step in ("P", "C") and isinstance(f, Imp):
            f = f.premise if step == "P" else f.conclusion
        else:
            raise KeyError(f"path step {step!r} does not apply to {render(f)}")
    return f


def box_atoms(f: Formula, counts: Mapping[tuple[str, ...], int] | Callable[[tuple[str, ...]], int],
              path: tuple[str, ...] = ()) -> Formula:
    """Prefix each atomic occurrence at ``path`` with ``counts[path]`` boxes."""
    get = counts if callable(counts) else (lambda p: counts.get(p, 0))

    def go(g: Formula, p: tuple[str, ...]) -> Formula:
        if is_atomic(g):
            return boxes(g, get(p))
        if isinstance(g, Box):
            return Box(go(g.body, p + ("B",)))
        if isinstance(g, Imp):
            return Imp(go(g.premise, p + ("P",)), go(g.conclusion, p + ("C",)))
        cls = type(g)
        return cls(go(g.left, p + ("L",)), go(g.right, p + ("R",)))

    return go(f, path)


def is_boxing_of(plain: Formula, boxed: Formula) -> bool:
    """Whether ``boxed`` arises from ``plain`` by inserting box prefixes."""
    if plain == boxed:
        return True
    if isinstance(boxed, Box):
        if is_boxing_of(plain, boxed.body):
            return True
        return isinstance(plain, Box) and is_boxing_of(plain.body, boxed.body)
    if type(plain) is not type(boxed) or not isinstance(plain, _Binary):
        return False
    return all(is_boxing_of(a, b) for a, b in zip(plain.children, boxed.children))
