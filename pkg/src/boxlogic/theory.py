"""System P: guarded circular theories, axiom schemata and a line checker.

A theory declares variables ``p1 .. pn`` through defining axioms
``p_i <-> A_i`` in which every variable occurrence sits under a box.
Derivations are Hilbert-style line lists; each line cites a schema instance,
one direction of a defining axiom, an admitted premise, modus ponens, or the
unbox rule (from ``[]A`` infer ``A``).
"""

from __future__ import annotations

import enum
import hashlib
import json
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Mapping

from .formula import (
    Bottom,
    Box,
    Formula,
    Imp,
    ParseError,
    Var,
    is_atomic,
    parse,
    render,
    subformulas,
)


class Variant(enum.Enum):
    STANDARD = "standard"
    STRENGTHENED = "strengthened"


class Logic(enum.Enum):
    MINIMAL = "minimal"
    INTUITIONISTIC = "intuitionistic"
    CLASSICAL = "classical"


class InvalidTheory(ValueError):
    pass


class UndeclaredVariable(KeyError):
    pass


@dataclass(frozen=True)
class Theory:
    """Defining axioms ``p_i <-> A_i`` plus the logic variant.

    ``definitions`` maps a variable index to its body.  Variables without a
    definition may still appear in derivations, as free atoms.
    """

    definitions: tuple[tuple[int, Formula], ...] = ()
    variant: Variant = Variant.STANDARD

    @classmethod
    def of(cls, definitions: Mapping[int, Formula] | Iterable[tuple[int, Formula]] = (),
           variant: Variant | str = Variant.STANDARD) -> Theory:
        items = definitions.items() if isinstance(definitions, Mapping) else definitions
        return cls(tuple(items), Variant(variant))

    @property
    def variable_count(self) -> int:
        return len(self.definitions)

    @property
    def bodies(self) -> dict[int, Formula]:
        return dict(self.definitions)

    def body(self, i: int) -> Formula:
        for j, a in self.definitions:
            if j == i:
                return a
        raise UndeclaredVariable(f"p{i} has no defining axiom")

    def declares(self, i: int) -> bool:
        return any(j == i for j, _ in self.definitions)

    @property
    def logic(self) -> Logic:
        return Logic.INTUITIONISTIC if self.variant is Variant.STRENGTHENED else Logic.MINIMAL

    def with_variant(self, variant: Variant | str) -> Theory:
        return Theory(self.definitions, Variant(variant))

    def axiom(self, i: int, direction: str) -> Formula:
        """One direction of ``p_i <-> A_i``: ``'->'`` or ``'<-'``."""
        a = self.body(i)
        if direction == "->":
            return Imp(Var(i), a)
        if direction == "<-":
            return Imp(a, Var(i))
        raise ValueError(f"direction must be '->' or '<-', got {direction!r}")

    def axiom_directions(self) -> list[Formula]:
        return [self.axiom(i, d) for i, _ in self.definitions for d in ("->", "<-")]

    def digest(self) -> str:
        return hashlib.sha256(dump_theory(self).encode()).hexdigest()[:16]


@dataclass(frozen=True)
class Violation:
    axiom: int
    path: tuple[str, ...]
    message: str


def _unguarded(f: Formula, path: tuple[str, ...] = ()) -> list[tuple[str, ...]]:
    if isinstance(f, Var):
        return [path]
    if isinstance(f, (Box, Bottom)):
        return []
    if isinstance(f, Imp):
        return _unguarded(f.premise, path + ("P",)) + _unguarded(f.conclusion, path + ("C",))
    return _unguarded(f.left, path + ("L",)) + _unguarded(f.right, path + ("R",))


def validate_theory(t: Theory) -> list[Violation]:
    """Indexing and guardedness violations; an empty list means the theory is valid."""
    out: list[Violation] = []
    seen: set[int] = set()
    declared = {i for i, _ in t.definitions}
    for i, body in t.definitions:
        if i in seen:
            out.append(Violation(i, (), f"duplicate defining axiom for p{i}"))
        seen.add(i)
        if i < 1:
            out.append(Violation(i, (), f"index {i} is not positive"))
        for g in subformulas(body):
            if isinstance(g, Var) and g.index not in declared:
                out.append(Violation(i, (), f"body of p{i} mentions undeclared p{g.index}"))
        for path in _unguarded(body):
            out.append(Violation(i, path, f"unguarded occurrence of a variable in the body of p{i}"))
    return out


def require_valid(t: Theory) -> None:
    problems = validate_theory(t)
    if problems:
        raise InvalidTheory("; ".join(v.message for v in problems))


def level(f: Formula, t: Theory) -> int:
    """Induction rank: 1 on bot and boxed formulas, +1 over connectives and definitions."""
    bodies = t.bodies

    @lru_cache(maxsize=None)
    def go(g: Formula) -> int:
        if isinstance(g, (Bottom, Box)):
            return 1
        if isinstance(g, Var):
            if g.index not in bodies:
                raise UndeclaredVariable(f"p{g.index} is not declared in the theory")
            return go(bodies[g.index]) + 1
        a, b = g.children
        return max(go(a), go(b)) + 1

    return go(f)


# ---------------------------------------------------------------------------
# axiom schemata


@dataclass(frozen=True)
class Meta(Formula):
    """Schema metavariable; only ever appears inside schema patterns."""

    name: str

    def __hash__(self) -> int:
        return hash(("meta", self.name))


def _pattern(text: str) -> Formula:
    names = {1: "A", 2: "B", 3: "C"}

    def go(f: Formula) -> Formula:
        if isinstance(f, Var):
            return Meta(names[f.index])
        if isinstance(f, Box):
            return Box(go(f.body))
        if isinstance(f, Bottom):
            return f
        return type(f)(go(f.children[0]), go(f.children[1]))

    return go(parse(text))


LOGICAL_SCHEMATA: dict[str, Formula] = {
    "K": _pattern("p1 -> p2 -> p1"),
    "S": _pattern("(p1 -> p2 -> p3) -> (p1 -> p2) -> p1 -> p3"),
    "AND_I": _pattern("p1 -> p2 -> p1 & p2"),
    "AND_E1": _pattern("p1 & p2 -> p1"),
    "AND_E2": _pattern("p1 & p2 -> p2"),
    "OR_I1": _pattern("p1 -> p1 | p2"),
    "OR_I2": _pattern("p2 -> p1 | p2"),
    "OR_E": _pattern("(p1 -> p3) -> (p2 -> p3) -> p1 | p2 -> p3"),
    "EFQ": _pattern("bot -> p1"),
    "DNE": _pattern("~~p1 -> p1"),
}

BOX_SCHEMATA: dict[str, Formula] = {
    "B1": _pattern("[](p1 | p2) -> []p1 | []p2"),
    "B1r": _pattern("[]p1 | []p2 -> [](p1 | p2)"),
    "B2": _pattern("[](p1 & p2) -> []p1 & []p2"),
    "B2r": _pattern("[]p1 & []p2 -> [](p1 & p2)"),
    "B3": _pattern("[](p1 -> p2) -> []p1 -> []p2"),
    "B3r": _pattern("([]p1 -> []p2) -> [](p1 -> p2)"),
    "B4": _pattern("p1 -> []p1"),
}

SCHEMATA = {**LOGICAL_SCHEMATA, **BOX_SCHEMATA}

_LOGIC_EXTRAS = {
    Logic.MINIMAL: frozenset(),
    Logic.INTUITIONISTIC: frozenset({"EFQ"}),
    Logic.CLASSICAL: frozenset({"EFQ", "DNE"}),
}


def schema_metavars(schema: str) -> list[str]:
    pattern = SCHEMATA[schema]
    seen: list[str] = []

    def go(f: Formula) -> None:
        if isinstance(f, Meta):
            if f.name not in seen:
                seen.append(f.name)
        elif isinstance(f, Box):
            go(f.body)
        elif not is_atomic(f):
            for c in f.children:
                go(c)

    go(pattern)
    return sorted(seen)


def allowed_schemata(variant: Variant, logic: Logic | None = None) -> frozenset[str]:
    logic = logic or (Logic.INTUITIONISTIC if variant is Variant.STRENGTHENED else Logic.MINIMAL)
    base = {"K", "S", "AND_I", "AND_E1", "AND_E2", "OR_I1", "OR_I2", "OR_E"}
    base |= _LOGIC_EXTRAS[logic]
    base |= set(BOX_SCHEMATA) - {"B3r"}
    if variant is Variant.STRENGTHENED:
        base.add("B3r")
    return frozenset(base)


class SchemaError(ValueError):
    pass


def _instantiate(f: Formula, subst: Mapping[str, Formula]) -> Formula:
    if isinstance(f, Meta):
        return subst[f.name]
    if isinstance(f, Box):
        return Box(_instantiate(f.body, subst))
    if is_atomic(f):
        return f
    return type(f)(_instantiate(f.children[0], subst), _instantiate(f.children[1], subst))


def logical_axiom_instance(schema: str, subst: Mapping[str, Formula]) -> Formula:
    """Instantiate a schema (logical or box) with formulas for its metavariables."""
    if schema not in SCHEMATA:
        raise SchemaError(f"unknown schema {schema!r}")
    wanted = schema_metavars(schema)
    if sorted(subst) != wanted:
        raise SchemaError(f"schema {schema} takes {wanted}, got {sorted(subst)}")
    return _instantiate(SCHEMATA[schema], subst)


def match_schema(schema: str, f: Formula) -> dict[str, Formula] | None:
    """Substitution making ``schema`` equal to ``f``, or None."""
    subst: dict[str, Formula] = {}

    def go(p: Formula, g: Formula) -> bool:
        if isinstance(p, Meta):
            bound = subst.get(p.name)
            if bound is None:
                subst[p.name] = g
                return True
            return bound == g
        if type(p) is not type(g):
            return False
        if isinstance(p, Box):
            return go(p.body, g.body)
        if is_atomic(p):
            return p == g
        return go(p.children[0], g.children[0]) and go(p.children[1], g.children[1])

    return subst if go(SCHEMATA[schema], f) else None


# ---------------------------------------------------------------------------
# derivations


@dataclass(frozen=True)
class Axiom:
    schema: str
    subst: tuple[tuple[str, Formula], ...] | None = None

    @property
    def is_box(self) -> bool:
        return self.schema in BOX_SCHEMATA


@dataclass(frozen=True)
class DefiningAxiom:
    index: int
    direction: str


@dataclass(frozen=True)
class ModusPonens:
    """``major`` proves ``A -> B`` and ``minor`` proves ``A`` (1-based line numbers)."""

    major: int
    minor: int


@dataclass(frozen=True)
class Unbox:
    ref: int


@dataclass(frozen=True)
class Premise:
    pass


Justification = Axiom | DefiningAxiom | ModusPonens | Unbox | Premise


@dataclass(frozen=True)
class Line:
    formula: Formula
    justification: Justification


@dataclass(frozen=True)
class Derivation:
    lines: tuple[Line, ...]

    @property
    def conclusion(self) -> Formula:
        if not self.lines:
            raise ValueError("empty derivation")
        return self.lines[-1].formula

    def __len__(self) -> int:
        return len(self.lines)

    def premises_used(self) -> list[Formula]:
        return [ln.formula for ln in self.lines if isinstance(ln.justification, Premise)]

    def uses(self, schema: str) -> bool:
        return any(isinstance(ln.justification, Axiom) and ln.justification.schema == schema
                   for ln in self.lines)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    line: int | None = None
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        out: dict = {"ok": self.ok}
        if not self.ok:
            out.update(line=self.line, reason=self.reason)
        return out


def check_derivation(t: Theory, d: Derivation, premises: Iterable[Formula] = (),
                     logic: Logic | None = None) -> Verdict:
    """Check every line; report the first failing one.

    ``premises`` are formulas admitted without proof (lines justified by
    :class:`Premise`).  ``logic`` overrides the base logic implied by the
    theory variant.
    """
    require_valid(t)
    allowed = allowed_schemata(t.variant, logic)
    admitted = set(premises)
    bodies = t.bodies
    proved: list[Formula] = []

    def fail(n: int, why: str) -> Verdict:
        return Verdict(False, n, why)

    for n, ln in enumerate(d.lines, start=1):
        f, j = ln.formula, ln.justification
        if isinstance(j, Axiom):
            if j.schema not in SCHEMATA:
                return fail(n, f"unknown schema {j.schema!r}")
            if j.schema not in allowed:
                return fail(n, f"schema {j.schema} is not available in this logic")
            if j.subst is None:
                if match_schema(j.schema, f) is None:
                    return fail(n, f"not an instance of {j.schema}")
            else:
                try:
                    inst = logical_axiom_instance(j.schema, dict(j.subst))
                except SchemaError as e:
                    return fail(n, str(e))
                if inst != f:
                    return fail(n, f"{j.schema} instance is {render(inst)}, line states {render(f)}")
        elif isinstance(j, DefiningAxiom):
            if j.index not in bodies:
                return fail(n, f"no defining axiom for p{j.index}")
            if j.direction not in ("->", "<-"):
                return fail(n, f"bad direction {j.direction!r}")
            if t.axiom(j.index, j.direction) != f:
                return fail(n, f"not the {j.direction} direction of the axiom for p{j.index}")
        elif isinstance(j, ModusPonens):
            for ref in (j.major, j.minor):
                if not 1 <= ref < n:
                    return fail(n, f"reference {ref} does not point to an earlier line")
            if proved[j.major - 1] != Imp(proved[j.minor - 1], f):
                return fail(n, f"line {j.major} is not line {j.minor} -> this line")
        elif isinstance(j, Unbox):
            if not 1 <= j.ref < n:
                return fail(n, f"reference {j.ref} does not point to an earlier line")
            if proved[j.ref - 1] != Box(f):
                return fail(n, f"line {j.ref} is not [] of this line")
        elif isinstance(j, Premise):
            if f not in admitted:
                return fail(n, "premise not admitted")
        else:
            return fail(n, f"unknown justification {j!r}")
        proved.append(f)
    if not d.lines:
        return Verdict(False, 0, "empty derivation")
    return Verdict(True)


# ---------------------------------------------------------------------------
# file formats

_DEF_RE = re.compile(r"^\s*p(\d+)\s*:=\s*(.+?)\s*$")
_VARIANT_RE = re.compile(r"^\s*variant\s*:\s*(\w+)\s*$")


def parse_theory(text: str) -> Theory:
    """Read ``variant: ...`` and ``p<i> := <formula>`` lines; ``#`` starts a comment."""
    variant = Variant.STANDARD
    defs: list[tuple[int, Formula]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _VARIANT_RE.match(line)
        if m:
            try:
                variant = Variant(m.group(1))
            except ValueError:
                raise ParseError(f"unknown variant {m.group(1)!r}", lineno, 1,
                                 [v.value for v in Variant]) from None
            continue
        m = _DEF_RE.match(line)
        if not m:
            raise ParseError("expected 'p<i> := <formula>' or 'variant: ...'", lineno, 1)
        try:
            body = parse(m.group(2))
        except ParseError as e:
            raise ParseError(str(e).split(": ", 1)[-1], lineno, m.start(2) + e.column) from None
        defs.append((int(m.group(1)), body))
    return Theory(tuple(defs), variant)


def dump_theory(t: Theory) -> str:
    lines = [f"variant: {t.variant.value}"]
    lines += [f"p{i} := {render(a)}" for i, a in t.definitions]
    return "\n".join(lines) + "\n"


def load_theory(path: str | Path) -> Theory:
    return parse_theory(Path(path).read_text())


def line_to_json(ln: Line) -> dict:
    j = ln.justification
    out: dict = {"formula": render(ln.formula)}
    if isinstance(j, Axiom):
        out["rule"] = j.schema
        out["refs"] = []
        if j.subst is not None:
            out["subst"] = {k: render(v) for k, v in j.subst}
    elif isinstance(j, DefiningAxiom):
        out.update(rule="def", refs=[], axiom=j.index, dir=j.direction)
    elif isinstance(j, ModusPonens):
        out.update(rule="mp", refs=[j.major, j.minor])
    elif isinstance(j, Unbox):
        out.update(rule="unbox", refs=[j.ref])
    else:
        out.update(rule="premise", refs=[])
    return out


class DerivationFormatError(ValueError):
    pass


def line_from_json(obj: Mapping) -> Line:
    try:
        f = parse(obj["formula"])
        rule = obj["rule"]
        refs = list(obj.get("refs", []))
    except KeyError as e:
        raise DerivationFormatError(f"missing field {e.args[0]!r}") from None
    if rule == "mp":
        if len(refs) != 2:
            raise DerivationFormatError("mp takes two refs")
        j: Justification = ModusPonens(int(refs[0]), int(refs[1]))
    elif rule == "unbox":
        if len(refs) != 1:
            raise DerivationFormatError("unbox takes one ref")
        j = Unbox(int(refs[0]))
    elif rule == "def":
        j = DefiningAxiom(int(obj["axiom"]), obj["dir"])
    elif rule == "premise":
        j = Premise()
    else:
        subst = obj.get("subst")
        if subst is not None:
            subst = tuple(sorted((k, parse(v)) for k, v in subst.items()))
        j = Axiom(rule, subst)
    return Line(f, j)


def dumps_derivation(d: Derivation) -> str:
    return "".join(json.dumps(line_to_json(ln), sort_keys=True) + "\n" for ln in d.lines)


def loads_derivation(text: str) -> Derivation:
    lines = []
    for n, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as e:
            raise DerivationFormatError(f"line {n}: {e.msg}") from None
        try:
            lines.append(line_from_json(obj))
        except (ParseError, DerivationFormatError) as e:
            raise DerivationFormatError(f"line {n}: {e}") from None
    return Derivation(tuple(lines))


def load_derivation(path: str | Path) -> Derivation:
    return loads_derivation(Path(path).read_text())


def save_derivation(d: Derivation, path: str | Path) -> None:
    Path(path).write_text(dumps_derivation(d))


EMPTY = Theory()
