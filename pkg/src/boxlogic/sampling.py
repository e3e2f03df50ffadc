"""Seeded random generators for formulas and derivations."""

from __future__ import annotations

import random

from .formula import BOT, And, Box, Formula, Imp, Or, Var
from .theory import (
    Axiom,
    DefiningAxiom,
    Derivation,
    Line,
    Logic,
    ModusPonens,
    Theory,
    Unbox,
    allowed_schemata,
    logical_axiom_instance,
    schema_metavars,
)


def random_formula(rng: random.Random, connectives: int, variables: int = 3,
                   boxes: bool = False, bottom: bool = True) -> Formula:
    """A formula with exactly ``connectives`` binary connectives (plus optional boxes)."""
    if connectives == 0:
        atoms: list[Formula] = [Var(i) for i in range(1, variables + 1)]
        if bottom:
            atoms.append(BOT)
        f = rng.choice(atoms)
    else:
        left = rng.randint(0, connectives - 1)
        a = random_formula(rng, left, variables, boxes, bottom)
        b = random_formula(rng, connectives - 1 - left, variables, boxes, bottom)
        f = rng.choice((And, Or, Imp, Imp))(a, b)
    if boxes and rng.random() < 0.2:
        f = Box(f)
    return f


def random_derivation(t: Theory, rng: random.Random, length: int = 12,
                      logic: Logic | None = None) -> Derivation:
    """A derivation over ``t`` built line by line from random valid steps.

    Each step is a schema instance, a defining axiom, modus ponens on two
    earlier lines or an unbox of an earlier boxed line.  Metavariables are
    filled from earlier lines about half of the time, which keeps modus
    ponens applicable.
    """
    schemata = sorted(allowed_schemata(t.variant, logic))
    atoms: list[Formula] = [BOT] + [Var(i) for i, _ in t.definitions]
    lines: list[Line] = []

    def pick() -> Formula:
        if lines and rng.random() < 0.5:
            return rng.choice(lines).formula
        f = rng.choice(atoms)
        for _ in range(rng.randint(0, 2)):
            f = Box(f)
        return f

    while len(lines) < length:
        mp = [(i, j) for i, a in enumerate(lines) if isinstance(a.formula, Imp)
              for j, b in enumerate(lines) if b.formula == a.formula.premise]
        ub = [i for i, a in enumerate(lines) if isinstance(a.formula, Box)]
        kinds = ["schema"] * 3 + ["mp"] * (4 if mp else 0) + ["unbox"] * (2 if ub else 0)
        kinds += ["def"] if t.definitions else []
        kind = rng.choice(kinds)
        if kind == "mp":
            i, j = rng.choice(mp)
            lines.append(Line(lines[i].formula.conclusion, ModusPonens(i + 1, j + 1)))
        elif kind == "unbox":
            i = rng.choice(ub)
            lines.append(Line(lines[i].formula.body, Unbox(i + 1)))
        elif kind == "def":
            i, _ = rng.choice(t.definitions)
            d = rng.choice(("->", "<-"))
            lines.append(Line(t.axiom(i, d), DefiningAxiom(i, d)))
        else:
            s = rng.choice(schemata)
            subst = {m: pick() for m in schema_metavars(s)}
            lines.append(Line(logical_axiom_instance(s, subst), Axiom(s, tuple(sorted(subst.items())))))
    return Derivation(tuple(lines))
