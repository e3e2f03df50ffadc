"""Certificates about the liar sentence ``L := p1`` with ``p1 <-> []~p1``.

Three facts, each as a checkable derivation over that one-axiom theory:

* ``p1 -> []bot``: the liar is weakly false;
* ``~p1 -> bot``: its negation is refutable;
* ``([]bot -> bot) -> bot``: reflection for ``bot`` is refutable.
"""

from __future__ import annotations

from pathlib import Path

from .formula import BOT, Box, Var, neg, parse
from .terms import Term, ax, b4, compile_term, definition, fun
from .theory import Derivation, Theory, dump_theory, save_derivation

L = Var(1)


def liar_theory() -> Theory:
    return Theory.of({1: parse("[]~p1")})


def _weakly_false(t: Theory) -> Term:
    unfold = definition(t, 1, "->")                      # p1 -> []~p1
    k = ax("B3", A=L, B=BOT)                             # []~p1 -> []p1 -> []bot
    return fun(L, lambda x: k(unfold(x))(b4(x)))


def _liar_from_refutation(t: Theory, refute: Term) -> Term:
    # from a closed-over proof of ~p1, get p1 by boxing and folding
    return definition(t, 1, "<-")(b4(refute))


def weakly_false() -> Derivation:
    return compile_term(_weakly_false(liar_theory()))


def negation_refuted() -> Derivation:
    t = liar_theory()
    return compile_term(fun(neg(L), lambda n: n(_liar_from_refutation(t, n))))


def reflection_refuted() -> Derivation:
    t = liar_theory()
    wf = _weakly_false(t)

    def body(h: Term) -> Term:
        n = fun(L, lambda x: h(wf(x)))                   # ~p1
        return n(_liar_from_refutation(t, n))

    return compile_term(fun(Box(BOT) >> BOT, body))


FILES = {
    "weakly_false.drv": weakly_false,
    "negation_refuted.drv": negation_refuted,
    "reflection_refuted.drv": reflection_refuted,
}


def write_files(directory: str | Path) -> list[Path]:
    """Write the theory file and the three derivation files."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    out = [d / "liar.thy"]
    out[0].write_text(dump_theory(liar_theory()))
    for name, build in FILES.items():
        save_derivation(build(), d / name)
        out.append(d / name)
    return out


if __name__ == "__main__":
    import sys

    for p in write_files(sys.argv[1] if len(sys.argv) > 1 else "data/liar"):
        print(p)
