"""Curated formula lists shared by the test suites and the CLI."""

from __future__ import annotations

from .formula import Formula, parse

# Minimal-logic theorems whose proofs only link Defender slots to earlier
# Attacker slots, each with at most four Attacker slots.
GAME_THEOREMS: tuple[str, ...] = (
    "p1 -> p1",
    "p1 & p2 -> p1",
    "p1 & p2 -> p2",
    "p1 & p2 -> p2 & p1",
    "p1 -> p2 -> p1",
    "p1 -> p2 -> p2",
    "p1 -> p2 -> p1 & p2",
    "p1 -> p1 | p2",
    "p2 -> p1 | p2",
    "p1 | p2 -> p2 | p1",
    "p1 & p1 -> p1",
    "p1 -> p1 & p1",
    "p1 | p1 -> p1",
    "p1 -> (p1 -> p2) -> p2",
    "p1 & (p1 -> p2) -> p2",
    "(p1 & p2) & p3 -> p1 & (p2 & p3)",
    "p1 & (p2 & p3) -> (p1 & p2) & p3",
    "(p1 | p2) | p3 -> p1 | (p2 | p3)",
    "p1 | (p2 | p3) -> (p1 | p2) | p3",
    "p1 & (p2 | p3) -> p1 & p2 | p1 & p3",
    "p1 & p2 | p1 & p3 -> p1 & (p2 | p3)",
    "p1 | p2 & p3 -> (p1 | p2) & (p1 | p3)",
    "p1 -> ~p1 -> bot",
    "p1 & ~p1 -> bot",
    "p1 -> ~~p1",
    "p1 & p2 -> p1 | p2",
    "p1 | p1 & p2 -> p1",
    "p1 & (p1 | p2) -> p1",
    "p1 -> p2 -> p3 -> p2",
    "p1 & p2 & p3 -> p3 & p1",
    "bot -> bot",
    "p1 & p2 -> (p1 -> p3) -> p3",
    "p1 -> p2 -> p2 & p1",
    "p1 -> p1 | p1",
    "p1 & p2 -> p2 | p3",
    "p1 | p2 -> (p1 -> p3) -> (p2 -> p3) -> p3",
    "p1 -> (p1 -> p2) -> (p2 -> p3) -> p3",
    "p1 & (p1 -> p2) & (p2 -> p3) -> p3",
    "p1 | p2 -> (p1 -> p2) -> p2",
)

# Minimal-logic theorems where some Defender slot is linked to a later
# Attacker slot, so a copying strategy cannot be read off.
ORDER_SENSITIVE: tuple[str, ...] = (
    "(p1 -> p2) -> p1 -> p2",
    "(p1 -> p2) -> (p2 -> p3) -> p1 -> p3",
    "(p1 -> p2 -> p3) -> p1 & p2 -> p3",
    "(p1 & p2 -> p3) -> p1 -> p2 -> p3",
    "(p1 -> p2) & (p1 -> p3) -> p1 -> p2 & p3",
    "~(p1 | p2) -> ~p1",
    "~~~p1 -> ~p1",
)

# Sample theories for the filter, as theory-file text.
SAMPLE_THEORIES: dict[str, str] = {
    "liar_neg_box": "p1 := ~[]p1",
    "liar_box_neg": "p2 := []~p2",
    "liar_pair": "p4 := []p5\np5 := ~[]p4",
    "liar": "p1 := []~p1",
    "truth_teller": "p1 := []p1",
    "mixed": "p1 := []p2 | ~[]p1\np2 := [](p1 -> bot) & []p2",
}


def game_theorems() -> list[Formula]:
    return [parse(s) for s in GAME_THEOREMS]
