"""Command-line front end.

Every subcommand prints JSON (or a plain table with ``--pretty``).  Exit
codes: 0 success, 1 checked and failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Callable

from .formula import ParseError, Player, is_increasing, parse, render, size
from .theory import (
    DerivationFormatError,
    InvalidTheory,
    Logic,
    Theory,
    UndeclaredVariable,
    Variant,
    check_derivation,
    load_derivation,
    load_theory,
    save_derivation,
    validate_theory,
)

OK, FAILED, USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    """Usage errors come out as JSON like every other failure."""

    def error(self, message: str):
        _emit({"ok": False, "error": "UsageError", "reason": message,
               "usage": self.format_usage().strip()}, False)
        sys.exit(USAGE)


def _emit(obj: dict, pretty: bool, table: Callable[[dict], str] | None = None) -> None:
    if pretty and table is not None:
        print(table(obj))
    else:
        print(json.dumps(obj, sort_keys=True, indent=2))


def _formula(text: str):
    return parse(text)


def _theory(args) -> Theory:
    t = load_theory(args.theory) if getattr(args, "theory", None) else Theory()
    if getattr(args, "variant", None):
        t = t.with_variant(args.variant)
    return t


def _json_arg(text: str):
    if text.startswith("@"):
        text = Path(text[1:]).read_text()
    return json.loads(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_parse(args) -> int:
    f = _formula(args.formula)
    _emit({"formula": render(f), "increasing": is_increasing(f), "size": size(f)},
          args.pretty, lambda o: o["formula"])
    return OK


def cmd_theory_check(args) -> int:
    t = load_theory(args.file)
    problems = validate_theory(t)
    out = {"ok": not problems, "variant": t.variant.value, "axioms": len(t.definitions),
           "violations": [{"axiom": v.axiom, "path": ".".join(v.path), "message": v.message}
                          for v in problems]}
    _emit(out, args.pretty, lambda o: "ok" if o["ok"] else "\n".join(
        f"p{v['axiom']}: {v['message']} at {v['path'] or 'root'}" for v in o["violations"]))
    return OK if not problems else FAILED


def cmd_derive_check(args) -> int:
    t = _theory(args)
    d = load_derivation(args.file)
    premises = [parse(p) for p in args.premise or ()]
    logic = Logic(args.logic) if args.logic else None
    v = check_derivation(t, d, premises, logic=logic)
    out = {"ok": v.ok, "lines": len(d.lines), "line": v.line, "reason": v.reason,
           "conclusion": render(d.conclusion) if d.lines else None}
    _emit(out, args.pretty, lambda o: "ok: " + str(o["conclusion"]) if o["ok"]
          else f"line {o['line']}: {o['reason']}")
    return OK if v.ok else FAILED


def cmd_filter(args) -> int:
    from .semantic import NotStabilized, boxed_bottoms, run_filter

    t = _theory(args)
    seeds = [parse(s) for s in args.seeds.split(",") if s.strip()] if args.seeds else []
    seeds += [parse(f"p{i}") for i, _ in t.definitions]
    seeds += boxed_bottoms(args.bottoms)
    try:
        closure, trace, report = run_filter(t, seeds, args.max_stages)
    except NotStabilized as e:
        _emit({"ok": False, "reason": str(e), "stages_computed": len(e.stages)}, args.pretty,
              lambda o: o["reason"])
        return FAILED
    out = report.to_json()
    out["stage_sizes"] = trace.growth()
    out["bound_ok"] = trace.stabilized_at <= len(closure) + 1
    if args.figure:
        from .plotting import plot_trace

        out["figure"] = str(plot_trace(trace, args.figure))

    def table(o: dict) -> str:
        rows = [f"closure {o['closure_size']}, stable at stage {o['stabilized_at']}, "
                f"{'passed' if o['passed'] else 'FAILED'}"]
        width = max(len(k) for k in o["entry_stages"])
        rows += [f"  {k:<{width}}  {v}" for k, v in o["entry_stages"].items()]
        rows += [f"  violation: {v}" for v in o["violations"]]
        return "\n".join(rows)

    _emit(out, args.pretty, table)
    return OK if report.passed and out["bound_ok"] else FAILED


def cmd_prove(args) -> int:
    from .sequent import check_tree, parse_sequent, prove

    s = parse_sequent(args.sequent)
    logic = Logic(args.logic)
    tr = prove(s, logic)
    out = {"sequent": str(s), "logic": logic.value,
           "verdict": "provable" if tr is not None else "unprovable"}
    if tr is not None:
        out["checked"] = bool(check_tree(tr, logic))
        out["size"] = tr.size()
        if args.out:
            Path(args.out).write_text(tr.dumps() + "\n")
            out["tree_file"] = args.out
        else:
            out["tree"] = tr.to_json()
    _emit(out, args.pretty, lambda o: o["verdict"])
    return OK if tr is not None else FAILED


def _extraction(args):
    from .game import extract_defender_strategy
    from .sequent import prove

    f = parse(args.formula)
    logic = Logic(args.logic)
    tr = prove(f, logic)
    if tr is None:
        raise _Failed({"ok": False, "reason": f"{render(f)} is not provable in {logic.value} logic"})
    return extract_defender_strategy(tr, logic)


class _Failed(Exception):
    def __init__(self, payload: dict):
        super().__init__(payload.get("reason", ""))
        self.payload = payload


def _attacker(args, arena):
    from .game import Strategy, random_strategy

    if args.attacker:
        return Strategy.from_json(_json_arg(args.attacker))
    if args.attacker_const is not None:
        return Strategy.constant(arena, Player.ATTACKER, args.attacker_const)
    return random_strategy(arena, Player.ATTACKER, random.Random(args.seed))


def cmd_game_play(args) -> int:
    from .game import Arena, Strategy, play

    arena = Arena.of_formula(parse(args.formula))
    defender = Strategy.from_json(_json_arg(args.defender))
    attacker = _attacker(args, arena)
    r = play(arena, defender, attacker)
    _emit(r.to_json(), args.pretty, lambda o: f"{o['transcript']}\n{o['boxed']}")
    return OK


def cmd_game_extract(args) -> int:
    from .game import show_term

    ext = _extraction(args)
    out = ext.to_json()
    out["ok"] = True

    def table(o: dict) -> str:
        rows = [ext.arena.table(), "", "defender strategy:"]
        rows += [f"  slot {s}: {show_term(t)}" for s, t in ext.strategy.moves]
        return "\n".join(rows)

    _emit(out, args.pretty, table)
    return OK


def cmd_game_certify(args) -> int:
    from .game import PlayResult, certify_play

    logic = Logic(args.logic)
    if args.boxed:
        from .game import Arena

        g = parse(args.formula)
        r = PlayResult(Arena.of_formula(g), (), g, None, logic)
        ok = certify_play(r, logic, fallback=True, budget=args.budget)
        _emit({"boxed": render(g), "certified": ok, "method": "bounded search",
               "budget": args.budget}, args.pretty, lambda o: str(o["certified"]))
        return OK if ok else FAILED
    ext = _extraction(args)
    attacker = _attacker(args, ext.arena)
    r = ext.play(attacker)
    ok = certify_play(r, logic)
    out = r.to_json()
    out.update(certified=ok, logic=logic.value, attacker=attacker.to_json(),
               defender=ext.strategy.to_json())
    if args.out:
        save_derivation(r.certificate, args.out)
        out["certificate_file"] = args.out
    _emit(out, args.pretty, lambda o: f"{o['boxed']}: {'certified' if o['certified'] else 'NOT certified'}")
    return OK if ok else FAILED


def _pair(args):
    from .interp import TheoryPair

    return TheoryPair.of(parse(a) for a in args.axiom)


def cmd_interp_run(args) -> int:
    from .interp import weak_interpret

    res = weak_interpret(_pair(args), parse(args.goal), logic=Logic(args.logic))
    out = res.to_json()
    out["ok"] = True
    if args.out:
        save_derivation(res.derivation, args.out)
        out["derivation_file"] = args.out
    _emit(out, args.pretty, lambda o: f"{o['goal']}  lifts to  {o['b_boxed']}")
    return OK


def cmd_interp_transfer(args) -> int:
    from .interp import consistency_transfer

    tr = consistency_transfer(_pair(args), logic=Logic(args.logic))
    out = tr.interpretation.to_json()
    out.update(ok=True, unboxes=tr.unboxes, conclusion=render(tr.derivation.conclusion),
               derivation_lines=len(tr.derivation.lines))
    if args.out:
        save_derivation(tr.derivation, args.out)
        out["derivation_file"] = args.out
    _emit(out, args.pretty, lambda o: f"bot derived after {o['unboxes']} unbox step(s)")
    return OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="boxlogic", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, *, variant=False, logic=None, theory=False):
        sp.add_argument("--pretty", action="store_true", help="plain text instead of JSON")
        if variant:
            sp.add_argument("--variant", choices=[v.value for v in Variant])
        if theory:
            sp.add_argument("--theory", help="theory file")
        if logic is not None:
            sp.add_argument("--logic", choices=[lg.value for lg in Logic], default=logic)

    sp = sub.add_parser("parse", help="echo the normalized formula")
    sp.add_argument("formula")
    common(sp)
    sp.set_defaults(run=cmd_parse)

    th = sub.add_parser("theory", help="theory files").add_subparsers(dest="action", required=True)
    sp = th.add_parser("check", help="validate guardedness and indexing")
    sp.add_argument("file")
    common(sp)
    sp.set_defaults(run=cmd_theory_check)

    dv = sub.add_parser("derive", help="derivation files").add_subparsers(dest="action", required=True)
    sp = dv.add_parser("check", help="check a derivation line by line")
    sp.add_argument("file")
    sp.add_argument("--premise", action="append", help="admit a formula as a premise (repeatable)")
    common(sp, variant=True, theory=True)
    sp.add_argument("--logic", choices=[lg.value for lg in Logic], default=None)
    sp.set_defaults(run=cmd_derive_check)

    sp = sub.add_parser("filter", help="stage the rejection sets and report on consistency")
    sp.add_argument("--seeds", help="comma-separated formulas")
    sp.add_argument("--bottoms", type=int, default=10, help="also seed []^k bot for k up to this")
    sp.add_argument("--max-stages", type=int, default=None)
    sp.add_argument("--figure", help="write a PNG of the stage growth and entry stages")
    common(sp, variant=True, theory=True)
    sp.set_defaults(run=cmd_filter)

    sp = sub.add_parser("prove", help="sequent prover")
    sp.add_argument("sequent", help="'A, B => C' or just a formula")
    sp.add_argument("--out", help="write the proof tree JSON here")
    common(sp, logic="minimal")
    sp.set_defaults(run=cmd_prove)

    gm = sub.add_parser("game", help="box-insertion game").add_subparsers(dest="action", required=True)

    def attacker_flags(sp):
        sp.add_argument("--attacker", help="attacker strategy JSON or @file")
        sp.add_argument("--attacker-const", type=int, default=None, help="constant attacker")
        sp.add_argument("--seed", type=int, default=0, help="seed for a random attacker")

    sp = gm.add_parser("play", help="play given strategies")
    sp.add_argument("formula")
    sp.add_argument("--defender", required=True, help="defender strategy JSON or @file")
    attacker_flags(sp)
    common(sp)
    sp.set_defaults(run=cmd_game_play)

    sp = gm.add_parser("extract", help="defender strategy from a sequent proof")
    sp.add_argument("formula")
    common(sp, logic="minimal")
    sp.set_defaults(run=cmd_game_extract)

    sp = gm.add_parser("certify", help="play the extracted strategy and check the certificate")
    sp.add_argument("formula")
    sp.add_argument("--boxed", action="store_true", help="certify FORMULA itself by bounded search")
    sp.add_argument("--budget", type=int, default=6)
    sp.add_argument("--out", help="write the certificate derivation here")
    attacker_flags(sp)
    common(sp, logic="minimal")
    sp.set_defaults(run=cmd_game_certify)

    it = sub.add_parser("interp", help="weak interpretation").add_subparsers(dest="action", required=True)
    for name, fn, needs_goal in (("run", cmd_interp_run, True), ("transfer", cmd_interp_transfer, False)):
        sp = it.add_parser(name)
        sp.add_argument("--axiom", action="append", required=True, help="T2 axiom (repeatable)")
        if needs_goal:
            sp.add_argument("--goal", required=True)
        sp.add_argument("--out", help="write the T2 derivation here")
        common(sp, logic="minimal")
        sp.set_defaults(run=fn)
    return p


def main(argv: list[str] | None = None) -> int:
    from .game import CertificateError, StrategyError, StrategyExtractionError
    from .interp import InterpretationError, NotIncreasing
    from .sequent import BoxedInput

    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except _Failed as e:
        _emit(e.payload, False)
        return FAILED
    except (StrategyExtractionError, CertificateError, InterpretationError) as e:
        _emit({"ok": False, "error": type(e).__name__, "reason": str(e)}, False)
        return FAILED
    except ParseError as e:
        _emit({"ok": False, "error": "ParseError", "reason": str(e), "line": e.line,
               "column": e.column, "expected": list(e.expected)}, False)
        return USAGE
    except (InvalidTheory, UndeclaredVariable, DerivationFormatError, NotIncreasing, BoxedInput,
            StrategyError, OSError, ValueError, KeyError) as e:
        _emit({"ok": False, "error": type(e).__name__, "reason": str(e)}, False)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
