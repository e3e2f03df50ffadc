"""Rejection sets F_k over a finite closure, and the consistency report.

``F_k`` collects the formulas rejected by stage ``k``:

* ``bot`` is in every ``F_k``;
* ``[]A`` is in ``F_k`` iff ``k > 1`` and ``A`` is in ``F_{k-1}``;
* ``A & B`` iff either conjunct is, ``A | B`` iff both are;
* ``p_i`` iff its defining body is;
* ``A -> B`` iff for some ``j <= k``, ``B`` is in ``F_j`` and ``A`` is not.

Theorems of P never enter any stage.  On a finite closure the stages grow
monotonically and must stop growing, which makes membership in the union
decidable there.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .formula import BOT, And, Bottom, Box, Formula, Imp, Or, Var, boxes, render, subformulas
from .theory import (
    Theory,
    UndeclaredVariable,
    allowed_schemata,
    level,
    logical_axiom_instance,
    require_valid,
    schema_metavars,
)

NEVER = None


@dataclass(frozen=True)
class Closure:
    theory: Theory
    formulas: frozenset[Formula]

    def __len__(self) -> int:
        return len(self.formulas)

    def __contains__(self, f: Formula) -> bool:
        return f in self.formulas

    def ordered(self) -> list[Formula]:
        """Closure formulas sorted by level, then by printed form."""
        return sorted(self.formulas, key=lambda f: (level(f, self.theory), render(f)))


def _check_vars(t: Theory, f: Formula) -> None:
    for g in subformulas(f):
        if isinstance(g, Var) and not t.declares(g.index):
            raise UndeclaredVariable(f"p{g.index} is not declared in the theory")


def build_closure(t: Theory, seeds: Iterable[Formula]) -> Closure:
    """Smallest set with the seeds and bot, closed under subformulas and unfolding."""
    require_valid(t)
    bodies = t.bodies
    out: set[Formula] = {BOT}
    todo = list(seeds)
    for f in todo:
        _check_vars(t, f)
    while todo:
        f = todo.pop()
        if f in out:
            continue
        out.add(f)
        if isinstance(f, Box):
            todo.append(f.body)
        elif isinstance(f, Var):
            todo.append(bodies[f.index])
        elif isinstance(f, (And, Or, Imp)):
            todo.extend(f.children)
    return Closure(t, frozenset(out))


class StageOracle:
    """Top-down membership test ``f in F_k``, memoized on ``(f, k)``."""

    def __init__(self, t: Theory):
        require_valid(t)
        self.theory = t
        self._bodies = t.bodies
        self._memo: dict[tuple[Formula, int], bool] = {}

    def __call__(self, f: Formula, k: int) -> bool:
        if k < 1:
            raise ValueError("stages start at 1")
        key = (f, k)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if isinstance(f, Bottom):
            out = True
        elif isinstance(f, Box):
            out = k > 1 and self(f.body, k - 1)
        elif isinstance(f, Var):
            if f.index not in self._bodies:
                raise UndeclaredVariable(f"p{f.index} is not declared in the theory")
            out = self(self._bodies[f.index], k)
        elif isinstance(f, And):
            out = self(f.left, k) or self(f.right, k)
        elif isinstance(f, Or):
            out = self(f.left, k) and self(f.right, k)
        elif isinstance(f, Imp):
            out = any(self(f.conclusion, j) and not self(f.premise, j) for j in range(1, k + 1))
        else:
            raise TypeError(f"not a formula: {f!r}")
        self._memo[key] = out
        return out


def in_Fk(t: Theory, f: Formula, k: int) -> bool:
    """Whether ``f`` belongs to the stage-``k`` rejection set of ``t``."""
    return StageOracle(t)(f, k)


class NotStabilized(RuntimeError):
    def __init__(self, message: str, stages: list[frozenset[Formula]]):
        super().__init__(message)
        self.stages = stages


@dataclass
class FilterTrace:
    closure: Closure
    stages: list[frozenset[Formula]]
    stabilized_at: int
    entry_stage: dict[Formula, int | None]
    confirmed: int = 2

    def in_F(self, f: Formula) -> bool:
        return self.entry_stage[f] is not NEVER

    def stage(self, k: int) -> frozenset[Formula]:
        """``T_k``; stages past the stabilization point repeat the last one."""
        return self.stages[min(k, len(self.stages)) - 1]

    def growth(self) -> list[int]:
        return [len(s) for s in self.stages]


def stabilize(t: Theory, c: Closure, max_stages: int | None = None, extra: int = 2) -> FilterTrace:
    """Compute ``T_k = F_k & closure`` until two consecutive stages agree.

    After the first repeat, ``extra`` further stages are computed and must
    also agree.  Raises :class:`NotStabilized` past ``max_stages``
    (default ``|closure| + 2``).
    """
    if max_stages is None:
        max_stages = len(c) + 2
    bodies = t.bodies
    order = c.ordered()
    stages: list[frozenset[Formula]] = []

    def next_stage(k: int) -> frozenset[Formula]:
        cur: set[Formula] = set()
        prev = stages[k - 2] if k > 1 else frozenset()
        for f in order:
            if isinstance(f, Bottom):
                hit = True
            elif isinstance(f, Box):
                hit = f.body in prev
            elif isinstance(f, Var):
                hit = bodies[f.index] in cur
            elif isinstance(f, And):
                hit = f.left in cur or f.right in cur
            elif isinstance(f, Or):
                hit = f.left in cur and f.right in cur
            else:
                a, b = f.premise, f.conclusion
                hit = b in cur and a not in cur
                if not hit:
                    hit = any(b in s and a not in s for s in stages[: k - 1])
            if hit:
                cur.add(f)
        return frozenset(cur)

    k = 0
    stabilized_at = None
    while stabilized_at is None:
        k += 1
        if k > max_stages + 1:
            raise NotStabilized(f"no repeat within {max_stages} stages", stages)
        stages.append(next_stage(k))
        if k >= 2 and stages[-1] == stages[-2]:
            stabilized_at = k - 1
    for _ in range(extra):
        k += 1
        stages.append(next_stage(k))
        if stages[-1] != stages[stabilized_at - 1]:
            raise NotStabilized(f"stage {k} grew after an apparent repeat at {stabilized_at}", stages)

    entry: dict[Formula, int | None] = {}
    for f in order:
        entry[f] = next((i for i in range(1, stabilized_at + 1) if f in stages[i - 1]), NEVER)
    return FilterTrace(c, stages, stabilized_at, entry, extra)


def entry_of(trace: FilterTrace, f: Formula) -> int | None:
    """Entry stage of ``f``, computed from the trace for formulas built over it.

    Subformulas found in the closure use the recorded entry; new connectives
    and boxes are evaluated from their parts (``[]`` adds one stage, ``&``
    takes the earlier, ``|`` the later, ``A -> B`` enters with ``B`` only if
    ``B`` enters strictly before ``A``).
    """
    table = trace.entry_stage

    @lru_cache(maxsize=None)
    def go(g: Formula) -> int | None:
        if g in table:
            return table[g]
        if isinstance(g, Bottom):
            return 1
        if isinstance(g, Box):
            e = go(g.body)
            return NEVER if e is NEVER else e + 1
        if isinstance(g, Var):
            raise KeyError(f"p{g.index} is outside the traced closure")
        a, b = go(g.children[0]), go(g.children[1])
        if isinstance(g, And):
            return b if a is NEVER else a if b is NEVER else min(a, b)
        if isinstance(g, Or):
            return NEVER if a is NEVER or b is NEVER else max(a, b)
        if b is NEVER:
            return NEVER
        return b if a is NEVER or b < a else NEVER

    return go(f)


# ---------------------------------------------------------------------------
# consistency report


@dataclass
class ConsistencyReport:
    theory: Theory
    closure_size: int
    stabilized_at: int
    entry_stages: dict[Formula, int | None]
    checks: dict[str, bool]
    violations: list[dict] = field(default_factory=list)
    instances_checked: int = 0

    @property
    def passed(self) -> bool:
        return all(self.checks.values()) and not self.violations

    def to_json(self) -> dict:
        return {
            "theory": self.theory.digest(),
            "variant": self.theory.variant.value,
            "closure_size": self.closure_size,
            "stabilized_at": self.stabilized_at,
            "entry_stages": {render(f): ("never" if e is NEVER else e)
                             for f, e in sorted(self.entry_stages.items(),
                                                key=lambda kv: render(kv[0]))},
            "checks": dict(self.checks),
            "instances_checked": self.instances_checked,
            "violations": self.violations,
            "passed": self.passed,
        }


def _schema_instances(schema: str, pool: Sequence[Formula]):
    names = schema_metavars(schema)
    for combo in itertools.product(pool, repeat=len(names)):
        yield dict(zip(names, combo))


def consistency_report(t: Theory, sample: Closure, trace: FilterTrace) -> ConsistencyReport:
    """Check the facts that make the filter a consistency proof, over ``sample``.

    (a) bot is rejected; (b) no defining-axiom direction and no schema
    instance over the sample is rejected; (c) the unrejected formulas are
    closed under modus ponens and unbox.  Counterexamples are listed.
    """
    violations: list[dict] = []
    e = lambda f: entry_of(trace, f)  # noqa: E731
    pool = sorted(sample.formulas, key=render)

    bot_ok = e(BOT) == 1
    if not bot_ok:
        violations.append({"check": "bottom", "formula": "bot", "entry": e(BOT)})

    def_ok = True
    for ax in t.axiom_directions():
        if e(ax) is not NEVER:
            def_ok = False
            violations.append({"check": "defining_axiom", "formula": render(ax), "entry": e(ax)})

    schema_ok = True
    mp_ok = True
    count = 0
    for schema in sorted(allowed_schemata(t.variant)):
        for subst in _schema_instances(schema, pool):
            inst = logical_axiom_instance(schema, subst)
            count += 1
            ei = e(inst)
            if ei is not NEVER:
                schema_ok = False
                violations.append({"check": "schema", "schema": schema,
                                   "formula": render(inst), "entry": ei})
            elif e(inst.premise) is NEVER and e(inst.conclusion) is not NEVER:
                mp_ok = False
                violations.append({"check": "modus_ponens", "formula": render(inst)})

    for f in pool:
        if isinstance(f, Imp):
            if e(f) is NEVER and e(f.premise) is NEVER and e(f.conclusion) is not NEVER:
                mp_ok = False
                violations.append({"check": "modus_ponens", "formula": render(f)})

    unbox_ok = True
    for f in pool:
        if isinstance(f, Box) and e(f) is NEVER and e(f.body) is not NEVER:
            unbox_ok = False
            violations.append({"check": "unbox", "formula": render(f)})

    checks = {
        "bottom_rejected": bot_ok,
        "defining_axioms_accepted": def_ok,
        "schema_instances_accepted": schema_ok,
        "modus_ponens_closed": mp_ok,
        "unbox_closed": unbox_ok,
    }
    return ConsistencyReport(t, len(trace.closure), trace.stabilized_at,
                             dict(trace.entry_stage), checks, violations, count)


def run_filter(t: Theory, seeds: Iterable[Formula], max_stages: int | None = None,
               with_axioms: bool = True) -> tuple[Closure, FilterTrace, ConsistencyReport]:
    """Closure, trace and report in one call.

    With ``with_axioms`` the defining-axiom directions join the seeds, so
    their entries appear in the trace itself.
    """
    seeds = list(seeds)
    if with_axioms:
        seeds += t.axiom_directions()
    c = build_closure(t, seeds)
    trace = stabilize(t, c, max_stages)
    return c, trace, consistency_report(t, c, trace)


def boxed_bottoms(k: int) -> list[Formula]:
    return [boxes(BOT, i) for i in range(k + 1)]
