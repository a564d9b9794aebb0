"""The refutation procedure: inference rules, saturation, unfolding, history.

Three rules drive the search for the empty clause.  R1 resolves a positive
against a negative literal when the negative pattern maps into the positive
one; R2 replaces two positive literals by the disjunction over their join;
R3 combines a positive literal with a conditional constraint through every
monomorphism of the premise that fails to extend to the conclusion.

Version 1 saturates level by level with eager subsumption deletion and
duplicate-literal simplification.  Version 2 interleaves saturation with
rounds that unfold descendant edges inside positive literals.  Every run
produces a replayable history; replay re-derives each event and flags any
divergence.
"""

from __future__ import annotations

import re
import threading
import time
from dataclasses import dataclass
from typing import Callable, Optional, Union

from .algebra import descendant_edges, join, shared_join, unfold_edge
from .logic import (
    Clause,
    Conditional,
    Constraint,
    Negative,
    Positive,
    Specification,
    simplify,
    subsumes,
)
from .morphisms import NodeMap, enumerate_monomorphisms, has_extension


@dataclass(frozen=True)
class RunConfig:
    version: int = 1
    max_steps: int = 10000
    max_clauses: int = 2000
    max_pattern_nodes: int = 64
    unfold_rounds: int = 3
    time_budget_ms: Optional[int] = None

    def __post_init__(self):
        for name in ("max_steps", "max_clauses", "max_pattern_nodes", "unfold_rounds"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.version not in (1, 2):
            raise ValueError("version must be 1 or 2")


@dataclass(frozen=True)
class Infer:
    step: int
    rule: str  # "R1" | "R2" | "R3"
    premises: tuple[tuple[str, int], tuple[str, int]]
    mono: Optional[NodeMap]
    result: Clause


@dataclass(frozen=True)
class Delete:
    step: int
    clause_id: str
    subsumed_by: str


@dataclass(frozen=True)
class Simplify:
    step: int
    before_id: str
    result: Clause


@dataclass(frozen=True)
class Unfold:
    step: int
    clause_id: str
    literal: int
    edge: int
    result: Clause


@dataclass(frozen=True)
class Verdict:
    verdict: str  # "UNSAT" | "SATURATED" | "LIMIT"
    steps: int
    elapsed_ms: int


HistoryEvent = Union[Infer, Delete, Simplify, Unfold, Verdict]

UNSATISFIABLE = "UNSAT"
SATURATED = "SATURATED"
LIMIT_REACHED = "LIMIT"


@dataclass(frozen=True)
class RunResult:
    verdict: str
    final_clauses: Specification
    history: tuple[HistoryEvent, ...]
    elapsed_ms: int
    cancelled: bool = False


# -- the inference rules -------------------------------------------------------

def _check_distinct(c1: Clause, c2: Clause) -> None:
    if c1.id == c2.id:
        raise ValueError("premises must be two distinct clauses")


def _gammas(c1: Clause, i: int, c2: Clause, j: int) -> list[Constraint]:
    g1 = [lit for k, lit in enumerate(c1.literals) if k != i]
    g2 = [lit for k, lit in enumerate(c2.literals) if k != j]
    return g1 + g2


def r1_inference(c1: Clause, i: int, c2: Clause, j: int):
    """Resolvent literals plus the witnessing monomorphism, or None."""
    _check_distinct(c1, c2)
    lit1, lit2 = c1.literals[i], c2.literals[j]
    if not isinstance(lit1, Positive) or not isinstance(lit2, Negative):
        raise ValueError("R1 needs a positive and a negative literal")
    found = enumerate_monomorphisms(lit2.pattern, lit1.pattern)
    if not found:
        return None
    gam = simplify(Clause("", tuple(_gammas(c1, i, c2, j))))
    return gam.literals, found[0]


def apply_r1(c1: Clause, i: int, c2: Clause, j: int) -> list[Clause]:
    got = r1_inference(c1, i, c2, j)
    if got is None:
        return []
    return [Clause("", got[0])]


def r2_inference(c1: Clause, i: int, c2: Clause, j: int) -> tuple[Constraint, ...]:
    _check_distinct(c1, c2)
    lit1, lit2 = c1.literals[i], c2.literals[j]
    if not isinstance(lit1, Positive) or not isinstance(lit2, Positive):
        raise ValueError("R2 needs two positive literals")
    joined = [Positive(m.pattern) for m in join(lit1.pattern, lit2.pattern)]
    out = simplify(Clause("", tuple(joined + _gammas(c1, i, c2, j))))
    return out.literals


def apply_r2(c1: Clause, i: int, c2: Clause, j: int) -> list[Clause]:
    return [Clause("", r2_inference(c1, i, c2, j))]


def r3_inferences(c1: Clause, i: int, c2: Clause, j: int):
    """One (literals, mono) per monomorphism premise -> p1 with no extension."""
    _check_distinct(c1, c2)
    lit1, lit2 = c1.literals[i], c2.literals[j]
    if not isinstance(lit1, Positive) or not isinstance(lit2, Conditional):
        raise ValueError("R3 needs a positive and a conditional literal")
    c = lit2.as_node_map()
    out = []
    for m in enumerate_monomorphisms(lit2.premise, lit1.pattern):
        if has_extension(c, m):
            continue
        merged = [Positive(r.pattern) for r in shared_join(lit1.pattern, lit2.conclusion, c, m)]
        cl = simplify(Clause("", tuple(merged + _gammas(c1, i, c2, j))))
        out.append((cl.literals, m))
    return out


def apply_r3(c1: Clause, i: int, c2: Clause, j: int) -> list[Clause]:
    return [Clause("", lits) for lits, _ in r3_inferences(c1, i, c2, j)]


# -- the engine ----------------------------------------------------------------

class _Limit(Exception):
    pass


class _Unsat(Exception):
    pass


class _Engine:
    def __init__(self, spec: Specification, cfg: RunConfig, cancel: Optional[threading.Event]):
        self.cfg = cfg
        self.cancel = cancel
        self.active: dict[str, Clause] = {}
        self.events: list[HistoryEvent] = []
        self.steps = 0
        self.created = 0
        self.cancelled = False
        self.start = time.perf_counter()
        top = 0
        for cl in spec.clauses:
            m = re.fullmatch(r"c(\d+)", cl.id)
            if m:
                top = max(top, int(m.group(1)))
            self.active[cl.id] = cl
            self.created += 1
        self.next_id = top + 1

    def elapsed_ms(self) -> int:
        return int((time.perf_counter() - self.start) * 1000)

    def fresh_id(self) -> str:
        cid = f"c{self.next_id}"
        self.next_id += 1
        return cid

    def poll(self) -> None:
        if self.cancel is not None and self.cancel.is_set():
            self.cancelled = True
            raise _Limit()
        budget = self.cfg.time_budget_ms
        if budget is not None and self.elapsed_ms() > budget:
            raise _Limit()

    def step_event(self, make: Callable[[int], HistoryEvent]) -> None:
        if self.steps >= self.cfg.max_steps:
            raise _Limit()
        self.steps += 1
        self.events.append(make(self.steps))

    def alive(self, cid: str) -> Optional[Clause]:
        return self.active.get(cid)

    def admit(
        self, literals: tuple[Constraint, ...], record, replaces: Optional[str] = None
    ) -> Optional[Clause]:
        """Record the producing event, then housekeep the new clause:
        discard it when an existing clause subsumes it, delete the existing
        clauses it subsumes, and stop the run the moment FALSE appears.
        ``replaces`` removes the predecessor of a SIMPLIFY/UNFOLD result."""
        for pat in Clause("", literals).patterns():
            if pat.size > self.cfg.max_pattern_nodes:
                raise _Limit()
        if self.created >= self.cfg.max_clauses:
            raise _Limit()
        clause = Clause(self.fresh_id(), literals)
        self.created += 1
        self.step_event(lambda n: record(n, clause))
        if replaces is not None:
            del self.active[replaces]
        if clause.is_false:
            self.active[clause.id] = clause
            raise _Unsat()
        for old in self.active.values():
            if subsumes(old, clause):
                other = old
                self.step_event(lambda n: Delete(n, clause.id, other.id))
                return None
        self.active[clause.id] = clause
        for old_id in [cid for cid in self.active if cid != clause.id]:
            old = self.active[old_id]
            if subsumes(clause, old):
                gone = old_id
                self.step_event(lambda n: Delete(n, gone, clause.id))
                del self.active[old_id]
        return clause

    def normalize_inputs(self) -> None:
        for cid in list(self.active):
            cl = self.alive(cid)
            if cl is None:
                continue
            if cl.is_false:
                raise _Unsat()
            slim = simplify(cl)
            if len(slim.literals) == len(cl.literals):
                continue
            before = cid
            self.admit(slim.literals, lambda n, c: Simplify(n, before, c), replaces=cid)

    def _apply_pair(self, xid: str, yid: str) -> None:
        x0, y0 = self.alive(xid), self.alive(yid)
        if x0 is None or y0 is None:
            return
        for i in range(len(x0.literals)):
            for j in range(len(y0.literals)):
                self.poll()
                x, y = self.alive(xid), self.alive(yid)
                if x is None or y is None:
                    return
                li, lj = x.literals[i], y.literals[j]
                if isinstance(li, Positive) and isinstance(lj, Negative):
                    self._do_r1(x, i, y, j)
                elif isinstance(li, Negative) and isinstance(lj, Positive):
                    self._do_r1(y, j, x, i)
                elif isinstance(li, Positive) and isinstance(lj, Positive):
                    self._do_r2(x, i, y, j)
                elif isinstance(li, Positive) and isinstance(lj, Conditional):
                    self._do_r3(x, i, y, j)
                elif isinstance(li, Conditional) and isinstance(lj, Positive):
                    self._do_r3(y, j, x, i)

    def _do_r1(self, c1: Clause, i: int, c2: Clause, j: int) -> None:
        got = r1_inference(c1, i, c2, j)
        if got is None:
            return
        literals, mono = got
        self.admit(
            literals,
            lambda n, c: Infer(n, "R1", ((c1.id, i), (c2.id, j)), mono, c),
        )

    def _do_r2(self, c1: Clause, i: int, c2: Clause, j: int) -> None:
        literals = r2_inference(c1, i, c2, j)
        self.admit(
            literals,
            lambda n, c: Infer(n, "R2", ((c1.id, i), (c2.id, j)), None, c),
        )

    def _do_r3(self, c1: Clause, i: int, c2: Clause, j: int) -> None:
        for literals, mono in r3_inferences(c1, i, c2, j):
            if self.alive(c1.id) is None or self.alive(c2.id) is None:
                return
            self.admit(
                literals,
                lambda n, c: Infer(n, "R3", ((c1.id, i), (c2.id, j)), mono, c),
            )

    def saturate_levels(self) -> None:
        """Level-based saturation; returns when saturated, raises on FALSE/limits."""
        old: list[str] = []
        new = list(self.active)
        first = True
        while True:
            before = set(self.active)
            if first:
                for a in range(len(new)):
                    for b in range(a + 1, len(new)):
                        self._apply_pair(new[a], new[b])
                first = False
            else:
                for nid in new:
                    for oid in old:
                        self._apply_pair(oid, nid)
                for a in range(len(new)):
                    for b in range(a + 1, len(new)):
                        self._apply_pair(new[a], new[b])
            added = [
                cid
                for cid in self.active
                if cid not in before and self.alive(cid) is not None
            ]
            if not added:
                return
            old = [cid for cid in self.active if cid not in added]
            new = added

    def unfold_pass(self) -> bool:
        """Unfold the first descendant edge of every positive literal present
        at the start of the round (the freshly produced disjuncts wait for the
        next round); returns whether anything changed."""
        changed = False
        for cid in list(self.active):
            current_id = cid
            idx = 0
            while True:
                cl = self.alive(current_id)
                if cl is None:
                    break
                if idx >= len(cl.literals):
                    break
                lit = cl.literals[idx]
                if not isinstance(lit, Positive) or not descendant_edges(lit.pattern):
                    idx += 1
                    continue
                edge = descendant_edges(lit.pattern)[0]
                disjuncts = unfold_edge(lit.pattern, edge)
                new_literals = (
                    cl.literals[:idx]
                    + tuple(Positive(d) for d in disjuncts)
                    + cl.literals[idx + 1 :]
                )
                slim = simplify(Clause("", new_literals))
                self.poll()
                prev_id = current_id
                admitted = self.admit(
                    slim.literals,
                    lambda n, c, _pid=prev_id, _idx=idx, _edge=edge: Unfold(
                        n, _pid, _idx, _edge, c
                    ),
                    replaces=current_id,
                )
                changed = True
                if admitted is None:
                    break
                current_id = admitted.id
                # Skip the disjuncts just inserted: keep-first dedup is
                # prefix-stable, so their survivor count locates the next
                # original literal.
                prefix = new_literals[: idx + len(disjuncts)]
                idx = len(simplify(Clause("", prefix)).literals)
        return changed

    def finish(self, verdict: str) -> RunResult:
        self.events.append(Verdict(verdict, self.steps, self.elapsed_ms()))
        return RunResult(
            verdict,
            Specification(tuple(self.active.values())),
            tuple(self.events),
            self.elapsed_ms(),
            self.cancelled,
        )


def saturate_v1(
    s: Specification, cfg: RunConfig = RunConfig(), cancel: Optional[threading.Event] = None
) -> RunResult:
    """Version 1: rule saturation with eager subsumption and simplification."""
    eng = _Engine(s, cfg, cancel)
    try:
        eng.normalize_inputs()
        eng.saturate_levels()
        return eng.finish(SATURATED)
    except _Unsat:
        return eng.finish(UNSATISFIABLE)
    except _Limit:
        return eng.finish(LIMIT_REACHED)


def run_v2(
    s: Specification, cfg: RunConfig = RunConfig(), cancel: Optional[threading.Event] = None
) -> RunResult:
    """Version 2: saturation interleaved with descendant-edge unfolding."""
    eng = _Engine(s, cfg, cancel)
    try:
        eng.normalize_inputs()
        for _ in range(cfg.unfold_rounds):
            eng.saturate_levels()
            if not eng.unfold_pass():
                return eng.finish(SATURATED)
        return eng.finish(LIMIT_REACHED)
    except _Unsat:
        return eng.finish(UNSATISFIABLE)
    except _Limit:
        return eng.finish(LIMIT_REACHED)


def run(
    s: Specification, cfg: RunConfig = RunConfig(), cancel: Optional[threading.Event] = None
) -> RunResult:
    return saturate_v1(s, cfg, cancel) if cfg.version == 1 else run_v2(s, cfg, cancel)


# -- replay ---------------------------------------------------------------------

class ReplayMismatch(Exception):
    def __init__(self, step: int, expected: str, got: str):
        super().__init__(f"step {step}: expected {expected!r}, recomputed {got!r}")
        self.step = step
        self.expected = expected
        self.got = got


def _clause_text(cl: Clause) -> str:
    from .textio import print_clause_body

    return print_clause_body(cl)


def _expect_same(step: int, recorded: Clause, recomputed: tuple[Constraint, ...]) -> None:
    if recorded.literals != recomputed:
        raise ReplayMismatch(
            step, _clause_text(recorded), _clause_text(Clause("", recomputed))
        )


def replay(s0: Specification, history: tuple[HistoryEvent, ...]) -> Specification:
    """Re-derive every event from the input spec; any divergence is an error."""
    active: dict[str, Clause] = {cl.id: cl for cl in s0.clauses}

    def need(step: int, cid: str) -> Clause:
        cl = active.get(cid)
        if cl is None:
            raise ReplayMismatch(step, f"clause {cid} alive", "missing")
        return cl

    for ev in history:
        if isinstance(ev, Simplify):
            before = need(ev.step, ev.before_id)
            _expect_same(ev.step, ev.result, simplify(before).literals)
            del active[ev.before_id]
            active[ev.result.id] = ev.result
        elif isinstance(ev, Infer):
            (cid1, i), (cid2, j) = ev.premises
            c1, c2 = need(ev.step, cid1), need(ev.step, cid2)
            if ev.rule == "R1":
                got = r1_inference(c1, i, c2, j)
                if got is None:
                    raise ReplayMismatch(ev.step, "an R1 resolvent", "no monomorphism")
                _expect_same(ev.step, ev.result, got[0])
            elif ev.rule == "R2":
                _expect_same(ev.step, ev.result, r2_inference(c1, i, c2, j))
            elif ev.rule == "R3":
                if ev.mono is None:
                    raise ReplayMismatch(ev.step, "a recorded monomorphism", "none")
                matches = [
                    lits
                    for lits, m in r3_inferences(c1, i, c2, j)
                    if m.mapping == ev.mono.mapping
                ]
                if not matches:
                    raise ReplayMismatch(
                        ev.step, "a qualifying monomorphism", "not qualifying"
                    )
                _expect_same(ev.step, ev.result, matches[0])
            else:
                raise ReplayMismatch(ev.step, "R1|R2|R3", ev.rule)
            active[ev.result.id] = ev.result
        elif isinstance(ev, Delete):
            gone = need(ev.step, ev.clause_id)
            by = need(ev.step, ev.subsumed_by)
            if not subsumes(by, gone):
                raise ReplayMismatch(ev.step, f"{ev.subsumed_by} subsumes {ev.clause_id}", "no")
            del active[ev.clause_id]
        elif isinstance(ev, Unfold):
            cl = need(ev.step, ev.clause_id)
            lit = cl.literals[ev.literal]
            if not isinstance(lit, Positive):
                raise ReplayMismatch(ev.step, "a positive literal", type(lit).__name__)
            disjuncts = unfold_edge(lit.pattern, ev.edge)
            new_literals = (
                cl.literals[: ev.literal]
                + tuple(Positive(d) for d in disjuncts)
                + cl.literals[ev.literal + 1 :]
            )
            _expect_same(ev.step, ev.result, simplify(Clause("", new_literals)).literals)
            del active[ev.clause_id]
            active[ev.result.id] = ev.result
        elif isinstance(ev, Verdict):
            has_false = any(cl.is_false for cl in active.values())
            if (ev.verdict == UNSATISFIABLE) != has_false:
                raise ReplayMismatch(0, ev.verdict, f"FALSE present: {has_false}")
        else:  # pragma: no cover - defensive
            raise ReplayMismatch(0, "a known event", repr(ev))
    return Specification(tuple(active.values()))
