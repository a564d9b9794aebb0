"""HTTP API driving the web workbench: spec sessions, document checking,
asynchronous runs with replayable histories, and the visual tool operations.

Sessions live in memory; pass ``state_dir`` to write them through to a
directory of `.spec`/`.tree` files plus a JSON index.  Run execution happens
on worker threads; clients poll run state and may cancel.
"""

from __future__ import annotations

import json
import re
import threading
from pathlib import Path
from typing import Literal, Optional, Union

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .algebra import descendant_edges, join, shared_join, unfold_edge
from .logic import (
    Clause,
    Conditional,
    Constraint,
    Negative,
    Positive,
    Specification,
    check_document,
    constraint_equal,
)
from .morphisms import (
    NodeMap,
    enumerate_monomorphisms,
    enumerate_prefix_functions,
    has_extension,
    is_monomorphism,
    is_prefix_function,
)
from .patterns import Axis, Document, Pattern, PatternError
from .refutation import (
    Delete,
    HistoryEvent,
    Infer,
    RunConfig,
    RunResult,
    Simplify,
    Unfold,
    Verdict,
    replay,
    run,
)
from .textio import (
    ParseError,
    SpecParseError,
    format_history,
    ingest_xml,
    parse_document_native,
    parse_pattern,
    parse_spec,
    print_clause_body,
    print_constraint,
    print_pattern,
)


class ApiError(Exception):
    def __init__(self, status: int, message: str, details: Optional[list] = None):
        super().__init__(message)
        self.status = status
        self.message = message
        self.details = details or []


# -- pattern JSON schema ---------------------------------------------------------

class PatternEdge(BaseModel):
    axis: Literal["child", "descendant"]
    node: "PatternNode"


class PatternNode(BaseModel):
    label: str
    children: list[PatternEdge] = Field(default_factory=list)


PatternEdge.model_rebuild()

PatternIn = Union[PatternNode, str]


def pattern_from_json(node: PatternNode) -> Pattern:
    """Node ids correspond to the preorder of this JSON structure."""
    labels: list[str] = []
    parents: list[Optional[int]] = []
    axes: list[Optional[Axis]] = []

    def walk(n: PatternNode, parent: Optional[int], axis: Optional[Axis]) -> None:
        me = len(labels)
        labels.append(n.label)
        parents.append(parent)
        axes.append(axis)
        for edge in n.children:
            walk(edge.node, me, Axis.CHILD if edge.axis == "child" else Axis.DESCENDANT)

    walk(node, None, None)
    try:
        return Pattern(labels, parents, axes)
    except PatternError as e:
        raise ApiError(422, f"invalid pattern: {e}") from e


def pattern_to_json(p: Pattern, n: int = 0) -> dict:
    return {
        "label": p.labels[n],
        "children": [
            {
                "axis": "child" if p.axes[c] is Axis.CHILD else "descendant",
                "node": pattern_to_json(p, c),
            }
            for c in p.children(n)
        ],
    }


def _pattern_in(value: PatternIn, what: str) -> Pattern:
    try:
        if isinstance(value, str):
            return parse_pattern(value)
        return pattern_from_json(value)
    except ParseError as e:
        raise ApiError(422, f"cannot parse {what}: {e}") from e


def _mapping_pairs(pairs: list[tuple[int, int]], source: Pattern, target: Pattern) -> NodeMap:
    mapping: list[Optional[int]] = [None] * source.size
    for i, j in pairs:
        if not 0 <= i < source.size or not 0 <= j < target.size:
            raise ApiError(422, f"mapping pair {i}->{j} out of range")
        mapping[i] = j
    if any(m is None for m in mapping):
        raise ApiError(422, "mapping must cover every source node")
    return NodeMap(source, target, tuple(mapping))  # type: ignore[arg-type]


# -- request bodies ---------------------------------------------------------------

class LiteralIn(BaseModel):
    kind: Literal["exists", "not-exists", "forall"]
    pattern: Optional[PatternIn] = None
    premise: Optional[PatternIn] = None
    conclusion: Optional[PatternIn] = None
    prefix: Optional[list[tuple[int, int]]] = None


class ClauseIn(BaseModel):
    id: str
    literals: list[LiteralIn]


class CreateSpecBody(BaseModel):
    text: Optional[str] = None
    clauses: Optional[list[ClauseIn]] = None


class DocumentBody(BaseModel):
    format: Literal["native", "xml"] = "native"
    content: str
    attrs: bool = False
    text: bool = False


class ClauseStateBody(BaseModel):
    state: Literal["active", "deleted"]


class RunBody(BaseModel):
    version: int = 1
    maxSteps: int = 10000
    maxClauses: int = 2000
    maxPatternNodes: int = 64
    unfoldRounds: int = 3
    timeBudgetMs: Optional[int] = None


class MapToolBody(BaseModel):
    source: PatternIn
    target: PatternIn


class JoinBody(BaseModel):
    p1: PatternIn
    p2: PatternIn


class SharedJoinBody(BaseModel):
    p1: PatternIn
    q: PatternIn
    p2: PatternIn
    prefix: Optional[list[tuple[int, int]]] = None
    mono: Optional[list[tuple[int, int]]] = None


class UnfoldBody(BaseModel):
    p: PatternIn
    edge: Optional[int] = None


class RunStatus(BaseModel):
    id: str
    state: Literal["pending", "running", "done", "cancelled"]
    verdict: Optional[str] = None
    steps: Optional[int] = None
    elapsedMs: Optional[int] = None
    clauseCount: Optional[int] = None
    cancelled: Optional[bool] = None


# -- store ------------------------------------------------------------------------

class _SessionClause:
    def __init__(self, clause: Clause, text: str, state: str = "active"):
        self.clause = clause
        self.text = text  # verbatim, restored byte-identically
        self.state = state


class _Session:
    def __init__(self, sid: str, clauses: list[_SessionClause]):
        self.id = sid
        self.clauses = clauses
        self.document: Optional[Document] = None
        self.document_text: Optional[str] = None
        self.lock = threading.Lock()

    def active_spec(self) -> Specification:
        return Specification(tuple(sc.clause for sc in self.clauses if sc.state == "active"))


class _Run:
    def __init__(self, rid: str, session_id: str, spec: Specification, cfg: RunConfig):
        self.id = rid
        self.session_id = session_id
        self.input_spec = spec
        self.cfg = cfg
        self.state = "pending"
        self.result: Optional[RunResult] = None
        self.cancel = threading.Event()
        self.thread: Optional[threading.Thread] = None
        self._constraint_index: Optional[list[tuple[str, Constraint]]] = None
        self._clause_index: Optional[dict[str, Clause]] = None

    def status(self) -> RunStatus:
        out = RunStatus(id=self.id, state=self.state)  # type: ignore[arg-type]
        if self.result is not None and self.state in ("done", "cancelled"):
            out.verdict = self.result.verdict
            out.steps = self.result.history[-1].steps if self.result.history else 0
            out.elapsedMs = self.result.elapsed_ms
            out.clauseCount = len(self.result.final_clauses.clauses)
            out.cancelled = self.result.cancelled
        return out

    def indexes(self) -> tuple[dict[str, Clause], list[tuple[str, Constraint]]]:
        """Every clause the run ever saw (by id) and the distinct constraints
        in first-appearance order (searchable as ct1, ct2, ...)."""
        if self._clause_index is None:
            clauses: dict[str, Clause] = {}
            for cl in self.input_spec.clauses:
                clauses[cl.id] = cl
            assert self.result is not None
            for ev in self.result.history:
                if isinstance(ev, (Infer, Simplify, Unfold)):
                    clauses[ev.result.id] = ev.result
            constraints: list[tuple[str, Constraint]] = []
            for cl in clauses.values():
                for lit in cl.literals:
                    if not any(constraint_equal(lit, seen) for _, seen in constraints):
                        constraints.append((f"ct{len(constraints) + 1}", lit))
            self._clause_index = clauses
            self._constraint_index = constraints
        return self._clause_index, self._constraint_index  # type: ignore[return-value]


class _Store:
    def __init__(self, state_dir: Optional[str]):
        self.lock = threading.RLock()
        self.sessions: dict[str, _Session] = {}
        self.runs: dict[str, _Run] = {}
        self.next_session = 1
        self.next_run = 1
        self.state_dir = Path(state_dir) if state_dir else None
        if self.state_dir:
            self.state_dir.mkdir(parents=True, exist_ok=True)
            self._load()

    def new_session(self, clauses: list[_SessionClause]) -> _Session:
        with self.lock:
            sid = f"s{self.next_session}"
            self.next_session += 1
            session = _Session(sid, clauses)
            self.sessions[sid] = session
            return session

    def session(self, sid: str) -> _Session:
        with self.lock:
            s = self.sessions.get(sid)
        if s is None:
            raise ApiError(404, f"unknown session {sid}")
        return s

    def new_run(self, session: _Session, cfg: RunConfig) -> _Run:
        with self.lock:
            rid = f"r{self.next_run}"
            self.next_run += 1
            handle = _Run(rid, session.id, session.active_spec(), cfg)
            self.runs[rid] = handle
            return handle

    def run_handle(self, rid: str) -> _Run:
        with self.lock:
            r = self.runs.get(rid)
        if r is None:
            raise ApiError(404, f"unknown run {rid}")
        return r

    # write-through persistence -------------------------------------------------
    def persist(self, session: _Session) -> None:
        if not self.state_dir:
            return
        spec_text = "".join(f"clause {sc.clause.id} : {sc.text}\n" for sc in session.clauses)
        (self.state_dir / f"{session.id}.spec").write_text(spec_text, encoding="utf-8")
        doc_path = self.state_dir / f"{session.id}.tree"
        if session.document_text is not None:
            doc_path.write_text(session.document_text, encoding="utf-8")
        elif doc_path.exists():
            doc_path.unlink()
        index_path = self.state_dir / "index.json"
        index = {}
        if index_path.exists():
            index = json.loads(index_path.read_text(encoding="utf-8"))
        index[session.id] = {
            "states": {sc.clause.id: sc.state for sc in session.clauses},
            "document": session.document_text is not None,
        }
        index_path.write_text(json.dumps(index, indent=2, sort_keys=True), encoding="utf-8")

    def _load(self) -> None:
        index_path = self.state_dir / "index.json"  # type: ignore[operator]
        if not index_path.exists():
            return
        index = json.loads(index_path.read_text(encoding="utf-8"))
        top = 0
        for sid, meta in sorted(index.items()):
            spec_path = self.state_dir / f"{sid}.spec"  # type: ignore[operator]
            if not spec_path.exists():
                continue
            spec = parse_spec(spec_path.read_text(encoding="utf-8"))
            clauses = [
                _SessionClause(cl, print_clause_body(cl), meta.get("states", {}).get(cl.id, "active"))
                for cl in spec.clauses
            ]
            session = _Session(sid, clauses)
            doc_path = self.state_dir / f"{sid}.tree"  # type: ignore[operator]
            if meta.get("document") and doc_path.exists():
                text = doc_path.read_text(encoding="utf-8")
                session.document = parse_document_native(text)
                session.document_text = text
            self.sessions[sid] = session
            m = re.fullmatch(r"s(\d+)", sid)
            if m:
                top = max(top, int(m.group(1)))
        self.next_session = top + 1


# -- the application -------------------------------------------------------------

def _literal_from_body(lit: LiteralIn) -> Constraint:
    if lit.kind == "exists":
        if lit.pattern is None:
            raise ApiError(400, "exists literal needs a pattern")
        return Positive(_pattern_in(lit.pattern, "pattern"))
    if lit.kind == "not-exists":
        if lit.pattern is None:
            raise ApiError(400, "not-exists literal needs a pattern")
        return Negative(_pattern_in(lit.pattern, "pattern"))
    if lit.premise is None or lit.conclusion is None:
        raise ApiError(400, "forall literal needs premise and conclusion")
    premise = _pattern_in(lit.premise, "premise")
    conclusion = _pattern_in(lit.conclusion, "conclusion")
    if lit.prefix is not None:
        c = _mapping_pairs(lit.prefix, premise, conclusion)
        if not is_prefix_function(c):
            raise ApiError(422, "prefix mapping is not a prefix function")
    else:
        found = enumerate_prefix_functions(premise, conclusion)
        if len(found) != 1:
            raise ApiError(
                422,
                f"prefix function is ambiguous or missing ({len(found)} candidates)",
            )
        c = found[0]
    return Conditional(premise, conclusion, c.mapping)


def _literal_json(lit: Constraint) -> dict:
    if isinstance(lit, Positive):
        return {"kind": "exists", "pattern": pattern_to_json(lit.pattern),
                "text": print_constraint(lit)}
    if isinstance(lit, Negative):
        return {"kind": "not-exists", "pattern": pattern_to_json(lit.pattern),
                "text": print_constraint(lit)}
    assert isinstance(lit, Conditional)
    return {
        "kind": "forall",
        "premise": pattern_to_json(lit.premise),
        "conclusion": pattern_to_json(lit.conclusion),
        "prefix": [[i, j] for i, j in enumerate(lit.prefix_map)],
        "text": print_constraint(lit),
    }


def _clause_json(cl: Clause, state: Optional[str] = None) -> dict:
    out = {
        "id": cl.id,
        "text": print_clause_body(cl),
        "literals": [_literal_json(lit) for lit in cl.literals],
        "false": cl.is_false,
    }
    if state is not None:
        out["state"] = state
    return out


def _event_json(position: int, ev: HistoryEvent) -> dict:
    from .textio import format_history

    line = format_history([ev]).rstrip("\n")
    if isinstance(ev, Infer):
        return {
            "position": position, "kind": "infer", "step": ev.step, "rule": ev.rule,
            "premises": [[cid, idx] for cid, idx in ev.premises],
            "mono": None if ev.mono is None else [[i, j] for i, j in ev.mono.pairs()],
            "result": _clause_json(ev.result), "line": line,
        }
    if isinstance(ev, Delete):
        return {"position": position, "kind": "delete", "step": ev.step,
                "clause": ev.clause_id, "subsumedBy": ev.subsumed_by, "line": line}
    if isinstance(ev, Simplify):
        return {"position": position, "kind": "simplify", "step": ev.step,
                "before": ev.before_id, "result": _clause_json(ev.result), "line": line}
    if isinstance(ev, Unfold):
        return {"position": position, "kind": "unfold", "step": ev.step,
                "clause": ev.clause_id, "literal": ev.literal, "edge": ev.edge,
                "result": _clause_json(ev.result), "line": line}
    assert isinstance(ev, Verdict)
    return {"position": position, "kind": "verdict", "step": None,
            "verdict": ev.verdict, "steps": ev.steps, "elapsedMs": ev.elapsed_ms,
            "line": line}


def create_app(state_dir: Optional[str] = None, cors_origin: str = "*") -> FastAPI:
    app = FastAPI(title="xsat service", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[cors_origin] if cors_origin != "*" else ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = _Store(state_dir)
    app.state.store = store

    @app.exception_handler(ApiError)
    async def _api_error(_req: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"error": exc.message, "details": exc.details},
        )

    @app.exception_handler(RequestValidationError)
    async def _bad_body(_req: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": "malformed body",
                                                      "details": exc.errors()})

    # -- specs -------------------------------------------------------------------

    @app.post("/specs", status_code=201)
    def create_spec(body: CreateSpecBody):
        if (body.text is None) == (body.clauses is None):
            raise ApiError(400, "provide exactly one of text, clauses")
        if body.text is not None:
            try:
                spec = parse_spec(body.text)
            except SpecParseError as e:
                raise ApiError(422, "spec parse failed", [
                    {"message": err.message, "line": err.span.line,
                     "column": err.span.column} for err in e.errors
                ]) from e
        else:
            clauses = []
            seen = set()
            for cin in body.clauses or []:
                if cin.id in seen:
                    raise ApiError(422, f"duplicate clause id {cin.id}")
                seen.add(cin.id)
                clauses.append(Clause(cin.id, tuple(_literal_from_body(l) for l in cin.literals)))
            spec = Specification(tuple(clauses))
        session = store.new_session(
            [_SessionClause(cl, print_clause_body(cl)) for cl in spec.clauses]
        )
        store.persist(session)
        return {"id": session.id}

    @app.get("/specs/{sid}")
    def get_spec(sid: str):
        session = store.session(sid)
        with session.lock:
            return {
                "id": session.id,
                "clauses": [_clause_json(sc.clause, sc.state) for sc in session.clauses],
                "document": None
                if session.document is None
                else {"text": print_pattern(session.document.pattern)},
            }

    @app.patch("/specs/{sid}/clauses/{cid}")
    def set_clause_state(sid: str, cid: str, body: ClauseStateBody):
        session = store.session(sid)
        with session.lock:
            for sc in session.clauses:
                if sc.clause.id == cid:
                    sc.state = body.state
                    store.persist(session)
                    return {"id": cid, "state": sc.state, "text": sc.text}
        raise ApiError(404, f"unknown clause {cid}")

    @app.post("/specs/{sid}/document")
    def set_document(sid: str, body: DocumentBody):
        session = store.session(sid)
        try:
            if body.format == "xml":
                doc = ingest_xml(body.content, attrs=body.attrs, text=body.text)
            else:
                doc = parse_document_native(body.content)
        except ParseError as e:
            raise ApiError(422, f"cannot parse document: {e}") from e
        with session.lock:
            session.document = doc
            session.document_text = print_pattern(doc.pattern)
            store.persist(session)
            return {"text": session.document_text, "nodes": doc.size}

    @app.post("/specs/{sid}/check")
    def check(sid: str):
        session = store.session(sid)
        with session.lock:
            if session.document is None:
                raise ApiError(422, "session has no document")
            report = check_document(session.document, session.active_spec())
            return {
                "overall": report.overall,
                "per_clause": [{"clause": cid, "result": ok} for cid, ok in report.per_clause],
            }

    # -- runs --------------------------------------------------------------------

    @app.post("/specs/{sid}/runs", status_code=202)
    def launch_run(sid: str, body: RunBody):
        session = store.session(sid)
        try:
            cfg = RunConfig(
                version=body.version,
                max_steps=body.maxSteps,
                max_clauses=body.maxClauses,
                max_pattern_nodes=body.maxPatternNodes,
                unfold_rounds=body.unfoldRounds,
                time_budget_ms=body.timeBudgetMs,
            )
        except ValueError as e:
            raise ApiError(422, str(e)) from e
        with session.lock:
            handle = store.new_run(session, cfg)

        def work():
            handle.state = "running"
            result = run(handle.input_spec, handle.cfg, handle.cancel)
            handle.result = result
            handle.state = "cancelled" if result.cancelled else "done"

        handle.thread = threading.Thread(target=work, daemon=True)
        handle.thread.start()
        return {"id": handle.id}

    @app.get("/runs/{rid}", response_model=RunStatus, response_model_exclude_none=True)
    def run_status(rid: str):
        return store.run_handle(rid).status()

    def _finished(rid: str) -> _Run:
        handle = store.run_handle(rid)
        if handle.result is None:
            raise ApiError(409, f"run {rid} has not finished")
        return handle

    @app.get("/runs/{rid}/history")
    def run_history(rid: str, from_: int = Query(1, alias="from", ge=1),
                    count: int = Query(100, ge=0)):
        handle = _finished(rid)
        events = handle.result.history  # type: ignore[union-attr]
        page = events[from_ - 1 : from_ - 1 + count]
        return {
            "total": len(events),
            "from": from_,
            "events": [_event_json(from_ + k, ev) for k, ev in enumerate(page)],
            "text": format_history(page) if page else "",
        }

    @app.get("/runs/{rid}/export")
    def run_export(rid: str):
        handle = _finished(rid)
        return JSONResponse(content={"text": format_history(handle.result.history)})  # type: ignore[union-attr]

    @app.get("/runs/{rid}/clauses")
    def run_clauses_at(rid: str, at: Optional[int] = Query(None, ge=0)):
        handle = _finished(rid)
        result = handle.result
        assert result is not None
        if at is None:
            live = result.final_clauses
        else:
            live = replay(handle.input_spec, result.history[:at])
        return {"clauses": [_clause_json(cl) for cl in live.clauses]}

    @app.get("/runs/{rid}/clauses/{cid}")
    def run_clause(rid: str, cid: str):
        handle = _finished(rid)
        clauses, _ = handle.indexes()
        if cid not in clauses:
            raise ApiError(404, f"unknown clause {cid}")
        return _clause_json(clauses[cid])

    @app.get("/runs/{rid}/constraints/{ctid}")
    def run_constraint(rid: str, ctid: str):
        handle = _finished(rid)
        _, constraints = handle.indexes()
        for key, lit in constraints:
            if key == ctid:
                return {"id": key, **_literal_json(lit)}
        raise ApiError(404, f"unknown constraint {ctid}")

    @app.delete("/runs/{rid}")
    def cancel_run(rid: str):
        handle = store.run_handle(rid)
        if handle.state in ("done", "cancelled"):
            raise ApiError(409, f"run {rid} is already {handle.state}")
        handle.cancel.set()
        return {"id": rid, "state": "cancelling"}

    # -- tools ---------------------------------------------------------------------

    @app.post("/tools/monomorphisms")
    def tool_monos(body: MapToolBody):
        source = _pattern_in(body.source, "source")
        target = _pattern_in(body.target, "target")
        maps = enumerate_monomorphisms(source, target)
        return {"maps": [[[i, j] for i, j in m.pairs()] for m in maps], "count": len(maps)}

    @app.post("/tools/prefixes")
    def tool_prefixes(body: MapToolBody):
        source = _pattern_in(body.source, "source")
        target = _pattern_in(body.target, "target")
        maps = enumerate_prefix_functions(source, target)
        return {"maps": [[[i, j] for i, j in m.pairs()] for m in maps], "count": len(maps)}

    @app.post("/tools/join")
    def tool_join(body: JoinBody):
        p1 = _pattern_in(body.p1, "p1")
        p2 = _pattern_in(body.p2, "p2")
        results = join(p1, p2)
        return {
            "results": [pattern_to_json(m.pattern) for m in results],
            "texts": [print_pattern(m.pattern) for m in results],
        }

    @app.post("/tools/shared-join")
    def tool_shared_join(body: SharedJoinBody):
        p1 = _pattern_in(body.p1, "p1")
        q = _pattern_in(body.q, "q")
        p2 = _pattern_in(body.p2, "p2")
        if body.prefix is not None:
            c = _mapping_pairs(body.prefix, p2, q)
            if not is_prefix_function(c):
                raise ApiError(422, "prefix mapping is not a prefix function")
        else:
            found = enumerate_prefix_functions(p2, q)
            if len(found) != 1:
                raise ApiError(422, f"prefix function is ambiguous or missing "
                                    f"({len(found)} candidates)")
            c = found[0]
        if body.mono is not None:
            m = _mapping_pairs(body.mono, p2, p1)
            if not is_monomorphism(m):
                raise ApiError(422, "mono mapping is not a monomorphism")
            monos = [m]
        else:
            monos = [m for m in enumerate_monomorphisms(p2, p1) if not has_extension(c, m)]
        groups = []
        for m in monos:
            results = shared_join(p1, q, c, m)
            groups.append({
                "mono": [[i, j] for i, j in m.pairs()],
                "results": [pattern_to_json(r.pattern) for r in results],
                "texts": [print_pattern(r.pattern) for r in results],
            })
        return {"groups": groups, "count": len(groups)}

    @app.post("/tools/unfold")
    def tool_unfold(body: UnfoldBody):
        p = _pattern_in(body.p, "p")
        edge = body.edge
        if edge is None:
            edges = descendant_edges(p)
            if not edges:
                raise ApiError(422, "pattern has no descendant edge")
            edge = edges[0]
        try:
            parts = unfold_edge(p, edge)
        except ValueError as e:
            raise ApiError(422, str(e)) from e
        return {
            "results": [pattern_to_json(q) for q in parts],
            "texts": [print_pattern(q) for q in parts],
        }

    return app
