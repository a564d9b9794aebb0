/** Typed client for the xsat HTTP service. The UI computes no semantics of
 * its own: every verdict, mapping and combination comes from these calls. */

export type Axis = "child" | "descendant";

export interface PatternEdge {
  axis: Axis;
  node: PatternJson;
}

export interface PatternJson {
  label: string;
  children: PatternEdge[];
}

export interface LiteralIn {
  kind: "exists" | "not-exists" | "forall";
  pattern?: PatternJson | string;
  premise?: PatternJson | string;
  conclusion?: PatternJson | string;
  prefix?: [number, number][];
}

export interface ClauseIn {
  id: string;
  literals: LiteralIn[];
}

export interface LiteralOut {
  kind: string;
  text: string;
  pattern?: PatternJson;
  premise?: PatternJson;
  conclusion?: PatternJson;
  prefix?: [number, number][];
}

export interface ClauseOut {
  id: string;
  text: string;
  state?: string;
  false: boolean;
  literals: LiteralOut[];
}

export interface SpecOut {
  id: string;
  clauses: ClauseOut[];
  document: { text: string } | null;
}

export interface CheckReport {
  overall: boolean;
  per_clause: { clause: string; result: boolean }[];
}

export interface RunStatus {
  id: string;
  state: "pending" | "running" | "done" | "cancelled";
  verdict?: string;
  steps?: number;
  elapsedMs?: number;
  clauseCount?: number;
}

export interface HistoryEventOut {
  position: number;
  kind: string;
  step: number | null;
  line: string;
  rule?: string;
  premises?: [string, number][];
  result?: ClauseOut;
  clause?: string;
  subsumedBy?: string;
  verdict?: string;
  elapsedMs?: number;
}

export interface HistoryPage {
  total: number;
  from: number;
  events: HistoryEventOut[];
  text: string;
}

export interface MapsOut {
  maps: [number, number][][];
  count: number;
}

export interface JoinOut {
  results: PatternJson[];
  texts: string[];
}

export interface SharedJoinOut {
  groups: { mono: [number, number][]; results: PatternJson[]; texts: string[] }[];
  count: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly details: unknown = null,
  ) {
    super(message);
  }
}

export class Api {
  constructor(readonly base: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await fetch(this.base + path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await resp.text();
    const payload = text ? JSON.parse(text) : null;
    if (!resp.ok) {
      const message =
        payload && typeof payload.error === "string"
          ? payload.error
          : `${resp.status} ${resp.statusText}`;
      throw new ApiError(resp.status, message, payload ? payload.details : null);
    }
    return payload as T;
  }

  createSpecFromText(text: string): Promise<{ id: string }> {
    return this.request("POST", "/specs", { text });
  }

  createSpecFromClauses(clauses: ClauseIn[]): Promise<{ id: string }> {
    return this.request("POST", "/specs", { clauses });
  }

  getSpec(sid: string): Promise<SpecOut> {
    return this.request("GET", `/specs/${sid}`);
  }

  setClauseState(sid: string, cid: string, state: "active" | "deleted"): Promise<unknown> {
    return this.request("PATCH", `/specs/${sid}/clauses/${cid}`, { state });
  }

  setDocument(
    sid: string,
    content: string,
    format: "native" | "xml" = "native",
    options: { attrs?: boolean; text?: boolean } = {},
  ): Promise<{ text: string; nodes: number }> {
    return this.request("POST", `/specs/${sid}/document`, { format, content, ...options });
  }

  check(sid: string): Promise<CheckReport> {
    return this.request("POST", `/specs/${sid}/check`);
  }

  launchRun(
    sid: string,
    config: { version: number; maxSteps?: number; unfoldRounds?: number },
  ): Promise<{ id: string }> {
    return this.request("POST", `/specs/${sid}/runs`, config);
  }

  runStatus(rid: string): Promise<RunStatus> {
    return this.request("GET", `/runs/${rid}`);
  }

  history(rid: string, from = 1, count = 100): Promise<HistoryPage> {
    return this.request("GET", `/runs/${rid}/history?from=${from}&count=${count}`);
  }

  exportHistory(rid: string): Promise<{ text: string }> {
    return this.request("GET", `/runs/${rid}/export`);
  }

  clausesAt(rid: string, at?: number): Promise<{ clauses: ClauseOut[] }> {
    const q = at === undefined ? "" : `?at=${at}`;
    return this.request("GET", `/runs/${rid}/clauses${q}`);
  }

  clauseById(rid: string, cid: string): Promise<ClauseOut> {
    return this.request("GET", `/runs/${rid}/clauses/${cid}`);
  }

  constraintById(rid: string, ctid: string): Promise<LiteralOut & { id: string }> {
    return this.request("GET", `/runs/${rid}/constraints/${ctid}`);
  }

  cancelRun(rid: string): Promise<unknown> {
    return this.request("DELETE", `/runs/${rid}`);
  }

  monomorphisms(source: PatternJson | string, target: PatternJson | string): Promise<MapsOut> {
    return this.request("POST", "/tools/monomorphisms", { source, target });
  }

  prefixes(source: PatternJson | string, target: PatternJson | string): Promise<MapsOut> {
    return this.request("POST", "/tools/prefixes", { source, target });
  }

  join(p1: PatternJson | string, p2: PatternJson | string): Promise<JoinOut> {
    return this.request("POST", "/tools/join", { p1, p2 });
  }

  sharedJoin(
    p1: PatternJson | string,
    q: PatternJson | string,
    p2: PatternJson | string,
    prefix?: [number, number][],
    mono?: [number, number][],
  ): Promise<SharedJoinOut> {
    return this.request("POST", "/tools/shared-join", { p1, q, p2, prefix, mono });
  }

  unfold(p: PatternJson | string, edge?: number): Promise<JoinOut> {
    return this.request("POST", "/tools/unfold", { p, edge });
  }
}

/** Poll a run every `intervalMs` until it reaches a terminal state. */
export async function pollRun(api: Api, rid: string, intervalMs = 150): Promise<RunStatus> {
  for (;;) {
    const status = await api.runStatus(rid);
    if (status.state === "done" || status.state === "cancelled") {
      return status;
    }
    await new Promise((resolve) => setTimeout(resolve, intervalMs));
  }
}
