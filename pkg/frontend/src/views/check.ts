/** Document checking: enter or upload a document for the active session,
 * see the overall verdict and per-clause results, and probe failures by
 * temporarily deleting clauses (restore brings the text back verbatim);
 * every toggle re-checks live. */

import type { SpecOut } from "../api.js";
import { AppState, button, el } from "../state.js";

export class CheckView {
  readonly element: HTMLElement;
  private state: AppState;
  private clauseList: HTMLElement;
  private documentInput: HTMLTextAreaElement;
  private formatSelect: HTMLSelectElement;
  private attrsBox: HTMLInputElement;
  private textBox: HTMLInputElement;
  private overallLine: HTMLElement;
  private statusLine: HTMLElement;
  private verdicts: Map<string, boolean> = new Map();

  constructor(state: AppState) {
    this.state = state;
    this.element = el("div", "view check-view");

    const docPanel = el("div", "panel document-panel");
    docPanel.appendChild(el("h3", "", "Document"));
    this.documentInput = document.createElement("textarea");
    this.documentInput.className = "document-input";
    this.documentInput.rows = 4;
    this.documentInput.placeholder = "/a[b[g]][e[f[e][d]]]  or XML with format=xml";
    docPanel.appendChild(this.documentInput);

    const optionsRow = el("div", "document-options");
    this.formatSelect = document.createElement("select");
    this.formatSelect.className = "format-select";
    for (const v of ["native", "xml"]) {
      const o = document.createElement("option");
      o.value = v;
      o.textContent = v;
      this.formatSelect.appendChild(o);
    }
    optionsRow.appendChild(this.formatSelect);
    this.attrsBox = document.createElement("input");
    this.attrsBox.type = "checkbox";
    this.attrsBox.className = "xml-attrs";
    optionsRow.appendChild(this.attrsBox);
    optionsRow.appendChild(el("span", "", "attrs"));
    this.textBox = document.createElement("input");
    this.textBox.type = "checkbox";
    this.textBox.className = "xml-text";
    optionsRow.appendChild(this.textBox);
    optionsRow.appendChild(el("span", "", "text"));
    docPanel.appendChild(optionsRow);

    docPanel.appendChild(
      button("Set document", "set-document", () => void this.setDocument()),
    );
    docPanel.appendChild(button("Check", "run-check", () => void this.check()));
    this.overallLine = el("div", "overall-line", "—");
    docPanel.appendChild(this.overallLine);
    this.statusLine = el("div", "status-line");
    docPanel.appendChild(this.statusLine);
    this.element.appendChild(docPanel);

    const clausePanel = el("div", "panel check-clauses");
    clausePanel.appendChild(el("h3", "", "Clauses"));
    this.clauseList = el("div", "check-clause-list");
    clausePanel.appendChild(this.clauseList);
    this.element.appendChild(clausePanel);

    state.onSessionChange(() => void this.reload());
  }

  async reload(): Promise<void> {
    if (!this.state.sessionId) {
      return;
    }
    try {
      const spec = await this.state.api.getSpec(this.state.sessionId);
      this.renderClauses(spec);
    } catch (err) {
      this.status(`error: ${(err as Error).message}`);
    }
  }

  private async setDocument(): Promise<void> {
    if (!this.state.sessionId) {
      this.status("save a specification first");
      return;
    }
    try {
      const out = await this.state.api.setDocument(
        this.state.sessionId,
        this.documentInput.value,
        this.formatSelect.value as "native" | "xml",
        { attrs: this.attrsBox.checked, text: this.textBox.checked },
      );
      this.status(`document set (${out.nodes} nodes): ${out.text}`);
    } catch (err) {
      this.status(`error: ${(err as Error).message}`);
    }
  }

  async check(): Promise<void> {
    if (!this.state.sessionId) {
      this.status("save a specification first");
      return;
    }
    try {
      const report = await this.state.api.check(this.state.sessionId);
      this.verdicts = new Map(report.per_clause.map((pc) => [pc.clause, pc.result]));
      this.overallLine.textContent = report.overall ? "TRUE" : "FALSE";
      this.overallLine.className = "overall-line " + (report.overall ? "ok" : "bad");
      await this.reload();
    } catch (err) {
      this.status(`error: ${(err as Error).message}`);
    }
  }

  private renderClauses(spec: SpecOut): void {
    this.clauseList.textContent = "";
    for (const clause of spec.clauses) {
      const row = el("div", `check-clause-row state-${clause.state}`);
      row.dataset.clause = clause.id;
      row.appendChild(el("span", "clause-id", clause.id));
      row.appendChild(el("span", "clause-text", clause.text));
      const verdict = this.verdicts.get(clause.id);
      const verdictText =
        clause.state === "deleted" ? "deleted" : verdict === undefined ? "" : verdict ? "TRUE" : "FALSE";
      row.appendChild(el("span", "clause-verdict", verdictText));
      const toggle = clause.state === "deleted" ? "Restore" : "Delete";
      row.appendChild(
        button(toggle, toggle.toLowerCase() + "-clause", () => void this.toggle(clause.id, clause.state!)),
      );
      this.clauseList.appendChild(row);
    }
  }

  private async toggle(cid: string, current: string): Promise<void> {
    if (!this.state.sessionId) {
      return;
    }
    const next = current === "deleted" ? "active" : "deleted";
    await this.state.api.setClauseState(this.state.sessionId, cid, next);
    await this.check(); // re-check live after every toggle
  }

  private status(text: string): void {
    this.statusLine.textContent = text;
  }
}
