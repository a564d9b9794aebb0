/** Run screen: pick Version 1 or 2 and limits, launch the procedure on the
 * active session, poll until done, and browse the history: paged steps,
 * clause/constraint id search, per-step "see clauses", and text export. */

import type { HistoryEventOut } from "../api.js";
import { pollRun } from "../api.js";
import { AppState, button, el } from "../state.js";

const PAGE_SIZE = 100;

export class RunView {
  readonly element: HTMLElement;
  private state: AppState;
  private runId: string | null = null;
  private page = 1;

  private versionSelect: HTMLSelectElement;
  private maxStepsInput: HTMLInputElement;
  private unfoldRoundsInput: HTMLInputElement;
  private verdictDialog: HTMLElement;
  private statusLine: HTMLElement;
  private historyList: HTMLElement;
  private pageLabel: HTMLElement;
  private searchResult: HTMLElement;
  private stepClauses: HTMLElement;
  private exportArea: HTMLTextAreaElement;
  pollIntervalMs = 150;

  constructor(state: AppState) {
    this.state = state;
    this.element = el("div", "view run-view");

    const controls = el("div", "panel run-controls");
    controls.appendChild(el("h3", "", "Execute"));
    this.versionSelect = document.createElement("select");
    this.versionSelect.className = "version-select";
    for (const v of ["1", "2"]) {
      const o = document.createElement("option");
      o.value = v;
      o.textContent = `Version ${v}`;
      this.versionSelect.appendChild(o);
    }
    controls.appendChild(this.versionSelect);

    this.maxStepsInput = document.createElement("input");
    this.maxStepsInput.className = "max-steps";
    this.maxStepsInput.value = "10000";
    this.maxStepsInput.size = 7;
    controls.appendChild(el("span", "", "max steps"));
    controls.appendChild(this.maxStepsInput);

    this.unfoldRoundsInput = document.createElement("input");
    this.unfoldRoundsInput.className = "unfold-rounds";
    this.unfoldRoundsInput.value = "3";
    this.unfoldRoundsInput.size = 3;
    controls.appendChild(el("span", "", "unfold rounds"));
    controls.appendChild(this.unfoldRoundsInput);

    controls.appendChild(button("Run", "launch-run", () => void this.launch()));
    this.statusLine = el("div", "status-line");
    controls.appendChild(this.statusLine);
    this.verdictDialog = el("div", "verdict-dialog");
    controls.appendChild(this.verdictDialog);
    this.element.appendChild(controls);

    const historyPanel = el("div", "panel history-panel");
    historyPanel.appendChild(el("h3", "", "History"));

    const pager = el("div", "pager");
    pager.appendChild(button("◀ prev", "history-prev", () => void this.showPage(this.page - 1)));
    this.pageLabel = el("span", "page-label", "");
    pager.appendChild(this.pageLabel);
    pager.appendChild(button("next ▶", "history-next", () => void this.showPage(this.page + 1)));
    pager.appendChild(button("Export text", "export-history", () => void this.exportText()));
    historyPanel.appendChild(pager);

    const search = el("div", "history-search");
    const clauseInput = document.createElement("input");
    clauseInput.className = "clause-search";
    clauseInput.placeholder = "clause id, e.g. c4";
    search.appendChild(clauseInput);
    search.appendChild(
      button("Find clause", "find-clause", () => void this.findClause(clauseInput.value)),
    );
    const ctInput = document.createElement("input");
    ctInput.className = "constraint-search";
    ctInput.placeholder = "constraint id, e.g. ct1";
    search.appendChild(ctInput);
    search.appendChild(
      button("Find constraint", "find-constraint", () => void this.findConstraint(ctInput.value)),
    );
    this.searchResult = el("div", "search-result");
    search.appendChild(this.searchResult);
    historyPanel.appendChild(search);

    this.historyList = el("div", "history-list");
    historyPanel.appendChild(this.historyList);
    this.stepClauses = el("div", "step-clauses");
    historyPanel.appendChild(this.stepClauses);
    this.exportArea = document.createElement("textarea");
    this.exportArea.className = "export-area";
    this.exportArea.rows = 8;
    this.exportArea.style.display = "none";
    historyPanel.appendChild(this.exportArea);
    this.element.appendChild(historyPanel);
  }

  private async launch(): Promise<void> {
    if (!this.state.sessionId) {
      this.status("save a specification first");
      return;
    }
    this.verdictDialog.textContent = "";
    this.status("running…");
    try {
      const { id } = await this.state.api.launchRun(this.state.sessionId, {
        version: Number(this.versionSelect.value),
        maxSteps: Number(this.maxStepsInput.value) || 10000,
        unfoldRounds: Number(this.unfoldRoundsInput.value) || 3,
      });
      this.runId = id;
      const status = await pollRun(this.state.api, id, this.pollIntervalMs);
      this.verdictDialog.textContent = `${status.verdict} — ${status.elapsedMs} ms, ${status.clauseCount} clauses`;
      this.verdictDialog.className =
        "verdict-dialog " + (status.verdict === "UNSAT" ? "unsat" : "open");
      this.status(`run ${id} finished`);
      await this.showPage(1);
    } catch (err) {
      this.status(`error: ${(err as Error).message}`);
    }
  }

  private async showPage(page: number): Promise<void> {
    if (!this.runId || page < 1) {
      return;
    }
    const from = (page - 1) * PAGE_SIZE + 1;
    const out = await this.state.api.history(this.runId, from, PAGE_SIZE);
    if (!out.events.length && page > 1) {
      return;
    }
    this.page = page;
    const pages = Math.max(1, Math.ceil(out.total / PAGE_SIZE));
    this.pageLabel.textContent = `page ${page} / ${pages} (${out.total} events)`;
    this.historyList.textContent = "";
    for (const ev of out.events) {
      this.historyList.appendChild(this.renderEvent(ev));
    }
  }

  private renderEvent(ev: HistoryEventOut): HTMLElement {
    const row = el("div", `history-row kind-${ev.kind}`);
    row.appendChild(el("code", "history-line", ev.line));
    if (ev.kind !== "verdict") {
      row.appendChild(
        button("see clauses", "see-clauses", () => void this.seeClauses(ev.position)),
      );
    }
    return row;
  }

  private async seeClauses(position: number): Promise<void> {
    if (!this.runId) {
      return;
    }
    const out = await this.state.api.clausesAt(this.runId, position);
    this.stepClauses.textContent = "";
    this.stepClauses.appendChild(el("h4", "", `Clauses after step ${position}`));
    for (const clause of out.clauses) {
      this.stepClauses.appendChild(
        el("div", "step-clause", `${clause.id} : ${clause.text}`),
      );
    }
  }

  private async findClause(cid: string): Promise<void> {
    if (!this.runId || !cid) {
      return;
    }
    try {
      const clause = await this.state.api.clauseById(this.runId, cid.trim());
      this.searchResult.textContent = `${clause.id} : ${clause.text}`;
    } catch (err) {
      this.searchResult.textContent = `not found: ${(err as Error).message}`;
    }
  }

  private async findConstraint(ctid: string): Promise<void> {
    if (!this.runId || !ctid) {
      return;
    }
    try {
      const ct = await this.state.api.constraintById(this.runId, ctid.trim());
      this.searchResult.textContent = `${ct.id} : ${ct.text}`;
    } catch (err) {
      this.searchResult.textContent = `not found: ${(err as Error).message}`;
    }
  }

  private async exportText(): Promise<void> {
    if (!this.runId) {
      return;
    }
    const out = await this.state.api.exportHistory(this.runId);
    this.exportArea.value = out.text;
    this.exportArea.style.display = "";
  }

  private status(text: string): void {
    this.statusLine.textContent = text;
  }
}
