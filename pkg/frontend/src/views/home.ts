/** Home screen: the clauses panel, the constraints panel and the pattern
 * editor. Clauses are drafted locally and saved to the service as a session;
 * conditional constraints pick their prefix function among the candidates
 * the service computes. */

import type { ClauseIn, LiteralIn, PatternJson } from "../api.js";
import { SolutionBrowser } from "../browser.js";
import { PatternEditor } from "../editor.js";
import { patternText } from "../model.js";
import { AppState, button, el } from "../state.js";
import { clearSvg, ensureArrowMarker, renderMapping, renderTree } from "../svgtree.js";

interface DraftLiteral {
  spec: LiteralIn;
  text: string;
}

interface DraftClause {
  id: string;
  literals: DraftLiteral[];
}

export class HomeView {
  readonly element: HTMLElement;
  private state: AppState;
  private clauses: DraftClause[] = [];
  private selected = -1;
  private nextClause = 1;

  private clausePanel: HTMLElement;
  private literalPanel: HTMLElement;
  private statusLine: HTMLElement;
  private kindSelect: HTMLSelectElement;
  private mainEditor: PatternEditor;
  private conclusionEditor: PatternEditor;
  private prefixBrowser: SolutionBrowser<[number, number][]>;
  private prefixSvg: SVGSVGElement;
  private prefixCandidates: [number, number][][] = [];

  constructor(state: AppState) {
    this.state = state;
    this.element = el("div", "view home-view");

    const columns = el("div", "columns");
    this.element.appendChild(columns);

    // clauses panel
    const clauseColumn = el("div", "panel clause-panel");
    clauseColumn.appendChild(el("h3", "", "Clauses"));
    this.clausePanel = el("div", "clause-list");
    clauseColumn.appendChild(this.clausePanel);
    clauseColumn.appendChild(
      button("New clause", "new-clause", () => {
        this.clauses.push({ id: `c${this.nextClause++}`, literals: [] });
        this.selected = this.clauses.length - 1;
        this.redraw();
      }),
    );
    columns.appendChild(clauseColumn);

    // constraints panel
    const literalColumn = el("div", "panel literal-panel");
    literalColumn.appendChild(el("h3", "", "Constraints"));
    this.literalPanel = el("div", "literal-list");
    literalColumn.appendChild(this.literalPanel);
    columns.appendChild(literalColumn);

    // editor panel
    const editorColumn = el("div", "panel editor-panel");
    editorColumn.appendChild(el("h3", "", "Pattern editor"));
    this.kindSelect = document.createElement("select");
    this.kindSelect.className = "kind-select";
    for (const [value, label] of [
      ["exists", "∃  exists"],
      ["not-exists", "¬∃  not exists"],
      ["forall", "∀  forall (conditional)"],
    ]) {
      const option = document.createElement("option");
      option.value = value;
      option.textContent = label;
      this.kindSelect.appendChild(option);
    }
    this.kindSelect.addEventListener("change", () => this.updateKind());
    editorColumn.appendChild(this.kindSelect);

    this.mainEditor = new PatternEditor("pattern (premise for ∀)");
    this.conclusionEditor = new PatternEditor("conclusion");
    editorColumn.appendChild(this.mainEditor.element);
    editorColumn.appendChild(this.conclusionEditor.element);

    const prefixRow = el("div", "prefix-row");
    prefixRow.appendChild(
      button("Generate prefix", "generate-prefix", () => void this.generatePrefix()),
    );
    this.prefixBrowser = new SolutionBrowser<[number, number][]>(() => this.drawPrefix());
    prefixRow.appendChild(this.prefixBrowser.element);
    editorColumn.appendChild(prefixRow);
    this.prefixSvg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    this.prefixSvg.setAttribute("class", "prefix-canvas");
    editorColumn.appendChild(this.prefixSvg);

    editorColumn.appendChild(
      button("Add constraint to clause", "add-constraint", () => void this.addConstraint()),
    );
    columns.appendChild(editorColumn);

    const footer = el("div", "footer");
    footer.appendChild(
      button("Save specification", "save-spec", () => void this.save()),
    );
    this.statusLine = el("div", "status-line");
    footer.appendChild(this.statusLine);
    this.element.appendChild(footer);

    this.updateKind();
    this.redraw();
  }

  private updateKind(): void {
    const conditional = this.kindSelect.value === "forall";
    this.conclusionEditor.element.style.display = conditional ? "" : "none";
    this.prefixSvg.style.display = conditional ? "" : "none";
    (this.prefixBrowser.element.parentElement as HTMLElement).style.display = conditional
      ? ""
      : "none";
  }

  private async generatePrefix(): Promise<void> {
    const premise = this.mainEditor.tree.toJson();
    const conclusion = this.conclusionEditor.tree.toJson();
    try {
      const out = await this.state.api.prefixes(premise, conclusion);
      this.prefixCandidates = out.maps;
      this.prefixBrowser.setItems(out.maps);
      this.status(`${out.count} prefix function(s) found`);
      if (!out.count) {
        clearSvg(this.prefixSvg);
      }
    } catch (err) {
      this.status(`error: ${(err as Error).message}`);
    }
  }

  private drawPrefix(): void {
    const mapping = this.prefixBrowser.current;
    if (!mapping) {
      return;
    }
    clearSvg(this.prefixSvg);
    ensureArrowMarker(this.prefixSvg);
    const left = renderTree(this.prefixSvg, this.mainEditor.tree.toJson(), { offsetX: 0 });
    const right = renderTree(this.prefixSvg, this.conclusionEditor.tree.toJson(), {
      offsetX: 260,
    });
    renderMapping(this.prefixSvg, left, right, mapping);
  }

  private async addConstraint(): Promise<void> {
    if (this.selected < 0) {
      this.status("create a clause first");
      return;
    }
    const kind = this.kindSelect.value as LiteralIn["kind"];
    let literal: LiteralIn;
    if (kind === "forall") {
      const premise = this.mainEditor.tree.toJson();
      const conclusion = this.conclusionEditor.tree.toJson();
      let prefix = this.prefixBrowser.current ?? undefined;
      if (!prefix) {
        const out = await this.state.api.prefixes(premise, conclusion);
        if (out.count !== 1) {
          this.status(
            `pick a prefix function first (${out.count} candidates; use Generate prefix)`,
          );
          return;
        }
        prefix = out.maps[0];
      }
      literal = { kind, premise, conclusion, prefix };
    } else {
      literal = { kind, pattern: this.mainEditor.tree.toJson() };
    }
    const text = this.literalText(literal);
    this.clauses[this.selected].literals.push({ spec: literal, text });
    this.redraw();
    this.status(`added to ${this.clauses[this.selected].id}`);
  }

  private literalText(lit: LiteralIn): string {
    if (lit.kind === "forall") {
      return `forall ${patternText(lit.premise as PatternJson)} => ${patternText(
        lit.conclusion as PatternJson,
      )}`;
    }
    const head = lit.kind === "exists" ? "exists" : "not exists";
    return `${head} ${patternText(lit.pattern as PatternJson)}`;
  }

  private async save(): Promise<void> {
    const clauses: ClauseIn[] = this.clauses.map((c) => ({
      id: c.id,
      literals: c.literals.map((l) => l.spec),
    }));
    try {
      const { id } = await this.state.api.createSpecFromClauses(clauses);
      this.state.setSession(id);
      this.status(`saved as session ${id}`);
    } catch (err) {
      this.status(`error: ${(err as Error).message}`);
    }
  }

  private status(text: string): void {
    this.statusLine.textContent = text;
  }

  private redraw(): void {
    this.clausePanel.textContent = "";
    this.clauses.forEach((clause, i) => {
      const row = el("div", "clause-row" + (i === this.selected ? " selected" : ""));
      row.appendChild(el("span", "clause-id", clause.id));
      row.appendChild(
        el("span", "clause-text", clause.literals.map((l) => l.text).join(" | ") || "false"),
      );
      row.addEventListener("click", () => {
        this.selected = i;
        this.redraw();
      });
      this.clausePanel.appendChild(row);
    });

    this.literalPanel.textContent = "";
    if (this.selected >= 0) {
      this.clauses[this.selected].literals.forEach((lit, j) => {
        const row = el("div", "literal-row");
        row.appendChild(el("span", "literal-text", lit.text));
        row.appendChild(
          button("remove", "remove-literal", () => {
            this.clauses[this.selected].literals.splice(j, 1);
            this.redraw();
          }),
        );
        this.literalPanel.appendChild(row);
      });
    }
  }

  /** Used by tests and the Check view's "copy current spec". */
  draftClauses(): ClauseIn[] {
    return this.clauses.map((c) => ({ id: c.id, literals: c.literals.map((l) => l.spec) }));
  }
}
