/** Visual tools: Monomorphism, Join, Shared join and Unfold, each with its
 * editors, a solution browser where there are multiple answers, and a
 * gallery of result patterns. */

import type { PatternJson } from "../api.js";
import { SolutionBrowser } from "../browser.js";
import { PatternEditor } from "../editor.js";
import { AppState, button, el } from "../state.js";
import { clearSvg, ensureArrowMarker, renderMapping, renderTree } from "../svgtree.js";

type ToolName = "mono" | "join" | "sjoin" | "unfold";

export class ToolsView {
  readonly element: HTMLElement;
  private state: AppState;
  private panels: Record<ToolName, HTMLElement>;

  constructor(state: AppState) {
    this.state = state;
    this.element = el("div", "view tools-view");

    const picker = el("div", "tool-picker");
    this.element.appendChild(picker);
    this.panels = {
      mono: this.monoPanel(),
      join: this.joinPanel(),
      sjoin: this.sjoinPanel(),
      unfold: this.unfoldPanel(),
    };
    const names: [ToolName, string][] = [
      ["mono", "Monomorphism"],
      ["join", "Join"],
      ["sjoin", "Shared join"],
      ["unfold", "Unfold"],
    ];
    for (const [key, label] of names) {
      picker.appendChild(
        button(label, `pick-${key}`, () => this.show(key)),
      );
      this.element.appendChild(this.panels[key]);
    }
    this.show("mono");
  }

  private show(tool: ToolName): void {
    for (const key of Object.keys(this.panels) as ToolName[]) {
      this.panels[key].style.display = key === tool ? "" : "none";
    }
  }

  private gallery(target: HTMLElement, patterns: PatternJson[], texts: string[]): void {
    target.textContent = "";
    patterns.forEach((p, i) => {
      const cell = el("div", "gallery-cell");
      cell.appendChild(el("div", "gallery-text", texts[i] ?? ""));
      const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
      cell.appendChild(svg);
      renderTree(svg, p);
      target.appendChild(cell);
    });
    if (!patterns.length) {
      target.appendChild(el("div", "gallery-empty", "no results"));
    }
  }

  private monoPanel(): HTMLElement {
    const panel = el("div", "panel tool-mono");
    panel.appendChild(el("h3", "", "Monomorphism"));
    const source = new PatternEditor("p (source)");
    const target = new PatternEditor("q (target)");
    const row = el("div", "editor-row");
    row.append(source.element, target.element);
    panel.appendChild(row);

    const overlay = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    overlay.setAttribute("class", "overlay-canvas");
    const counter = el("div", "mono-count", "");
    const browser = new SolutionBrowser<[number, number][]>((mapping) => {
      clearSvg(overlay);
      ensureArrowMarker(overlay);
      const left = renderTree(overlay, source.tree.toJson(), { offsetX: 0 });
      const right = renderTree(overlay, target.tree.toJson(), { offsetX: 320 });
      renderMapping(overlay, left, right, mapping);
    });
    panel.appendChild(
      button("Generate monomorphisms", "generate-monos", async () => {
        const out = await this.state.api.monomorphisms(source.tree.toJson(), target.tree.toJson());
        counter.textContent = `count=${out.count}`;
        browser.setItems(out.maps);
        if (!out.count) {
          clearSvg(overlay);
        }
      }),
    );
    panel.appendChild(counter);
    panel.appendChild(browser.element);
    panel.appendChild(overlay);
    return panel;
  }

  private joinPanel(): HTMLElement {
    const panel = el("div", "panel tool-join");
    panel.appendChild(el("h3", "", "Join  p1 ⊗ p2"));
    const p1 = new PatternEditor("p1");
    const p2 = new PatternEditor("p2");
    const row = el("div", "editor-row");
    row.append(p1.element, p2.element);
    panel.appendChild(row);
    const gallery = el("div", "gallery join-gallery");
    panel.appendChild(
      button("Join", "run-join", async () => {
        const out = await this.state.api.join(p1.tree.toJson(), p2.tree.toJson());
        this.gallery(gallery, out.results, out.texts);
      }),
    );
    panel.appendChild(gallery);
    return panel;
  }

  private sjoinPanel(): HTMLElement {
    const panel = el("div", "panel tool-sjoin");
    panel.appendChild(el("h3", "", "Shared join  p1 ⊗(c,m) q"));
    const p2 = new PatternEditor("p2 (shared)");
    const q = new PatternEditor("q (extends p2)");
    const p1 = new PatternEditor("p1");
    const row = el("div", "editor-row");
    row.append(p2.element, q.element, p1.element);
    panel.appendChild(row);

    const groupLabel = el("div", "sjoin-group-label", "");
    const gallery = el("div", "gallery sjoin-gallery");
    const browser = new SolutionBrowser<{
      mono: [number, number][];
      results: PatternJson[];
      texts: string[];
    }>((group, index) => {
      groupLabel.textContent = `m = [${group.mono.map(([i, j]) => `${i}->${j}`).join(",")}]`;
      this.gallery(gallery, group.results, group.texts);
    });
    panel.appendChild(
      button("Shared join", "run-sjoin", async () => {
        const out = await this.state.api.sharedJoin(
          p1.tree.toJson(),
          q.tree.toJson(),
          p2.tree.toJson(),
        );
        browser.setItems(out.groups);
        if (!out.count) {
          groupLabel.textContent = "no qualifying monomorphism";
          gallery.textContent = "";
        }
      }),
    );
    panel.appendChild(browser.element);
    panel.appendChild(groupLabel);
    panel.appendChild(gallery);
    return panel;
  }

  private unfoldPanel(): HTMLElement {
    const panel = el("div", "panel tool-unfold");
    panel.appendChild(el("h3", "", "Unfold a descendant edge"));
    const editor = new PatternEditor("pattern");
    panel.appendChild(editor.element);
    const edgeInput = document.createElement("input");
    edgeInput.className = "edge-input";
    edgeInput.placeholder = "node id (optional)";
    edgeInput.size = 10;
    panel.appendChild(edgeInput);
    const gallery = el("div", "gallery unfold-gallery");
    panel.appendChild(
      button("Unfold", "run-unfold", async () => {
        const edge = edgeInput.value.trim() === "" ? undefined : Number(edgeInput.value);
        const out = await this.state.api.unfold(editor.tree.toJson(), edge);
        this.gallery(gallery, out.results, out.texts);
      }),
    );
    panel.appendChild(gallery);
    return panel;
  }
}
