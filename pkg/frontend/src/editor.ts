/** Interactive pattern editor: an SVG tree plus a toolbar with node,
 * child-edge (/) and descendant-edge (//) creation, relabel, axis toggle
 * and delete. Click a node to select it; new nodes attach below the
 * selection. */

import { EditorTree } from "./model.js";
import { clearSvg, renderTree } from "./svgtree.js";

export class PatternEditor {
  readonly element: HTMLElement;
  readonly tree: EditorTree;
  private svg: SVGSVGElement;
  private labelInput: HTMLInputElement;
  private textLine: HTMLElement;
  onChange: (() => void) | null = null;

  constructor(title: string, rootLabel = "a") {
    this.tree = new EditorTree(rootLabel);
    this.element = document.createElement("div");
    this.element.className = "editor";

    const heading = document.createElement("div");
    heading.className = "editor-title";
    heading.textContent = title;
    this.element.appendChild(heading);

    const toolbar = document.createElement("div");
    toolbar.className = "editor-toolbar";
    this.element.appendChild(toolbar);

    this.labelInput = document.createElement("input");
    this.labelInput.className = "label-input";
    this.labelInput.value = "a";
    this.labelInput.size = 4;
    toolbar.appendChild(this.labelInput);

    this.addButton(toolbar, "add /", "add-child", () => {
      this.tree.addChild("child", this.labelInput.value || "a");
    });
    this.addButton(toolbar, "add //", "add-desc", () => {
      this.tree.addChild("descendant", this.labelInput.value || "a");
    });
    this.addButton(toolbar, "rename", "rename", () => {
      this.tree.relabelSelected(this.labelInput.value || "a");
    });
    this.addButton(toolbar, "toggle / vs //", "toggle-axis", () => {
      this.tree.toggleAxisSelected();
    });
    this.addButton(toolbar, "delete", "delete-node", () => {
      this.tree.deleteSelected();
    });
    this.addButton(toolbar, "clear", "clear", () => {
      this.tree.reset(this.labelInput.value || "a");
    });

    this.svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    this.svg.setAttribute("class", "editor-canvas");
    this.element.appendChild(this.svg);

    this.textLine = document.createElement("div");
    this.textLine.className = "editor-text";
    this.element.appendChild(this.textLine);

    this.redraw();
  }

  private addButton(toolbar: HTMLElement, text: string, cls: string, action: () => void): void {
    const button = document.createElement("button");
    button.textContent = text;
    button.className = cls;
    button.addEventListener("click", () => {
      action();
      this.redraw();
      this.onChange?.();
    });
    toolbar.appendChild(button);
  }

  redraw(): void {
    clearSvg(this.svg);
    const nodes = this.tree.preorder();
    renderTree(this.svg, this.tree.toJson(), {
      selectedIndex: this.tree.indexOf(this.tree.selected),
      onClick: (i) => {
        this.tree.select(nodes[i]);
        this.redraw();
      },
    });
    this.textLine.textContent = this.tree.toText();
  }

  /** Replace the whole tree (used by load/copy flows). */
  load(json: import("./api.js").PatternJson): void {
    const loaded = EditorTree.fromJson(json);
    this.tree.root = loaded.root;
    this.tree.selected = loaded.root;
    this.redraw();
    this.onChange?.();
  }
}
