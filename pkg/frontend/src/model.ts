/** Client-side mutable pattern tree behind the editor.
 *
 * Always serialisable to the service's pattern JSON schema; node ids used in
 * mappings are the preorder positions of that structure (children in stored
 * order), matching the service. */

import type { Axis, PatternJson } from "./api.js";

export class EditorNode {
  label: string;
  axis: Axis; // edge from the parent; meaningless on the root
  children: EditorNode[] = [];
  parent: EditorNode | null = null;

  constructor(label: string, axis: Axis = "child") {
    this.label = label;
    this.axis = axis;
  }
}

export class EditorTree {
  root: EditorNode;
  selected: EditorNode;

  constructor(rootLabel = "a") {
    this.root = new EditorNode(rootLabel);
    this.selected = this.root;
  }

  static fromJson(json: PatternJson): EditorTree {
    const tree = new EditorTree(json.label);
    const build = (node: EditorNode, spec: PatternJson) => {
      for (const edge of spec.children) {
        const child = new EditorNode(edge.node.label, edge.axis);
        child.parent = node;
        node.children.push(child);
        build(child, edge.node);
      }
    };
    build(tree.root, json);
    return tree;
  }

  toJson(node: EditorNode = this.root): PatternJson {
    return {
      label: node.label,
      children: node.children.map((c) => ({ axis: c.axis, node: this.toJson(c) })),
    };
  }

  /** XPath-ish display text, in stored child order. */
  toText(node: EditorNode = this.root, top = true): string {
    const branches = node.children
      .map((c) => `[${c.axis === "descendant" ? ".//" : ""}${this.toText(c, false)}]`)
      .join("");
    return (top ? "/" : "") + node.label + branches;
  }

  /** Preorder list; index in it equals the service-side node id. */
  preorder(): EditorNode[] {
    const out: EditorNode[] = [];
    const walk = (n: EditorNode) => {
      out.push(n);
      n.children.forEach(walk);
    };
    walk(this.root);
    return out;
  }

  indexOf(node: EditorNode): number {
    return this.preorder().indexOf(node);
  }

  get size(): number {
    return this.preorder().length;
  }

  select(node: EditorNode): void {
    this.selected = node;
  }

  addChild(axis: Axis, label = "a"): EditorNode {
    const child = new EditorNode(label, axis);
    child.parent = this.selected;
    this.selected.children.push(child);
    this.selected = child;
    return child;
  }

  relabelSelected(label: string): void {
    this.selected.label = label;
  }

  toggleAxisSelected(): void {
    if (this.selected.parent !== null) {
      this.selected.axis = this.selected.axis === "child" ? "descendant" : "child";
    }
  }

  /** The root is not deletable; deleting removes the whole subtree. */
  deleteSelected(): boolean {
    const parent = this.selected.parent;
    if (parent === null) {
      return false;
    }
    parent.children.splice(parent.children.indexOf(this.selected), 1);
    this.selected = parent;
    return true;
  }

  reset(rootLabel = "a"): void {
    this.root = new EditorNode(rootLabel);
    this.selected = this.root;
  }
}

export function patternText(json: PatternJson): string {
  return EditorTree.fromJson(json).toText();
}
