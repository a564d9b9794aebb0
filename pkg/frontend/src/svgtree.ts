/** SVG rendering of pattern trees: layered layout, solid lines for child
 * edges and double lines for descendant edges, with optional dotted-arrow
 * overlays showing a node mapping between two trees. */

import type { PatternJson } from "./api.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const X_STEP = 46;
const Y_STEP = 52;
const RADIUS = 13;

export function svgNode<K extends keyof SVGElementTagNameMap>(
  parent: Element | null,
  tag: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const key of Object.keys(attrs)) {
    el.setAttribute(key, String(attrs[key]));
  }
  parent?.appendChild(el);
  return el;
}

export interface NodePos {
  x: number;
  y: number;
}

export interface RenderOptions {
  offsetX?: number;
  offsetY?: number;
  selectedIndex?: number;
  onClick?: (preorderIndex: number) => void;
  highlight?: Set<number>;
}

interface Layout {
  positions: NodePos[]; // by preorder index
  width: number;
  height: number;
}

function layout(tree: PatternJson, offsetX: number, offsetY: number): Layout {
  const positions: NodePos[] = [];
  let nextLeaf = 0;
  let maxDepth = 0;

  interface Walk {
    index: number;
    x: number;
  }

  const place = (node: PatternJson, depth: number): Walk => {
    maxDepth = Math.max(maxDepth, depth);
    const index = positions.length;
    positions.push({ x: 0, y: offsetY + depth * Y_STEP + RADIUS + 4 });
    if (node.children.length === 0) {
      positions[index].x = offsetX + nextLeaf * X_STEP + RADIUS + 4;
      nextLeaf += 1;
      return { index, x: positions[index].x };
    }
    const xs: number[] = [];
    for (const edge of node.children) {
      xs.push(place(edge.node, depth + 1).x);
    }
    positions[index].x = (Math.min(...xs) + Math.max(...xs)) / 2;
    return { index, x: positions[index].x };
  };

  place(tree, 0);
  const width = Math.max(1, nextLeaf) * X_STEP + 8;
  const height = (maxDepth + 1) * Y_STEP + 8;
  return { positions, width, height };
}

export function renderTree(
  svg: SVGSVGElement,
  tree: PatternJson,
  opts: RenderOptions = {},
): NodePos[] {
  const { positions, width, height } = layout(tree, opts.offsetX ?? 0, opts.offsetY ?? 0);
  const group = svgNode(svg, "g");

  // edges first so circles draw on top
  let index = 0;
  const drawEdges = (node: PatternJson, myIndex: number) => {
    for (const edge of node.children) {
      index += 1;
      const childIndex = index;
      const a = positions[myIndex];
      const b = positions[childIndex];
      if (edge.axis === "child") {
        svgNode(group, "line", {
          x1: a.x, y1: a.y, x2: b.x, y2: b.y,
          stroke: "#444", "stroke-width": 1.4,
        });
      } else {
        // descendant: double line
        const dx = b.x - a.x;
        const dy = b.y - a.y;
        const len = Math.hypot(dx, dy) || 1;
        const ox = (-dy / len) * 2.2;
        const oy = (dx / len) * 2.2;
        for (const sign of [-1, 1]) {
          svgNode(group, "line", {
            x1: a.x + sign * ox, y1: a.y + sign * oy,
            x2: b.x + sign * ox, y2: b.y + sign * oy,
            stroke: "#444", "stroke-width": 1.2,
          });
        }
      }
      drawEdges(edge.node, childIndex);
    }
  };
  drawEdges(tree, 0);

  positions.forEach((pos, i) => {
    const selected = opts.selectedIndex === i;
    const highlighted = opts.highlight?.has(i) ?? false;
    const circle = svgNode(group, "circle", {
      cx: pos.x, cy: pos.y, r: RADIUS,
      fill: selected ? "#ffd37a" : highlighted ? "#cfe8ff" : "#fff",
      stroke: selected ? "#c77f00" : "#333",
      "stroke-width": selected ? 2 : 1.2,
    });
    const label = textOf(tree, i);
    const text = svgNode(group, "text", {
      x: pos.x, y: pos.y + 4,
      "text-anchor": "middle",
      "font-size": 12,
      "font-family": "monospace",
    });
    text.textContent = label;
    if (opts.onClick) {
      circle.addEventListener("click", () => opts.onClick!(i));
      text.addEventListener("click", () => opts.onClick!(i));
      circle.setAttribute("cursor", "pointer");
    }
  });

  growViewBox(svg, (opts.offsetX ?? 0) + width, (opts.offsetY ?? 0) + height);
  return positions;
}

function textOf(tree: PatternJson, preorderIndex: number): string {
  let count = -1;
  let found = "";
  const walk = (node: PatternJson) => {
    count += 1;
    if (count === preorderIndex) {
      found = node.label;
    }
    node.children.forEach((e) => walk(e.node));
  };
  walk(tree);
  return found;
}

function growViewBox(svg: SVGSVGElement, width: number, height: number): void {
  const current = (svg.getAttribute("viewBox") ?? "0 0 0 0").split(" ").map(Number);
  const w = Math.max(current[2], width);
  const h = Math.max(current[3], height);
  svg.setAttribute("viewBox", `0 0 ${w} ${h}`);
  svg.setAttribute("width", String(w));
  svg.setAttribute("height", String(h));
}

export function clearSvg(svg: SVGSVGElement): void {
  while (svg.firstChild) {
    svg.removeChild(svg.firstChild);
  }
  svg.setAttribute("viewBox", "0 0 0 0");
  svg.setAttribute("width", "0");
  svg.setAttribute("height", "0");
}

/** Dotted arrows for a mapping between two rendered trees. */
export function renderMapping(
  svg: SVGSVGElement,
  from: NodePos[],
  to: NodePos[],
  pairs: [number, number][],
): void {
  const group = svgNode(svg, "g");
  for (const [i, j] of pairs) {
    const a = from[i];
    const b = to[j];
    if (!a || !b) {
      continue;
    }
    svgNode(group, "line", {
      x1: a.x + RADIUS, y1: a.y,
      x2: b.x - RADIUS, y2: b.y,
      stroke: "#1565c0",
      "stroke-width": 1.2,
      "stroke-dasharray": "4 3",
      "marker-end": "url(#arrowhead)",
    });
  }
}

export function ensureArrowMarker(svg: SVGSVGElement): void {
  if (svg.querySelector("defs")) {
    return;
  }
  const defs = svgNode(svg, "defs");
  const marker = svgNode(defs, "marker", {
    id: "arrowhead", markerWidth: 8, markerHeight: 8,
    refX: 7, refY: 3, orient: "auto",
  });
  svgNode(marker, "path", { d: "M0,0 L7,3 L0,6 Z", fill: "#1565c0" });
}
