/** Arrow-button browser over a list of solutions (mappings or patterns):
 * shows one at a time, the cursor stays in bounds. */

export class SolutionBrowser<T> {
  readonly element: HTMLElement;
  private items: T[] = [];
  private cursor = 0;
  private counter: HTMLElement;
  private render: (item: T, index: number) => void;
  onMove: ((item: T, index: number) => void) | null = null;

  constructor(render: (item: T, index: number) => void) {
    this.render = render;
    this.element = document.createElement("div");
    this.element.className = "solution-browser";

    const prev = document.createElement("button");
    prev.textContent = "◀";
    prev.className = "browser-prev";
    prev.addEventListener("click", () => this.move(-1));

    this.counter = document.createElement("span");
    this.counter.className = "browser-counter";

    const next = document.createElement("button");
    next.textContent = "▶";
    next.className = "browser-next";
    next.addEventListener("click", () => this.move(1));

    this.element.append(prev, this.counter, next);
    this.update();
  }

  setItems(items: T[]): void {
    this.items = items;
    this.cursor = 0;
    this.update();
  }

  get current(): T | null {
    return this.items.length ? this.items[this.cursor] : null;
  }

  get index(): number {
    return this.cursor;
  }

  get count(): number {
    return this.items.length;
  }

  private move(delta: number): void {
    if (!this.items.length) {
      return;
    }
    this.cursor = Math.min(this.items.length - 1, Math.max(0, this.cursor + delta));
    this.update();
  }

  private update(): void {
    this.counter.textContent = this.items.length
      ? `${this.cursor + 1} / ${this.items.length}`
      : "0 / 0";
    if (this.items.length) {
      this.render(this.items[this.cursor], this.cursor);
      this.onMove?.(this.items[this.cursor], this.cursor);
    }
  }
}
