/** Minimal shared app state: the API client and the active spec session. */

import { Api } from "./api.js";

export class AppState {
  readonly api: Api;
  sessionId: string | null = null;
  private listeners: (() => void)[] = [];

  constructor(apiBase: string) {
    this.api = new Api(apiBase);
  }

  setSession(sid: string): void {
    this.sessionId = sid;
    this.listeners.forEach((fn) => fn());
  }

  onSessionChange(fn: () => void): void {
    this.listeners.push(fn);
  }
}

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className = "",
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text) {
    node.textContent = text;
  }
  return node;
}

export function button(label: string, className: string, onClick: () => void): HTMLButtonElement {
  const b = el("button", className, label);
  b.addEventListener("click", onClick);
  return b;
}
