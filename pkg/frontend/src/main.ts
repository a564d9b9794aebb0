/** Application shell: tab bar over the Home, Run, Check and Tools screens,
 * all talking to one xsat service. */

import { AppState, button, el } from "./state.js";
import { CheckView } from "./views/check.js";
import { HomeView } from "./views/home.js";
import { RunView } from "./views/run.js";
import { ToolsView } from "./views/tools.js";

export interface App {
  state: AppState;
  home: HomeView;
  run: RunView;
  check: CheckView;
  tools: ToolsView;
  showTab: (name: string) => void;
}

export function createApp(root: HTMLElement, apiBase: string): App {
  const state = new AppState(apiBase);
  const home = new HomeView(state);
  const run = new RunView(state);
  const check = new CheckView(state);
  const tools = new ToolsView(state);

  const tabs = el("div", "tab-bar");
  const sessionBadge = el("span", "session-badge", "no session");
  state.onSessionChange(() => {
    sessionBadge.textContent = `session ${state.sessionId}`;
  });

  const views: Record<string, HTMLElement> = {
    home: home.element,
    run: run.element,
    check: check.element,
    tools: tools.element,
  };

  const showTab = (name: string) => {
    for (const key of Object.keys(views)) {
      views[key].style.display = key === name ? "" : "none";
    }
  };

  for (const [key, label] of [
    ["home", "Home"],
    ["run", "Run"],
    ["check", "Check"],
    ["tools", "Tools"],
  ] as [string, string][]) {
    tabs.appendChild(button(label, `tab-${key}`, () => showTab(key)));
  }
  tabs.appendChild(sessionBadge);

  root.textContent = "";
  root.appendChild(tabs);
  for (const key of Object.keys(views)) {
    root.appendChild(views[key]);
  }
  showTab("home");

  return { state, home, run, check, tools, showTab };
}

/** Browser bootstrap; tests call createApp directly instead. */
export function bootstrap(): void {
  const params = new URLSearchParams(window.location.search);
  const apiBase = params.get("api") ?? "http://127.0.0.1:8640";
  const root = document.getElementById("app");
  if (root) {
    createApp(root, apiBase);
  }
}

declare global {
  interface Window {
    __XSAT_NO_BOOTSTRAP__?: boolean;
  }
}

if (typeof window !== "undefined" && typeof document !== "undefined" && !window.__XSAT_NO_BOOTSTRAP__) {
  if (document.readyState === "loading") {
    document.addEventListener("DOMContentLoaded", bootstrap);
  } else if (document.getElementById("app")) {
    bootstrap();
  }
}
