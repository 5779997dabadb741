/**
 * Shell and router. Navigation is hash-based; each render carries a
 * sequence number so a response that arrives after the user has moved on is
 * discarded instead of clobbering the newer view. Read payloads are cached
 * per route+ref so browser-back restores the previous chart without a
 * refetch; any mutation clears the cache.
 */

import { ApiClient, ApiError } from "./api.js";
import { el, errorPanel } from "./dom.js";
import { guardRoute, parseRoute, routeHash, type Route, type ViewState } from "./state.js";
import { renderView } from "./views/index.js";

export interface AppContext {
  api: ApiClient;
  state: ViewState;
  cache: Map<string, unknown>;
  expectedCounts: Map<string, number>;
  navigate(route: Route): Promise<void>;
  rerender(): Promise<void>;
  setRef(ref: string | null): Promise<void>;
  invalidate(): void;
  toast(message: string): void;
}

export class App implements AppContext {
  readonly api: ApiClient;
  readonly state: ViewState;
  readonly cache = new Map<string, unknown>();
  readonly expectedCounts = new Map<string, number>();

  private root: HTMLElement;
  private seq = 0;

  constructor(root: HTMLElement, api: ApiClient) {
    this.root = root;
    this.api = api;
    this.state = { route: { kind: "login" }, session: null, ref: null };
    window.addEventListener("hashchange", () => {
      const route = guardRoute(parseRoute(window.location.hash), this.state.session);
      // Idempotent on purpose: navigate() already rendered its own hash
      // change, so only a genuinely different route (back/forward button,
      // hand-edited URL) triggers a render here.
      if (routeHash(route) === routeHash(this.state.route)) return;
      this.state.route = route;
      void this.render();
    });
  }

  async start(): Promise<void> {
    this.state.route = guardRoute(parseRoute(window.location.hash), this.state.session);
    await this.render();
  }

  async navigate(route: Route): Promise<void> {
    this.state.route = guardRoute(route, this.state.session);
    const hash = routeHash(this.state.route);
    if (window.location.hash !== hash) {
      window.location.hash = hash;
    }
    await this.render();
  }

  rerender(): Promise<void> {
    return this.render();
  }

  async setRef(ref: string | null): Promise<void> {
    this.state.ref = ref;
    this.cache.clear(); // a new reference date invalidates every cached chart
    await this.render();
  }

  invalidate(): void {
    this.cache.clear();
  }

  toast(message: string): void {
    // Attached to the body, not the view root: a toast must survive the
    // re-render of whatever triggered it.
    const note = el("div", "toast", message);
    document.body.append(note);
    setTimeout(() => note.remove(), 4000);
  }

  private header(): HTMLElement {
    const header = el("header", "topbar");
    header.append(el("span", "brand", "Faculty HR EIS"));
    const nav = el("nav", "main-nav");
    const session = this.state.session;
    if (session) {
      const links: [string, Route][] = [
        ["Dashboard", { kind: "dashboard" }],
        ["Reports", { kind: "reports" }],
        ["Loads", { kind: "loads" }],
      ];
      if (session.role === "HR_STAFF") {
        // DEAN never gets these entries; the route guard and the API
        // client's mutation block back this up at deeper layers.
        links.push(["Add lecturer", { kind: "entity-form", entity: "lecturer" }]);
        links.push(["Add employee", { kind: "entity-form", entity: "employee" }]);
      }
      for (const [label, route] of links) {
        const link = el("a", "nav-link", label) as HTMLAnchorElement;
        link.href = routeHash(route);
        link.dataset["nav"] = label;
        link.addEventListener("click", (event) => {
          event.preventDefault();
          void this.navigate(route);
        });
        nav.append(link);
      }
      const badge = el("span", "session-badge", `${session.username} (${session.role})`);
      const logout = el("button", "logout", "Log out");
      logout.type = "button";
      logout.addEventListener("click", () => {
        this.api.logout();
        this.state.session = null;
        this.cache.clear();
        void this.navigate({ kind: "login" });
      });
      nav.append(badge, logout);
    }
    header.append(nav);
    return header;
  }

  private async render(): Promise<void> {
    const seq = ++this.seq;
    let content: HTMLElement;
    try {
      content = await renderView(this);
    } catch (error) {
      if (error instanceof ApiError && error.status === 401) {
        // Session expired or token rejected: back to login.
        this.api.logout();
        this.state.session = null;
        this.state.route = { kind: "login" };
        content = await renderView(this, "session expired, please log in again");
      } else {
        const message = error instanceof Error ? error.message : String(error);
        content = errorPanel(message, () => void this.rerender());
      }
    }
    if (seq !== this.seq) return; // a newer navigation superseded this render
    this.root.replaceChildren(this.header(), content);
  }
}
