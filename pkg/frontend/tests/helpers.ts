/**
 * Test harness: the API is stubbed with responses recorded from the real
 * backend over the seed dataset, and every fetch is recorded so tests can
 * assert on what went over the wire (notably: nothing but GETs for a dean).
 */

import { ApiClient } from "../src/api.js";
import { App } from "../src/app.js";
import type { Role, Session } from "../src/types.js";
import recorded from "./fixtures/recorded.json";

export interface RecordedFixtures {
  ref: string;
  login: Record<string, { token: string; role: Role; expires_in: number }>;
  errors: Record<string, { code: string; message: string }>;
  routes: Record<string, unknown>;
}

export const fixtures = recorded as unknown as RecordedFixtures;
export const REF = fixtures.ref;

export interface WireRequest {
  method: string;
  url: string;
  body: unknown;
}

export interface FetchStub {
  requests: WireRequest[];
  /** Per-route overrides: key "METHOD url" -> responder. */
  overrides: Map<string, () => { status: number; body: unknown }>;
}

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export function installFetchStub(): FetchStub {
  const stub: FetchStub = { requests: [], overrides: new Map() };

  globalThis.fetch = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = typeof input === "string" ? input : input instanceof URL ? input.href : input.url;
    const method = (init?.method ?? "GET").toUpperCase();
    const body = init?.body ? JSON.parse(init.body as string) : undefined;
    stub.requests.push({ method, url, body });

    const key = `${method} ${url}`;
    const override = stub.overrides.get(key);
    if (override) {
      const { status, body: payload } = override();
      return jsonResponse(status, payload);
    }

    if (key === "POST /api/login") {
      const login = fixtures.login[(body as { username: string }).username];
      if (login) return jsonResponse(200, login);
      return jsonResponse(401, fixtures.errors["unauthenticated"]);
    }
    if (method === "GET") {
      if (key in fixtures.routes) return jsonResponse(200, fixtures.routes[key]);
      // A request without ?ref= means "today"; serve the recorded ref.
      const reffed = `${key}${url.includes("?") ? "&" : "?"}ref=${fixtures.ref}`;
      if (reffed in fixtures.routes) return jsonResponse(200, fixtures.routes[reffed]);
      return jsonResponse(404, fixtures.errors["not_found"]);
    }
    if (method === "POST" && (url === "/api/lecturers" || url === "/api/employees")) {
      return jsonResponse(201, body);
    }
    if (method === "PUT" && (url === "/api/lecturers" || url === "/api/employees")) {
      return jsonResponse(200, body);
    }
    if (key === "POST /api/etl/run") {
      const loads = fixtures.routes["GET /api/loads?limit=20"] as unknown[];
      return jsonResponse(200, loads[0]);
    }
    return jsonResponse(404, fixtures.errors["not_found"]);
  };
  return stub;
}

export function sessionFor(role: Role): Session {
  const username = role === "DEAN" ? "dekan" : "sdm";
  const login = fixtures.login[username];
  if (!login) throw new Error(`no login fixture for ${username}`);
  return { token: login.token, role: login.role, username };
}

export interface Harness {
  app: App;
  api: ApiClient;
  root: HTMLElement;
  stub: FetchStub;
}

export async function mountApp(role: Role | null, startHash = "#/dashboard"): Promise<Harness> {
  const stub = installFetchStub();
  document.body.innerHTML = '<div id="app"></div>';
  const root = document.getElementById("app") as HTMLElement;
  window.location.hash = startHash;
  const api = new ApiClient("");
  const app = new App(root, api);
  if (role) {
    const session = sessionFor(role);
    api.session = session;
    app.state.session = session;
    app.state.ref = REF; // pin the recorded reference date
  }
  await app.start();
  return { app, api, root, stub };
}

export function texts(root: ParentNode, selector: string): string[] {
  return Array.from(root.querySelectorAll(selector)).map((n) => n.textContent ?? "");
}

export async function flush(times = 4): Promise<void> {
  for (let i = 0; i < times; i += 1) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}
