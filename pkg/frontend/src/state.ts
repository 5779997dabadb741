/** Routes, hash (de)serialization, and the navigation guard. */

import type { Session } from "./types.js";

export type Route =
  | { kind: "login" }
  | { kind: "dashboard" }
  | { kind: "reports" }
  | { kind: "report"; entity: string; dimension: string }
  | { kind: "drilldown"; entity: string; dimension: string; bucket: string }
  | { kind: "entity-form"; entity: "lecturer" | "employee" }
  | { kind: "loads" }
  | { kind: "not-found"; path: string };

export interface ViewState {
  route: Route;
  session: Session | null;
  /** reference date override (YYYY-MM-DD); null means "today" server-side */
  ref: string | null;
}

export function parseRoute(hash: string): Route {
  const path = hash.replace(/^#/, "") || "/dashboard";
  const parts = path.split("/").filter((p) => p.length > 0).map(decodeURIComponent);
  if (parts.length === 0 || (parts.length === 1 && parts[0] === "dashboard")) {
    return { kind: "dashboard" };
  }
  if (parts[0] === "login") return { kind: "login" };
  if (parts[0] === "loads") return { kind: "loads" };
  if (parts[0] === "reports") {
    if (parts.length === 1) return { kind: "reports" };
    if (parts.length === 3 && parts[1] && parts[2]) {
      return { kind: "report", entity: parts[1], dimension: parts[2] };
    }
    if (parts.length === 4 && parts[1] && parts[2] && parts[3] !== undefined) {
      return { kind: "drilldown", entity: parts[1], dimension: parts[2], bucket: parts[3] };
    }
  }
  if (parts[0] === "new" && (parts[1] === "lecturer" || parts[1] === "employee")) {
    return { kind: "entity-form", entity: parts[1] };
  }
  return { kind: "not-found", path };
}

export function routeHash(route: Route): string {
  switch (route.kind) {
    case "login":
      return "#/login";
    case "dashboard":
      return "#/dashboard";
    case "reports":
      return "#/reports";
    case "report":
      return `#/reports/${route.entity}/${route.dimension}`;
    case "drilldown":
      return `#/reports/${route.entity}/${route.dimension}/${encodeURIComponent(route.bucket)}`;
    case "entity-form":
      return `#/new/${route.entity}`;
    case "loads":
      return "#/loads";
    case "not-found":
      return `#/${route.path}`;
  }
}

/**
 * Navigation guard: unauthenticated sessions can only reach login, and
 * mutation routes do not exist for DEAN (resolved to not-found, not hidden).
 */
export function guardRoute(route: Route, session: Session | null): Route {
  if (!session) return { kind: "login" };
  if (route.kind === "login") return { kind: "dashboard" };
  if (route.kind === "entity-form" && session.role !== "HR_STAFF") {
    return { kind: "not-found", path: routeHash(route).slice(2) };
  }
  return route;
}
