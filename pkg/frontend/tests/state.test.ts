import { describe, expect, it } from "vitest";

import { guardRoute, parseRoute, routeHash, type Route } from "../src/state.js";
import type { Session } from "../src/types.js";

const dean: Session = { token: "t", role: "DEAN", username: "dekan" };
const hr: Session = { token: "t", role: "HR_STAFF", username: "sdm" };

describe("route parsing", () => {
  it.each<[string, Route]>([
    ["#/dashboard", { kind: "dashboard" }],
    ["", { kind: "dashboard" }],
    ["#/login", { kind: "login" }],
    ["#/reports", { kind: "reports" }],
    ["#/reports/lecturer/age", { kind: "report", entity: "lecturer", dimension: "age" }],
    [
      "#/reports/lecturer/age/%3C30",
      { kind: "drilldown", entity: "lecturer", dimension: "age", bucket: "<30" },
    ],
    ["#/new/lecturer", { kind: "entity-form", entity: "lecturer" }],
    ["#/loads", { kind: "loads" }],
    ["#/bogus/route", { kind: "not-found", path: "/bogus/route" }],
  ])("parses %s", (hash, route) => {
    expect(parseRoute(hash)).toEqual(route);
  });

  it("round-trips every addressable route through its hash", () => {
    const routes: Route[] = [
      { kind: "login" },
      { kind: "dashboard" },
      { kind: "reports" },
      { kind: "report", entity: "employee", dimension: "tenure" },
      { kind: "drilldown", entity: "lecturer", dimension: "age", bucket: "<30" },
      { kind: "drilldown", entity: "employee", dimension: "tenure", bucket: "60+" },
      { kind: "entity-form", entity: "employee" },
      { kind: "loads" },
    ];
    for (const route of routes) {
      expect(parseRoute(routeHash(route))).toEqual(route);
    }
  });
});

describe("route guard", () => {
  it("unauthenticated -> login, whatever was asked for", () => {
    expect(guardRoute({ kind: "dashboard" }, null)).toEqual({ kind: "login" });
    expect(guardRoute({ kind: "entity-form", entity: "lecturer" }, null)).toEqual({
      kind: "login",
    });
  });

  it("login route bounces an authenticated session to the dashboard", () => {
    expect(guardRoute({ kind: "login" }, dean)).toEqual({ kind: "dashboard" });
  });

  it("entity forms resolve to not-found for DEAN and pass for HR", () => {
    expect(guardRoute({ kind: "entity-form", entity: "lecturer" }, dean).kind).toBe("not-found");
    expect(guardRoute({ kind: "entity-form", entity: "lecturer" }, hr).kind).toBe("entity-form");
  });

  it("read routes pass for both roles", () => {
    for (const session of [dean, hr]) {
      expect(guardRoute({ kind: "loads" }, session)).toEqual({ kind: "loads" });
    }
  });
});
