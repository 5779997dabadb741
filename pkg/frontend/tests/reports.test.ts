import { describe, expect, it, vi } from "vitest";

import type { CatalogEntry, Distribution } from "../src/types.js";
import { REF, fixtures, mountApp, texts } from "./helpers.js";

const catalog = fixtures.routes["GET /api/reports"] as CatalogEntry[];

describe("report pages", () => {
  it("the index lists exactly the eight catalog reports", async () => {
    const { app, root } = await mountApp("DEAN");
    await app.navigate({ kind: "reports" });
    const entries = root.querySelectorAll(".report-index .report-entry");
    expect(entries).toHaveLength(8);
    expect(texts(root, ".report-entry a")).toEqual(catalog.map((e) => e.title));
  });

  it("chart and adjacent table agree with each other and the payload", async () => {
    const { app, root } = await mountApp("DEAN");
    await app.navigate({ kind: "report", entity: "employee", dimension: "tenure" });
    const payload = fixtures.routes[
      `GET /api/reports/employee/tenure?ref=${REF}`
    ] as Distribution;

    const chartCounts = texts(root, "figure.chart .seg-count");
    const tableCounts = texts(root, ".bucket-table .bucket-row .count-cell");
    const payloadCounts = payload.buckets.map((b) => String(b.count));
    expect(chartCounts).toEqual(payloadCounts);
    expect(tableCounts).toEqual(payloadCounts);

    const totalRow = root.querySelector(".bucket-table .total-row .count-cell");
    expect(totalRow?.textContent).toBe(String(payload.total));
  });

  it("changing the reference date refetches with ?ref=", async () => {
    const { app, root, stub } = await mountApp("DEAN");
    await app.navigate({ kind: "report", entity: "lecturer", dimension: "age" });
    stub.overrides.set("GET /api/reports/lecturer/age?ref=2010-01-01", () => ({
      status: 200,
      body: fixtures.routes[`GET /api/reports/lecturer/age?ref=${REF}`],
    }));
    const picker = root.querySelector(".ref-picker") as HTMLInputElement;
    picker.value = "2010-01-01";
    picker.dispatchEvent(new Event("change", { bubbles: true }));
    await vi.waitFor(() => {
      expect(
        stub.requests.some((r) => r.url === "/api/reports/lecturer/age?ref=2010-01-01"),
      ).toBe(true);
    });
  });

  it("an unknown route shape renders the in-shell 404 page", async () => {
    const { root } = await mountApp("DEAN", "#/this/does/not/exist");
    expect(root.querySelector(".not-found-view")).toBeTruthy();
    expect(root.querySelector(".topbar")).toBeTruthy(); // still inside the shell
  });

  it("an invalid report combination surfaces the API's 404 with retry", async () => {
    const { root } = await mountApp("DEAN", "#/reports/lecturer/tenure");
    expect(root.querySelector(".error-panel")).toBeTruthy();
    expect(root.querySelector(".topbar")).toBeTruthy();
  });
});
