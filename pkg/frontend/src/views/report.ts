import type { AppContext } from "../app.js";
import { bucketTable, chartFor } from "../charts.js";
import { breadcrumb, el } from "../dom.js";
import { routeHash } from "../state.js";
import type { CatalogEntry, Distribution } from "../types.js";

export async function renderReportIndex(ctx: AppContext): Promise<HTMLElement> {
  const cacheKey = "report-index";
  let entries = ctx.cache.get(cacheKey) as CatalogEntry[] | undefined;
  if (!entries) {
    entries = await ctx.api.reportCatalog();
    ctx.cache.set(cacheKey, entries);
  }
  const main = el("main", "reports-view");
  main.append(el("h1", "", "Reports"));
  const list = el("ul", "report-index");
  for (const entry of entries) {
    const item = el("li", "report-entry");
    const link = el("a", "", entry.title) as HTMLAnchorElement;
    link.href = routeHash({ kind: "report", entity: entry.entity, dimension: entry.dimension });
    link.dataset["entity"] = entry.entity;
    link.dataset["dimension"] = entry.dimension;
    link.addEventListener("click", (event) => {
      event.preventDefault();
      void ctx.navigate({ kind: "report", entity: entry.entity, dimension: entry.dimension });
    });
    item.append(link);
    list.append(item);
  }
  main.append(list);
  return main;
}

export async function renderReport(
  ctx: AppContext,
  entity: string,
  dimension: string,
): Promise<HTMLElement> {
  const cacheKey = `report|${entity}|${dimension}|${ctx.state.ref ?? ""}`;
  let dist = ctx.cache.get(cacheKey) as Distribution | undefined;
  if (!dist) {
    dist = await ctx.api.report(entity, dimension, ctx.state.ref);
    ctx.cache.set(cacheKey, dist);
  }
  const payload = dist;

  const main = el("main", "report-view");
  main.append(
    breadcrumb([
      { label: "Reports", onClick: () => void ctx.navigate({ kind: "reports" }) },
      { label: payload.title },
    ]),
  );

  const refRow = el("div", "ref-row");
  refRow.append(el("label", "", "Reference date: "));
  const picker = el("input", "ref-picker") as HTMLInputElement;
  picker.type = "date";
  picker.value = payload.reference_date;
  picker.addEventListener("change", () => {
    void ctx.setRef(picker.value || null);
  });
  refRow.append(picker);
  main.append(refRow);

  const onSegment = (bucket: string) => {
    const count = payload.buckets.find((b) => b.label === bucket)?.count ?? 0;
    const route = { kind: "drilldown", entity, dimension, bucket } as const;
    ctx.expectedCounts.set(routeHash(route), count);
    void ctx.navigate(route);
  };

  const pair = el("div", "chart-and-table");
  pair.append(chartFor(payload, onSegment), bucketTable(payload, onSegment));
  main.append(pair);
  return main;
}
