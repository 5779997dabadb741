import type { AppContext } from "../app.js";
import { breadcrumb, el } from "../dom.js";
import { routeHash } from "../state.js";

/** Column order per entity; anything unexpected is appended alphabetically. */
const COLUMNS: Record<string, string[]> = {
  lecturer: [
    "lecturer_id",
    "name",
    "birth_date",
    "education_level",
    "functional_position",
    "employment_status",
    "hire_date",
  ],
  employee: [
    "employee_id",
    "name",
    "birth_date",
    "hire_date",
    "employment_status",
    "department",
    "education_level",
  ],
};

export async function renderDrilldown(
  ctx: AppContext,
  entity: string,
  dimension: string,
  bucket: string,
): Promise<HTMLElement> {
  // Always fetched fresh: the whole point of the detail view is the
  // current record list, and a changed count must surface a notice.
  const detail = await ctx.api.drillDown(entity, dimension, bucket, ctx.state.ref);
  const routeKey = routeHash({ kind: "drilldown", entity, dimension, bucket });
  const expected = ctx.expectedCounts.get(routeKey);
  ctx.expectedCounts.delete(routeKey);

  const main = el("main", "drilldown-view");
  main.append(
    breadcrumb([
      { label: "Reports", onClick: () => void ctx.navigate({ kind: "reports" }) },
      {
        label: detail.title,
        onClick: () => void ctx.navigate({ kind: "report", entity, dimension }),
      },
      { label: bucket },
    ]),
  );

  if (expected !== undefined && expected !== detail.count) {
    main.append(
      el(
        "p",
        "stale-notice",
        `Heads up: this bucket now holds ${detail.count} records (the chart showed ${expected}).`,
      ),
    );
  }

  main.append(el("p", "record-count", `${detail.count} records`));

  if (detail.count === 0) {
    main.append(el("p", "empty-state", "No records in this bucket."));
    return main;
  }

  const columns = COLUMNS[entity] ?? Object.keys(detail.records[0] ?? {}).sort();
  const table = el("table", "record-table");
  const head = el("tr");
  for (const column of columns) head.append(el("th", "", column));
  table.append(head);
  for (const record of detail.records) {
    const row = el("tr", "record-row");
    for (const column of columns) row.append(el("td", "", record[column] ?? ""));
    table.append(row);
  }
  main.append(table);
  return main;
}
