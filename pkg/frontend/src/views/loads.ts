import { ApiError, MutationBlockedError } from "../api.js";
import type { AppContext } from "../app.js";
import { el } from "../dom.js";

export async function renderLoads(ctx: AppContext): Promise<HTMLElement> {
  const runs = await ctx.api.loads();

  const main = el("main", "loads-view");
  main.append(el("h1", "", "Load history"));

  if (ctx.state.session?.role === "HR_STAFF") {
    const trigger = el("button", "run-etl", "Run ETL now");
    trigger.type = "button";
    trigger.addEventListener("click", () => {
      trigger.disabled = true;
      void (async () => {
        try {
          const report = await ctx.api.runEtl();
          ctx.invalidate();
          ctx.toast(`Run ${report.run_id} finished: ${report.status}`);
          await ctx.rerender();
        } catch (error) {
          const message =
            error instanceof ApiError && error.status === 423
              ? "A run is already in progress."
              : error instanceof MutationBlockedError || error instanceof Error
                ? error.message
                : String(error);
          ctx.toast(message);
          trigger.disabled = false;
        }
      })();
    });
    main.append(trigger);
  }

  if (runs.length === 0) {
    main.append(el("p", "empty-state", "No runs yet."));
    return main;
  }

  const list = el("div", "run-list");
  for (const run of runs) {
    const box = el("details", "run-entry");
    box.dataset["runId"] = String(run.run_id);
    const summary = el("summary");
    summary.textContent =
      `Run ${run.run_id} — ${run.status} — ${run.finished_at} — ` +
      `${run.totals.parsed} parsed, ${run.totals.quarantined} quarantined`;
    box.append(summary);

    const table = el("table", "run-files");
    const head = el("tr");
    for (const column of ["file", "parsed", "inserted", "updated", "unchanged", "quarantined"]) {
      head.append(el("th", "", column));
    }
    table.append(head);
    for (const file of run.files) {
      const row = el("tr");
      row.append(
        el("td", "", file.file),
        el("td", "", String(file.parsed)),
        el("td", "", String(file.inserted)),
        el("td", "", String(file.updated)),
        el("td", "", String(file.unchanged)),
        el("td", "", String(file.quarantined)),
      );
      table.append(row);
      if (file.error) {
        const errorRow = el("tr", "file-error");
        const cell = el("td", "", `skipped: ${file.error}`);
        cell.colSpan = 6;
        errorRow.append(cell);
        table.append(errorRow);
      }
    }
    box.append(table);

    const quarantined = run.files.flatMap((f) =>
      f.quarantined_rows.map((q) => ({ file: f.file, ...q })),
    );
    if (quarantined.length > 0) {
      const quarantineBox = el("details", "quarantine");
      quarantineBox.append(el("summary", "", `Quarantined rows (${quarantined.length})`));
      const qtable = el("table", "quarantine-table");
      const qhead = el("tr");
      for (const column of ["file", "row", "reason", "detail"]) qhead.append(el("th", "", column));
      qtable.append(qhead);
      for (const q of quarantined) {
        const row = el("tr", "quarantine-row");
        row.append(
          el("td", "", q.file),
          el("td", "", String(q.row_number)),
          el("td", "", q.reason),
          el("td", "", q.detail),
        );
        qtable.append(row);
      }
      quarantineBox.append(qtable);
      box.append(quarantineBox);
    }
    list.append(box);
  }
  main.append(list);
  return main;
}
