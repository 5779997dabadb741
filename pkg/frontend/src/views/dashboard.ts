import type { AppContext } from "../app.js";
import { chartFor } from "../charts.js";
import { el } from "../dom.js";
import { routeHash } from "../state.js";
import type { Distribution } from "../types.js";

export async function renderDashboard(ctx: AppContext): Promise<HTMLElement> {
  const cacheKey = `dashboard|${ctx.state.ref ?? ""}`;
  let charts = ctx.cache.get(cacheKey) as Distribution[] | undefined;
  if (!charts) {
    charts = await ctx.api.dashboard(ctx.state.ref);
    ctx.cache.set(cacheKey, charts);
  }

  const main = el("main", "dashboard-view");
  main.append(el("h1", "", "Dashboard"));
  const grid = el("div", "chart-grid");
  for (const dist of charts) {
    const card = el("section", "chart-card");
    card.append(
      chartFor(dist, (bucket) => {
        const count = dist.buckets.find((b) => b.label === bucket)?.count ?? 0;
        const route = {
          kind: "drilldown",
          entity: dist.entity,
          dimension: dist.dimension,
          bucket,
        } as const;
        // Carry the clicked count so the detail view can flag staleness.
        ctx.expectedCounts.set(routeHash(route), count);
        void ctx.navigate(route);
      }),
    );
    grid.append(card);
  }
  main.append(grid);
  return main;
}
