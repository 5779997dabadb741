import type { AppContext } from "../app.js";
import { renderLogin } from "./login.js";
import { renderDashboard } from "./dashboard.js";
import { renderReportIndex, renderReport } from "./report.js";
import { renderDrilldown } from "./drilldown.js";
import { renderEntityForm } from "./form.js";
import { renderLoads } from "./loads.js";
import { renderNotFound } from "./notfound.js";

export async function renderView(ctx: AppContext, notice?: string): Promise<HTMLElement> {
  const route = ctx.state.route;
  switch (route.kind) {
    case "login":
      return renderLogin(ctx, notice);
    case "dashboard":
      return renderDashboard(ctx);
    case "reports":
      return renderReportIndex(ctx);
    case "report":
      return renderReport(ctx, route.entity, route.dimension);
    case "drilldown":
      return renderDrilldown(ctx, route.entity, route.dimension, route.bucket);
    case "entity-form":
      return renderEntityForm(ctx, route.entity);
    case "loads":
      return renderLoads(ctx);
    case "not-found":
      return renderNotFound(ctx, route.path);
  }
}
