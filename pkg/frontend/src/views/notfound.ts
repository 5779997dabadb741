import type { AppContext } from "../app.js";
import { el } from "../dom.js";

export function renderNotFound(ctx: AppContext, path: string): HTMLElement {
  const main = el("main", "not-found-view");
  main.append(el("h1", "", "Page not found"));
  main.append(el("p", "", `No page at "${path}".`));
  const back = el("a", "", "Back to dashboard") as HTMLAnchorElement;
  back.href = "#/dashboard";
  back.addEventListener("click", (event) => {
    event.preventDefault();
    void ctx.navigate({ kind: "dashboard" });
  });
  main.append(back);
  return main;
}
