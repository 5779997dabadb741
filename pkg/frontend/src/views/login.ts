import { ApiError } from "../api.js";
import type { AppContext } from "../app.js";
import { el } from "../dom.js";

export function renderLogin(ctx: AppContext, notice?: string): HTMLElement {
  const main = el("main", "login-view");
  const form = el("form", "login-form");
  form.append(el("h1", "", "Sign in"));
  if (notice) form.append(el("p", "notice", notice));

  const username = el("input") as HTMLInputElement;
  username.name = "username";
  username.placeholder = "Username";
  username.autocomplete = "username";
  const password = el("input") as HTMLInputElement;
  password.name = "password";
  password.type = "password";
  password.placeholder = "Password";
  password.autocomplete = "current-password";
  const submit = el("button", "", "Log in");
  submit.type = "submit";
  const failure = el("p", "login-error");

  form.append(username, password, submit, failure);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void (async () => {
      try {
        const session = await ctx.api.login(username.value.trim(), password.value);
        ctx.state.session = session;
        await ctx.navigate({ kind: "dashboard" });
      } catch (error) {
        failure.textContent =
          error instanceof ApiError && error.status === 401
            ? "Wrong username or password."
            : "Login failed; try again.";
      }
    })();
  });
  main.append(form);
  return main;
}
