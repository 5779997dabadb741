import { describe, expect, it, vi } from "vitest";

import { mountApp } from "./helpers.js";

function fill(root: ParentNode, name: string, value: string): void {
  const field = root.querySelector(`#field-${name}`) as HTMLInputElement | HTMLSelectElement;
  field.value = value;
}

async function openLecturerForm() {
  const harness = await mountApp("HR_STAFF");
  await harness.app.navigate({ kind: "entity-form", entity: "lecturer" });
  fill(harness.root, "lecturer_id", "D9999");
  fill(harness.root, "name", "Form Test");
  fill(harness.root, "birth_date", "1985-03-03");
  fill(harness.root, "education_level", "S2");
  fill(harness.root, "functional_position", "LEKTOR");
  fill(harness.root, "employment_status", "PNS");
  return harness;
}

function submit(root: ParentNode): void {
  (root.querySelector(".entity-form") as HTMLFormElement).dispatchEvent(
    new Event("submit", { bubbles: true, cancelable: true }),
  );
}

describe("entity form", () => {
  it("a valid save POSTs the record, toasts, and lands on the entity's report", async () => {
    const { root, stub, app } = await openLecturerForm();
    submit(root);
    await vi.waitFor(() => {
      expect(app.state.route).toEqual({ kind: "report", entity: "lecturer", dimension: "education" });
    });
    const post = stub.requests.find((r) => r.method === "POST" && r.url === "/api/lecturers");
    expect(post).toBeTruthy();
    expect(post?.body).toMatchObject({
      lecturer_id: "D9999",
      name: "Form Test",
      birth_date: "1985-03-03",
      education_level: "S2",
    });
    expect(document.querySelector(".toast")).toBeTruthy();
  });

  it("a 422 renders each message beside its field", async () => {
    const { root, stub } = await openLecturerForm();
    stub.overrides.set("POST /api/lecturers", () => ({
      status: 422,
      body: {
        code: "INVALID_INPUT",
        message: "record failed validation",
        details: [
          { field: "education_level", reason: "UNKNOWN_CODE", message: "no such level" },
          { field: "birth_date", reason: "MALFORMED", message: "not a date" },
        ],
      },
    }));
    submit(root);
    await vi.waitFor(() => {
      expect(
        root.querySelector('.field-error[data-for="education_level"]')?.textContent,
      ).toBe("no such level");
    });
    expect(root.querySelector('.field-error[data-for="birth_date"]')?.textContent).toBe(
      "not a date",
    );
    // Untouched fields stay clean.
    expect(root.querySelector('.field-error[data-for="name"]')?.textContent).toBe("");
  });

  it("a 409 offers edit-instead, which re-submits as PUT", async () => {
    const { root, stub } = await openLecturerForm();
    stub.overrides.set("POST /api/lecturers", () => ({
      status: 409,
      body: { code: "CONFLICT", message: "lecturer 'D9999' already exists; use PUT to replace" },
    }));
    submit(root);
    await vi.waitFor(() => {
      expect(root.querySelector(".conflict-prompt .replace-existing")).toBeTruthy();
    });
    expect(root.querySelector(".conflict-prompt")?.textContent).toContain("already exists");

    (root.querySelector(".replace-existing") as HTMLButtonElement).click();
    await vi.waitFor(() => {
      expect(
        stub.requests.some((r) => r.method === "PUT" && r.url === "/api/lecturers"),
      ).toBe(true);
    });
  });

  it("the employee form carries employee-applicable dimensions only", async () => {
    const { app, root } = await mountApp("HR_STAFF");
    await app.navigate({ kind: "entity-form", entity: "employee" });
    const statusSelect = root.querySelector("#field-employment_status") as HTMLSelectElement;
    const codes = Array.from(statusSelect.options).map((o) => o.value);
    expect(codes).toEqual(["PNS", "TETAP", "KONTRAK", "HONORER"]);
    const educationSelect = root.querySelector("#field-education_level") as HTMLSelectElement;
    expect(Array.from(educationSelect.options)[0]?.value).toBe(""); // optional blank
  });
});
