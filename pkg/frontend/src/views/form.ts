import { ApiError, MutationBlockedError } from "../api.js";
import type { AppContext } from "../app.js";
import { el } from "../dom.js";
import type { DimensionCatalog, DimensionEntry } from "../types.js";

interface FieldSpec {
  name: string;
  label: string;
  kind: "text" | "date" | "select";
  options?: DimensionEntry[];
  optional?: boolean;
}

function applicable(entries: DimensionEntry[], entity: "lecturer" | "employee"): DimensionEntry[] {
  return entries.filter((e) => e.applicability === entity || e.applicability === "both");
}

function fieldSpecs(entity: "lecturer" | "employee", dims: DimensionCatalog): FieldSpec[] {
  if (entity === "lecturer") {
    return [
      { name: "lecturer_id", label: "Lecturer ID", kind: "text" },
      { name: "name", label: "Name", kind: "text" },
      { name: "birth_date", label: "Birth date", kind: "date" },
      {
        name: "education_level",
        label: "Education level",
        kind: "select",
        options: applicable(dims.education_levels, entity),
      },
      {
        name: "functional_position",
        label: "Functional position",
        kind: "select",
        options: applicable(dims.positions, entity),
      },
      {
        name: "employment_status",
        label: "Employment status",
        kind: "select",
        options: applicable(dims.statuses, entity),
      },
      { name: "hire_date", label: "Hire date (optional)", kind: "date", optional: true },
    ];
  }
  return [
    { name: "employee_id", label: "Employee ID", kind: "text" },
    { name: "name", label: "Name", kind: "text" },
    { name: "birth_date", label: "Birth date", kind: "date" },
    { name: "hire_date", label: "Hire date", kind: "date" },
    {
      name: "employment_status",
      label: "Employment status",
      kind: "select",
      options: applicable(dims.statuses, entity),
    },
    {
      name: "department",
      label: "Department",
      kind: "select",
      options: applicable(dims.departments, entity),
    },
    {
      name: "education_level",
      label: "Education level (optional)",
      kind: "select",
      options: applicable(dims.education_levels, entity),
      optional: true,
    },
  ];
}

/** Where to send the user after a successful save: the entity's lead report. */
const AFTER_SAVE: Record<string, { entity: string; dimension: string }> = {
  lecturer: { entity: "lecturer", dimension: "education" },
  employee: { entity: "employee", dimension: "status" },
};

export async function renderEntityForm(
  ctx: AppContext,
  entity: "lecturer" | "employee",
): Promise<HTMLElement> {
  const dims = await ctx.api.dimensions();
  const specs = fieldSpecs(entity, dims);

  const main = el("main", "form-view");
  main.append(el("h1", "", entity === "lecturer" ? "Add / edit lecturer" : "Add / edit employee"));
  const form = el("form", "entity-form");
  const inputs = new Map<string, HTMLInputElement | HTMLSelectElement>();
  const fieldErrors = new Map<string, HTMLElement>();

  for (const spec of specs) {
    const row = el("div", "form-row");
    row.dataset["field"] = spec.name;
    const label = el("label", "", spec.label);
    label.htmlFor = `field-${spec.name}`;
    let input: HTMLInputElement | HTMLSelectElement;
    if (spec.kind === "select") {
      input = el("select") as HTMLSelectElement;
      if (spec.optional) {
        const blank = el("option", "", "—") as HTMLOptionElement;
        blank.value = "";
        input.append(blank);
      }
      for (const option of spec.options ?? []) {
        const node = el("option", "", `${option.code} — ${option.label}`) as HTMLOptionElement;
        node.value = option.code;
        input.append(node);
      }
    } else {
      input = el("input") as HTMLInputElement;
      input.type = spec.kind;
    }
    input.id = `field-${spec.name}`;
    input.name = spec.name;
    inputs.set(spec.name, input);
    const errorSlot = el("span", "field-error");
    errorSlot.dataset["for"] = spec.name;
    fieldErrors.set(spec.name, errorSlot);
    row.append(label, input, errorSlot);
    form.append(row);
  }

  const submit = el("button", "", "Save");
  submit.type = "submit";
  const conflictPrompt = el("div", "conflict-prompt");
  const formError = el("p", "form-error");
  form.append(submit, conflictPrompt, formError);

  function currentRecord(): Record<string, string | null> {
    const record: Record<string, string | null> = {};
    for (const [name, input] of inputs) record[name] = input.value || null;
    return record;
  }

  function clearErrors(): void {
    for (const slot of fieldErrors.values()) slot.textContent = "";
    formError.textContent = "";
    conflictPrompt.replaceChildren();
  }

  async function save(replace: boolean): Promise<void> {
    clearErrors();
    try {
      await ctx.api.saveRecord(entity, currentRecord(), replace);
      ctx.invalidate(); // counts changed; cached charts are stale
      ctx.toast(`Saved ${entity} ${currentRecord()[`${entity}_id`] ?? ""}`.trim());
      const target = AFTER_SAVE[entity];
      if (target) {
        await ctx.navigate({ kind: "report", entity: target.entity, dimension: target.dimension });
      }
    } catch (error) {
      if (error instanceof MutationBlockedError) {
        formError.textContent = error.message;
        return;
      }
      if (error instanceof ApiError && error.status === 422 && error.body?.details) {
        for (const detail of error.body.details) {
          const slot = fieldErrors.get(detail.field);
          if (slot) slot.textContent = detail.message;
          else formError.textContent = detail.message;
        }
        return;
      }
      if (error instanceof ApiError && error.status === 409) {
        conflictPrompt.append(el("span", "", "This record already exists — edit it instead? "));
        const replaceButton = el("button", "replace-existing", "Replace existing");
        replaceButton.type = "button";
        replaceButton.addEventListener("click", () => void save(true));
        conflictPrompt.append(replaceButton);
        return;
      }
      throw error;
    }
  }

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void save(false).catch((error) => {
      formError.textContent = error instanceof Error ? error.message : String(error);
    });
  });

  main.append(form);
  return main;
}
