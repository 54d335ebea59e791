// Schema-driven form state: fields and options come only from the served
// description, so a server-side category change needs no UI change.

import type { FieldSpec } from "./types.js";

export interface FormState {
  fields: FieldSpec[];
  values: Record<string, string>;
}

export function emptyForm(fields: FieldSpec[]): FormState {
  const values: Record<string, string> = {};
  for (const f of fields) values[f.name] = "";
  return { fields, values };
}

export function setValue(form: FormState, name: string, value: string): FormState {
  return { fields: form.fields, values: { ...form.values, [name]: value } };
}

/** Client-side validation errors, keyed by field; no request is fired while
 * any are present. */
export function validate(form: FormState): Record<string, string> {
  const errors: Record<string, string> = {};
  for (const f of form.fields) {
    const raw = (form.values[f.name] ?? "").trim();
    if (raw === "") {
      errors[f.name] = "required";
      continue;
    }
    if (f.encoding === "numeric") {
      const num = Number(raw);
      if (!Number.isFinite(num)) errors[f.name] = "must be a number";
      else if (f.lo !== null && num < f.lo) errors[f.name] = `minimum ${f.lo}`;
      else if (f.hi !== null && num > f.hi) errors[f.name] = `maximum ${f.hi}`;
    } else if (!f.categories.includes(raw)) {
      errors[f.name] = `choose one of: ${f.categories.join(", ")}`;
    }
  }
  return errors;
}

/** Typed payload for the prediction endpoints. */
export function toPayload(form: FormState): Record<string, unknown> {
  const payload: Record<string, unknown> = {};
  for (const f of form.fields) {
    const raw = form.values[f.name];
    payload[f.name] = f.encoding === "numeric" ? Number(raw) : raw;
  }
  return payload;
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderForm(form: FormState,
                           errors: Record<string, string> = {}): string {
  const rows = form.fields.map((f) => {
    const err = errors[f.name]
      ? `<span class="error" data-error-for="${esc(f.name)}">${esc(errors[f.name])}</span>`
      : "";
    if (f.encoding === "numeric") {
      const bounds = f.lo !== null && f.hi !== null
        ? ` min="${f.lo}" max="${f.hi}" step="any"` : "";
      return `<label>${esc(f.name)}<input type="number" name="${esc(f.name)}"` +
        ` value="${esc(form.values[f.name] ?? "")}"${bounds}></label>${err}`;
    }
    const options = f.categories.map((c) => {
      const sel = form.values[f.name] === c ? " selected" : "";
      return `<option value="${esc(c)}"${sel}>${esc(c)}</option>`;
    }).join("");
    return `<label>${esc(f.name)}<select name="${esc(f.name)}">` +
      `<option value=""></option>${options}</select></label>${err}`;
  });
  return `<fieldset>${rows.join("\n")}</fieldset>`;
}
