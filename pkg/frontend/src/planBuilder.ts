// Diet-plan editor: rows with gram inputs, live client-side totals that are
// display-only and must agree with the server's totals on save.

import type { Food, PlanEntry, Totals } from "./types.js";

export interface PlanRow {
  food_id: string;
  grams: number;
}

export interface PlanBuilderState {
  foods: Food[];
  rows: PlanRow[];
}

export function initPlanBuilder(foods: Food[]): PlanBuilderState {
  return { foods, rows: [] };
}

export function addRow(state: PlanBuilderState, foodId: string,
                       grams: number): PlanBuilderState {
  if (!state.foods.some((f) => f.food_id === foodId) || !(grams > 0)) {
    return state;
  }
  return { ...state, rows: [...state.rows, { food_id: foodId, grams }] };
}

export function removeRow(state: PlanBuilderState, index: number): PlanBuilderState {
  return { ...state, rows: state.rows.filter((_, i) => i !== index) };
}

/** Client-side recomputation of the linear totals (display only). */
export function clientTotals(state: PlanBuilderState): Totals {
  const totals: Totals = { kcal: 0, protein_g: 0, carbs_g: 0, fat_g: 0 };
  for (const row of state.rows) {
    const food = state.foods.find((f) => f.food_id === row.food_id)!;
    const scale = row.grams / 100;
    totals.kcal += scale * food.kcal_per_100g;
    totals.protein_g += scale * food.protein_g_per_100g;
    totals.carbs_g += scale * food.carbs_g_per_100g;
    totals.fat_g += scale * food.fat_g_per_100g;
  }
  return totals;
}

export function totalsAgree(client: Totals, server: Totals,
                            displayDecimals = 2): boolean {
  const tol = 0.5 * 10 ** -displayDecimals;
  return (Object.keys(client) as (keyof Totals)[]).every(
    (k) => Math.abs(client[k] - server[k]) <= tol);
}

export function toEntries(state: PlanBuilderState): PlanEntry[] {
  return state.rows.map((r) => ({ food_id: r.food_id, grams: r.grams }));
}

export function renderPlanBuilder(state: PlanBuilderState,
                                  exportUrl: string | null = null): string {
  const rows = state.rows.map((row, i) => {
    const food = state.foods.find((f) => f.food_id === row.food_id)!;
    return `<tr data-row="${i}"><td>${food.name}</td>` +
      `<td>${row.grams.toFixed(1)} g</td>` +
      `<td><button data-remove="${i}">remove</button></td></tr>`;
  }).join("");
  const t = clientTotals(state);
  const totals =
    `<tfoot><tr data-totals>` +
    `<td>kcal ${t.kcal.toFixed(2)}</td>` +
    `<td>protein ${t.protein_g.toFixed(2)} g | carbs ${t.carbs_g.toFixed(2)} g` +
    ` | fat ${t.fat_g.toFixed(2)} g</td><td></td></tr></tfoot>`;
  const selector = `<select data-food-picker>` +
    state.foods.map((f) => `<option value="${f.food_id}">${f.name}</option>`).join("") +
    `</select><input data-grams type="number" min="0.1" step="0.1" value="100">` +
    `<button data-add>add</button>`;
  const download = exportUrl
    ? `<a data-export href="${exportUrl}" download>Export plan</a>` : "";
  return `<section class="plan-builder">${selector}` +
    `<table><tbody>${rows}</tbody>${totals}</table>${download}</section>`;
}
