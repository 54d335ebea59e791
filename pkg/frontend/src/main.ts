// Browser wiring: four panels over the service API.

import { MofitClient } from "./api.js";
import { renderDashboard, toDashboardView } from "./dashboard.js";
import { addRow, clientTotals, initPlanBuilder, removeRow, renderPlanBuilder,
         toEntries, totalsAgree } from "./planBuilder.js";
import { initialPredictorState, renderPrediction, submitHabits,
         submitHeight } from "./predictor.js";
import { emptyForm, renderForm, setValue } from "./schemaForm.js";
import { initScaleView, renderScaleView, startPolling } from "./scaleView.js";

const BASE_URL = (window as any).MOFIT_SERVICE_URL ?? "http://127.0.0.1:8000";
const client = new MofitClient(BASE_URL);

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

async function wirePredictor() {
  const description = await client.description();
  let form = emptyForm(description.predictors["obesity_level"].fields);
  let state = initialPredictorState();
  const formHost = el("predictor-form");
  const resultHost = el("predictor-result");

  const redraw = (errors: Record<string, string> = {}) => {
    formHost.innerHTML = renderForm(form, errors) +
      `<button id="predict-obesity">Predict level</button>` +
      (state.step === 2
        ? `<label>Height (m)<input id="height-m" type="number" step="0.01"></label>` +
          `<button id="predict-weight">Predict weight</button>`
        : "");
    resultHost.innerHTML = renderPrediction(state);
    formHost.querySelectorAll("input[name], select[name]").forEach((node) => {
      node.addEventListener("change", (ev) => {
        const target = ev.target as HTMLInputElement;
        form = setValue(form, target.name, target.value);
      });
    });
    el("predict-obesity").addEventListener("click", async () => {
      state = await submitHabits(client, form, state);
      redraw(state.fieldErrors);
    });
    const weightBtn = document.getElementById("predict-weight");
    weightBtn?.addEventListener("click", async () => {
      const height = (document.getElementById("height-m") as HTMLInputElement).value;
      state = await submitHeight(client, form, height, state);
      redraw(state.fieldErrors);
    });
  };
  redraw();
}

async function wireDashboard() {
  const host = el("dashboard");
  const userInput = el("dashboard-user") as HTMLInputElement;
  el("dashboard-load").addEventListener("click", async () => {
    try {
      const series = await client.progress(userInput.value.trim());
      host.innerHTML = renderDashboard(toDashboardView(series));
    } catch (err: any) {
      host.innerHTML = `<p class="error">${err.message}</p>`;
    }
  });
}

async function wirePlanBuilder() {
  const { foods } = await client.foods();
  let state = initPlanBuilder(foods);
  let exportUrl: string | null = null;
  const host = el("plan-builder");

  const redraw = () => {
    host.innerHTML = renderPlanBuilder(state, exportUrl) +
      `<button id="save-plan">Save plan</button><span id="plan-status"></span>`;
    host.querySelector("[data-add]")?.addEventListener("click", () => {
      const picker = host.querySelector("[data-food-picker]") as HTMLSelectElement;
      const grams = Number((host.querySelector("[data-grams]") as HTMLInputElement).value);
      state = addRow(state, picker.value, grams);
      redraw();
    });
    host.querySelectorAll("[data-remove]").forEach((btn) => {
      btn.addEventListener("click", () => {
        state = removeRow(state, Number((btn as HTMLElement).dataset.remove));
        redraw();
      });
    });
    document.getElementById("save-plan")?.addEventListener("click", async () => {
      const status = document.getElementById("plan-status")!;
      try {
        const user = await client.createUser({
          start_weight_kg: 90, goal_weight_kg: 85,
          start_date: "2024-01-01", goal_date: "2024-06-01",
        });
        const plan = await client.createPlan(user.user_id, toEntries(state));
        const agree = totalsAgree(clientTotals(state), plan.totals);
        exportUrl = client.planExportUrl(plan.plan_id);
        status.textContent = agree
          ? `saved ${plan.plan_id} (totals verified)`
          : `saved ${plan.plan_id} (server totals differ!)`;
        redraw();
      } catch (err: any) {
        status.textContent = err.message;
      }
    });
  };
  redraw();
}

function wireScaleView() {
  const host = el("scale-view");
  const device = (el("scale-device") as HTMLInputElement);
  const food = (el("scale-food") as HTMLInputElement);
  let stop: (() => void) | null = null;
  el("scale-start").addEventListener("click", () => {
    stop?.();
    const state = initScaleView(device.value.trim(), food.value.trim());
    stop = startPolling(client, state, (s) => {
      host.innerHTML = renderScaleView(s);
      host.querySelector("[data-retry]")?.addEventListener("click", () => {
        stop?.();
        wireScaleView();
      });
    });
  });
}

window.addEventListener("DOMContentLoaded", () => {
  void wirePredictor();
  void wireDashboard();
  void wirePlanBuilder();
  wireScaleView();
});
