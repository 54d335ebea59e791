// Two-step predictor flow: habits -> obesity level, then level + height -> kg.

import { MofitClient } from "./api.js";
import { FormState, toPayload, validate } from "./schemaForm.js";
import type { ObesityPrediction } from "./types.js";

export interface PredictorState {
  step: 1 | 2;
  obesity?: ObesityPrediction;
  weightKg?: number;
  heightM?: string;
  fieldErrors: Record<string, string>;
  apiErrors: string[];
}

export function initialPredictorState(): PredictorState {
  return { step: 1, fieldErrors: {}, apiErrors: [] };
}

/** Step 1: submit habits.  Client validation failures never fire a request. */
export async function submitHabits(client: MofitClient, form: FormState,
                                   state: PredictorState): Promise<PredictorState> {
  const fieldErrors = validate(form);
  if (Object.keys(fieldErrors).length > 0) {
    return { ...state, fieldErrors, apiErrors: [] };
  }
  try {
    const obesity = await client.predictObesity(toPayload(form));
    return { step: 2, obesity, fieldErrors: {}, apiErrors: [] };
  } catch (err: any) {
    return { ...state, fieldErrors: {}, apiErrors: err.errors ?? [String(err)] };
  }
}

/** Step 2: the predicted level plus the entered height feed the regressor. */
export async function submitHeight(client: MofitClient, habitsForm: FormState,
                                   heightM: string,
                                   state: PredictorState): Promise<PredictorState> {
  if (!state.obesity) return state;
  const height = Number(heightM);
  if (!Number.isFinite(height) || height < 1.2 || height > 2.2) {
    return { ...state, heightM,
             fieldErrors: { Height: "height in meters, 1.2 to 2.2" } };
  }
  const payload = {
    ...toPayload(habitsForm),
    Height: height,
    NObeyesdad: state.obesity.label,
  };
  try {
    const res = await client.predictWeight(payload);
    return { ...state, heightM, weightKg: res.weight_kg, fieldErrors: {},
             apiErrors: [] };
  } catch (err: any) {
    return { ...state, heightM, fieldErrors: {},
             apiErrors: err.errors ?? [String(err)] };
  }
}

export function renderPrediction(state: PredictorState): string {
  const parts: string[] = [];
  if (state.obesity) {
    const probs = Object.entries(state.obesity.probabilities)
      .map(([label, p]) => `<li>${label}: ${(p * 100).toFixed(1)}%</li>`)
      .join("");
    parts.push(`<section class="obesity-result">` +
      `<h3>Predicted level: <strong>${state.obesity.label}</strong></h3>` +
      `<ul class="probabilities">${probs}</ul></section>`);
  }
  if (state.weightKg !== undefined) {
    parts.push(`<section class="weight-result">` +
      `<h3>Predicted weight: <strong>${state.weightKg.toFixed(1)} kg</strong></h3>` +
      `</section>`);
  }
  if (state.apiErrors.length > 0) {
    parts.push(`<ul class="api-errors">` +
      state.apiErrors.map((e) => `<li>${e}</li>`).join("") + `</ul>`);
  }
  return parts.join("\n");
}
