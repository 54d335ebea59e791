// Live scale readout: poll the latest reading at 1 Hz and show the macros
// for the selected food; every displayed number comes from the API.

import { MofitClient } from "./api.js";
import type { ScaleNutrition, ScaleReading } from "./types.js";

export const POLL_INTERVAL_MS = 1000;

export interface ScaleViewState {
  deviceId: string;
  foodId: string;
  reading: ScaleReading | null;
  nutrition: ScaleNutrition | null;
  error: string | null;
}

export function initScaleView(deviceId: string, foodId: string): ScaleViewState {
  return { deviceId, foodId, reading: null, nutrition: null, error: null };
}

export async function pollOnce(client: MofitClient,
                               state: ScaleViewState): Promise<ScaleViewState> {
  try {
    const reading = await client.latestReading(state.deviceId);
    const nutrition = await client.scaleNutrition(state.deviceId, state.foodId);
    return { ...state, reading, nutrition, error: null };
  } catch (err: any) {
    return { ...state, error: err.message ?? String(err) };
  }
}

export function startPolling(client: MofitClient, state: ScaleViewState,
                             onUpdate: (s: ScaleViewState) => void,
                             setIntervalFn = setInterval): () => void {
  let current = state;
  const tick = async () => {
    current = await pollOnce(client, current);
    onUpdate(current);
  };
  void tick();
  const handle = setIntervalFn(tick, POLL_INTERVAL_MS);
  return () => clearInterval(handle as ReturnType<typeof setInterval>);
}

export function renderScaleView(state: ScaleViewState): string {
  if (state.error) {
    return `<section class="scale-view">` +
      `<p class="error">${state.error}</p>` +
      `<button data-retry>retry</button></section>`;
  }
  if (!state.reading || !state.nutrition) {
    return `<section class="scale-view"><p>Waiting for a reading…</p></section>`;
  }
  const n = state.nutrition;
  return `<section class="scale-view">` +
    `<p data-grams>${state.reading.grams.toFixed(1)} g of ${n.food_id}</p>` +
    `<ul class="macros">` +
    `<li data-kcal>${n.kcal.toFixed(2)} kcal</li>` +
    `<li data-fat>${n.fat_g.toFixed(2)} g fat</li>` +
    `<li data-protein>${n.protein_g.toFixed(2)} g protein</li>` +
    `<li data-carbs>${n.carbs_g.toFixed(2)} g carbohydrates</li>` +
    `</ul></section>`;
}
