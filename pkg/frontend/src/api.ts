// Thin JSON client; every number of record comes from these responses.

import type {
  ApiDescription, Food, ObesityPrediction, Plan, PlanEntry, ProgressSeries,
  ScaleNutrition, ScaleReading, WeightPrediction,
} from "./types.js";

export class ApiError extends Error {
  status: number;
  errors: string[];

  constructor(status: number, errors: string[]) {
    super(errors.join("; ") || `request failed (${status})`);
    this.status = status;
    this.errors = errors;
  }
}

async function request<T>(base: string, path: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(base + path, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  if (!resp.ok) {
    let errors: string[] = [];
    try {
      const body = await resp.json();
      const detail = body?.detail;
      if (Array.isArray(detail?.errors)) errors = detail.errors;
      else if (typeof detail === "string") errors = [detail];
      else errors = [JSON.stringify(detail ?? body)];
    } catch {
      errors = [`http ${resp.status}`];
    }
    throw new ApiError(resp.status, errors);
  }
  return (await resp.json()) as T;
}

export class MofitClient {
  constructor(readonly baseUrl: string) {}

  get<T>(path: string): Promise<T> {
    return request<T>(this.baseUrl, path);
  }

  post<T>(path: string, payload: unknown): Promise<T> {
    return request<T>(this.baseUrl, path, {
      method: "POST",
      body: JSON.stringify(payload),
    });
  }

  description(): Promise<ApiDescription> {
    return this.get("/api-description");
  }

  predictObesity(payload: Record<string, unknown>): Promise<ObesityPrediction> {
    return this.post("/predict/obesity", payload);
  }

  predictWeight(payload: Record<string, unknown>): Promise<WeightPrediction> {
    return this.post("/predict/weight", payload);
  }

  createUser(profile: Record<string, unknown>): Promise<{ user_id: string }> {
    return this.post("/users", profile);
  }

  addProgress(userId: string, date: string, weightKg: number): Promise<unknown> {
    return this.post(`/users/${userId}/progress`, {
      date, actual_weight_kg: weightKg,
    });
  }

  progress(userId: string): Promise<ProgressSeries> {
    return this.get(`/users/${userId}/progress`);
  }

  foods(): Promise<{ foods: Food[] }> {
    return this.get("/foods");
  }

  createPlan(userId: string, entries: PlanEntry[]): Promise<Plan> {
    return this.post("/plans", { user_id: userId, entries });
  }

  planExportUrl(planId: string): string {
    return `${this.baseUrl}/plans/${planId}/export`;
  }

  latestReading(deviceId: string): Promise<ScaleReading> {
    return this.get(`/scale/${deviceId}/latest`);
  }

  scaleNutrition(deviceId: string, foodId: string): Promise<ScaleNutrition> {
    return this.get(`/scale/${deviceId}/nutrition?food=${encodeURIComponent(foodId)}`);
  }
}
