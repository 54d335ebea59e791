// API payload shapes, mirroring the service's versioned description.

export interface FieldSpec {
  name: string;
  encoding: "numeric" | "binary" | "ordinal" | "one_hot";
  categories: string[];
  lo: number | null;
  hi: number | null;
}

export interface PredictorSpec {
  path: string;
  fields: FieldSpec[];
  output: Record<string, string>;
}

export interface ApiDescription {
  format: string;
  version: number;
  service_version: string;
  bundle_hash: string;
  predictors: Record<string, PredictorSpec>;
  endpoints: string[];
}

export interface ObesityPrediction {
  label: string;
  class_index: number;
  probabilities: Record<string, number>;
  bundle_hash: string;
}

export interface WeightPrediction {
  weight_kg: number;
  bundle_hash: string;
}

export interface ProgressSeries {
  user_id: string;
  start_weight_kg: number;
  goal_weight_kg: number;
  start_date: string;
  goal_date: string;
  dates: string[];
  actual: number[];
  target: number[];
  final_gap_kg?: number;
}

export interface Food {
  food_id: string;
  name: string;
  kcal_per_100g: number;
  protein_g_per_100g: number;
  carbs_g_per_100g: number;
  fat_g_per_100g: number;
}

export interface Totals {
  kcal: number;
  protein_g: number;
  carbs_g: number;
  fat_g: number;
}

export interface PlanEntry {
  food_id: string;
  grams: number;
}

export interface Plan {
  plan_id: string;
  user_id: string;
  entries: PlanEntry[];
  totals: Totals;
}

export interface ScaleReading {
  device_id: string;
  grams: number;
  timestamp: number;
}

export interface ScaleNutrition extends Totals {
  device_id: string;
  food_id: string;
  grams: number;
  timestamp: number;
}
