"""File-backed persistence with an append-only JSON-lines journal.

Every mutation is validated, appended to ``journal.jsonl`` (flushed and
fsynced), then applied to the in-memory state through the same code path
the startup replay uses.  A torn final line from a crash is ignored on
load.  A process-wide lock serializes writers; readers see plain dicts.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field
from datetime import date
from importlib import resources
from pathlib import Path

JOURNAL_NAME = "journal.jsonl"


class StoreError(ValueError):
    """Validation failure; carries an http-ish reason."""

    def __init__(self, message: str, kind: str = "invalid"):
        super().__init__(message)
        self.kind = kind  # invalid | not_found | conflict


def _require(condition: bool, message: str, kind: str = "invalid") -> None:
    if not condition:
        raise StoreError(message, kind)


def _parse_date(value: str, field_name: str) -> date:
    try:
        return date.fromisoformat(value)
    except (TypeError, ValueError):
        raise StoreError(f"{field_name}: not an ISO date: {value!r}") from None


def _positive_number(value, field_name: str) -> float:
    _require(isinstance(value, (int, float)) and not isinstance(value, bool),
             f"{field_name}: must be a number")
    value = float(value)
    _require(value > 0 and value == value and value not in (float("inf"), float("-inf")),
             f"{field_name}: must be finite and > 0")
    return value


def _macro_number(value, field_name: str) -> float:
    _require(isinstance(value, (int, float)) and not isinstance(value, bool),
             f"{field_name}: must be a number")
    value = float(value)
    _require(value >= 0 and value == value and value != float("inf"),
             f"{field_name}: must be finite and >= 0")
    return value


def load_food_seed() -> list[dict]:
    text = resources.files("mofit.service").joinpath("foods_seed.json").read_text()
    return json.loads(text)


def plan_totals(entries: list[dict], foods: dict[str, dict]) -> dict:
    totals = {"kcal": 0.0, "protein_g": 0.0, "carbs_g": 0.0, "fat_g": 0.0}
    for entry in entries:
        food = foods[entry["food_id"]]
        scale = entry["grams"] / 100.0
        totals["kcal"] += scale * food["kcal_per_100g"]
        totals["protein_g"] += scale * food["protein_g_per_100g"]
        totals["carbs_g"] += scale * food["carbs_g_per_100g"]
        totals["fat_g"] += scale * food["fat_g_per_100g"]
    return totals


def nutrition_for(grams: float, food: dict) -> dict:
    scale = grams / 100.0
    return {
        "grams": grams,
        "kcal": scale * food["kcal_per_100g"],
        "protein_g": scale * food["protein_g_per_100g"],
        "carbs_g": scale * food["carbs_g_per_100g"],
        "fat_g": scale * food["fat_g_per_100g"],
    }


@dataclass
class StoreState:
    users: dict[str, dict] = field(default_factory=dict)
    progress: dict[str, dict[str, float]] = field(default_factory=dict)
    plans: dict[str, dict] = field(default_factory=dict)
    foods: dict[str, dict] = field(default_factory=dict)
    devices: dict[str, dict] = field(default_factory=dict)
    readings: dict[str, list[dict]] = field(default_factory=dict)
    next_user: int = 1
    next_plan: int = 1


class Store:
    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.journal_path = self.data_dir / JOURNAL_NAME
        self._lock = threading.Lock()
        self.state = StoreState()
        for food in load_food_seed():
            self.state.foods[food["food_id"]] = dict(food)
        self._replay()
        self._journal = open(self.journal_path, "a", encoding="utf-8")

    # -- journal ------------------------------------------------------------

    def _replay(self) -> None:
        if not self.journal_path.exists():
            return
        with open(self.journal_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    event = json.loads(line)
                except json.JSONDecodeError:
                    break  # torn tail write; everything before it is intact
                self._apply(event)

    def _append(self, event: dict) -> None:
        self._journal.write(json.dumps(event, separators=(",", ":")) + "\n")
        self._journal.flush()
        os.fsync(self._journal.fileno())
        self._apply(event)

    def _apply(self, event: dict) -> None:
        kind = event["kind"]
        s = self.state
        if kind == "user":
            s.users[event["user_id"]] = event["profile"]
            s.progress.setdefault(event["user_id"], {})
            s.next_user = max(s.next_user, int(event["user_id"][1:]) + 1)
        elif kind == "progress":
            s.progress[event["user_id"]][event["date"]] = event["actual_weight_kg"]
        elif kind == "plan":
            s.plans[event["plan_id"]] = event["plan"]
            s.next_plan = max(s.next_plan, int(event["plan_id"][1:]) + 1)
        elif kind == "food":
            s.foods[event["food"]["food_id"]] = event["food"]
        elif kind == "device":
            s.devices.setdefault(event["device_id"], {"registered": True})
            s.readings.setdefault(event["device_id"], [])
        elif kind == "reading":
            s.readings[event["device_id"]].append(event["reading"])
        else:
            raise ValueError(f"unknown journal event {kind!r}")

    def close(self) -> None:
        self._journal.close()

    # -- users & progress ----------------------------------------------------

    def create_user(self, profile: dict) -> str:
        with self._lock:
            start_w = _positive_number(profile.get("start_weight_kg"), "start_weight_kg")
            goal_w = _positive_number(profile.get("goal_weight_kg"), "goal_weight_kg")
            start_d = _parse_date(profile.get("start_date"), "start_date")
            goal_d = _parse_date(profile.get("goal_date"), "goal_date")
            _require(start_d < goal_d, "start_date must precede goal_date")
            user_id = f"u{self.state.next_user}"
            self._append({"kind": "user", "user_id": user_id, "profile": {
                "user_id": user_id,
                "start_weight_kg": start_w, "goal_weight_kg": goal_w,
                "start_date": start_d.isoformat(), "goal_date": goal_d.isoformat(),
            }})
            return user_id

    def get_user(self, user_id: str) -> dict:
        user = self.state.users.get(user_id)
        _require(user is not None, f"unknown user {user_id!r}", "not_found")
        return user

    def add_progress(self, user_id: str, entry: dict) -> None:
        with self._lock:
            user = self.get_user(user_id)
            d = _parse_date(entry.get("date"), "date")
            weight = _positive_number(entry.get("actual_weight_kg"), "actual_weight_kg")
            start_d = date.fromisoformat(user["start_date"])
            goal_d = date.fromisoformat(user["goal_date"])
            _require(start_d <= d <= goal_d,
                     f"date {d.isoformat()} outside [{user['start_date']}, {user['goal_date']}]")
            _require(d.isoformat() not in self.state.progress[user_id],
                     f"duplicate entry for {d.isoformat()}", "conflict")
            self._append({"kind": "progress", "user_id": user_id,
                          "date": d.isoformat(), "actual_weight_kg": weight})

    def progress_series(self, user_id: str) -> dict:
        user = self.get_user(user_id)
        entries = sorted(self.state.progress.get(user_id, {}).items())
        start_d = date.fromisoformat(user["start_date"])
        goal_d = date.fromisoformat(user["goal_date"])
        span = (goal_d - start_d).days
        dates = [d for d, _ in entries]
        actual = [w for _, w in entries]
        target = []
        for d in dates:
            t = (date.fromisoformat(d) - start_d).days / span
            target.append(user["start_weight_kg"]
                          + t * (user["goal_weight_kg"] - user["start_weight_kg"]))
        series = {
            "user_id": user_id,
            "start_weight_kg": user["start_weight_kg"],
            "goal_weight_kg": user["goal_weight_kg"],
            "start_date": user["start_date"],
            "goal_date": user["goal_date"],
            "dates": dates,
            "actual": actual,
            "target": target,
        }
        if actual:
            series["final_gap_kg"] = actual[-1] - target[-1]
        return series

    # -- foods & plans ---------------------------------------------------------

    def list_foods(self) -> list[dict]:
        return sorted(self.state.foods.values(), key=lambda f: f["food_id"])

    def get_food(self, food_id: str) -> dict:
        food = self.state.foods.get(food_id)
        _require(food is not None, f"unknown food {food_id!r}", "not_found")
        return food

    def add_food(self, food: dict) -> dict:
        with self._lock:
            food_id = food.get("food_id")
            _require(isinstance(food_id, str) and food_id, "food_id: required")
            name = food.get("name")
            _require(isinstance(name, str) and name, "name: required")
            record = {"food_id": food_id, "name": name}
            for key in ("kcal_per_100g", "protein_g_per_100g",
                        "carbs_g_per_100g", "fat_g_per_100g"):
                record[key] = _macro_number(food.get(key), key)
            self._append({"kind": "food", "food": record})
            return record

    def create_plan(self, user_id: str, entries: list[dict]) -> dict:
        with self._lock:
            self.get_user(user_id)
            _require(bool(entries), "plan needs at least one entry")
            normalized = []
            for i, entry in enumerate(entries):
                food_id = entry.get("food_id")
                food = self.state.foods.get(food_id)
                _require(food is not None, f"entries[{i}]: unknown food {food_id!r}",
                         "not_found")
                grams = _positive_number(entry.get("grams"), f"entries[{i}].grams")
                normalized.append({"food_id": food_id, "grams": grams})
            plan_id = f"p{self.state.next_plan}"
            plan = {
                "plan_id": plan_id,
                "user_id": user_id,
                "entries": normalized,
                "totals": plan_totals(normalized, self.state.foods),
            }
            self._append({"kind": "plan", "plan_id": plan_id, "plan": plan})
            return plan

    def get_plan(self, plan_id: str) -> dict:
        plan = self.state.plans.get(plan_id)
        _require(plan is not None, f"unknown plan {plan_id!r}", "not_found")
        return plan

    def export_plan(self, plan_id: str) -> dict:
        plan = self.get_plan(plan_id)
        lines = []
        for entry in plan["entries"]:
            food = self.get_food(entry["food_id"])
            lines.append({
                "food_id": entry["food_id"],
                "name": food["name"],
                "grams": entry["grams"],
                **{k: v for k, v in nutrition_for(entry["grams"], food).items()
                   if k != "grams"},
            })
        return {
            "format": "mofit-diet-plan",
            "version": 1,
            "plan_id": plan_id,
            "user_id": plan["user_id"],
            "items": lines,
            "totals": plan["totals"],
        }

    # -- scale -----------------------------------------------------------------

    def register_device(self, device_id: str) -> None:
        with self._lock:
            _require(isinstance(device_id, str) and device_id, "device_id: required")
            if device_id not in self.state.devices:
                self._append({"kind": "device", "device_id": device_id})

    def add_reading(self, device_id: str, grams, timestamp) -> dict:
        with self._lock:
            _require(device_id in self.state.devices,
                     f"unknown device {device_id!r}", "not_found")
            _require(isinstance(grams, (int, float)) and not isinstance(grams, bool),
                     "grams: must be a number")
            grams = float(grams)
            _require(grams >= 0 and grams == grams and grams != float("inf"),
                     "grams: must be finite and >= 0")
            _require(isinstance(timestamp, (int, float)) and not isinstance(timestamp, bool),
                     "timestamp: must be a unix time number")
            timestamp = float(timestamp)
            history = self.state.readings[device_id]
            if history and timestamp <= history[-1]["timestamp"]:
                raise StoreError(
                    f"non-monotone timestamp {timestamp} (last {history[-1]['timestamp']})",
                    "conflict")
            reading = {"device_id": device_id, "grams": grams, "timestamp": timestamp}
            self._append({"kind": "reading", "device_id": device_id,
                          "reading": reading})
            return reading

    def latest_reading(self, device_id: str) -> dict:
        _require(device_id in self.state.devices,
                 f"unknown device {device_id!r}", "not_found")
        history = self.state.readings.get(device_id, [])
        _require(bool(history), f"no readings for {device_id!r}", "not_found")
        return history[-1]
