"""HTTP API behavior: predictions, tracking, plans, scale, persistence."""

import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mofit.service import Store, StoreError, load_food_seed, plan_totals
from tests.conftest import valid_payload_for

OATS_MACROS = {"kcal": 363.0, "fat_g": 7.0, "protein_g": 10.3, "carbs_g": 60.5}


class TestHealthAndDescription:
    def test_healthz(self, service_client):
        body = service_client.get("/healthz").json()
        assert body["status"] == "ok" and body["bundle_hash"]

    def test_api_description_serves_schema_fields(self, service_client):
        desc = service_client.get("/api-description").json()
        assert desc["format"] == "mofit-api" and desc["version"] == 1
        obesity = desc["predictors"]["obesity_level"]["fields"]
        names = [f["name"] for f in obesity]
        assert "CALC" in names and "Weight" not in names and "Height" not in names
        calc = next(f for f in obesity if f["name"] == "CALC")
        assert set(calc["categories"]) == {"no", "Sometimes", "Frequently", "Always"}


class TestPredictions:
    def test_obesity_prediction_contract(self, service_client):
        payload = valid_payload_for(service_client, "obesity_level")
        body = service_client.post("/predict/obesity", json=payload).json()
        assert body["label"] in body["probabilities"]
        assert sum(body["probabilities"].values()) == pytest.approx(1.0, abs=1e-9)
        assert 0 <= body["class_index"] < 7

    def test_two_step_flow(self, service_client):
        habits = valid_payload_for(service_client, "obesity_level")
        level = service_client.post("/predict/obesity", json=habits).json()["label"]
        wp = valid_payload_for(service_client, "body_weight")
        wp.update(habits)
        wp["Height"] = 1.76
        wp["NObeyesdad"] = level
        body = service_client.post("/predict/weight", json=wp).json()
        assert 30.0 < body["weight_kg"] < 180.0

    def test_replay_determinism(self, service_client):
        payload = valid_payload_for(service_client, "obesity_level")
        r1 = service_client.post("/predict/obesity", json=payload)
        r2 = service_client.post("/predict/obesity", json=payload)
        assert r1.content == r2.content
        bp = valid_payload_for(service_client, "body_fat")
        b1 = service_client.post("/predict/bodyfat", json=bp)
        b2 = service_client.post("/predict/bodyfat", json=bp)
        assert b1.content == b2.content

    def test_field_level_errors(self, service_client):
        payload = valid_payload_for(service_client, "obesity_level")
        del payload["FAF"]
        payload["CAEC"] = "Constantly"
        payload["Age"] = 500
        r = service_client.post("/predict/obesity", json=payload)
        assert r.status_code == 422
        errors = r.json()["detail"]["errors"]
        assert any("FAF: missing field" in e for e in errors)
        assert any("CAEC" in e for e in errors)
        assert any("Age" in e and "maximum" in e for e in errors)

    def test_weight_height_range(self, service_client):
        wp = valid_payload_for(service_client, "body_weight")
        wp["Height"] = 3.5
        r = service_client.post("/predict/weight", json=wp)
        assert r.status_code == 422
        assert any("Height" in e for e in r.json()["detail"]["errors"])

    def test_bodyfat_prediction_in_band(self, service_client, bodyfat_reg):
        fields = [f["name"] for f in service_client.get("/api-description").json()
                  ["predictors"]["body_fat"]["fields"]]
        row = {name: float(bodyfat_reg.X[0][bodyfat_reg.feature_names.index(name)])
               for name in fields}
        body = service_client.post("/predict/bodyfat", json=row).json()
        assert 0.0 < body["bodyfat_percent"] < 60.0
        assert body["clamped"] is False

    def test_bodyfat_clamp_and_warning(self, stub_bundle, tmp_path):
        # swap in a constant out-of-range model to force the clamp path
        from fastapi.testclient import TestClient
        from mofit.service import make_app
        import numpy as np
        app = make_app(stub_bundle, tmp_path / "svc2")
        loaded = app.state.registry.models["body_fat"]

        class Constant75:
            n_features = loaded.model.n_features
            task = "regression"

            def predict_batch(self, X):
                return np.full(X.shape[0], 75.0)

        loaded.model = Constant75()
        client = TestClient(app)
        payload = valid_payload_for(client, "body_fat")
        body = client.post("/predict/bodyfat", json=payload).json()
        assert body["bodyfat_percent"] == 60.0
        assert body["clamped"] is True and "clamped" in body["warning"]


class TestProgress:
    def make_user(self, client, start="2021-03-01", goal="2021-03-29",
                  start_w=100.0, goal_w=80.0):
        r = client.post("/users", json={
            "start_weight_kg": start_w, "goal_weight_kg": goal_w,
            "start_date": start, "goal_date": goal})
        assert r.status_code == 201
        return r.json()["user_id"]

    def test_tracker_scenario(self, service_client):
        uid = self.make_user(service_client)
        weights = [("2021-03-01", 100.0), ("2021-03-08", 96.0), ("2021-03-15", 92.0),
                   ("2021-03-22", 89.0), ("2021-03-29", 86.0)]
        for d, w in weights:
            assert service_client.post(f"/users/{uid}/progress",
                                       json={"date": d, "actual_weight_kg": w}
                                       ).status_code == 201
        series = service_client.get(f"/users/{uid}/progress").json()
        assert series["target"] == [100.0, 95.0, 90.0, 85.0, 80.0]
        assert series["actual"] == [w for _, w in weights]
        assert series["final_gap_kg"] == pytest.approx(6.0, abs=1e-9)

    def test_target_is_affine(self, service_client):
        uid = self.make_user(service_client, start="2021-01-01", goal="2021-02-26")
        dates = ["2021-01-01", "2021-01-15", "2021-01-29", "2021-02-12", "2021-02-26"]
        for d in dates:
            service_client.post(f"/users/{uid}/progress",
                                json={"date": d, "actual_weight_kg": 90.0})
        target = service_client.get(f"/users/{uid}/progress").json()["target"]
        second_diffs = np.diff(np.diff(target))
        assert np.all(np.abs(second_diffs) < 1e-9)

    def test_entry_on_start_date_equals_start_weight(self, service_client):
        uid = self.make_user(service_client)
        service_client.post(f"/users/{uid}/progress",
                            json={"date": "2021-03-01", "actual_weight_kg": 99.5})
        series = service_client.get(f"/users/{uid}/progress").json()
        assert series["target"][0] == 100.0

    def test_errors(self, service_client):
        uid = self.make_user(service_client)
        assert service_client.get("/users/u999/progress").status_code == 404
        ok = {"date": "2021-03-05", "actual_weight_kg": 97.0}
        assert service_client.post(f"/users/{uid}/progress", json=ok).status_code == 201
        dup = service_client.post(f"/users/{uid}/progress", json=ok)
        assert dup.status_code == 409
        outside = service_client.post(f"/users/{uid}/progress",
                                      json={"date": "2021-05-01",
                                            "actual_weight_kg": 97.0})
        assert outside.status_code == 422
        bad_profile = service_client.post("/users", json={
            "start_weight_kg": 90.0, "goal_weight_kg": 80.0,
            "start_date": "2021-06-01", "goal_date": "2021-05-01"})
        assert bad_profile.status_code == 422


class TestPlans:
    def make_user(self, client):
        return client.post("/users", json={
            "start_weight_kg": 90.0, "goal_weight_kg": 85.0,
            "start_date": "2021-01-01", "goal_date": "2021-03-01"}).json()["user_id"]

    def test_oats_exact(self, service_client):
        uid = self.make_user(service_client)
        plan = service_client.post("/plans", json={
            "user_id": uid, "entries": [{"food_id": "oats", "grams": 100.0}]}).json()
        assert plan["totals"]["kcal"] == 363.0
        assert plan["totals"]["fat_g"] == 7.0
        assert plan["totals"]["protein_g"] == 10.3
        assert plan["totals"]["carbs_g"] == 60.5

    def test_linearity(self, service_client):
        uid = self.make_user(service_client)
        plan = service_client.post("/plans", json={
            "user_id": uid, "entries": [{"food_id": "oats", "grams": 100.0},
                                        {"food_id": "oats", "grams": 150.0}]}).json()
        for key, base in OATS_MACROS.items():
            assert plan["totals"][key] == pytest.approx(2.5 * base, abs=1e-9)

    def test_validation(self, service_client):
        uid = self.make_user(service_client)
        assert service_client.post("/plans", json={
            "user_id": uid, "entries": []}).status_code == 422
        assert service_client.post("/plans", json={
            "user_id": uid,
            "entries": [{"food_id": "oats", "grams": 0.0}]}).status_code == 422
        assert service_client.post("/plans", json={
            "user_id": uid,
            "entries": [{"food_id": "unobtanium", "grams": 10.0}]}).status_code == 404
        assert service_client.post("/plans", json={
            "user_id": "u404",
            "entries": [{"food_id": "oats", "grams": 10.0}]}).status_code == 404

    def test_export_document(self, service_client):
        uid = self.make_user(service_client)
        plan = service_client.post("/plans", json={
            "user_id": uid, "entries": [{"food_id": "oats", "grams": 50.0},
                                        {"food_id": "banana", "grams": 120.0}]}).json()
        r = service_client.get(f"/plans/{plan['plan_id']}/export")
        assert "attachment" in r.headers["content-disposition"]
        doc = json.loads(r.content)
        assert doc["format"] == "mofit-diet-plan" and doc["version"] == 1
        recomputed = {k: sum(item[k] for item in doc["items"])
                      for k in ("kcal", "protein_g", "carbs_g", "fat_g")}
        for k, v in recomputed.items():
            assert doc["totals"][k] == pytest.approx(v, abs=1e-9)

    def test_food_admin_endpoint(self, service_client):
        new_food = {"food_id": "dragonfruit", "name": "Dragonfruit",
                    "kcal_per_100g": 60.0, "protein_g_per_100g": 1.2,
                    "carbs_g_per_100g": 13.0, "fat_g_per_100g": 0.4}
        assert service_client.post("/foods", json=new_food).status_code == 201
        foods = service_client.get("/foods").json()["foods"]
        assert any(f["food_id"] == "dragonfruit" for f in foods)

    def test_seed_has_enough_staples(self):
        seed = load_food_seed()
        assert len(seed) >= 20
        oats = next(f for f in seed if f["food_id"] == "oats")
        assert (oats["kcal_per_100g"], oats["fat_g_per_100g"],
                oats["protein_g_per_100g"], oats["carbs_g_per_100g"]) == \
            (363.0, 7.0, 10.3, 60.5)


class TestServeCLI:
    def test_write_api_description(self, stub_bundle, tmp_path):
        from mofit.service.cli import main as serve_main
        out = tmp_path / "api.json"
        rc = serve_main(["--bundle", str(stub_bundle),
                         "--data-dir", str(tmp_path / "svc"),
                         "--write-api-description", str(out)])
        assert rc == 0
        doc = json.loads(out.read_text())
        assert doc["format"] == "mofit-api" and doc["version"] == 1
        assert set(doc["predictors"]) == {"obesity_level", "body_weight", "body_fat"}


class TestScaleEndpoints:
    def test_flow_and_errors(self, service_client):
        c = service_client
        assert c.post("/scale/readings", json={
            "device_id": "ghost", "grams": 1.0, "timestamp": 1.0}).status_code == 404
        assert c.post("/scale/devices", json={"device_id": "dev-1"}).status_code == 201
        assert c.post("/scale/readings", json={
            "device_id": "dev-1", "grams": 100.0, "timestamp": 10.0}).status_code == 201
        assert c.post("/scale/readings", json={
            "device_id": "dev-1", "grams": 90.0, "timestamp": 10.0}).status_code == 409
        assert c.get("/scale/dev-1/latest").json()["grams"] == 100.0
        assert c.get("/scale/none/latest").status_code == 404
        nut = c.get("/scale/dev-1/nutrition", params={"food": "oats"}).json()
        for key, value in OATS_MACROS.items():
            assert nut[key] == value
        assert c.get("/scale/dev-1/nutrition",
                     params={"food": "unicorn"}).status_code == 404

    def test_zero_mass_zero_macros(self, service_client):
        c = service_client
        c.post("/scale/devices", json={"device_id": "dev-0"})
        c.post("/scale/readings", json={"device_id": "dev-0", "grams": 0.0,
                                        "timestamp": 5.0})
        nut = c.get("/scale/dev-0/nutrition", params={"food": "oats"}).json()
        assert (nut["kcal"], nut["protein_g"], nut["carbs_g"], nut["fat_g"]) == \
            (0.0, 0.0, 0.0, 0.0)

    def test_reading_scaled_macros(self, service_client):
        c = service_client
        c.post("/scale/devices", json={"device_id": "dev-2"})
        c.post("/scale/readings", json={"device_id": "dev-2", "grams": 250.0,
                                        "timestamp": 1.0})
        nut = c.get("/scale/dev-2/nutrition", params={"food": "oats"}).json()
        assert nut["kcal"] == pytest.approx(907.5, abs=1e-9)
        assert nut["fat_g"] == pytest.approx(17.5, abs=1e-9)
        assert nut["protein_g"] == pytest.approx(25.75, abs=1e-9)
        assert nut["carbs_g"] == pytest.approx(151.25, abs=1e-9)


class TestStoreDirect:
    @given(st.lists(st.tuples(st.sampled_from(["oats", "banana", "almonds"]),
                              st.floats(0.1, 500.0)), min_size=1, max_size=6))
    @settings(max_examples=40, deadline=None)
    def test_totals_linear_in_entries(self, entries):
        foods = {f["food_id"]: f for f in load_food_seed()}
        plan_entries = [{"food_id": fid, "grams": g} for fid, g in entries]
        totals = plan_totals(plan_entries, foods)
        manual = {"kcal": 0.0, "protein_g": 0.0, "carbs_g": 0.0, "fat_g": 0.0}
        for fid, grams in entries:
            f = foods[fid]
            manual["kcal"] += grams / 100.0 * f["kcal_per_100g"]
            manual["protein_g"] += grams / 100.0 * f["protein_g_per_100g"]
            manual["carbs_g"] += grams / 100.0 * f["carbs_g_per_100g"]
            manual["fat_g"] += grams / 100.0 * f["fat_g_per_100g"]
        for key in manual:
            assert totals[key] == pytest.approx(manual[key], abs=1e-9)

    def test_persistence_roundtrip(self, tmp_path):
        store = Store(tmp_path)
        uid = store.create_user({"start_weight_kg": 100, "goal_weight_kg": 80,
                                 "start_date": "2021-03-01",
                                 "goal_date": "2021-03-29"})
        store.add_progress(uid, {"date": "2021-03-08", "actual_weight_kg": 96})
        plan = store.create_plan(uid, [{"food_id": "oats", "grams": 100}])
        store.register_device("d1")
        store.add_reading("d1", 42.0, 1.0)
        store.close()

        clone = Store(tmp_path)
        assert clone.get_user(uid) == store.get_user(uid)
        assert clone.progress_series(uid) == store.progress_series(uid)
        assert clone.get_plan(plan["plan_id"]) == plan
        assert clone.latest_reading("d1") == {"device_id": "d1", "grams": 42.0,
                                              "timestamp": 1.0}
        # ids continue, not restart
        uid2 = clone.create_user({"start_weight_kg": 90, "goal_weight_kg": 85,
                                  "start_date": "2021-01-01",
                                  "goal_date": "2021-02-01"})
        assert uid2 != uid

    def test_torn_journal_tail_ignored(self, tmp_path):
        store = Store(tmp_path)
        uid = store.create_user({"start_weight_kg": 100, "goal_weight_kg": 80,
                                 "start_date": "2021-03-01",
                                 "goal_date": "2021-03-29"})
        store.close()
        with open(tmp_path / "journal.jsonl", "a") as fh:
            fh.write('{"kind": "user", "user_id": "u9", "prof')  # torn write
        clone = Store(tmp_path)
        assert clone.get_user(uid)
        with pytest.raises(StoreError):
            clone.get_user("u9")
