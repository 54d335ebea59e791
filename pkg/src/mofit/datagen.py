"""Deterministic generators for desk-scale stand-ins of the two source CSVs.

The real files (the public obesity-levels survey and the body-fat study
data) are not bundled; these generators emit CSVs with the exact published
shapes, headers and category vocabularies, plus realistic statistical
structure: obesity level is driven by the habit features through a latent
body-mass index, and body fat is driven by a latent adiposity factor that
also shapes the girth measurements.  Everything is a pure function of the
seed.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np

from .dataset.schema import OBESITY_CLASSES, manifest_for
from .dataset.types import SOURCE_BODYFAT, SOURCE_OBESITY

DEFAULT_SEED = 917

# BMI bands of the seven classes, matched to their conventional definitions
_BMI_EDGES = (18.5, 25.0, 27.5, 30.0, 35.0, 40.0)


def _quant(x: np.ndarray, step: float) -> np.ndarray:
    return np.round(x / step) * step


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-x))


def _bmi_class(bmi: np.ndarray) -> np.ndarray:
    return np.digitize(bmi, _BMI_EDGES)


def generate_obesity_rows(seed: int = DEFAULT_SEED, n: int = 2111) -> list[list]:
    """Survey-like rows: seed respondents expanded into jittered near-copies.

    The oversampled-cluster structure mirrors how the published file was
    balanced (most rows are interpolated variants of real respondents), and
    it is what makes the reported accuracy levels reachable from habit
    features alone.
    """
    rng = np.random.default_rng(seed)

    # cluster sizes: how many rows each seed respondent contributes
    sizes = []
    total = 0
    while total < n:
        c = int(rng.choice([1, 2, 3, 4], p=[0.10, 0.28, 0.37, 0.25]))
        c = min(c, n - total)
        sizes.append(c)
        total += c
    n_seed = len(sizes)

    gender_m0 = rng.random(n_seed) < 0.5
    age0 = np.clip(14.0 + rng.gamma(2.2, 5.0, n_seed), 14.0, 61.0)
    height0 = np.where(gender_m0,
                       rng.normal(1.755, 0.068, n_seed),
                       rng.normal(1.623, 0.062, n_seed))
    height0 = np.clip(height0, 1.45, 1.98)

    # latent adiposity propensity shapes the habit answers
    a = rng.standard_normal(n_seed)
    fam0 = rng.random(n_seed) < _sigmoid(0.9 + 1.3 * a)
    favc0 = rng.random(n_seed) < _sigmoid(1.5 + 0.9 * a)
    fcvc0 = np.clip(2.25 - 0.28 * a + rng.normal(0, 0.5, n_seed), 1, 3)
    ncp0 = np.clip(2.7 + 0.12 * a + rng.normal(0, 0.7, n_seed), 1, 4)
    caec_z = 0.9 * a + rng.normal(0, 0.9, n_seed)
    caec0 = np.select(
        [caec_z < -1.1, caec_z < 1.3, caec_z < 2.3],
        ["no", "Sometimes", "Frequently"], default="Always")
    smoke0 = rng.random(n_seed) < 0.021
    ch2o0 = np.clip(2.0 - 0.16 * a + rng.normal(0, 0.55, n_seed), 1, 3)
    scc0 = rng.random(n_seed) < _sigmoid(-2.9 - 1.1 * a)
    faf0 = np.clip(1.15 - 0.52 * a + rng.normal(0, 0.65, n_seed), 0, 3)
    tue0 = np.clip(0.68 + 0.2 * a + rng.normal(0, 0.55, n_seed), 0, 2)
    calc_z = 0.5 * a + rng.normal(0, 1.0, n_seed)
    calc0 = np.select(
        [calc_z < -0.55, calc_z < 1.35, calc_z < 2.35],
        ["no", "Sometimes", "Frequently"], default="Always")

    mtrans_base = np.log(np.array([0.17, 0.01, 0.02, 0.75, 0.05]))
    mtrans_shift = np.outer(a, np.array([0.55, -0.9, 0.1, 0.0, -0.9]))
    logits = mtrans_base + mtrans_shift + rng.gumbel(0, 1, (n_seed, 5))
    mtrans_cats = np.array(["Automobile", "Bike", "Motorbike",
                            "Public_Transportation", "Walking"])
    mtrans0 = mtrans_cats[np.argmax(logits, axis=1)]

    # each seed's BMI is a weighted habit signal plus personal noise
    signal = (
        1.00 * fam0.astype(float)
        + 0.72 * favc0.astype(float)
        - 0.45 * (fcvc0 - 2.25)
        + 0.18 * (ncp0 - 2.7)
        + 0.33 * np.select([caec0 == "no", caec0 == "Sometimes",
                            caec0 == "Frequently"], [0.0, 1.0, 2.0], 3.0)
        - 0.28 * (ch2o0 - 2.0)
        - 1.05 * scc0.astype(float)
        - 0.85 * (faf0 - 1.15)
        + 0.55 * (tue0 - 0.68)
        + 0.30 * np.select([calc0 == "no", calc0 == "Sometimes",
                            calc0 == "Frequently"], [0.0, 1.0, 2.0], 3.0)
        - 0.18 * smoke0.astype(float)
        + np.select([mtrans0 == "Walking", mtrans0 == "Bike",
                     mtrans0 == "Automobile", mtrans0 == "Motorbike"],
                    [-1.1, -1.3, 0.45, 0.2], 0.0)
        + 0.85 * np.tanh((age0 - 22.0) / 11.0)
    )
    signal = (signal - signal.mean()) / signal.std()
    bmi0 = np.clip(26.0 + 7.8 * signal + rng.normal(0, 0.7, n_seed), 13.5, 51.0)

    # expand clusters: jitter habits a little and BMI per row
    seed_of = np.repeat(np.arange(n_seed), sizes)
    gender_m = gender_m0[seed_of]
    fam = fam0[seed_of]
    favc = favc0[seed_of]
    smoke = smoke0[seed_of]
    scc = scc0[seed_of]
    caec = caec0[seed_of].copy()
    calc = calc0[seed_of].copy()
    mtrans = mtrans0[seed_of].copy()
    age = _quant(np.clip(age0[seed_of] + rng.normal(0, 0.4, n), 14.0, 61.0), 0.1)
    height = _quant(np.clip(height0[seed_of] + rng.normal(0, 0.004, n), 1.45, 1.98), 0.001)
    fcvc = _quant(np.clip(fcvc0[seed_of] + rng.normal(0, 0.06, n), 1, 3), 0.05)
    ncp = _quant(np.clip(ncp0[seed_of] + rng.normal(0, 0.06, n), 1, 4), 0.05)
    ch2o = _quant(np.clip(ch2o0[seed_of] + rng.normal(0, 0.06, n), 1, 3), 0.05)
    faf = _quant(np.clip(faf0[seed_of] + rng.normal(0, 0.06, n), 0, 3), 0.05)
    tue = _quant(np.clip(tue0[seed_of] + rng.normal(0, 0.06, n), 0, 2), 0.05)

    bmi = np.clip(bmi0[seed_of] + rng.normal(0, 0.45, n), 13.0, 52.0)
    weight = _quant(np.clip(bmi * height ** 2, 39.0, 173.0), 0.01)
    labels = np.asarray(OBESITY_CLASSES)[_bmi_class(bmi)]

    # every category must appear so hand counts match the manifest lists
    def ensure_coverage(values: np.ndarray, cats: list[str], start: int) -> None:
        present = set(values.tolist())
        slot = start
        for cat in cats:
            if cat not in present:
                values[slot] = cat
                slot += 1

    ensure_coverage(caec, ["no", "Sometimes", "Frequently", "Always"], n - 8)
    ensure_coverage(calc, ["no", "Sometimes", "Frequently", "Always"], n - 16)
    ensure_coverage(mtrans, mtrans_cats.tolist(), n - 24)

    yn = np.array(["no", "yes"])
    rows = []
    for i in range(n):
        rows.append([
            "Male" if gender_m[i] else "Female",
            f"{age[i]:.6g}",
            f"{height[i]:.6g}",
            f"{weight[i]:.6g}",
            yn[int(fam[i])],
            yn[int(favc[i])],
            f"{fcvc[i]:.6g}",
            f"{ncp[i]:.6g}",
            str(caec[i]),
            yn[int(smoke[i])],
            f"{ch2o[i]:.6g}",
            yn[int(scc[i])],
            f"{faf[i]:.6g}",
            f"{tue[i]:.6g}",
            str(calc[i]),
            str(mtrans[i]),
            str(labels[i]),
        ])
    return rows


def generate_bodyfat_rows(seed: int = DEFAULT_SEED, n: int = 252) -> list[list]:
    rng = np.random.default_rng(seed + 1)

    size = rng.standard_normal(n)
    adiposity = rng.standard_normal(n)
    age = np.clip(np.round(44 + 12.5 * rng.standard_normal(n)), 22, 81)

    bf_true = np.clip(19.0 + 6.8 * adiposity + 0.08 * (age - 44)
                      + rng.normal(0, 2.0, n), 5.0, 45.0)
    density = 495.0 / (bf_true + 450.0)
    density = np.round(density, 4)
    bf2 = np.round(495.0 / density - 450.0, 1)   # Siri estimate
    bf1 = np.round(457.0 / density - 414.2, 1)   # Brozek estimate

    height = np.clip(70.15 + 2.4 * size + rng.normal(0, 1.0, n), 64.0, 78.0)
    height = _quant(height, 0.25)
    ffm = 155.0 + 22.0 * size + rng.normal(0, 6.0, n)
    weight = np.round(np.clip(ffm / (1.0 - bf_true / 100.0), 118.0, 375.0), 2)
    ffw = np.round(weight * (1.0 - bf1 / 100.0), 2)
    ai = np.round(703.0 * weight / height ** 2, 1)

    def girth(base, s_coef, a_coef, noise, lo, hi):
        v = base + s_coef * size + a_coef * adiposity + rng.normal(0, noise, n)
        return np.round(np.clip(v, lo, hi), 1)

    neck = girth(38.0, 1.5, 1.2, 0.8, 30.0, 52.0)
    chest = girth(100.8, 4.5, 5.5, 1.8, 79.0, 136.0)
    abdomen = girth(92.6, 4.0, 8.5, 2.0, 69.0, 148.0)
    hip = girth(99.9, 3.5, 4.5, 1.5, 84.0, 148.0)
    thigh = girth(59.4, 2.5, 3.2, 1.5, 47.0, 87.0)
    knee = girth(38.6, 1.6, 1.2, 1.0, 33.0, 49.0)
    ankle = girth(23.1, 1.1, 0.5, 0.9, 19.0, 33.0)
    biceps = girth(32.3, 1.7, 1.8, 1.2, 24.0, 45.0)
    forearm = girth(28.7, 1.3, 0.8, 0.9, 21.0, 34.0)
    wrist = girth(18.2, 0.8, 0.25, 0.5, 15.0, 21.5)

    rows = []
    for i in range(n):
        rows.append([
            str(i + 1),
            f"{bf1[i]:.6g}", f"{bf2[i]:.6g}", f"{density[i]:.6g}",
            f"{age[i]:.6g}", f"{weight[i]:.6g}", f"{height[i]:.6g}",
            f"{ai[i]:.6g}", f"{ffw[i]:.6g}",
            f"{neck[i]:.6g}", f"{chest[i]:.6g}", f"{abdomen[i]:.6g}",
            f"{hip[i]:.6g}", f"{thigh[i]:.6g}", f"{knee[i]:.6g}",
            f"{ankle[i]:.6g}", f"{biceps[i]:.6g}", f"{forearm[i]:.6g}",
            f"{wrist[i]:.6g}",
        ])
    return rows


def _to_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(str(v) for v in row) + "\n")
    return buf.getvalue()


def obesity_csv(seed: int = DEFAULT_SEED) -> str:
    header = manifest_for(SOURCE_OBESITY).column_names
    return _to_csv(header, generate_obesity_rows(seed))


def bodyfat_csv(seed: int = DEFAULT_SEED) -> str:
    header = manifest_for(SOURCE_BODYFAT).column_names
    return _to_csv(header, generate_bodyfat_rows(seed))


def write_datasets(out_dir: str | Path, seed: int = DEFAULT_SEED) -> dict[str, Path]:
    """Write obesity.csv and bodyfat.csv under out_dir; returns their paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        SOURCE_OBESITY: out / "obesity.csv",
        SOURCE_BODYFAT: out / "bodyfat.csv",
    }
    paths[SOURCE_OBESITY].write_text(obesity_csv(seed))
    paths[SOURCE_BODYFAT].write_text(bodyfat_csv(seed))
    return paths
