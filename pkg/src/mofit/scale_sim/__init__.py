"""Software stand-in for the load-cell + ADC weighing chain.

The state carries the ADC zero offset (tare) and the counts-per-gram slope
(calibration); reads synthesize raw counts from those same constants plus
seeded gaussian noise, so a noiseless round-trip is exact to the 0.1 g
display resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .. import kernels as K

DISPLAY_STEP_G = 0.1


class ScaleError(ValueError):
    pass


@dataclass(frozen=True)
class ScaleState:
    device_id: str
    seed: int = 0
    offset_counts: int = 0
    counts_per_gram: float = 1.0
    noise_stddev_counts: float = 0.0
    tared: bool = False
    calibrated: bool = False
    reads: int = 0  # position in the device's noise stream

    def __post_init__(self):
        if self.counts_per_gram <= 0:
            raise ScaleError("counts_per_gram must be > 0")
        if self.noise_stddev_counts < 0:
            raise ScaleError("noise_stddev_counts must be >= 0")


def _noise(state: ScaleState, index: int) -> float:
    """Gaussian ADC noise, a pure function of (seed, index)."""
    if state.noise_stddev_counts == 0.0:
        return 0.0
    s = K.new_state(state.seed, index)
    u1 = max(float(K.prng_uniform(s)), 1e-300)
    u2 = float(K.prng_uniform(s))
    z = math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)
    return z * state.noise_stddev_counts


def sample_raw(state: ScaleState, true_mass_g: float) -> tuple[ScaleState, float]:
    """Simulated ADC counts for a mass on the platform."""
    if true_mass_g < 0:
        raise ScaleError("true_mass_g must be >= 0")
    raw = (state.offset_counts + true_mass_g * state.counts_per_gram
           + _noise(state, state.reads))
    return replace(state, reads=state.reads + 1), raw


def tare(state: ScaleState, raw_now: float) -> ScaleState:
    """Zero the scale against the current raw reading."""
    return replace(state, offset_counts=int(round(raw_now)), tared=True)


def calibrate(state: ScaleState, known_mass_g: float,
              raw_with_mass: float) -> ScaleState:
    """Derive counts-per-gram from a known mass; requires a prior tare."""
    if not state.tared:
        raise ScaleError("calibrate requires a tare first")
    if known_mass_g <= 0:
        raise ScaleError("known_mass_g must be > 0")
    if raw_with_mass <= state.offset_counts:
        raise ScaleError(
            f"raw_with_mass {raw_with_mass} not above tare offset "
            f"{state.offset_counts}")
    scale = (raw_with_mass - state.offset_counts) / known_mass_g
    return replace(state, counts_per_gram=scale, calibrated=True)


def read(state: ScaleState, true_mass_g: float) -> tuple[ScaleState, float]:
    """One display reading: decode simulated counts, clamp at 0, 0.1 g steps."""
    if not state.calibrated:
        raise ScaleError("read requires calibration")
    state, raw = sample_raw(state, true_mass_g)
    grams = max(0.0, (raw - state.offset_counts) / state.counts_per_gram)
    grams = round(grams / DISPLAY_STEP_G) * DISPLAY_STEP_G
    return state, round(grams, 1)


def startup(device_id: str, true_offset_counts: int, true_counts_per_gram: float,
            noise_stddev_counts: float = 0.0, seed: int = 0,
            calibration_mass_g: float = 100.0) -> ScaleState:
    """Factory state -> tare -> calibrate, like powering on a real unit."""
    state = ScaleState(device_id=device_id, seed=seed,
                       offset_counts=true_offset_counts,
                       counts_per_gram=true_counts_per_gram,
                       noise_stddev_counts=noise_stddev_counts)
    state, raw_empty = sample_raw(state, 0.0)
    state = tare(state, raw_empty)
    state, raw_mass = sample_raw(state, calibration_mass_g)
    return calibrate(state, calibration_mass_g, raw_mass)


from .publisher import Publisher, TransportError  # noqa: E402  (public surface)

__all__ = [
    "ScaleState", "ScaleError", "sample_raw", "tare", "calibrate", "read",
    "startup", "Publisher", "TransportError", "DISPLAY_STEP_G",
]
