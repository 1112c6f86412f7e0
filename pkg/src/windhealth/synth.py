"""Synthetic SCADA generator with controllable degradation.

Serves as the ground-truth oracle for end-to-end validation: power at
sample t is curve(wind_t) * (1 - degradation)^t * (1 + noise_t), so any
drift the pipeline reports on stationary settings is a false positive, and
the injected decay is known exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone

import numpy as np

from .errors import ConfigError
from .ingest import SampleRecord, SeriesSet

WIND_UNIFORM = "uniform"
WIND_AR1 = "ar1"

CURVE_CUBIC_RAMP = "cubic_ramp"
CURVE_PROPORTIONAL = "proportional"
CURVE_STAIRCASE = "staircase"


@dataclass(frozen=True)
class SynthConfig:
    """Parameters of one synthetic turbine series.

    degradation is the relative power loss per sample, applied
    multiplicatively; noise is the relative standard deviation of the
    Gaussian disturbance. The default power curve is a cubic ramp with
    saturation (cut-in 3 m/s, rated 12 m/s); "proportional" is linear
    through the origin and "staircase" is constant on 0.5 m/s steps, both
    useful to decouple wind-curve shape from degradation in tests.
    """

    n_samples: int = 50_000
    sampling_period_minutes: float = 10.0
    start: datetime = field(
        default_factory=lambda: datetime(2016, 1, 1, tzinfo=timezone.utc)
    )
    turbine_id: str = "S01"
    wind_model: str = WIND_AR1
    wind_lo: float = 3.0
    wind_hi: float = 10.0
    wind_ar_coeff: float = 0.8
    temp_centers: tuple[float, ...] = (15.0, 18.0, 22.0, 27.0)
    temp_spread: float = 1.0
    power_curve: str = CURVE_CUBIC_RAMP
    cut_in: float = 3.0
    rated_speed: float = 12.0
    rated_power: float = 600_000.0
    degradation: float = 0.0
    noise: float = 0.0
    seed: int = 0

    def validate(self) -> None:
        if self.n_samples < 1:
            raise ConfigError("n_samples must be positive")
        if not self.wind_lo < self.wind_hi:
            raise ConfigError("wind_lo must be below wind_hi")
        if self.wind_lo < 0:
            raise ConfigError("wind_lo must be non-negative")
        if self.wind_model not in (WIND_UNIFORM, WIND_AR1):
            raise ConfigError(f"unknown wind model {self.wind_model!r}")
        if self.power_curve not in (
            CURVE_CUBIC_RAMP,
            CURVE_PROPORTIONAL,
            CURVE_STAIRCASE,
        ):
            raise ConfigError(f"unknown power curve {self.power_curve!r}")
        if self.degradation < 0 or self.noise < 0:
            raise ConfigError("degradation and noise must be non-negative")
        if not 0 <= self.wind_ar_coeff < 1:
            raise ConfigError("wind_ar_coeff must be in [0, 1)")
        if not self.temp_centers:
            raise ConfigError("need at least one temperature center")
        if self.power_curve == CURVE_CUBIC_RAMP and not self.cut_in < self.rated_speed:
            raise ConfigError("cut_in must be below rated_speed")


def base_power(wind: np.ndarray, config: SynthConfig) -> np.ndarray:
    """Deterministic, monotone non-decreasing wind-to-power map."""
    w = np.asarray(wind, dtype=float)
    if config.power_curve == CURVE_PROPORTIONAL:
        return 10_000.0 * w
    if config.power_curve == CURVE_STAIRCASE:
        return 10_000.0 * (0.5 * np.floor(w / 0.5) + 0.25)
    frac = np.clip((w - config.cut_in) / (config.rated_speed - config.cut_in), 0.0, 1.0)
    return config.rated_power * frac**3


def _wind_series(config: SynthConfig, rng: np.random.Generator) -> np.ndarray:
    if config.wind_model == WIND_UNIFORM:
        return rng.uniform(config.wind_lo, config.wind_hi, config.n_samples)
    # first-order autoregression toward the range midpoint, reflected at
    # the bounds so the whole range stays visited
    lo, hi, rho = config.wind_lo, config.wind_hi, config.wind_ar_coeff
    mid = (lo + hi) / 2.0
    stationary_sd = (hi - lo) / 4.0
    innov_sd = stationary_sd * math.sqrt(max(1.0 - rho**2, 1e-12))
    shocks = rng.normal(0.0, innov_sd, config.n_samples)
    out = np.empty(config.n_samples)
    x = mid + shocks[0]
    for t in range(config.n_samples):
        x = mid + rho * (x - mid) + shocks[t]
        while x < lo or x > hi:
            if x < lo:
                x = 2 * lo - x
            else:
                x = 2 * hi - x
        out[t] = x
    return out


def generate_scada(config: SynthConfig) -> SeriesSet:
    """Generate one turbine's series; deterministic given the seed."""
    config.validate()
    rng = np.random.default_rng(config.seed)
    wind = _wind_series(config, rng)
    n_centers = len(config.temp_centers)
    centers = np.array(config.temp_centers, dtype=float)
    temp = centers[rng.integers(0, n_centers, config.n_samples)]
    if config.temp_spread > 0:
        temp = temp + rng.normal(0.0, config.temp_spread, config.n_samples)

    t = np.arange(config.n_samples)
    decay = (1.0 - config.degradation) ** t
    disturbance = (
        1.0 + rng.normal(0.0, config.noise, config.n_samples)
        if config.noise > 0
        else np.ones(config.n_samples)
    )
    power = base_power(wind, config) * decay * disturbance

    period = timedelta(minutes=config.sampling_period_minutes)
    records = [
        SampleRecord(
            timestamp=config.start + i * period,
            turbine_id=config.turbine_id,
            wind_speed=float(wind[i]),
            temperature=float(temp[i]),
            power=float(power[i]),
        )
        for i in range(config.n_samples)
    ]
    return SeriesSet(series={config.turbine_id: records}, sampling_period=period)
