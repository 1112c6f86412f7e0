"""Generate synthetic SCADA data for a healthy and a degrading turbine.

Writes two CSV files in the schema the ingest layer consumes and plots the
raw power-versus-wind scatter of both machines. The degrading turbine
loses a small fraction of power every sample; over the two-year horizon
that compounds to a visible downward drift.

Run from the repository root:  python demos/01_synthetic_data.py
Outputs land in demos/output/.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from windhealth import SynthConfig, generate_scada, summarize, write_scada_csv

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

BASE = dict(
    n_samples=50_000,
    noise=0.02,
    wind_model="ar1",
    wind_lo=3.0,
    wind_hi=10.0,
    seed=42,
)

configs = {
    "healthy": SynthConfig(turbine_id="H01", degradation=0.0, **BASE),
    "degrading": SynthConfig(turbine_id="D01", degradation=1e-5, **BASE),
}

fig, axes = plt.subplots(1, 2, figsize=(11, 4), sharey=True)
for ax, (name, config) in zip(axes, configs.items()):
    series = generate_scada(config)
    csv_path = OUT / f"{name}.csv"
    write_scada_csv(series, csv_path)
    print(f"{name}: wrote {series.n_records} records to {csv_path}")

    stats = summarize(series)[config.turbine_id]
    print(f"  wind {stats['wind_speed']}, power {stats['power']}")

    records = series.series[config.turbine_id]
    # color by time so the degradation is visible as a vertical fade
    t = range(len(records))
    ax.scatter(
        [r.wind_speed for r in records],
        [r.power for r in records],
        c=list(t), cmap="viridis", s=1, alpha=0.3,
    )
    ax.set_title(f"{name} ({config.turbine_id})")
    ax.set_xlabel("wind speed [m/s]")
axes[0].set_ylabel("power [power units]")
fig.tight_layout()
fig.savefig(OUT / "01_power_curves.png", dpi=130)
print(f"figure: {OUT / '01_power_curves.png'}")
