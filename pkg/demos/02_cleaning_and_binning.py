"""Walk through the cleaning and operating-condition binning stages.

Shows the three data views of the preprocessing path: raw scatter, the
wind-range cut, and the survivors of the power/wind-ratio quartile filter.
Then fits the temperature k-means clusters and draws the histogram with
the fitted interval boundaries.

Run: python demos/02_cleaning_and_binning.py   (after 01_synthetic_data.py)
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from windhealth import (
    assign_subbins,
    fit_temperature_clusters,
    filter_wind_range,
    iqr_ratio_filter,
    load_scada,
    make_wind_bins,
)
from windhealth.ingest import DEFAULT_COLUMNS

OUT = Path(__file__).parent / "output"
CSV = OUT / "degrading.csv"
if not CSV.is_file():
    raise SystemExit("run demos/01_synthetic_data.py first")

series = load_scada(CSV, DEFAULT_COLUMNS)
records = series.series["D01"]

in_range, removed_range = filter_wind_range(records, 4.5, 9.0)
kept, removed_iqr = iqr_ratio_filter(in_range)
print(f"raw {len(records)} -> wind cut removes {removed_range} "
      f"-> ratio filter removes {removed_iqr} -> clean {len(kept)}")

fig, axes = plt.subplots(1, 3, figsize=(14, 4), sharey=True)
for ax, (title, data) in zip(
    axes,
    [("raw", records), ("wind range [4.5, 9)", in_range), ("ratio quartile filter", kept)],
):
    ax.scatter([r.wind_speed for r in data], [r.power for r in data], s=1, alpha=0.3)
    ax.set_title(f"{title} (n={len(data)})")
    ax.set_xlabel("wind speed [m/s]")
axes[0].set_ylabel("power [power units]")
fig.tight_layout()
fig.savefig(OUT / "02_cleaning_stages.png", dpi=130)

# temperature clusters: k-means centroids define covering intervals
temps = np.array([r.temperature for r in kept])
clusters = fit_temperature_clusters(temps, 4, seed=1)
print("temperature centroids:", [round(c.centroid, 2) for c in clusters])
print("interval boundaries:", [round(c.upper, 2) for c in clusters[:-1]])

fig, ax = plt.subplots(figsize=(7, 4))
ax.hist(temps, bins=60, color="tan")
for c in clusters[:-1]:
    ax.axvline(c.upper, color="crimson", linestyle="--")
for c in clusters:
    ax.axvline(c.centroid, color="navy", alpha=0.6)
ax.set_xlabel("temperature [deg C]")
ax.set_ylabel("count")
ax.set_title("temperature histogram with k-means boundaries")
fig.tight_layout()
fig.savefig(OUT / "02_temperature_clusters.png", dpi=130)

# cross the wind bins with the temperature clusters
bins = make_wind_bins(5.0, 7.5, 0.5)
subbins, discarded = assign_subbins(kept, bins, clusters)
sizes = {f"{sb.wind_bin.label} x {sb.temp_cluster.label}C": len(sb.samples)
         for sb in subbins}
print(f"{len(subbins)} sub-bins, {discarded} records outside the bins")
for key, size in sizes.items():
    print(f"  {key}: {size}")
print(f"figures: {OUT / '02_cleaning_stages.png'}, {OUT / '02_temperature_clusters.png'}")
