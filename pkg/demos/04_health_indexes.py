"""Compute both health indexes for every sub-bin of the degrading turbine.

The regression index fits a line to the concatenated memberships of the
high-power (negative slope = aging) and low-power (positive slope = aging)
concepts. The distance index runs a secondary fuzzy 2-means over each
rank's window centroids and sums the normalized pair distances; stationary
behaviour gives values near zero.

Run: python demos/04_health_indexes.py   (after 01_synthetic_data.py)
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from windhealth import RunConfig, analyze_series, concat_memberships, ols_slope
from windhealth import load_scada
from windhealth.ingest import DEFAULT_COLUMNS

OUT = Path(__file__).parent / "output"
CSV = OUT / "degrading.csv"
if not CSV.is_file():
    raise SystemExit("run demos/01_synthetic_data.py first")

series = load_scada(CSV, DEFAULT_COLUMNS)
report = analyze_series(series, RunConfig(seed=11))
turbine = report.turbines["D01"]

print("regression index, high-power concept (slope x 1e5, negative = aging):")
for line in (OUT / "04_regression_high.csv",):
    turbine.regression_high.write_csv(line)
    print(line.read_text())

print("distance index (larger = more drift):")
turbine.di.write_csv(OUT / "04_distance_index.csv")
print((OUT / "04_distance_index.csv").read_text())
print(f"grand total: {turbine.di.grand_total():.3f}")

# visualize one sub-bin's membership sequences with their fitted lines
subbin = next(sb for sb in turbine.subbins if sb.status == "ok")
concepts = subbin.window_concepts
fig, axes = plt.subplots(2, 1, figsize=(9, 6), sharex=True)
for ax, rank in zip(axes, ("high", "low")):
    seq = concat_memberships(concepts, rank)
    fit = ols_slope(seq)
    x = np.arange(1, len(seq) + 1)
    ax.plot(x, seq.values, lw=0.4, alpha=0.7)
    ax.plot(x, fit.intercept + fit.slope * x, color="crimson", lw=2,
            label=f"slope {fit.slope:+.2e}")
    ax.set_ylabel(f"membership ({rank})")
    ax.legend(loc="upper right")
axes[1].set_xlabel("observation order")
fig.suptitle(f"membership trends, wind {subbin.wind_label}, "
             f"temp ~{subbin.temp_label} C")
fig.tight_layout()
fig.savefig(OUT / "04_membership_trends.png", dpi=130)
print(f"figure: {OUT / '04_membership_trends.png'}")
