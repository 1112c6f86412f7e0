"""Extract drifting concepts for one operating-condition sub-bin.

Each window of the sub-bin's power sequence is mapped to (value, change of
value) points and summarized by three fuzzy concepts: high, moderate and
low power production. Plotting every window's concepts colored by window
index makes degradation visible as a color gradient: on the degrading
turbine the recent (bright) concepts sit left of the old (dark) ones.

Run: python demos/03_drifting_concepts.py   (after 01_synthetic_data.py)
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from windhealth import (
    assign_subbins,
    clean_series,
    extract_concepts,
    emit_concept_scatter,
    fit_temperature_clusters,
    load_scada,
    make_wind_bins,
)
from windhealth.ingest import DEFAULT_COLUMNS

OUT = Path(__file__).parent / "output"
MARKERS = {"high": "^", "moderate": "o", "low": "s"}

fig, axes = plt.subplots(1, 2, figsize=(12, 4.5))
for ax, name, tid in ((axes[0], "healthy", "H01"), (axes[1], "degrading", "D01")):
    csv = OUT / f"{name}.csv"
    if not csv.is_file():
        raise SystemExit("run demos/01_synthetic_data.py first")
    records = load_scada(csv, DEFAULT_COLUMNS).series[tid]
    clean = clean_series(records)
    clusters = fit_temperature_clusters(
        [r.temperature for r in clean.records], 4, seed=1
    )
    subbins, _ = assign_subbins(clean.records, make_wind_bins(), clusters)
    # pick the [6, 6.5) bin in the coolest temperature cluster
    subbin = next(
        sb for sb in subbins
        if sb.wind_bin.label == "[6, 6.5)" and sb.temp_cluster is clusters[0]
    )
    concepts = extract_concepts(
        [r.power for r in subbin.samples],
        n_windows=30,
        seed_fn=lambda w: 1000 + w,
    )
    emit_concept_scatter(concepts, OUT / f"03_concepts_{name}.csv")

    for wc in concepts:
        for c in wc.concepts:
            ax.scatter(c.z, c.dz, c=c.window_index, cmap="viridis",
                       vmin=1, vmax=30, marker=MARKERS[c.rank_label], s=46)
    ax.set_title(f"{name}: 30 windows x 3 concepts, "
                 f"wind {subbin.wind_bin.label}, "
                 f"temp ~{subbin.temp_cluster.label} C")
    ax.set_xlabel("power value")
axes[0].set_ylabel("change of power value")
fig.tight_layout()
fig.savefig(OUT / "03_drifting_concepts.png", dpi=130)
print(f"figure: {OUT / '03_drifting_concepts.png'}")
print("bright (recent) concepts drift to lower power on the degrading turbine")
