"""Full command-line workflow: analyze two turbines and rank them.

Drives the same entry points as the installed `windhealth` command:
analyze writes the per-turbine report directories, compare ranks the
turbines by total distance index (ascending) and by summed high-rank
slope (descending). The degrading turbine should rank worse on both.

Run: python demos/05_compare_turbines.py   (after 01_synthetic_data.py)
"""

import json
from pathlib import Path

from windhealth.cli import main

OUT = Path(__file__).parent / "output"
for name in ("healthy", "degrading"):
    if not (OUT / f"{name}.csv").is_file():
        raise SystemExit("run demos/01_synthetic_data.py first")

reports = []
for name in ("healthy", "degrading"):
    run_dir = OUT / f"run_{name}"
    code = main([
        "analyze",
        "--input", str(OUT / f"{name}.csv"),
        "--out", str(run_dir),
        "--seed", "11",
    ])
    assert code == 0, f"analyze failed for {name}"
    reports.append(run_dir / "report.json")

    report = json.loads(reports[-1].read_text())
    (tid,) = report["turbines"].keys()
    di_total = report["turbines"][tid]["distance_index"]["grand_total"]
    print(f"{name} ({tid}): distance-index grand total {di_total:.3f}")

code = main(["compare", *map(str, reports), "--out", str(OUT / "05_ranking.json")])
assert code == 0
print(f"ranking written to {OUT / '05_ranking.json'}")
