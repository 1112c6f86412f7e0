"""Report tables: temperature rows x wind-bin columns with margin sums.

Skipped sub-bins appear as missing cells (NaN in memory, empty string in
CSV, null in JSON); sums are taken over the present cells.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass
class HealthTable:
    """One index table for one turbine."""

    row_labels: list[str]  # temperature cluster labels
    col_labels: list[str]  # wind bin labels
    values: np.ndarray  # (rows, cols), NaN where a sub-bin was skipped
    with_row_sums: bool = False  # distance tables carry a per-row sum column

    def col_sums(self) -> np.ndarray:
        return np.nansum(np.where(np.isnan(self.values), 0.0, self.values), axis=0)

    def row_sums(self) -> np.ndarray:
        return np.nansum(np.where(np.isnan(self.values), 0.0, self.values), axis=1)

    def grand_total(self) -> float:
        return float(np.where(np.isnan(self.values), 0.0, self.values).sum())

    def to_dict(self) -> dict:
        def cell(x: float):
            return None if np.isnan(x) else float(x)

        out = {
            "row_labels": list(self.row_labels),
            "col_labels": list(self.col_labels),
            "values": [[cell(x) for x in row] for row in self.values],
            "col_sums": [float(x) for x in self.col_sums()],
        }
        if self.with_row_sums:
            out["row_sums"] = [float(x) for x in self.row_sums()]
            out["grand_total"] = self.grand_total()
        return out

    def write_csv(self, path: str | Path) -> None:
        path = Path(path)
        with path.open("w", newline="", encoding="utf-8") as fh:
            header = ["temp_c"] + list(self.col_labels)
            if self.with_row_sums:
                header.append("sum")
            fh.write(",".join(_quote(h) for h in header) + "\n")
            for i, label in enumerate(self.row_labels):
                cells = [_fmt(x) for x in self.values[i]]
                if self.with_row_sums:
                    cells.append(_fmt(self.row_sums()[i]))
                fh.write(",".join([_quote(label)] + cells) + "\n")
            sums = [_fmt(x) for x in self.col_sums()]
            if self.with_row_sums:
                sums.append(_fmt(self.grand_total()))
            fh.write(",".join(["sum"] + sums) + "\n")


def _fmt(x: float) -> str:
    return "" if np.isnan(x) else repr(float(x))


def _quote(s: str) -> str:
    return f'"{s}"' if "," in s else s
