"""Load, validate and time-order SCADA series from CSV files.

The on-disk format is a headered, comma-separated, UTF-8 CSV. A column map
ties the logical fields (timestamp, wind speed, temperature, power, turbine
id) to the actual column names of the export at hand. Rows that cannot be
parsed are dropped and counted, never imputed.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path

from .errors import DataError

# Drop reasons used in counters and in the dropped-row report.
DROP_BAD_FIELD = "unparsable_or_missing_field"
DROP_NEGATIVE_WIND = "negative_wind"
DROP_DUPLICATE_TS = "duplicate_timestamp"


@dataclass(frozen=True, slots=True)
class SampleRecord:
    """One timestamped SCADA observation for one turbine.

    Power is kept in whatever units the source uses ("power units"); no
    unit conversion happens anywhere in the package.
    """

    timestamp: datetime
    turbine_id: str
    wind_speed: float
    temperature: float
    power: float


@dataclass(frozen=True)
class ColumnMap:
    """Maps logical fields to CSV column names.

    Either ``turbine`` names a column holding turbine ids, or
    ``constant_turbine_id`` assigns every row of the file to one turbine.
    ``timestamp_format`` is a ``strptime`` format string; when None,
    ISO-8601 is expected.
    """

    timestamp: str
    wind: str
    temperature: str
    power: str
    turbine: str | None = None
    constant_turbine_id: str | None = None
    timestamp_format: str | None = None

    def required_columns(self) -> list[str]:
        cols = [self.timestamp, self.wind, self.temperature, self.power]
        if self.turbine is not None:
            cols.append(self.turbine)
        return cols


@dataclass
class SeriesSet:
    """Per-turbine, timestamp-sorted SCADA series plus ingest bookkeeping."""

    series: dict[str, list[SampleRecord]]
    sampling_period: timedelta | None = None
    dropped: dict[str, int] = field(default_factory=dict)

    @property
    def turbine_ids(self) -> list[str]:
        return sorted(self.series)

    @property
    def n_records(self) -> int:
        return sum(len(v) for v in self.series.values())

    @property
    def n_dropped(self) -> int:
        return sum(self.dropped.values())


def _parse_timestamp(raw: str, fmt: str | None) -> datetime:
    if fmt is not None:
        ts = datetime.strptime(raw, fmt)
    else:
        ts = datetime.fromisoformat(raw.strip().replace("Z", "+00:00"))
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def _parse_float(raw: str) -> float:
    value = float(raw)
    if not math.isfinite(value):
        raise ValueError(f"non-finite value {raw!r}")
    return value


def load_scada(path: str | Path, columns: ColumnMap) -> SeriesSet:
    """Read one SCADA CSV into a SeriesSet.

    Rows are sorted by timestamp per turbine. Rows with missing or
    unparsable mandatory fields, negative wind, or a duplicate timestamp
    (first occurrence wins) are dropped and counted.

    Raises:
        DataError: missing file, missing mapped column, or zero valid rows.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"input file not found: {path}")
    if columns.turbine is None and columns.constant_turbine_id is None:
        raise DataError("column map needs a turbine column or a constant turbine id")

    dropped = {DROP_BAD_FIELD: 0, DROP_NEGATIVE_WIND: 0, DROP_DUPLICATE_TS: 0}
    raw_series: dict[str, list[SampleRecord]] = {}

    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in columns.required_columns() if c not in header]
        if missing:
            raise DataError(f"{path.name}: missing mapped column(s) {missing}")

        for row in reader:
            try:
                ts = _parse_timestamp(row[columns.timestamp], columns.timestamp_format)
                wind = _parse_float(row[columns.wind])
                temp = _parse_float(row[columns.temperature])
                power = _parse_float(row[columns.power])
            except (ValueError, TypeError, KeyError):
                dropped[DROP_BAD_FIELD] += 1
                continue
            if wind < 0:
                dropped[DROP_NEGATIVE_WIND] += 1
                continue
            tid = row[columns.turbine] if columns.turbine else columns.constant_turbine_id
            if not tid:
                dropped[DROP_BAD_FIELD] += 1
                continue
            raw_series.setdefault(tid, []).append(
                SampleRecord(ts, tid, wind, temp, power)
            )

    series: dict[str, list[SampleRecord]] = {}
    for tid, records in raw_series.items():
        records.sort(key=lambda r: r.timestamp)  # stable: file order kept among ties
        unique: list[SampleRecord] = []
        for rec in records:
            if unique and rec.timestamp == unique[-1].timestamp:
                dropped[DROP_DUPLICATE_TS] += 1
                continue
            unique.append(rec)
        series[tid] = unique

    if not any(series.values()):
        raise DataError(f"{path.name}: no valid rows after parsing")
    return SeriesSet(series=series, dropped=dropped)


def merge_series(parts: list[SeriesSet]) -> SeriesSet:
    """Combine SeriesSets loaded from several files into one.

    Turbine ids must not collide across parts.
    """
    merged: dict[str, list[SampleRecord]] = {}
    dropped: dict[str, int] = {}
    for part in parts:
        for tid, records in part.series.items():
            if tid in merged:
                raise DataError(f"turbine id {tid!r} appears in more than one input")
            merged[tid] = records
        for reason, count in part.dropped.items():
            dropped[reason] = dropped.get(reason, 0) + count
    return SeriesSet(series=merged, dropped=dropped)


def summarize(series: SeriesSet) -> dict:
    """Exact per-turbine counts, time span and field ranges."""
    if series.n_records == 0:
        raise DataError("cannot summarize an empty series set")
    out = {}
    for tid in series.turbine_ids:
        records = series.series[tid]
        if not records:
            continue
        winds = [r.wind_speed for r in records]
        temps = [r.temperature for r in records]
        powers = [r.power for r in records]
        t0, t1 = records[0].timestamp, records[-1].timestamp
        out[tid] = {
            "count": len(records),
            "start": t0.isoformat(),
            "end": t1.isoformat(),
            "span_seconds": (t1 - t0).total_seconds(),
            "wind_speed": {"min": min(winds), "max": max(winds)},
            "temperature": {"min": min(temps), "max": max(temps)},
            "power": {"min": min(powers), "max": max(powers)},
        }
    return out


def write_scada_csv(series: SeriesSet, path: str | Path) -> None:
    """Write a SeriesSet in the same CSV schema load_scada consumes.

    Floats are written with repr so a round-trip reproduces them exactly.
    """
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["timestamp", "turbine_id", "wind_speed", "temperature", "power"])
        for tid in series.turbine_ids:
            for r in series.series[tid]:
                writer.writerow(
                    [r.timestamp.isoformat(), r.turbine_id,
                     repr(r.wind_speed), repr(r.temperature), repr(r.power)]
                )


DEFAULT_COLUMNS = ColumnMap(
    timestamp="timestamp",
    wind="wind_speed",
    temperature="temperature",
    power="power",
    turbine="turbine_id",
)
