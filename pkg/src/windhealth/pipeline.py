"""Full analysis pipeline and report assembly.

One run: ingest -> cleaning -> operating-condition binning -> per-window
concept extraction -> both health indexes -> report files. Every random
draw is derived from the single run seed, so identical configuration
yields byte-identical machine-readable outputs.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from . import binning, concepts, distance, preprocess, regression
from .errors import ConfigError, DataError, SubBinSkipped
from .ingest import ColumnMap, SeriesSet, load_scada, merge_series, summarize
from .tables import HealthTable

REPORT_SCHEMA = "windhealth-report/1"

# purpose tags mixed into derived seeds so stages draw independent streams
_SEED_KMEANS = 1
_SEED_CONCEPTS = 2
_SEED_SECONDARY = 3

DI_NORM_COORDS = "coords"
DI_NORM_SCALAR = "scalar"


def derive_seed(*parts: int) -> int:
    """Stable child seed from non-negative integer parts."""
    return int(np.random.SeedSequence(list(parts)).generate_state(1)[0])


@dataclass
class RunConfig:
    """Everything needed to reproduce one analysis run."""

    input_paths: list[str] = field(default_factory=list)
    column_map: dict = field(default_factory=dict)
    wind_min: float = preprocess.DEFAULT_WIND_MIN
    wind_max: float = preprocess.DEFAULT_WIND_MAX
    bin_start: float = binning.DEFAULT_BIN_START
    bin_end: float = binning.DEFAULT_BIN_END
    bin_width: float = binning.DEFAULT_BIN_WIDTH
    temp_clusters: int = binning.DEFAULT_TEMP_CLUSTERS
    share_temp_clusters: bool = False
    n_windows: int | None = concepts.DEFAULT_N_WINDOWS
    window_length: int | None = None
    n_concepts: int = concepts.DEFAULT_N_CONCEPTS
    fuzzifier: float = 2.0
    fcm_eps: float = 1e-6
    fcm_max_iter: int = 300
    min_window_deltas: int = concepts.DEFAULT_MIN_WINDOW_DELTAS
    slope_scale: float = regression.DEFAULT_SLOPE_SCALE
    include_moderate: bool = False
    di_metric: str = distance.METRIC_EUCLIDEAN
    di_normalization: str = DI_NORM_COORDS
    norm_power_min: float = distance.DEFAULT_POWER_MIN
    norm_power_max: float = distance.DEFAULT_POWER_MAX
    norm_dpower_min: float = distance.DEFAULT_DPOWER_MIN
    norm_dpower_max: float = distance.DEFAULT_DPOWER_MAX
    region_grid: int = 50
    dump_subbin_membership: bool = False
    seed: int = 7

    def validate(self) -> None:
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        if not self.wind_min < self.wind_max:
            raise ConfigError("wind_min must be below wind_max")
        if not self.bin_start < self.bin_end or self.bin_width <= 0:
            raise ConfigError("invalid wind bin parameters")
        if self.temp_clusters < 1:
            raise ConfigError("temp_clusters must be >= 1")
        if (self.n_windows is None) == (self.window_length is None):
            raise ConfigError("set exactly one of n_windows / window_length")
        if self.n_windows is not None and self.n_windows < 1:
            raise ConfigError("n_windows must be >= 1")
        if self.window_length is not None and self.window_length < 2:
            raise ConfigError("window_length must be >= 2")
        if self.n_concepts < 1:
            raise ConfigError("n_concepts must be >= 1")
        if self.fuzzifier <= 1.0:
            raise ConfigError("fuzzifier must be > 1")
        if self.fcm_eps <= 0 or self.fcm_max_iter < 1:
            raise ConfigError("invalid fuzzy c-means termination parameters")
        if self.min_window_deltas < self.n_concepts:
            raise ConfigError("min_window_deltas must be >= n_concepts")
        if self.di_metric not in (distance.METRIC_EUCLIDEAN, distance.METRIC_MANHATTAN):
            raise ConfigError(f"unknown distance metric {self.di_metric!r}")
        if self.di_normalization not in (DI_NORM_COORDS, DI_NORM_SCALAR):
            raise ConfigError(f"unknown normalization mode {self.di_normalization!r}")
        if self.region_grid < 1:
            raise ConfigError("region_grid must be >= 1")
        try:
            self.norm_bounds()
        except DataError as exc:
            raise ConfigError(str(exc)) from exc

    def norm_bounds(self) -> distance.NormBounds:
        return distance.NormBounds(
            power_min=self.norm_power_min,
            power_max=self.norm_power_max,
            dpower_min=self.norm_dpower_min,
            dpower_max=self.norm_dpower_max,
        )

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def analysis_params(self) -> dict:
        """The configuration subset that defines the analysis itself.

        Input locations and column naming are excluded: two runs are
        comparable when these parameters match, wherever the data and
        outputs live.
        """
        params = self.to_dict()
        for io_key in ("input_paths", "column_map", "dump_subbin_membership"):
            params.pop(io_key)
        return params

    def column_map_obj(self) -> ColumnMap:
        if not self.column_map:
            raise ConfigError("no column map configured")
        known = set(ColumnMap.__dataclass_fields__)
        unknown = set(self.column_map) - known
        if unknown:
            raise ConfigError(f"unknown column map keys: {sorted(unknown)}")
        return ColumnMap(**self.column_map)


@dataclass
class SubBinResult:
    """Outcome of one sub-bin: indexes, or the reason it was skipped."""

    wind_index: int
    temp_index: int
    wind_label: str
    temp_label: str
    n_samples: int
    status: str  # "ok" or "skipped"
    reason: str | None = None
    n_windows: int | None = None
    slope_high: float | None = None
    slope_low: float | None = None
    slope_moderate: float | None = None
    intercept_high: float | None = None
    intercept_low: float | None = None
    n_observations: int | None = None
    di_value: float | None = None
    di_components: dict | None = None
    norm_out_of_range: int | None = None
    window_concepts: list | None = None  # kept for file emission, not serialized
    pairs_normalized: list | None = None

    def to_dict(self) -> dict:
        out = {
            "wind_bin": self.wind_label,
            "temp_cluster": self.temp_label,
            "n_samples": self.n_samples,
            "status": self.status,
        }
        if self.status == "skipped":
            out["reason"] = self.reason
            return out
        out.update(
            {
                "n_windows": self.n_windows,
                "n_observations": self.n_observations,
                "slope_high": self.slope_high,
                "slope_low": self.slope_low,
                "intercept_high": self.intercept_high,
                "intercept_low": self.intercept_low,
            }
        )
        if self.slope_moderate is not None:
            out["slope_moderate"] = self.slope_moderate
        if self.di_value is not None:
            out["distance_index"] = self.di_value
            out["di_components"] = self.di_components
            out["norm_out_of_range"] = self.norm_out_of_range
        return out


@dataclass
class TurbineAnalysis:
    turbine_id: str
    summary: dict
    counts: dict
    temp_clusters: list
    wind_bins: list
    subbins: list[SubBinResult]
    clean_temperatures: list[float] = field(default_factory=list)
    membership_dump: str | None = None
    regression_high: HealthTable | None = None
    regression_low: HealthTable | None = None
    regression_moderate: HealthTable | None = None
    di: HealthTable | None = None

    def to_dict(self) -> dict:
        out = {
            "summary": self.summary,
            "counts": self.counts,
            "temperature_centroids": [tc.centroid for tc in self.temp_clusters],
            "temperature_boundaries": [tc.upper for tc in self.temp_clusters[:-1]],
            "wind_bins": [wb.label for wb in self.wind_bins],
            "subbins": [sb.to_dict() for sb in self.subbins],
            "regression_high": self.regression_high.to_dict() if self.regression_high else None,
            "regression_low": self.regression_low.to_dict() if self.regression_low else None,
            "distance_index": self.di.to_dict() if self.di else None,
        }
        if self.regression_moderate is not None:
            out["regression_moderate"] = self.regression_moderate.to_dict()
        return out


@dataclass
class HealthReport:
    """Analysis outcome for every turbine of a run, plus run metadata."""

    parameters: dict
    inputs: dict
    turbines: dict[str, TurbineAnalysis]
    manifest: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "parameters": self.parameters,
            "inputs": self.inputs,
            "turbines": {tid: ta.to_dict() for tid, ta in self.turbines.items()},
            "manifest": self.manifest,
        }


def load_inputs(config: RunConfig) -> SeriesSet:
    columns = config.column_map_obj()
    if not config.input_paths:
        raise ConfigError("no input paths configured")
    parts = [load_scada(p, columns) for p in config.input_paths]
    return merge_series(parts)


def _unique_labels(labels: list[str]) -> list[str]:
    seen: dict[str, int] = {}
    out = []
    for label in labels:
        if label in seen:
            seen[label] += 1
            out.append(f"{label}#{seen[label]}")
        else:
            seen[label] = 0
            out.append(label)
    return out


def _scalar_normalized_di(
    pairs: list[distance.CentroidPair], config: RunConfig
) -> distance.DistanceIndex:
    """Alternative mode: distances in raw units scaled by the bounds box."""
    bounds = config.norm_bounds()
    if config.di_metric == distance.METRIC_EUCLIDEAN:
        scale = float(np.sqrt((bounds.spans**2).sum()))
    else:
        scale = float(bounds.spans.sum())
    raw = distance.distance_index(pairs, metric=config.di_metric)
    return distance.DistanceIndex(
        value=raw.value / scale,
        components={k: v / scale for k, v in raw.components.items()},
    )


def analyze_subbin(
    subbin: binning.SubBin,
    wind_index: int,
    temp_index: int,
    config: RunConfig,
) -> SubBinResult:
    """Concepts plus both health indexes for one sub-bin."""
    base = dict(
        wind_index=wind_index,
        temp_index=temp_index,
        wind_label=subbin.wind_bin.label,
        temp_label=subbin.temp_cluster.label,
        n_samples=len(subbin.samples),
    )
    if not subbin.samples:
        return SubBinResult(status="skipped", reason="empty sub-bin", **base)

    powers = [r.power for r in subbin.samples]
    try:
        wcs = concepts.extract_concepts(
            powers,
            n_windows=config.n_windows,
            window_length=config.window_length,
            n_concepts=config.n_concepts,
            m=config.fuzzifier,
            eps=config.fcm_eps,
            max_iter=config.fcm_max_iter,
            min_deltas=config.min_window_deltas,
            seed_fn=lambda w: derive_seed(
                config.seed, _SEED_CONCEPTS, wind_index, temp_index, w
            ),
        )
    except SubBinSkipped as exc:
        return SubBinResult(status="skipped", reason=exc.reason, **base)

    high = regression.ols_slope(regression.concat_memberships(wcs, regression.RANK_HIGH))
    low = regression.ols_slope(regression.concat_memberships(wcs, regression.RANK_LOW))
    moderate = None
    if config.include_moderate and config.n_concepts == 3:
        moderate = regression.ols_slope(
            regression.concat_memberships(wcs, regression.RANK_MODERATE)
        )

    result = SubBinResult(
        status="ok",
        n_windows=len(wcs),
        n_observations=high.n,
        slope_high=high.slope,
        slope_low=low.slope,
        slope_moderate=moderate.slope if moderate else None,
        intercept_high=high.intercept,
        intercept_low=low.intercept,
        window_concepts=wcs,
        **base,
    )

    if config.n_concepts == 3:
        labels = concepts.rank_labels(3)
        pairs = [
            distance.secondary_clustering(
                distance.rank_centroid_series(wcs, pos),
                rank=labels[pos],
                m=config.fuzzifier,
                eps=config.fcm_eps,
                max_iter=config.fcm_max_iter,
                seed=derive_seed(
                    config.seed, _SEED_SECONDARY, wind_index, temp_index, pos
                ),
            )
            for pos in range(3)
        ]
        bounds = config.norm_bounds()
        norm_pairs = [distance.normalized_pair(p, bounds) for p in pairs]
        out_of_range = sum(
            1 for p in pairs for v in (p.v_low, p.v_high) if not bounds.contains(v)
        )
        if config.di_normalization == DI_NORM_COORDS:
            di = distance.distance_index(norm_pairs, metric=config.di_metric)
        else:
            di = _scalar_normalized_di(pairs, config)
        result.di_value = di.value
        result.di_components = dict(sorted(di.components.items()))
        result.norm_out_of_range = out_of_range
        result.pairs_normalized = norm_pairs
    return result


def _membership_dump(subbins: list[binning.SubBin]) -> str:
    rows = ["timestamp,wind_bin,temp_cluster"]
    entries = []
    for sb in subbins:
        for rec in sb.samples:
            entries.append(
                (rec.timestamp, f'{rec.timestamp.isoformat()},"{sb.wind_bin.label}",{sb.temp_cluster.label}')
            )
    entries.sort(key=lambda e: e[0])
    rows.extend(e[1] for e in entries)
    return "\n".join(rows) + "\n"


def analyze_turbine(
    turbine_id: str,
    clean: preprocess.CleanSeries,
    temp_clusters: list[binning.TempCluster],
    summary: dict,
    loaded_count: int,
    config: RunConfig,
) -> TurbineAnalysis:
    wind_bins = binning.make_wind_bins(config.bin_start, config.bin_end, config.bin_width)
    subbins, discarded = binning.assign_subbins(clean.records, wind_bins, temp_clusters)
    counts = {
        "loaded": loaded_count,
        "removed_wind_range": clean.removed_wind_range,
        "removed_ratio_iqr": clean.removed_ratio_iqr,
        "clean": len(clean.records),
        "discarded_outside_bins": discarded,
    }

    row_labels = _unique_labels([tc.label for tc in temp_clusters])
    col_labels = _unique_labels([wb.label for wb in wind_bins])
    n_temp = len(temp_clusters)

    results = []
    for idx, subbin in enumerate(subbins):
        wind_index, temp_index = divmod(idx, n_temp)
        result = analyze_subbin(subbin, wind_index, temp_index, config)
        result.wind_label = col_labels[wind_index]
        result.temp_label = row_labels[temp_index]
        results.append(result)

    ok = [r for r in results if r.status == "ok"]

    def slope_table(attr: str) -> HealthTable:
        indexes = {
            (r.temp_index, r.wind_index): regression.RegressionIndex(
                rank=attr, slope=getattr(r, attr), intercept=0.0, n=r.n_observations
            )
            for r in ok
            if getattr(r, attr) is not None
        }
        return regression.regression_table(
            indexes, row_labels, col_labels, scale=config.slope_scale
        )

    analysis = TurbineAnalysis(
        turbine_id=turbine_id,
        summary=summary,
        counts=counts,
        temp_clusters=temp_clusters,
        wind_bins=wind_bins,
        subbins=results,
        clean_temperatures=[r.temperature for r in clean.records],
        membership_dump=_membership_dump(subbins) if config.dump_subbin_membership else None,
        regression_high=slope_table("slope_high"),
        regression_low=slope_table("slope_low"),
    )
    if config.include_moderate and config.n_concepts == 3:
        analysis.regression_moderate = slope_table("slope_moderate")
    if config.n_concepts == 3:
        di_indexes = {
            (r.temp_index, r.wind_index): distance.DistanceIndex(
                value=r.di_value, components=r.di_components
            )
            for r in ok
            if r.di_value is not None
        }
        analysis.di = distance.di_table(di_indexes, row_labels, col_labels)
    return analysis


def analyze_series(series: SeriesSet, config: RunConfig) -> HealthReport:
    """Run the full pipeline on an in-memory SeriesSet."""
    config.validate()
    if series.n_records == 0:
        raise DataError("series set is empty")
    full_summary = summarize(series)

    cleaned: dict[str, preprocess.CleanSeries] = {}
    for tid in series.turbine_ids:
        try:
            cleaned[tid] = preprocess.clean_series(
                series.series[tid], config.wind_min, config.wind_max
            )
        except DataError as exc:
            raise DataError(f"turbine {tid}, cleaning stage: {exc}") from exc
        if not cleaned[tid].records:
            raise DataError(
                f"turbine {tid}, cleaning stage: no records survive the wind range "
                f"[{config.wind_min}, {config.wind_max})"
            )

    shared_clusters = None
    if config.share_temp_clusters:
        pooled = np.array([r.temperature for c in cleaned.values() for r in c.records])
        shared_clusters = binning.fit_temperature_clusters(
            pooled, config.temp_clusters, seed=derive_seed(config.seed, _SEED_KMEANS)
        )

    turbines: dict[str, TurbineAnalysis] = {}
    for tid in series.turbine_ids:
        clean = cleaned[tid]
        if shared_clusters is not None:
            tclusters = shared_clusters
        else:
            temps = np.array([r.temperature for r in clean.records])
            try:
                tclusters = binning.fit_temperature_clusters(
                    temps, config.temp_clusters, seed=derive_seed(config.seed, _SEED_KMEANS)
                )
            except DataError as exc:
                raise DataError(f"turbine {tid}, binning stage: {exc}") from exc
        turbines[tid] = analyze_turbine(
            tid, clean, tclusters, full_summary[tid], len(series.series[tid]), config
        )

    return HealthReport(
        parameters=config.analysis_params(),
        inputs={
            "paths": list(config.input_paths),
            "column_map": dict(config.column_map),
            "dropped_rows": dict(series.dropped),
        },
        turbines=turbines,
    )


def analyze(config: RunConfig) -> HealthReport:
    """Load the configured inputs and run the full pipeline."""
    config.validate()
    return analyze_series(load_inputs(config), config)


# ---------------------------------------------------------------------------
# report writing


def _sanitize(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "_", name)


def _subbin_file_tag(result: SubBinResult) -> str:
    wind = result.wind_label.strip("[)").replace(", ", "-")
    return _sanitize(f"w{wind}_t{result.temp_label}")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _dump_json(obj: dict, path: Path) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def histogram_data(values, bins: int = 30) -> tuple[np.ndarray, np.ndarray]:
    """Histogram (edges, counts) of a value list, for external plotting."""
    counts, edges = np.histogram(np.asarray(values, dtype=float), bins=bins)
    return edges, counts


def write_histogram_csv(values, path: Path, bins: int = 30) -> None:
    edges, counts = histogram_data(values, bins=bins)
    with path.open("w", newline="", encoding="utf-8") as fh:
        fh.write("bin_left,bin_right,count\n")
        for i, count in enumerate(counts):
            fh.write(f"{float(edges[i])!r},{float(edges[i + 1])!r},{int(count)}\n")


def _write_dropped_report(report: HealthReport, path: Path) -> None:
    lines = ["dropped and removed record summary", ""]
    lines.append("ingest drops (all files):")
    for reason, count in sorted(report.inputs["dropped_rows"].items()):
        lines.append(f"  {reason}: {count}")
    for tid, ta in sorted(report.turbines.items()):
        lines.append("")
        lines.append(f"turbine {tid}:")
        for key in ("loaded", "removed_wind_range", "removed_ratio_iqr", "clean",
                    "discarded_outside_bins"):
            lines.append(f"  {key}: {ta.counts[key]}")
        skipped = [sb for sb in ta.subbins if sb.status == "skipped"]
        lines.append(f"  skipped sub-bins: {len(skipped)}")
        for sb in skipped:
            lines.append(f"    {sb.wind_label} x {sb.temp_label}: {sb.reason}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_report(
    report: HealthReport, out_dir: str | Path, plot_data_only: bool = False
) -> Path:
    """Write all run artifacts under out_dir; returns the report path.

    Every emitted file lands in the manifest with its content hash. File
    contents never depend on the output location, so re-running the same
    configuration elsewhere gives identical hashes. With plot_data_only,
    only plot-data files plus a manifest are written.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    region_grid = int(report.parameters.get("region_grid", 50))
    manifest: dict[str, str] = {}

    def record(path: Path) -> None:
        manifest[path.name] = _sha256(path)

    for tid, ta in sorted(report.turbines.items()):
        stem = _sanitize(tid)
        if not plot_data_only:
            for name, table in (
                (f"regression_high_{stem}.csv", ta.regression_high),
                (f"regression_low_{stem}.csv", ta.regression_low),
                (f"regression_moderate_{stem}.csv", ta.regression_moderate),
                (f"distance_index_{stem}.csv", ta.di),
            ):
                if table is None:
                    continue
                path = out / name
                table.write_csv(path)
                record(path)
            if ta.membership_dump is not None:
                dump = out / f"subbin_membership_{stem}.csv"
                dump.write_text(ta.membership_dump, encoding="utf-8")
                record(dump)
        # plot data: concept scatter, nearest-concept region maps, histogram
        for sb in ta.subbins:
            if sb.status != "ok" or sb.window_concepts is None:
                continue
            tag = _subbin_file_tag(sb)
            scatter = out / f"concepts_{stem}_{tag}.csv"
            concepts.emit_concept_scatter(sb.window_concepts, scatter)
            record(scatter)
            if sb.pairs_normalized:
                region = out / f"region_map_{stem}_{tag}.csv"
                distance.emit_region_map(sb.pairs_normalized, region_grid, region)
                record(region)
        if ta.clean_temperatures:
            hist = out / f"temperature_hist_{stem}.csv"
            write_histogram_csv(ta.clean_temperatures, hist)
            record(hist)

    dropped = out / "dropped_rows.txt"
    _write_dropped_report(report, dropped)
    record(dropped)

    report.manifest = dict(sorted(manifest.items()))
    if plot_data_only:
        report_path = out / "manifest.json"
        _dump_json({"schema": REPORT_SCHEMA, "manifest": report.manifest}, report_path)
    else:
        report_path = out / "report.json"
        _dump_json(report.to_dict(), report_path)
    return report_path


# ---------------------------------------------------------------------------
# report comparison


def compare_reports(reports: list[dict]) -> dict:
    """Rank turbines across reports by total drift and by slope sums.

    All reports must carry identical analysis parameters. Returns both
    rankings (ascending total distance index; descending summed high-rank
    slope) with their raw totals. Ties keep turbine-id order.
    """
    if len(reports) < 2:
        raise ConfigError("need at least two reports to compare")
    reference = reports[0].get("parameters")
    if reference is None:
        raise DataError("report lacks parameters; not a report file?")
    for i, rep in enumerate(reports[1:], start=2):
        if rep.get("parameters") != reference:
            raise ConfigError(f"report {i} was produced with different parameters")

    di_totals: dict[str, float] = {}
    slope_totals: dict[str, float] = {}
    for rep in reports:
        for tid, ta in rep["turbines"].items():
            if tid in di_totals:
                raise DataError(f"turbine {tid} appears in more than one report")
            di = ta.get("distance_index")
            di_totals[tid] = di["grand_total"] if di else float("nan")
            slope_totals[tid] = sum(
                sb["slope_high"]
                for sb in ta["subbins"]
                if sb["status"] == "ok" and sb.get("slope_high") is not None
            )

    di_ranking = sorted(di_totals, key=lambda t: (di_totals[t], t))
    slope_ranking = sorted(slope_totals, key=lambda t: (-slope_totals[t], t))
    return {
        "di_ranking": [
            {"turbine": t, "di_grand_total": di_totals[t]} for t in di_ranking
        ],
        "slope_ranking": [
            {"turbine": t, "summed_high_slope": slope_totals[t]} for t in slope_ranking
        ],
    }
