"""Command-line front end.

Subcommands: analyze, compare, synth, summarize, plot-data. Configuration
may come from a JSON file (--config); individual flags override file
values. Exit codes: 0 success, 1 usage/config error, 2 data error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import pipeline, synth
from .errors import ConfigError, DataError, NumericalError, WindHealthError
from .ingest import ColumnMap, load_scada, merge_series, summarize, write_scada_csv

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; this tool reserves 2 for data
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


class UsageError(Exception):
    pass


# maps CLI dest -> RunConfig field
_CONFIG_FLAGS = {
    "wind_min": "wind_min",
    "wind_max": "wind_max",
    "wind_bin_start": "bin_start",
    "wind_bin_end": "bin_end",
    "wind_bin_width": "bin_width",
    "temp_clusters": "temp_clusters",
    "share_temp_clusters": "share_temp_clusters",
    "windows": "n_windows",
    "window_length": "window_length",
    "concepts": "n_concepts",
    "fuzzifier": "fuzzifier",
    "fcm_eps": "fcm_eps",
    "fcm_max_iter": "fcm_max_iter",
    "min_window_deltas": "min_window_deltas",
    "slope_scale": "slope_scale",
    "include_moderate": "include_moderate",
    "di_metric": "di_metric",
    "di_normalization": "di_normalization",
    "norm_power_min": "norm_power_min",
    "norm_power_max": "norm_power_max",
    "norm_dpower_min": "norm_dpower_min",
    "norm_dpower_max": "norm_dpower_max",
    "region_grid": "region_grid",
    "dump_subbins": "dump_subbin_membership",
    "seed": "seed",
}


def _add_column_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--col-timestamp", default="timestamp")
    p.add_argument("--col-wind", default="wind_speed")
    p.add_argument("--col-temp", default="temperature")
    p.add_argument("--col-power", default="power")
    p.add_argument("--col-turbine", default=None,
                   help="column holding turbine ids")
    p.add_argument("--turbine-id", default=None,
                   help="constant turbine id when the file has no id column")
    p.add_argument("--timestamp-format", default=None,
                   help="strptime format; ISO-8601 when omitted")


def _add_analysis_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", action="append", default=None, metavar="CSV")
    p.add_argument("--config", default=None, help="JSON run configuration")
    _add_column_flags(p)
    p.add_argument("--wind-min", type=float, default=None)
    p.add_argument("--wind-max", type=float, default=None)
    p.add_argument("--wind-bin-start", type=float, default=None)
    p.add_argument("--wind-bin-end", type=float, default=None)
    p.add_argument("--wind-bin-width", type=float, default=None)
    p.add_argument("--temp-clusters", type=int, default=None)
    p.add_argument("--share-temp-clusters", action=argparse.BooleanOptionalAction,
                   default=None)
    p.add_argument("--windows", type=int, default=None,
                   help="number of windows per sub-bin")
    p.add_argument("--window-length", type=int, default=None,
                   help="fixed samples per window (alternative to --windows)")
    p.add_argument("--concepts", type=int, default=None)
    p.add_argument("--fuzzifier", type=float, default=None)
    p.add_argument("--fcm-eps", type=float, default=None)
    p.add_argument("--fcm-max-iter", type=int, default=None)
    p.add_argument("--min-window-deltas", type=int, default=None)
    p.add_argument("--slope-scale", type=float, default=None)
    p.add_argument("--include-moderate", action=argparse.BooleanOptionalAction,
                   default=None)
    p.add_argument("--di-metric", choices=["euclidean", "manhattan"], default=None)
    p.add_argument("--di-normalization", choices=["coords", "scalar"], default=None)
    p.add_argument("--norm-power-min", type=float, default=None)
    p.add_argument("--norm-power-max", type=float, default=None)
    p.add_argument("--norm-dpower-min", type=float, default=None)
    p.add_argument("--norm-dpower-max", type=float, default=None)
    p.add_argument("--region-grid", type=int, default=None)
    p.add_argument("--dump-subbins", action=argparse.BooleanOptionalAction,
                   default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True, help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="windhealth",
                     description="Wind-turbine degradation indexes from SCADA data")
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="run the full pipeline")
    _add_analysis_flags(p_analyze)

    p_plot = sub.add_parser("plot-data", help="emit only the plot-data files")
    _add_analysis_flags(p_plot)

    p_compare = sub.add_parser("compare", help="rank turbines across reports")
    p_compare.add_argument("reports", nargs="+", help="report.json paths")
    p_compare.add_argument("--out", default=None, help="write ranking JSON here")

    p_synth = sub.add_parser("synth", help="generate synthetic SCADA data")
    p_synth.add_argument("--out", required=True, help="output CSV path")
    p_synth.add_argument("--config", default=None, help="JSON generator configuration")
    p_synth.add_argument("--samples", type=int, default=None)
    p_synth.add_argument("--period-minutes", type=float, default=None)
    p_synth.add_argument("--start", default=None, help="ISO start timestamp")
    p_synth.add_argument("--turbine-id", default=None)
    p_synth.add_argument("--wind-model", choices=["uniform", "ar1"], default=None)
    p_synth.add_argument("--wind-lo", type=float, default=None)
    p_synth.add_argument("--wind-hi", type=float, default=None)
    p_synth.add_argument("--wind-ar-coeff", type=float, default=None)
    p_synth.add_argument("--temp-centers", default=None,
                         help="comma-separated cluster centers")
    p_synth.add_argument("--temp-spread", type=float, default=None)
    p_synth.add_argument("--power-curve",
                         choices=["cubic_ramp", "proportional", "staircase"],
                         default=None)
    p_synth.add_argument("--cut-in", type=float, default=None)
    p_synth.add_argument("--rated-speed", type=float, default=None)
    p_synth.add_argument("--rated-power", type=float, default=None)
    p_synth.add_argument("--degradation", type=float, default=None)
    p_synth.add_argument("--noise", type=float, default=None)
    p_synth.add_argument("--seed", type=int, default=None)

    p_sum = sub.add_parser("summarize", help="per-turbine counts and ranges")
    p_sum.add_argument("--input", action="append", required=True, metavar="CSV")
    _add_column_flags(p_sum)

    return parser


def _column_map_from_args(args) -> dict:
    cmap = {
        "timestamp": args.col_timestamp,
        "wind": args.col_wind,
        "temperature": args.col_temp,
        "power": args.col_power,
    }
    if args.col_turbine:
        cmap["turbine"] = args.col_turbine
    if args.turbine_id:
        cmap["constant_turbine_id"] = args.turbine_id
    if args.timestamp_format:
        cmap["timestamp_format"] = args.timestamp_format
    if "turbine" not in cmap and "constant_turbine_id" not in cmap:
        # sensible default: expect a turbine_id column
        cmap["turbine"] = "turbine_id"
    return cmap


def _run_config_from_args(args) -> pipeline.RunConfig:
    data: dict = {}
    if args.config:
        cfg_path = Path(args.config)
        if not cfg_path.is_file():
            raise ConfigError(f"config file not found: {cfg_path}")
        try:
            data = json.loads(cfg_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
    config = pipeline.RunConfig.from_dict(data)

    for dest, field_name in _CONFIG_FLAGS.items():
        value = getattr(args, dest)
        if value is not None:
            setattr(config, field_name, value)
    # choosing a windowing mode on the command line silences the other one
    if args.windows is not None and args.window_length is None:
        config.window_length = None
    if args.window_length is not None and args.windows is None:
        config.n_windows = None
    if args.input:
        config.input_paths = list(args.input)
    if not config.column_map:
        config.column_map = _column_map_from_args(args)
    config.validate()
    return config


def _cmd_analyze(args, plot_data_only: bool) -> int:
    config = _run_config_from_args(args)
    report = pipeline.analyze(config)
    report_path = pipeline.write_report(report, args.out, plot_data_only=plot_data_only)
    n_skipped = sum(
        1 for ta in report.turbines.values() for sb in ta.subbins if sb.status == "skipped"
    )
    print(f"analyzed {len(report.turbines)} turbine(s), "
          f"{n_skipped} skipped sub-bin(s); wrote {report_path}")
    return EXIT_OK


def _cmd_compare(args) -> int:
    reports = []
    for path in args.reports:
        p = Path(path)
        if not p.is_file():
            raise DataError(f"report not found: {p}")
        reports.append(json.loads(p.read_text(encoding="utf-8")))
    ranking = pipeline.compare_reports(reports)
    print("ranking by total distance index (healthiest first):")
    for row in ranking["di_ranking"]:
        print(f"  {row['turbine']}: {row['di_grand_total']:.4f}")
    print("ranking by summed high-rank slope (healthiest first):")
    for row in ranking["slope_ranking"]:
        print(f"  {row['turbine']}: {row['summed_high_slope']:.3e}")
    if args.out:
        Path(args.out).write_text(
            json.dumps(ranking, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        print(f"wrote {args.out}")
    return EXIT_OK


def _synth_config_from_args(args) -> synth.SynthConfig:
    data: dict = {}
    if args.config:
        cfg_path = Path(args.config)
        if not cfg_path.is_file():
            raise ConfigError(f"config file not found: {cfg_path}")
        data = json.loads(cfg_path.read_text(encoding="utf-8"))
        if "start" in data:
            data["start"] = datetime.fromisoformat(data["start"])
        if "temp_centers" in data:
            data["temp_centers"] = tuple(data["temp_centers"])
    flag_map = {
        "samples": "n_samples",
        "period_minutes": "sampling_period_minutes",
        "turbine_id": "turbine_id",
        "wind_model": "wind_model",
        "wind_lo": "wind_lo",
        "wind_hi": "wind_hi",
        "wind_ar_coeff": "wind_ar_coeff",
        "temp_spread": "temp_spread",
        "power_curve": "power_curve",
        "cut_in": "cut_in",
        "rated_speed": "rated_speed",
        "rated_power": "rated_power",
        "degradation": "degradation",
        "noise": "noise",
        "seed": "seed",
    }
    for dest, field_name in flag_map.items():
        value = getattr(args, dest)
        if value is not None:
            data[field_name] = value
    if args.start is not None:
        start = datetime.fromisoformat(args.start)
        data["start"] = start if start.tzinfo else start.replace(tzinfo=timezone.utc)
    if args.temp_centers is not None:
        try:
            data["temp_centers"] = tuple(
                float(x) for x in args.temp_centers.split(",") if x.strip()
            )
        except ValueError as exc:
            raise ConfigError(f"bad --temp-centers: {exc}") from exc
    unknown = set(data) - set(synth.SynthConfig.__dataclass_fields__)
    if unknown:
        raise ConfigError(f"unknown generator config keys: {sorted(unknown)}")
    config = synth.SynthConfig(**data)
    config.validate()
    return config


def _cmd_synth(args) -> int:
    config = _synth_config_from_args(args)
    series = synth.generate_scada(config)
    write_scada_csv(series, args.out)
    print(f"wrote {series.n_records} records for {config.turbine_id} to {args.out}")
    return EXIT_OK


def _cmd_summarize(args) -> int:
    cmap_dict = _column_map_from_args(args)
    columns = ColumnMap(**cmap_dict)
    series = merge_series([load_scada(p, columns) for p in args.input])
    print(json.dumps(summarize(series), indent=2, sort_keys=True))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "analyze":
            return _cmd_analyze(args, plot_data_only=False)
        if args.command == "plot-data":
            return _cmd_analyze(args, plot_data_only=True)
        if args.command == "compare":
            return _cmd_compare(args)
        if args.command == "synth":
            return _cmd_synth(args)
        if args.command == "summarize":
            return _cmd_summarize(args)
        parser.error(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (NumericalError, WindHealthError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
