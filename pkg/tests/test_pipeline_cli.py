import hashlib
import json
from pathlib import Path

import numpy as np
import pytest

from windhealth.cli import main
from windhealth.errors import ConfigError, DataError
from windhealth.pipeline import RunConfig, analyze_series, compare_reports, write_report
from windhealth.synth import SynthConfig, generate_scada
from windhealth.ingest import write_scada_csv

SYNTH_BASE = dict(
    n_samples=20_000, noise=0.02, power_curve="staircase",
    wind_model="uniform", wind_lo=4.75, wind_hi=7.75,
)


def synth_csv(path, turbine_id="A01", degradation=0.0, seed=4):
    config = SynthConfig(turbine_id=turbine_id, degradation=degradation,
                         seed=seed, **SYNTH_BASE)
    write_scada_csv(generate_scada(config), path)
    return path


@pytest.fixture(scope="module")
def stationary_csv(tmp_path_factory):
    return synth_csv(tmp_path_factory.mktemp("data") / "stationary.csv")


def hash_dir(d: Path) -> dict:
    return {
        p.name: hashlib.sha256(p.read_bytes()).hexdigest()
        for p in sorted(d.iterdir())
    }


def test_analyze_writes_expected_artifacts(stationary_csv, tmp_path):
    out = tmp_path / "run"
    code = main([
        "analyze", "--input", str(stationary_csv), "--out", str(out), "--seed", "11",
    ])
    assert code == 0
    report = json.loads((out / "report.json").read_text())
    assert report["schema"] == "windhealth-report/1"
    names = {p.name for p in out.iterdir()}
    assert {"report.json", "dropped_rows.txt", "regression_high_A01.csv",
            "regression_low_A01.csv", "distance_index_A01.csv",
            "temperature_hist_A01.csv"} <= names
    ok_subbins = [
        sb for sb in report["turbines"]["A01"]["subbins"] if sb["status"] == "ok"
    ]
    assert len([n for n in names if n.startswith("concepts_A01_")]) == len(ok_subbins)
    assert len([n for n in names if n.startswith("region_map_A01_")]) == len(ok_subbins)
    # every file except the report itself is in the manifest with its hash
    hashes = hash_dir(out)
    assert set(report["manifest"]) == names - {"report.json"}
    for name, digest in report["manifest"].items():
        assert hashes[name] == digest


def test_analyze_is_byte_identical_across_output_dirs(stationary_csv, tmp_path):
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    args = ["analyze", "--input", str(stationary_csv), "--seed", "11"]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert hash_dir(out1) == hash_dir(out2)


def test_report_structure_tables_and_skips(stationary_csv, tmp_path):
    out = tmp_path / "run"
    main(["analyze", "--input", str(stationary_csv), "--out", str(out),
          "--seed", "11", "--wind-bin-end", "8.5"])
    report = json.loads((out / "report.json").read_text())
    ta = report["turbines"]["A01"]
    assert len(ta["wind_bins"]) == 7
    assert len(ta["temperature_centroids"]) == 4
    # the synthetic wind stops at 7.75, so [8, 8.5) cells have no data
    skipped = [sb for sb in ta["subbins"] if sb["status"] == "skipped"]
    assert len(skipped) >= 4
    assert all(sb["reason"] for sb in skipped)
    table = ta["regression_high"]
    assert len(table["values"]) == 4 and len(table["values"][0]) == 7
    di = ta["distance_index"]
    assert di["grand_total"] == pytest.approx(
        sum(v for row in di["values"] for v in row if v is not None)
    )


def test_plot_data_subcommand_writes_only_plot_files(stationary_csv, tmp_path):
    out = tmp_path / "plot"
    code = main(["plot-data", "--input", str(stationary_csv), "--out", str(out),
                 "--seed", "11"])
    assert code == 0
    names = {p.name for p in out.iterdir()}
    assert "manifest.json" in names
    assert not any(n.startswith("regression_") for n in names)
    assert any(n.startswith("concepts_") for n in names)
    assert any(n.startswith("region_map_") for n in names)
    assert any(n.startswith("temperature_hist_") for n in names)
    manifest = json.loads((out / "manifest.json").read_text())
    assert set(manifest["manifest"]) == names - {"manifest.json"}


def test_compare_ranks_degraded_turbine_worse(tmp_path):
    healthy = synth_csv(tmp_path / "h.csv", turbine_id="H01")
    degraded = synth_csv(tmp_path / "d.csv", turbine_id="D01", degradation=2e-5)
    out_h, out_d = tmp_path / "run_h", tmp_path / "run_d"
    assert main(["analyze", "--input", str(healthy), "--out", str(out_h),
                 "--seed", "11"]) == 0
    assert main(["analyze", "--input", str(degraded), "--out", str(out_d),
                 "--seed", "11"]) == 0
    ranking_path = tmp_path / "ranking.json"
    code = main(["compare", str(out_h / "report.json"), str(out_d / "report.json"),
                 "--out", str(ranking_path)])
    assert code == 0
    ranking = json.loads(ranking_path.read_text())
    assert [r["turbine"] for r in ranking["di_ranking"]] == ["H01", "D01"]
    assert [r["turbine"] for r in ranking["slope_ranking"]] == ["H01", "D01"]


def test_compare_rejects_mismatched_parameters(tmp_path, stationary_csv):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    main(["analyze", "--input", str(stationary_csv), "--out", str(out1),
          "--seed", "11"])
    main(["analyze", "--input", str(stationary_csv), "--out", str(out2),
          "--seed", "12"])
    code = main(["compare", str(out1 / "report.json"), str(out2 / "report.json")])
    assert code == 1


def test_compare_tie_keeps_turbine_id_order():
    report = {"parameters": {"seed": 1}, "turbines": {
        "B": {"distance_index": {"grand_total": 1.0},
              "subbins": [{"status": "ok", "slope_high": -1e-6}]},
    }}
    other = {"parameters": {"seed": 1}, "turbines": {
        "A": {"distance_index": {"grand_total": 1.0},
              "subbins": [{"status": "ok", "slope_high": -1e-6}]},
    }}
    ranking = compare_reports([report, other])
    assert [r["turbine"] for r in ranking["di_ranking"]] == ["A", "B"]
    assert [r["turbine"] for r in ranking["slope_ranking"]] == ["A", "B"]


def test_synth_and_summarize_commands(tmp_path, capsys):
    csv = tmp_path / "gen.csv"
    assert main(["synth", "--out", str(csv), "--samples", "250", "--seed", "3",
                 "--turbine-id", "X9"]) == 0
    capsys.readouterr()
    assert main(["summarize", "--input", str(csv)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["X9"]["count"] == 250


def test_config_file_with_flag_override(tmp_path, stationary_csv):
    cfg = {
        "input_paths": [str(stationary_csv)],
        "column_map": {"timestamp": "timestamp", "wind": "wind_speed",
                       "temperature": "temperature", "power": "power",
                       "turbine": "turbine_id"},
        "seed": 11,
        "n_windows": 10,
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    out = tmp_path / "run"
    assert main(["analyze", "--config", str(cfg_path), "--out", str(out),
                 "--windows", "5"]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["parameters"]["n_windows"] == 5
    assert report["parameters"]["seed"] == 11


def test_exit_codes(tmp_path, stationary_csv):
    # data error: missing input file
    assert main(["analyze", "--input", str(tmp_path / "nope.csv"),
                 "--out", str(tmp_path / "o1")]) == 2
    # config error: invalid parameter value
    assert main(["analyze", "--input", str(stationary_csv),
                 "--out", str(tmp_path / "o2"), "--concepts", "0"]) == 1
    # usage error: unknown flag
    assert main(["analyze", "--no-such-flag"]) == 1
    # config error: window modes conflict
    assert main(["analyze", "--input", str(stationary_csv),
                 "--out", str(tmp_path / "o3"), "--windows", "5",
                 "--window-length", "40"]) == 1
    # synth usage error
    assert main(["synth", "--out", str(tmp_path / "s.csv"),
                 "--power-curve", "banana"]) == 1


def test_window_length_mode_via_cli(tmp_path, stationary_csv):
    out = tmp_path / "wl"
    assert main(["analyze", "--input", str(stationary_csv), "--out", str(out),
                 "--seed", "11", "--window-length", "40"]) == 0
    report = json.loads((out / "report.json").read_text())
    ok = [sb for sb in report["turbines"]["A01"]["subbins"] if sb["status"] == "ok"]
    assert ok and all(sb["n_windows"] >= 2 for sb in ok)
    assert report["parameters"]["window_length"] == 40
    assert report["parameters"]["n_windows"] is None


def test_subbin_membership_dump_flag(tmp_path, stationary_csv):
    out = tmp_path / "dump"
    assert main(["analyze", "--input", str(stationary_csv), "--out", str(out),
                 "--seed", "11", "--dump-subbins"]) == 0
    dump = out / "subbin_membership_A01.csv"
    assert dump.is_file()
    lines = dump.read_text().strip().splitlines()
    assert lines[0] == "timestamp,wind_bin,temp_cluster"
    report = json.loads((out / "report.json").read_text())
    clean = report["turbines"]["A01"]["counts"]["clean"]
    discarded = report["turbines"]["A01"]["counts"]["discarded_outside_bins"]
    assert len(lines) - 1 == clean - discarded


def test_scalar_normalization_mode(stationary_csv, tmp_path):
    out = tmp_path / "scalar"
    assert main(["analyze", "--input", str(stationary_csv), "--out", str(out),
                 "--seed", "11", "--di-normalization", "scalar"]) == 0
    report = json.loads((out / "report.json").read_text())
    ok = [sb for sb in report["turbines"]["A01"]["subbins"] if sb["status"] == "ok"]
    assert all(sb["distance_index"] >= 0 for sb in ok)


def test_run_config_round_trip_and_validation():
    config = RunConfig(seed=5, n_windows=None, window_length=30)
    clone = RunConfig.from_dict(config.to_dict())
    assert clone == config
    with pytest.raises(ConfigError):
        RunConfig(seed=-1).validate()
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"bogus_key": 1})
    with pytest.raises(ConfigError):
        RunConfig(norm_power_min=5.0, norm_power_max=5.0).validate()


def test_analyze_series_errors_name_the_stage():
    series = generate_scada(SynthConfig(n_samples=50, seed=1, wind_lo=0.5,
                                        wind_hi=2.0))
    with pytest.raises(DataError) as err:
        analyze_series(series, RunConfig(seed=1))
    assert "cleaning stage" in str(err.value)
