"""CLI tests: subcommands, config layering, dataset round-trips, exit codes."""
import json
import math
import os
import subprocess
import sys

import numpy as np

from nontwist.cli import main
from nontwist.io import read_csv, read_json, write_csv


def run_cli(args, cwd):
    old = os.getcwd()
    os.chdir(cwd)
    try:
        return main(args)
    finally:
        os.chdir(old)


class TestThresholds:
    def test_full_range_finds_both_thresholds(self, tmp_path):
        code = run_cli(["thresholds", "--a", "1.5", "--k", "0.018",
                        "--b-range", "-3:1"], tmp_path)
        assert code == 0
        doc = read_json(tmp_path / "thresholds.json")
        r1 = doc["i_ii"]["roots"]
        r2 = doc["ii_iii"]["roots"]
        assert len(r1) == 1 and abs(r1[0]["b_root"] - (-1.9538)) <= 1e-3
        assert len(r2) == 1 and abs(r2[0]["b_root"] - 0.53168) <= 1e-4
        for root in r1 + r2:
            assert abs(root["residual_at_root"]) <= 1e-10
            lo, hi = root["bracket"]
            assert lo < root["b_root"] < hi

    def test_empty_range_exits_zero(self, tmp_path):
        code = run_cli(["thresholds", "--a", "1.5", "--k", "0.018",
                        "--b-range", "0.6:0.7"], tmp_path)
        assert code == 0
        doc = read_json(tmp_path / "thresholds.json")
        assert doc["i_ii"]["roots"] == []
        assert doc["ii_iii"]["roots"] == []

    def test_triple_point(self, tmp_path):
        code = run_cli(["thresholds", "--a", "1.5", "--triple"], tmp_path)
        assert code == 0
        doc = read_json(tmp_path / "thresholds.json")
        assert abs(doc["triple"]["b"] - 0.5) <= 1e-9
        assert abs(doc["triple"]["k"] - 0.0625) <= 1e-9
        assert abs(doc["triple"]["residual_i_ii"]) <= 1e-9

    def test_range_required_without_triple(self, tmp_path):
        assert run_cli(["thresholds", "--a", "1.5", "--k", "0.018"], tmp_path) == 2


class TestPortrait:
    def test_fig3a_dataset(self, tmp_path):
        code = run_cli(["portrait", "--a", "1.5", "--b", "-4", "--k", "0.018",
                        "--steps", "400"], tmp_path)
        assert code == 0
        doc = read_json(tmp_path / "portrait_equilibria.json")
        assert len(doc["equilibria"]) == 6
        labels = {e["label"]: e["stability"] for e in doc["equilibria"]}
        assert labels["P1"] == "hyperbolic"
        header, rows = read_csv(tmp_path / "portrait_traces.csv")
        assert header == ["trace_id", "source", "x", "y", "H"]
        assert rows
        sources = {r[1] for r in rows}
        assert "flow" in sources and "separatrix" in sources

    def test_beyond_fold_two_equilibria(self, tmp_path):
        code = run_cli(["portrait", "--a", "1.5", "--b", "0.6", "--k", "0.018",
                        "--steps", "200"], tmp_path)
        assert code == 0
        doc = read_json(tmp_path / "portrait_equilibria.json")
        assert len(doc["equilibria"]) == 2

    def test_deterministic_csv(self, tmp_path):
        d1 = tmp_path / "run1"
        d2 = tmp_path / "run2"
        d1.mkdir()
        d2.mkdir()
        args = ["portrait", "--a", "1.5", "--b", "0.5", "--k", "0.018",
                "--steps", "200"]
        assert run_cli(args, d1) == 0
        assert run_cli(args, d2) == 0
        assert (d1 / "portrait_traces.csv").read_bytes() == (
            d2 / "portrait_traces.csv"
        ).read_bytes()

    def test_provenance_reproduces_run(self, tmp_path):
        d1 = tmp_path / "run1"
        d2 = tmp_path / "run2"
        d1.mkdir()
        d2.mkdir()
        assert run_cli(["portrait", "--a", "1.5", "--b", "0.5", "--k", "0.018",
                        "--steps", "150"], d1) == 0
        echoed = read_json(d1 / "portrait_equilibria.json")["provenance"]["config"]
        echoed.pop("out", None)
        cfg_path = tmp_path / "echo.json"
        cfg_path.write_text(json.dumps(echoed))
        assert run_cli(["portrait", "--config", str(cfg_path)], d2) == 0
        assert (d1 / "portrait_traces.csv").read_bytes() == (
            d2 / "portrait_traces.csv"
        ).read_bytes()

    def test_svg_output(self, tmp_path):
        svg = tmp_path / "fig.svg"
        code = run_cli(["portrait", "--a", "1.5", "--b", "0.5", "--k", "0.018",
                        "--steps", "200", "--svg", str(svg)], tmp_path)
        assert code == 0
        text = svg.read_text()
        assert text.startswith("<?xml")
        assert 'version="1.1"' in text
        assert "<polyline" in text
        assert "<circle" in text  # elliptic markers
        assert text.count("stroke-dasharray") == 2  # symmetry lines at 0 and pi

    def test_explicit_window_and_res(self, tmp_path):
        code = run_cli(["portrait", "--a", "1.5", "--b", "0.5", "--k", "0.018",
                        "--steps", "100", "--window", "0:6.283185307179586:-0.5:2.5",
                        "--res", "64:64"], tmp_path)
        assert code == 0
        doc = read_json(tmp_path / "portrait_equilibria.json")
        assert doc["window"]["y_min"] == -0.5
        assert doc["window"]["nx"] == 64
        _, rows = read_csv(tmp_path / "portrait_traces.csv")
        flow_ys = [r[3] for r in rows if r[1] == "flow"]
        assert min(flow_ys) >= -0.5 - 0.2  # seeds drawn from the window

    def test_bad_window_is_config_error(self, tmp_path):
        assert run_cli(["portrait", "--a", "1.5", "--b", "0.5", "--k", "0.018",
                        "--window", "1:0:5:2"], tmp_path) == 2

    def test_seeds_file(self, tmp_path):
        seeds = tmp_path / "seeds.json"
        seeds.write_text(json.dumps([[3.14159, 0.1], [0.5, 1.0]]))
        code = run_cli(["portrait", "--a", "1.5", "--b", "0.5", "--k", "0.018",
                        "--steps", "100", "--seeds", str(seeds)], tmp_path)
        assert code == 0
        header, rows = read_csv(tmp_path / "portrait_traces.csv")
        flow_ids = {r[0] for r in rows if r[1] == "flow"}
        assert len(flow_ids) == 2


class TestScan:
    def test_fig5_style_sweep(self, tmp_path):
        code = run_cli(["scan", "--a", "1.5", "--k", "0.018",
                        "--b-range", "0.3:0.7", "--steps", "9"], tmp_path)
        assert code == 0
        header, rows = read_csv(tmp_path / "scan.csv")
        assert header[:2] == ["b", "equilibrium_count"]
        counts = [r[1] for r in rows]
        assert counts == [6, 6, 6, 6, 6, 6, 2, 2, 2]
        regimes_ii_iii = [r[5] for r in rows]
        assert regimes_ii_iii == [
            "birkhoff_pair", "birkhoff_pair", "birkhoff_pair", "birkhoff_pair",
            "birkhoff_pair", "dimerised_pair", "chains_absent", "chains_absent",
            "chains_absent",
        ]

    def test_count_drops_across_fold(self, tmp_path):
        # samples 0.5, 0.5625, 0.625: the fold value is hit exactly
        code = run_cli(["scan", "--a", "1.5", "--k", "0.018",
                        "--b-range", "0.5:0.625", "--steps", "3"], tmp_path)
        assert code == 0
        _, rows = read_csv(tmp_path / "scan.csv")
        assert [r[1] for r in rows] == [6, 4, 2]

    def test_sentinels_at_hole_and_fold(self, tmp_path):
        code = run_cli(["scan", "--a", "1.5", "--k", "0.018",
                        "--b-range", "-0.5:0.5", "--steps", "3"], tmp_path)
        assert code == 0
        _, rows = read_csv(tmp_path / "scan.csv")
        hole = rows[1]
        assert hole[0] == 0.0
        assert all(cell == "undefined" for cell in hole[1:])

    def test_single_sample_matches_library(self, tmp_path):
        from nontwist import residual_I_II, residual_II_III

        code = run_cli(["scan", "--a", "1.5", "--k", "0.018",
                        "--b-range", "0.5:0.6", "--steps", "1"], tmp_path)
        assert code == 0
        _, rows = read_csv(tmp_path / "scan.csv")
        assert len(rows) == 1
        b = rows[0][0]
        assert b == 0.5
        assert rows[0][2] == residual_I_II(1.5, 0.5, 0.018)
        assert rows[0][3] == residual_II_III(1.5, 0.5, 0.018)

    def test_topology_column(self, tmp_path):
        code = run_cli(["scan", "--a", "1.5", "--k", "0.018",
                        "--b-range", "0.5:0.54", "--steps", "2", "--topology"],
                       tmp_path)
        assert code == 0
        header, rows = read_csv(tmp_path / "scan.csv")
        assert header[-1] == "chain_topology_II_III"
        assert [r[-1] for r in rows] == ["separated", "separated"]


class TestRotation:
    def test_twistless_block(self, tmp_path):
        code = run_cli(["rotation", "--a", "2.5", "--b", "1.26",
                        "--y-range", "-1:2"], tmp_path)
        assert code == 0
        doc = read_json(tmp_path / "rotation.json")
        tw = doc["twistless"]
        assert abs(tw["y_c1"] - 1.07716) <= 1e-4
        assert abs(tw["y_c2"] - 0.24563) <= 1e-4
        assert abs(tw["rho_c1_closed_form"] - tw["rho_c1"]) <= 1e-10

    def test_profile_zero_at_origin(self, tmp_path):
        code = run_cli(["rotation", "--a", "1.5", "--b", "0.5",
                        "--y-range", "-1:2", "--steps", "7"], tmp_path)
        assert code == 0
        _, rows = read_csv(tmp_path / "rotation.csv")
        at_zero = [r for r in rows if r[0] == 0.0]
        assert at_zero and at_zero[0][1] == 0.0

    def test_twist_everywhere_note(self, tmp_path):
        code = run_cli(["rotation", "--a", "1.5", "--b", "0.8"], tmp_path)
        assert code == 0
        doc = read_json(tmp_path / "rotation.json")
        assert doc["twistless"] is None
        assert "a^2 - 3b" in doc["note"]


class TestRoundTrip:
    def test_csv_lossless_at_full_precision(self, tmp_path):
        path = tmp_path / "rt.csv"
        rows = [[math.pi, 0.1, -1.9538014117147768],
                [1e-17, 2.0 ** -52, 0.53168]]
        write_csv(path, ["u", "v", "w"], rows)
        _, back = read_csv(path)
        assert back == rows

    def test_emitted_files_reparse(self, tmp_path):
        run_cli(["rotation", "--a", "1.5", "--b", "0.5", "--steps", "64"], tmp_path)
        header, rows = read_csv(tmp_path / "rotation.csv")
        ys = np.array([r[0] for r in rows])
        f = np.array([r[1] for r in rows])
        np.testing.assert_array_equal(f, ys * (1.0 - ys * (1.5 - 0.5 * ys)))

    def test_json_reemission_identical(self, tmp_path):
        from nontwist.io import write_json

        run_cli(["thresholds", "--a", "1.5", "--k", "0.018",
                 "--b-range", "-3:1", "--triple"], tmp_path)
        doc = read_json(tmp_path / "thresholds.json")
        write_json(tmp_path / "copy.json", doc)
        assert (tmp_path / "copy.json").read_bytes() == (
            tmp_path / "thresholds.json"
        ).read_bytes()


class TestConfigLayering:
    def test_flags_override_config_file(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"a": 2.0, "k": 0.05, "b_range": "-3:1"}))
        code = run_cli(["thresholds", "--config", str(cfg), "--a", "1.5"], tmp_path)
        assert code == 0
        doc = read_json(tmp_path / "thresholds.json")
        assert doc["a"] == 1.5  # flag wins
        assert doc["k"] == 0.05  # config file beats the default 0.018

    def test_unknown_config_key_rejected(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"banana": 1}))
        assert run_cli(["thresholds", "--config", str(cfg), "--triple"], tmp_path) == 2

    def test_defaults_documented_pair(self, tmp_path):
        # a=1.5, k=0.018 are the built-in defaults
        code = run_cli(["scan", "--b-range", "0.5:0.6", "--steps", "1"], tmp_path)
        assert code == 0
        doc = read_json(tmp_path / "scan.json")
        assert doc["a"] == 1.5 and doc["k"] == 0.018


class TestExitCodes:
    def test_config_error_is_2(self, tmp_path):
        assert run_cli(["portrait", "--a", "1.5", "--k", "0.018"], tmp_path) == 2
        assert run_cli(["scan", "--a", "1.5", "--k", "0.018",
                        "--b-range", "nonsense"], tmp_path) == 2

    def test_domain_error_is_3(self, tmp_path):
        assert run_cli(["portrait", "--a", "1.5", "--b", "0", "--k", "0.018"],
                       tmp_path) == 3

    def test_numerical_failure_is_4(self, tmp_path):
        # dt far too large: every seed blows the drift budget
        assert run_cli(["portrait", "--a", "1.5", "--b", "0.5", "--k", "0.018",
                        "--dt", "19.0", "--steps", "400"], tmp_path) == 4

    def test_empty_results_still_zero(self, tmp_path):
        assert run_cli(["thresholds", "--a", "1.5", "--k", "0.018",
                        "--b-range", "0.6:0.7"], tmp_path) == 0


class TestSubprocessEntryPoint:
    def test_module_invocation(self, tmp_path):
        out = subprocess.run(
            [sys.executable, "-m", "nontwist", "thresholds", "--a", "1.5",
             "--triple", "--out", str(tmp_path)],
            capture_output=True, text=True,
        )
        assert out.returncode == 0, out.stderr
        doc = read_json(tmp_path / "thresholds.json")
        assert abs(doc["triple"]["b"] - 0.5) <= 1e-9

    def test_version_flag(self):
        out = subprocess.run(
            [sys.executable, "-m", "nontwist", "--version"],
            capture_output=True, text=True,
        )
        assert out.returncode == 0
        assert out.stdout.startswith("nontwist ")
