"""CLI surface: schemas, exit codes, determinism, coverage of intervals."""

import csv
import json
from fractions import Fraction

from matchspread.cli import main
from matchspread.core import GroundSet, ProbVector, SubsetFamily, mu_exact, up_closure
from matchspread.experiment import (
    CSV_HEADER,
    ExperimentConfig,
    mc_estimate,
    rows_to_csv,
    threshold_scan,
    wilson_interval,
)


def write_config(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def sbm_config(n=16, p="0.5", **kw):
    cfg = {
        "model": {"model": "sbm", "sizes": [n // 2, n - n // 2], "P": [[p, p], [p, p]]},
        "property": "perfect_matching",
        "trials": 25,
        "seed": 7,
    }
    cfg.update(kw)
    return cfg


class TestWilson:
    def test_contains_point_estimate(self):
        lo, hi = wilson_interval(30, 100)
        assert lo <= 0.3 <= hi

    def test_extremes_clamped(self):
        lo, hi = wilson_interval(0, 50)
        assert lo == 0.0 and hi > 0
        lo, hi = wilson_interval(50, 50)
        assert hi == 1.0 and lo < 1


class TestCsvContract:
    def test_header_exact(self):
        assert ",".join(CSV_HEADER) == "param,trials,successes,estimate,ci_lo,ci_hi,alpha_star,wall_ms"

    def test_row_shape(self, tmp_path):
        cfg = ExperimentConfig.from_json(sbm_config(grid=[1.0], axis="p_scale"))
        rows, _ = threshold_scan(cfg)
        text = rows_to_csv(rows)
        parsed = list(csv.reader(text.splitlines()))
        assert parsed[0] == list(CSV_HEADER)
        assert len(parsed) == 2 and len(parsed[1]) == 8

    def test_deterministic_modulo_timing(self, tmp_path):
        path = write_config(tmp_path, "scan.json", sbm_config(grid=[0.2, 1.0], axis="p_scale"))
        outs = []
        for tag in ("a", "b"):
            out = tmp_path / f"{tag}.csv"
            assert main(["scan", "--config", path, "--out", str(out)]) == 0
            outs.append(out.read_text())
        strip = lambda text: [r.rsplit(",", 1)[0] for r in text.splitlines()]  # noqa: E731
        assert strip(outs[0]) == strip(outs[1])

    def test_json_format_includes_summary(self, tmp_path):
        path = write_config(tmp_path, "scan.json", sbm_config(grid=[0.2, 1.0], axis="p_scale"))
        out = tmp_path / "scan_out.json"
        assert main(["scan", "--config", path, "--format", "json", "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert len(data["rows"]) == 2
        assert "crossing_param" in data["summary"]
        assert "alpha_star_by_param" in data["summary"]

    def test_no_timing_byte_identical(self, tmp_path):
        path = write_config(tmp_path, "scan.json", sbm_config(grid=[0.2, 1.0], axis="p_scale"))
        outs = []
        for tag in ("a", "b"):
            out = tmp_path / f"{tag}.csv"
            assert main(["scan", "--config", path, "--no-timing", "--out", str(out)]) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]


class TestExitCodes:
    def test_ok(self, tmp_path):
        path = write_config(tmp_path, "c.json", sbm_config(grid=[1.0], axis="p_scale"))
        assert main(["scan", "--config", path, "--out", str(tmp_path / "o.csv")]) == 0

    def test_config_error(self, tmp_path):
        path = write_config(tmp_path, "c.json", {"model": {"model": "bogus"}})
        assert main(["scan", "--config", path]) == 2

    def test_missing_file_is_config_error(self):
        assert main(["scan", "--config", "/nonexistent.json"]) == 2

    def test_bad_json_is_config_error(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text("{not json")
        assert main(["scan", "--config", str(path)]) == 2

    def test_infeasible_size_error(self, tmp_path):
        path = write_config(
            tmp_path, "c.json", {"degrees": [3] * 14, "require_exact": True}
        )
        assert main(["enumerate", "--config", str(path)]) == 3

    def test_unknown_command(self):
        assert main(["frobnicate"]) == 2

    def test_unknown_scenario(self, tmp_path):
        assert main(["scenario", "not_a_scenario", "--out", str(tmp_path)]) == 2


class TestEstimate:
    def test_certain_models(self, tmp_path):
        for p, expected in (("1", 1.0), ("0", 0.0)):
            path = write_config(tmp_path, f"e{p}.json", sbm_config(p=p))
            out = tmp_path / f"e{p}.csv"
            assert main(["estimate", "--config", path, "--out", str(out)]) == 0
            row = list(csv.reader(out.read_text().splitlines()))[1]
            assert float(row[3]) == expected

    def test_single_point_grid_matches_estimate(self):
        data = sbm_config(grid=[0.7], axis="p_scale")
        cfg = ExperimentConfig.from_json(data)
        scan_row = threshold_scan(cfg)[0][0]
        est_row = mc_estimate(cfg, 0.7, 0)
        assert (scan_row.successes, scan_row.estimate) == (
            est_row.successes,
            est_row.estimate,
        )

    def test_non_integer_degree_axis_rejected(self, tmp_path):
        payload = {
            "model": {"model": "chung_lu", "classes": [[9, 4], [2, 8]]},
            "property": "perfect_matching",
            "axis": "d2",
            "grid": [2.5],
            "trials": 5,
        }
        path = write_config(tmp_path, "d2.json", payload)
        assert main(["scan", "--config", path]) == 2

    def test_property_model_mismatch(self, tmp_path):
        payload = {
            "model": {"model": "product", "items": ["a", "b"], "p": "0.5"},
            "property": "perfect_matching",
            "trials": 5,
        }
        path = write_config(tmp_path, "m.json", payload)
        assert main(["estimate", "--config", path]) == 2


class TestMonotoneScan:
    def test_estimates_nondecreasing_within_ci(self):
        cfg = ExperimentConfig.from_json(
            sbm_config(n=60, grid=[0.1, 0.4, 0.8, 1.2, 1.6, 2.0], axis="p_scale", trials=60)
        )
        rows, summary = threshold_scan(cfg)
        for a, b in zip(rows, rows[1:]):
            assert b.estimate >= a.ci_lo - 1e-12
        assert summary["crossing_param"] in cfg.grid


class TestCoverage:
    def test_wilson_interval_covers_exact_measure(self):
        # product model over a tiny ground set whose exact measure is known;
        # the 95% interval should contain it in at least 90% of seeded runs
        gset = GroundSet(["a", "b", "c"])
        fam = up_closure(SubsetFamily(gset, [{"a"}, {"b", "c"}]))
        p = ProbVector.uniform(gset, Fraction(7, 20))
        truth = float(mu_exact(fam, p))
        payload = {
            "model": {
                "model": "product",
                "items": ["a", "b", "c"],
                "p": "7/20",
                "family": fam.to_json(),
            },
            "property": "family_member",
            "trials": 60,
        }
        hits = 0
        runs = 40
        for seed in range(runs):
            cfg = ExperimentConfig.from_json(payload, seed=seed)
            row = mc_estimate(cfg, None, 0)
            hits += row.ci_lo <= truth <= row.ci_hi
        assert hits >= 0.9 * runs, (hits, runs, truth)


class TestOtherCommands:
    def test_spectrum_json(self, tmp_path):
        path = write_config(
            tmp_path,
            "s.json",
            {"model": "sbm", "sizes": [4, 4], "P": [["0.5", "0.25"], ["0.25", "0.125"]]},
        )
        out = tmp_path / "spec.json"
        assert main(["spectrum", "--config", path, "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert set(data) >= {"alpha_star", "alpha_star_scaled", "candidate_alphas"}

    def test_spread_audit_roundtrip(self, tmp_path):
        payload = {
            "ground": {"items": ["a", "b"]},
            "family": [["a"], ["b"]],
            "measure": {"support": [["a"], ["b"]], "weights": ["1/2", "1/2"]},
            "q": "1/4",
        }
        path = write_config(tmp_path, "audit.json", payload)
        out = tmp_path / "audit_out.json"
        assert main(["spread-audit", "--config", path, "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert data["verify"]["ok"] is True
        assert data["cover_value"]["value"] == "1/2"
        assert data["fractional_value"]["value"] == "1/2"
        assert data["weak_duality_ok"] and data["implies_half_ok"]

    def test_moments_command(self, tmp_path):
        path = write_config(
            tmp_path, "m.json", {"degrees": [2, 2, 2, 1, 1], "case": "gnd", "method": "exact"}
        )
        out = tmp_path / "m_out.json"
        assert main(["moments", "--config", path, "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert data["moments"]["ex"] == "12/7"
        assert "diagnostics" in data and "conditions" in data

    def test_enumerate_command(self, tmp_path):
        path = write_config(tmp_path, "e.json", {"degrees": [1, 1, 1, 1]})
        out = tmp_path / "e_out.json"
        assert main(["enumerate", "--config", path, "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert data["exact_count"] == 3 and data["graphical"] is True

    def test_scenario_smoke(self, tmp_path):
        assert (
            main(
                [
                    "scenario",
                    "sbm_1statement",
                    "--out",
                    str(tmp_path / "sc"),
                    "--trials",
                    "10",
                    "--ladder",
                    "64,128",
                    "--seed",
                    "3",
                ]
            )
            == 0
        )
        summary = json.loads((tmp_path / "sc" / "sbm_1statement_summary.json").read_text())
        assert summary["min_pm_frequency"] >= 0.8
        rows = (tmp_path / "sc" / "sbm_1statement.csv").read_text().splitlines()
        assert rows[0] == ",".join(CSV_HEADER)

    def test_scenario_z_ladder(self, tmp_path):
        assert (
            main(
                [
                    "scenario",
                    "gnd_example_z_ladder",
                    "--out",
                    str(tmp_path / "z"),
                    "--ladder",
                    "1024,4096,16384",
                ]
            )
            == 0
        )
        summary = json.loads(
            (tmp_path / "z" / "gnd_example_z_ladder_summary.json").read_text()
        )
        assert summary["Z_first_strictly_decreasing"]
