"""Named scenarios at reduced desk scale: mechanisms, not asymptotics."""

import csv
import json
import math

import pytest

from matchspread.errors import ConfigError
from matchspread.experiment import CSV_HEADER, ExperimentConfig, mc_estimate
from matchspread.scenarios import SCENARIOS, scenario_run


def read_rows(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


class TestScenarioRegistry:
    def test_all_registered(self):
        assert set(SCENARIOS) == {
            "sbm_1statement",
            "d1_0statement",
            "d2_0statement",
            "k_valued_0statement",
            "counterexample_5_1",
            "gnd_example_z_ladder",
        }

    def test_unknown_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            scenario_run("mystery", tmp_path)


class TestClassicalThresholdExample:
    def test_gnp_above_log_n_over_n_has_matchings(self):
        # uniform model at p = 3 log(n)/n, n = 200: matchings near-certain
        n = 200
        p = 3 * math.log(n) / n
        desc = {"model": "sbm", "sizes": [n], "P": [[p]]}
        cfg = ExperimentConfig(desc, {"name": "perfect_matching"}, None, (n,), 200, 77)
        row = mc_estimate(cfg, n, 0)
        assert row.estimate >= 0.9


class TestCounterexampleScenario:
    def test_predictor_misses_frequent_matchings(self, tmp_path):
        summary = scenario_run(
            "counterexample_5_1", tmp_path, seed=17, trials=60, ladder=(500,)
        )
        assert summary["pm_frequency"] > 0.5
        assert summary["alpha_star"] < 1
        assert summary["predictor_below_one_but_pm_frequent"]


class TestObstructionScenarios:
    def test_d1_mechanism_small(self, tmp_path):
        summary = scenario_run("d1_0statement", tmp_path, seed=3, trials=40, ladder=(512, 1024))
        for n, freq in summary["isolated_frequency_by_n"].items():
            assert freq >= 0.9, (n, freq)
        for n, freq in summary["pm_frequency_by_n"].items():
            assert freq <= 0.1, (n, freq)
        rows = read_rows(tmp_path / "d1_0statement_isolated.csv")
        assert list(rows[0]) == list(CSV_HEADER)

    def test_k_valued_mechanism_small(self, tmp_path):
        summary = scenario_run(
            "k_valued_0statement", tmp_path, seed=3, trials=40, ladder=(512,)
        )
        (freq,) = summary["isolated_frequency_by_n"].values()
        (pm,) = summary["pm_frequency_by_n"].values()
        assert freq >= 0.9 and pm <= 0.1
        (cf,) = summary["closed_form"].values()
        assert cf["ex_isolated"] > 1

    def test_d2_scan_outputs(self, tmp_path):
        summary = scenario_run("d2_0statement", tmp_path, seed=3, trials=12, ladder=(600,))
        rows = read_rows(tmp_path / "d2_0statement.csv")
        assert [r["param"] for r in rows] == [str(v) for v in range(2, 14, 2)]
        assert all(r["alpha_star"] for r in rows)
        assert summary["crossing_d2"] is not None


class TestDiagnosticsScenario:
    def test_ladder_files_and_trend(self, tmp_path):
        summary = scenario_run(
            "gnd_example_z_ladder", tmp_path, ladder=tuple(2**e for e in range(10, 15))
        )
        assert summary["Z_first_strictly_decreasing"]
        assert summary["max_Z_second_strictly_decreasing"]
        text = (tmp_path / "gnd_example_z_ladder.csv").read_text().splitlines()
        assert text[0].startswith("n,d1,n1,Z_first")
        assert len(text) == 6
        data = json.loads((tmp_path / "gnd_example_z_ladder_summary.json").read_text())
        assert set(data["diagnostics_by_n"]) == {str(2**e) for e in range(10, 15)}
