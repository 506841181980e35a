import numpy as np
import pytest

from lineardag.bench.config import (ExperimentConfig, MethodConfig,
                                    config_from_dict, load_config)
from lineardag.bench.runner import (CSV_COLUMNS, rows_from_csv, rows_to_csv,
                                    run, summarize, summary_table)
from lineardag.bench.verify import verify_counterexample_family, verify_low_varsortability_family


class TestConfig:
    def test_unknown_top_level_key_rejected(self):
        with pytest.raises(ValueError, match="unknown config keys"):
            config_from_dict({"kind": "counterexample", "typo_key": 1})

    def test_unknown_method_key_rejected(self):
        with pytest.raises(ValueError, match="unknown method keys"):
            config_from_dict({"kind": "noise-ratio-sweep",
                              "methods": [{"name": "gds", "lambda9": 1}]})

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError, match="unknown experiment kind"):
            config_from_dict({"kind": "nope"})

    def test_duplicate_seeds_rejected(self):
        with pytest.raises(ValueError, match="distinct"):
            config_from_dict({"kind": "counterexample", "seeds": [1, 1]})

    def test_methods_required_for_solver_kinds(self):
        with pytest.raises(ValueError, match="needs methods"):
            config_from_dict({"kind": "noise-ratio-sweep"})

    def test_counterexample_gets_default_methods(self):
        cfg = config_from_dict({"kind": "counterexample", "seeds": 3})
        assert {m.name for m in cfg.methods} == {"exhaustive", "notears-ev",
                                                 "golem-ev"}

    def test_seed_expansion(self):
        cfg = config_from_dict({"kind": "counterexample", "seeds": 4,
                                "seed_base": 10})
        assert cfg.seeds == (10, 11, 12, 13)

    def test_yaml_round_trip(self, tmp_path):
        path = tmp_path / "cfg.yaml"
        path.write_text(
            "kind: standardized-ratio\nd: [10]\ngraph_k: [0.5, 1.0]\n"
            "seeds: 2\npopulation: true\n")
        cfg = load_config(path)
        assert cfg.kind == "standardized-ratio"
        assert cfg.graph_k == (0.5, 1.0)


@pytest.fixture(scope="module")
def small_run():
    cfg = config_from_dict({
        "kind": "counterexample", "d": [3], "population": True, "seeds": 2,
    })
    return cfg, run(cfg)


class TestRunner:
    def test_counterexample_rows(self, small_run):
        cfg, rows = small_run
        assert len(rows) == 3 * 2  # three default methods x two seeds
        assert all(not r.failed for r in rows)
        assert all(r.target_match for r in rows)
        assert all(r.var_order_ok for r in rows)

    @staticmethod
    def _stable(rows):
        # everything except the timing column must be bit-identical
        from dataclasses import replace
        return rows_to_csv([replace(r, wall_time=0.0) for r in rows])

    def test_rerun_is_deterministic(self, small_run):
        cfg, rows = small_run
        again = run(cfg)
        assert self._stable(rows) == self._stable(again)

    def test_parallel_matches_serial(self, small_run):
        cfg, rows = small_run
        parallel = run(cfg, workers=2)
        assert self._stable(parallel) == self._stable(rows)

    def test_csv_round_trip(self, small_run, tmp_path):
        cfg, rows = small_run
        path = tmp_path / "rows.csv"
        rows_to_csv(rows, path)
        back = rows_from_csv(path)
        assert rows_to_csv(back) == rows_to_csv(rows)

    def test_missing_column_rejected(self, small_run, tmp_path):
        cfg, rows = small_run
        path = tmp_path / "rows.csv"
        text = rows_to_csv(rows)
        lines = text.splitlines()
        keep = [i for i, c in enumerate(CSV_COLUMNS) if c != "shd"]
        broken = "\n".join(
            ",".join(line.split(",")[i] for i in keep) for line in lines)
        path.write_text(broken + "\n")
        with pytest.raises(ValueError, match="shd"):
            rows_from_csv(path)

    def test_standardized_ratio_kind(self):
        cfg = config_from_dict({
            "kind": "standardized-ratio", "d": [8], "graph_k": [0.5, 1.0],
            "population": True, "seeds": 3,
        })
        rows = run(cfg)
        assert len(rows) == 2 * 3
        assert all(r.noise_ratio_standardized is not None for r in rows)
        assert all(r.shd is None for r in rows)

    def test_failed_cell_is_flagged_not_fatal(self):
        # exhaustive search is bounded at d <= 6; d=8 rows must fail cleanly
        cfg = config_from_dict({
            "kind": "search-strategy", "d": [8], "n": [200], "seeds": 1,
            "methods": [{"name": "exhaustive"}],
        })
        rows = run(cfg)
        assert len(rows) == 1
        assert rows[0].failed and "d <= 6" in rows[0].error

    def test_threshold_sweep_expands_grid(self):
        cfg = config_from_dict({
            "kind": "threshold-sweep", "d": [4], "n": [500], "seeds": 2,
            "thresholds": [0.1, 0.3],
            "methods": [{"name": "notears-ev"}],
        })
        rows = run(cfg)
        assert len(rows) == 2 * 2
        assert {r.threshold for r in rows} == {0.1, 0.3}

    def test_summary_aggregates(self, small_run):
        cfg, rows = small_run
        summary = summarize(rows)
        assert len(summary) == 3  # one row per method
        assert (summary["target_match_mean"] == 1.0).all()
        table = summary_table(summary)
        assert "shd" in table and "exhaustive" in table


class TestVerify:
    def test_counterexample_report_passes(self):
        report = verify_counterexample_family([3, 4], draws=10)
        assert report.ok, str(report)

    def test_low_varsortability_report_passes(self):
        report = verify_low_varsortability_family(n_graphs=10)
        assert report.ok, str(report)

    def test_report_formatting(self):
        report = verify_counterexample_family([4], draws=5)
        text = str(report)
        assert "PASS" in text and "d=4" in text


class TestCli:
    def test_verify_props_exit_code(self, capsys):
        from lineardag.bench.cli import main

        assert main(["verify-props", "--d", "3,4"]) == 0
        out = capsys.readouterr().out
        assert "all checks passed" in out

    def test_counterexample_population(self, capsys, tmp_path):
        from lineardag.bench.cli import main

        out_csv = tmp_path / "ce.csv"
        code = main(["counterexample", "--seeds", "2", "--population",
                     "--out", str(out_csv)])
        assert code == 0
        assert out_csv.exists()
        assert "wrong triangle" in capsys.readouterr().out

    def test_run_and_summarize(self, capsys, tmp_path):
        from lineardag.bench.cli import main

        cfg_path = tmp_path / "cfg.yaml"
        cfg_path.write_text(
            "kind: standardized-ratio\nd: [6]\ngraph_k: [1.0]\n"
            "population: true\nseeds: 2\n")
        out_csv = tmp_path / "rows.csv"
        assert main(["run", str(cfg_path), "--out", str(out_csv)]) == 0
        assert out_csv.exists()
        assert main(["summarize", str(out_csv)]) == 0
