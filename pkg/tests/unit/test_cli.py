"""Tests for the command line entry point."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from src.auction import save_model, zero_model
from src.cli import EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, main
from src.runs import verify_manifest

CONFIG_DIR = Path(__file__).resolve().parents[2] / "configs"
UNIFORM = str(CONFIG_DIR / "uniform_two_bidders.json")
SMOKE_TRAIN = str(CONFIG_DIR / "smoke_train.json")


class TestSimulate:
    """Test the simulate subcommand."""

    def test_same_seed_same_bytes(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            assert main(["simulate", "--count", "20", "--seed", "1", "--out", str(out)]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()
        assert len(a.read_text().splitlines()) == 1 + 20 * 5

    def test_writes_sidecar_manifest(self, tmp_path):
        out = tmp_path / "data.csv"
        main(["simulate", "--count", "3", "--out", str(out)])
        ok, problems = verify_manifest(tmp_path / "data.manifest.json")
        assert ok, problems

    def test_zero_count_is_usage_error(self, tmp_path, capsys):
        code = main(["simulate", "--count", "0", "--out", str(tmp_path / "x.csv")])
        assert code == EXIT_USAGE
        assert "--count" in capsys.readouterr().err

    def test_unwritable_output_is_runtime_error(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("")
        code = main(["simulate", "--count", "2", "--out", str(blocker / "sub" / "x.csv")])
        assert code == EXIT_RUNTIME

    def test_bad_config_is_usage_error(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"market": {"vsps": [{}]}}))
        assert main(["simulate", "--config", str(bad), "--count", "2", "--out", str(tmp_path / "x.csv")]) == EXIT_USAGE


class TestBaseline:
    """Test the baseline subcommand."""

    def test_second_price_on_uniform_bidders(self, capsys):
        code = main(["baseline", "--mechanism", "second-price", "--config", UNIFORM, "--count", "200000"])
        assert code == EXIT_OK
        result = json.loads(capsys.readouterr().out)
        assert result["revenue"] == pytest.approx(1.0 / 3.0, abs=5e-3)

    def test_unknown_mechanism(self, capsys):
        assert main(["baseline", "--mechanism", "english", "--config", UNIFORM]) == EXIT_USAGE
        assert "vcg" in capsys.readouterr().err

    def test_out_file_and_manifest(self, tmp_path, capsys):
        out = tmp_path / "myerson.json"
        code = main([
            "baseline", "--mechanism", "myerson", "--config", UNIFORM, "--count", "1000", "--out", str(out),
        ])
        assert code == EXIT_OK
        assert json.loads(out.read_text())["reserve"] == 0.5
        assert verify_manifest(tmp_path / "myerson.manifest.json")[0]


class TestEvaluate:
    """Test the evaluate subcommand."""

    def test_zero_model(self, tmp_path, capsys):
        model_path = tmp_path / "model.json"
        save_model(zero_model(2, 1), model_path)
        code = main([
            "evaluate", "--model", str(model_path), "--config", UNIFORM, "--train-config", SMOKE_TRAIN,
        ])
        assert code == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["n_profiles"] == 32
        assert report["max_regret"] == pytest.approx(0.0, abs=1e-12)

    def test_missing_model(self, tmp_path):
        assert main(["evaluate", "--model", str(tmp_path / "none.json"), "--config", UNIFORM]) == EXIT_USAGE

    def test_model_market_mismatch(self, tmp_path):
        model_path = tmp_path / "model.json"
        save_model(zero_model(3, 1), model_path)
        assert main(["evaluate", "--model", str(model_path), "--config", UNIFORM]) == EXIT_USAGE

    def test_model_with_misshapen_weights(self, tmp_path):
        """A model file whose weights disagree with its layer sizes is a usage error."""
        model_path = tmp_path / "model.json"
        save_model(zero_model(2, 1), model_path)
        document = json.loads(model_path.read_text())
        document["pay_net"]["weights"][0] = [[0.0, 0.0, 0.0]]
        model_path.write_text(json.dumps(document))
        assert main(["evaluate", "--model", str(model_path), "--config", UNIFORM]) == EXIT_USAGE


class TestTrainAndSweep:
    """Test the train and sweep subcommands."""

    def test_smoke_train_is_deterministic(self, tmp_path):
        for name in ("a", "b"):
            code = main([
                "train", "--config", UNIFORM, "--train-config", SMOKE_TRAIN, "--out", str(tmp_path / name),
            ])
            assert code == EXIT_OK
        for output in ("model.json", "metrics.csv"):
            assert (tmp_path / "a" / output).read_bytes() == (tmp_path / "b" / output).read_bytes()
        assert verify_manifest(tmp_path / "a") == (True, [])

    def test_metrics_csv_rows(self, tmp_path):
        main(["train", "--config", UNIFORM, "--train-config", SMOKE_TRAIN, "--out", str(tmp_path)])
        lines = (tmp_path / "metrics.csv").read_text().splitlines()
        assert lines[0] == "iter,revenue,ir_penalty,ic_penalty,loss"
        assert [line.split(",")[0] for line in lines[1:]] == ["5", "10", "15", "20"]

    def test_seeds_must_differ(self, tmp_path):
        code = main([
            "train", "--config", UNIFORM, "--train-config", SMOKE_TRAIN, "--seed", "4", "--out", str(tmp_path),
        ])
        assert code == EXIT_USAGE

    def test_sweep_needs_values(self, tmp_path):
        code = main(["sweep", "--kind", "vsps", "--values", "", "--config", UNIFORM, "--out", str(tmp_path)])
        assert code == EXIT_USAGE

    def test_sweep_rejects_non_integer_values(self, tmp_path):
        code = main(["sweep", "--kind", "apps", "--values", "1,two", "--config", UNIFORM, "--out", str(tmp_path)])
        assert code == EXIT_USAGE
