import csv
import hashlib
import json

import pytest

from lazywalk import cli


def run(tmp_path, *argv):
    return cli.main(["--outdir" if a == "OUT" else a for a in argv]
                    + ["--outdir", str(tmp_path)])


def read_json(tmp_path, name):
    with open(tmp_path / name) as f:
        return json.load(f)


class TestExitCodes:
    def test_no_command_is_usage_error(self, tmp_path):
        assert cli.main([]) == cli.EXIT_USAGE

    def test_unknown_flag_is_usage_error(self):
        assert cli.main(["pmf", "--bogus"]) == cli.EXIT_USAGE

    def test_validation_failure(self, tmp_path):
        code = run(tmp_path, "pmf", "--n", "0", "--p", "0.5")
        assert code == cli.EXIT_USAGE

    def test_bad_params(self, tmp_path):
        code = run(tmp_path, "pmf", "--n", "5", "--p", "1.5")
        assert code == cli.EXIT_USAGE

    def test_success(self, tmp_path):
        assert run(tmp_path, "pmf", "--n", "5", "--p", "0.5") == cli.EXIT_OK


class TestNoPartialOutput:
    def test_validation_failure_writes_nothing(self, tmp_path):
        run(tmp_path, "pmf", "--n", "0", "--p", "0.5")
        assert list(tmp_path.iterdir()) == []

    def test_clt_horizon_failure_writes_nothing(self, tmp_path):
        code = run(tmp_path, "clt", "--p", "0.5", "--n", "100",
                   "--horizon", "500", "--trials", "50", "--seed", "1")
        assert code == cli.EXIT_USAGE
        assert list(tmp_path.iterdir()) == []


class TestPmf:
    def test_hand_checked_n2(self, tmp_path):
        run(tmp_path, "pmf", "--n", "2", "--p", "0.25")
        with open(tmp_path / "pmf.csv") as f:
            rows = {int(r["index"]): float(r["value"])
                    for r in csv.DictReader(f)}
        # first step forward surely; second forward w.p. 1/4
        assert rows == {0: 0.0, 1: 0.75, 2: 0.25}
        summary = read_json(tmp_path, "pmf_summary.json")
        assert summary["mean"] == pytest.approx(1.25)

    def test_compare_mode(self, tmp_path):
        run(tmp_path, "pmf", "--n", "30", "--p", "0.6", "--compare")
        summary = read_json(tmp_path, "pmf_summary.json")
        assert summary["max_abs_diff_vs_pgf"] < 1e-12

    def test_compare_rejects_general_params(self, tmp_path):
        code = run(tmp_path, "pmf", "--n", "10", "--p", "0.6",
                   "--q", "0.1", "--compare")
        assert code == cli.EXIT_USAGE


class TestReproducibility:
    def digest(self, tmp_path):
        return hashlib.md5((tmp_path / "simulate.csv").read_bytes()).hexdigest()

    def test_pinned_seed_byte_identical(self, tmp_path):
        a = tmp_path / "a"
        b = tmp_path / "b"
        a.mkdir(), b.mkdir()
        for d in (a, b):
            assert run(d, "simulate", "--p", "0.5", "--n", "200",
                       "--trials", "20", "--seed", "77") == cli.EXIT_OK
        assert self.digest(a) == self.digest(b)

    def test_seed_reported_when_generated(self, tmp_path):
        run(tmp_path, "simulate", "--p", "0.5", "--n", "50", "--trials", "3")
        summary = read_json(tmp_path, "simulate_summary.json")
        assert isinstance(summary["seed"], int)
        assert "wall_time_s" in summary

    def test_threads_flag_does_not_change_results(self, tmp_path):
        a = tmp_path / "a"
        b = tmp_path / "b"
        a.mkdir(), b.mkdir()
        run(a, "simulate", "--p", "0.6", "--n", "300", "--trials", "10",
            "--seed", "5", "--threads", "1")
        run(b, "simulate", "--p", "0.6", "--n", "300", "--trials", "10",
            "--seed", "5", "--threads", "8")
        da = hashlib.md5((a / "simulate.csv").read_bytes()).hexdigest()
        db = hashlib.md5((b / "simulate.csv").read_bytes()).hexdigest()
        assert da == db


class TestConfig:
    def test_config_supplies_defaults_flags_win(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"n": 4, "p": 0.9}))
        out = tmp_path / "out"
        out.mkdir()
        code = cli.main(["--config", str(cfg), "pmf", "--p", "0.5",
                         "--n", "6", "--outdir", str(out)])
        assert code == cli.EXIT_OK
        summary = read_json(out, "pmf_summary.json")
        assert summary["n"] == 6 and summary["p"] == 0.5

    def test_config_fills_missing_optional(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"kmax": 2}))
        out = tmp_path / "out"
        out.mkdir()
        code = cli.main(["--config", str(cfg), "moments", "--n", "50",
                         "--p", "0.5", "--outdir", str(out)])
        assert code == cli.EXIT_OK
        assert read_json(out, "moments_summary.json")["kmax"] == 2

    def test_bad_config(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("{not json")
        assert cli.main(["--config", str(cfg), "pmf", "--p", "0.5",
                         "--n", "5", "--outdir", str(tmp_path)]) == cli.EXIT_USAGE


class TestOutdirEnv:
    def test_env_var_respected(self, tmp_path, monkeypatch):
        monkeypatch.setenv(cli.OUTDIR_ENV, str(tmp_path))
        assert cli.main(["moments", "--n", "10", "--p", "0.5"]) == cli.EXIT_OK
        assert (tmp_path / "moments.csv").exists()


class TestJsonFormat:
    def test_json_artifact(self, tmp_path):
        run(tmp_path, "moments", "--n", "20", "--p", "0.5",
            "--format", "json")
        rows = read_json(tmp_path, "moments.json")
        assert rows[0]["order"] == 1
        assert rows[0]["factorial_moment"] > 0


class TestOtherSubcommands:
    def test_mean_var(self, tmp_path):
        run(tmp_path, "mean-var", "--n", "100", "--p", "0.6", "--q", "0.2")
        payload = read_json(tmp_path, "mean_var.json")
        assert payload["variance_growth"] in ("linear", "n_log_n",
                                              "power_2alpha")

    def test_mean_var_rejects_subcritical(self, tmp_path):
        code = run(tmp_path, "mean-var", "--n", "100", "--p", "0.3",
                   "--q", "0.4")
        assert code == cli.EXIT_USAGE

    def test_percolate_coupling_summary(self, tmp_path):
        run(tmp_path, "percolate", "--n", "15", "--alpha", "0.5",
            "--trials", "20000", "--seed", "3")
        summary = read_json(tmp_path, "percolate_summary.json")
        assert summary["coupling_check"]["tv_distance"] < 0.05

    def test_enumerate(self, tmp_path):
        run(tmp_path, "enumerate", "--n", "5", "--alpha", "0.3")
        payload = read_json(tmp_path, "enumerate.json")
        assert payload["max_abs_diff"] < 1e-12

    def test_ml_divergent_lambda_is_usage_error(self, tmp_path):
        code = run(tmp_path, "ml", "--p", "0.0", "--lambda", "1.0")
        assert code == cli.EXIT_USAGE

    def test_lil(self, tmp_path):
        code = run(tmp_path, "lil", "--p", "0.5", "--n", "4096",
                   "--trials", "2", "--seed", "9")
        assert code == cli.EXIT_OK
        summary = read_json(tmp_path, "lil_summary.json")
        assert len(summary["final_extrema"]) == 2

    def test_selftest(self, tmp_path, capsys):
        assert run(tmp_path, "selftest") == cli.EXIT_OK
        out = capsys.readouterr().out
        assert "[PASS]" in out and "[FAIL]" not in out
