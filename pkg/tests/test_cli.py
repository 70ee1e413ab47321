"""End-to-end CLI tests via click's test runner."""

import json

import numpy as np
import pytest
from click.testing import CliRunner

from ebsl import benchmarks
from ebsl.cli import main
from ebsl.matrixio import (
    read_opinion_matrix,
    write_evidence_matrix,
    write_start_vector,
    write_trust_input,
)


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def c1_files(tmp_path):
    evidence = tmp_path / "c1_evidence.csv"
    trust = tmp_path / "c1_trust.csv"
    write_evidence_matrix(evidence, benchmarks.case_evidence("C1"))
    write_trust_input(trust, benchmarks.case_trust("C1"))
    return evidence, trust


LOG_TEXT = "source,target,amount\na,b,400\na,b,-300\nb,c,10\nb,c,-5\n"


class TestCompute:
    def test_evidence_input_writes_outputs(self, runner, c1_files, tmp_path):
        evidence, _ = c1_files
        out = tmp_path / "out"
        result = runner.invoke(main, ["compute", "--evidence", str(evidence),
                                      "--out-dir", str(out)])
        assert result.exit_code == 0, result.output
        R = read_opinion_matrix(out / "referral_trust.csv")
        assert R.n == 7
        report = json.loads((out / "convergence.json").read_text())
        assert report["converged"] is True
        assert report["g"] == "xb"
        assert len(report["residual_history"]) == report["iterations"]

    def test_log_input_with_clusters(self, runner, tmp_path):
        log = tmp_path / "log.csv"
        log.write_text(LOG_TEXT)
        out = tmp_path / "out"
        result = runner.invoke(main, ["compute", "--log", str(log),
                                      "--clusters", "2", "--out-dir", str(out)])
        assert result.exit_code == 0, result.output
        assert read_opinion_matrix(out / "referral_trust.csv").n == 2

    def test_lenient_parse_warns(self, runner, tmp_path):
        log = tmp_path / "log.csv"
        log.write_text("a,b,10\nnot a record\n")
        result = runner.invoke(main, ["compute", "--log", str(log),
                                      "--out-dir", str(tmp_path / "out")])
        assert result.exit_code == 0
        assert "skipped 1 malformed line" in result.output

    def test_strict_parse_env_fails(self, runner, tmp_path):
        log = tmp_path / "log.csv"
        log.write_text("a,b,10\nnot a record\n")
        result = runner.invoke(main, ["compute", "--log", str(log),
                                      "--out-dir", str(tmp_path / "out")],
                               env={"EBSL_STRICT_PARSE": "1"})
        assert result.exit_code == 1
        assert "error:" in result.output

    def test_odot_with_auto_theta(self, runner, c1_files, tmp_path):
        evidence, _ = c1_files
        out = tmp_path / "out"
        result = runner.invoke(main, ["compute", "--evidence", str(evidence),
                                      "--g", "odot", "--theta", "auto",
                                      "--out-dir", str(out)])
        assert result.exit_code == 0, result.output
        report = json.loads((out / "convergence.json").read_text())
        assert report["theta"] == pytest.approx(500 * (1 + np.sqrt(5)) / 2)

    def test_odot_theta_below_bound_refused(self, runner, c1_files, tmp_path):
        evidence, _ = c1_files
        result = runner.invoke(main, ["compute", "--evidence", str(evidence),
                                      "--g", "odot", "--theta", "100",
                                      "--out-dir", str(tmp_path / "out")])
        assert result.exit_code == 1
        assert "below the safe bound" in result.output
        assert "sqrt(5)" in result.output

    def test_odot_without_theta_refused(self, runner, c1_files, tmp_path):
        evidence, _ = c1_files
        result = runner.invoke(main, ["compute", "--evidence", str(evidence),
                                      "--g", "odot",
                                      "--out-dir", str(tmp_path / "out")])
        assert result.exit_code == 1
        assert "requires --theta" in result.output

    def test_non_convergence_exit_2_still_writes(self, runner, c1_files, tmp_path):
        evidence, _ = c1_files
        out = tmp_path / "out"
        result = runner.invoke(main, ["compute", "--evidence", str(evidence),
                                      "--max-iter", "1", "--out-dir", str(out)])
        assert result.exit_code == 2
        assert "did not converge" in result.output
        report = json.loads((out / "convergence.json").read_text())
        assert report["converged"] is False

    def test_requires_exactly_one_input(self, runner, c1_files, tmp_path):
        evidence, _ = c1_files
        log = tmp_path / "log.csv"
        log.write_text("a,b,1\n")
        assert runner.invoke(main, ["compute"]).exit_code == 1
        result = runner.invoke(main, ["compute", "--evidence", str(evidence),
                                      "--log", str(log)])
        assert result.exit_code == 1

    def test_clusters_rejected_for_evidence_input(self, runner, c1_files, tmp_path):
        evidence, _ = c1_files
        result = runner.invoke(main, ["compute", "--evidence", str(evidence),
                                      "--clusters", "2",
                                      "--out-dir", str(tmp_path / "out")])
        assert result.exit_code == 1
        assert "--clusters" in result.output

    def test_config_file_fallback_and_flag_precedence(self, runner, c1_files, tmp_path):
        evidence, _ = c1_files
        config = tmp_path / "ebsl.conf"
        config.write_text("# comparison defaults\ng = sqrt-xb\nmax_iter = 1\n")
        out = tmp_path / "out"
        result = runner.invoke(main, ["compute", "--evidence", str(evidence),
                                      "--config", str(config),
                                      "--out-dir", str(out)])
        assert result.exit_code == 2  # max_iter=1 from the file applies
        assert json.loads((out / "convergence.json").read_text())["g"] == "sqrt-xb"
        result = runner.invoke(main, ["compute", "--evidence", str(evidence),
                                      "--config", str(config),
                                      "--max-iter", "1000",
                                      "--out-dir", str(out)])
        assert result.exit_code == 0  # the flag overrides the file

    def test_unknown_config_key_rejected(self, runner, c1_files, tmp_path):
        evidence, _ = c1_files
        config = tmp_path / "ebsl.conf"
        config.write_text("gee = xb\n")
        result = runner.invoke(main, ["compute", "--evidence", str(evidence),
                                      "--config", str(config)])
        assert result.exit_code == 1
        assert "unknown config key" in result.output

    def test_byte_identical_determinism(self, runner, c1_files, tmp_path):
        evidence, _ = c1_files
        out1, out2 = tmp_path / "o1", tmp_path / "o2"
        for out in (out1, out2):
            result = runner.invoke(main, ["compute", "--evidence", str(evidence),
                                          "--out-dir", str(out)])
            assert result.exit_code == 0
        assert (out1 / "referral_trust.csv").read_bytes() == \
            (out2 / "referral_trust.csv").read_bytes()


class TestCompare:
    def test_table_output(self, runner, c1_files):
        evidence, trust = c1_files
        result = runner.invoke(main, ["compare", str(evidence), str(trust)])
        assert result.exit_code == 0, result.output
        for name in ("flow-sl", "sl-canonical", "ebsl-xb", "ebsl-sqrt-xb",
                     "ebsl-odot", "alpha sweep"):
            assert name in result.output

    def test_json_out(self, runner, c1_files, tmp_path):
        evidence, trust = c1_files
        out = tmp_path / "report.json"
        result = runner.invoke(main, ["compare", str(evidence), str(trust),
                                      "--json-out", str(out)])
        assert result.exit_code == 0
        payload = json.loads(out.read_text())
        assert len(payload["methods"]) == 5

    def test_alpha_without_start_refused(self, runner, c1_files):
        evidence, trust = c1_files
        result = runner.invoke(main, ["compare", str(evidence), str(trust),
                                      "--alpha", "0.8"])
        assert result.exit_code == 1
        assert "no canonical alpha/start" in result.output

    def test_flow_based_row_with_alpha_and_start(self, runner, c1_files, tmp_path):
        evidence, trust = c1_files
        start = tmp_path / "start.csv"
        write_start_vector(start, np.full(8, 0.5))
        result = runner.invoke(main, ["compare", str(evidence), str(trust),
                                      "--alpha", "0.8", "--start", str(start),
                                      "--json-out", str(tmp_path / "r.json")])
        assert result.exit_code == 0, result.output
        assert "flow-based" in result.output
        payload = json.loads((tmp_path / "r.json").read_text())
        assert "flow_based" in payload


class TestRender:
    def test_writes_pgm(self, runner, c1_files, tmp_path):
        evidence, _ = c1_files
        out = tmp_path / "net.pgm"
        result = runner.invoke(main, ["render", str(evidence), str(out)])
        assert result.exit_code == 0
        data = out.read_bytes()
        assert data.startswith(b"P5\n7 7\n255\n")
        assert len(data) == len(b"P5\n7 7\n255\n") + 49

    def test_positive_mode_and_reference(self, runner, c1_files, tmp_path):
        evidence, _ = c1_files
        out = tmp_path / "net.pgm"
        result = runner.invoke(main, ["render", str(evidence), str(out),
                                      "--mode", "positive",
                                      "--max-reference", "1000"])
        assert result.exit_code == 0
        assert out.exists()


class TestReport:
    def test_writes_csvs_and_figures(self, runner, c1_files, tmp_path):
        evidence, _ = c1_files
        out = tmp_path / "rep"
        result = runner.invoke(main, ["report", "--evidence", str(evidence),
                                      "--out-dir", str(out)])
        assert result.exit_code == 0, result.output
        for name in ("residuals.csv", "residuals.png",
                     "alpha_sweep.csv", "alpha_sweep.png"):
            assert (out / name).exists(), name
        header = (out / "residuals.csv").read_text().splitlines()[0]
        assert header == "g,iteration,residual"
        body = (out / "residuals.csv").read_text()
        for g in ("xb", "sqrt-xb", "odot"):
            assert f"\n{g}," in body
        assert (out / "residuals.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
