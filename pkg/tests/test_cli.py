"""Tests for the CLI entry points."""

import json

from click.testing import CliRunner

from hida_fullness.cli.main import EXIT_INPUT_ERROR, EXIT_VERIFICATION_FAILED, cli

LAMBDA = "kind=trunc_iwasawa;p=3;a=1;b=3"

GAMMA_T = "1,T;0,1\n1,0;T,1\n1+T,0;0,1-T+T^2\n"


class TestCLI:
    def test_help(self):
        runner = CliRunner()
        result = runner.invoke(cli, ["--help"])
        assert result.exit_code == 0
        assert "hida-fullness" in result.output
        for command in ("ring-info", "pink", "fullness", "goursat", "twist-detect", "selftest"):
            assert command in result.output

    def test_fullness_help(self):
        runner = CliRunner()
        result = runner.invoke(cli, ["fullness", "--help"])
        assert result.exit_code == 0
        assert "--ring" in result.output
        assert "--group" in result.output
        assert "--cap" in result.output
        assert "--workers" in result.output

    def test_version(self):
        runner = CliRunner()
        result = runner.invoke(cli, ["--version"])
        assert result.exit_code == 0
        assert "1.0.0" in result.output

    def test_ring_info_to_stdout(self):
        runner = CliRunner()
        result = runner.invoke(cli, ["ring-info", "--ring", LAMBDA])
        assert result.exit_code == 0
        report = json.loads(result.stdout)
        assert report["command"] == "ring-info"
        assert report["payload"]["size"] == 27

    def test_ring_info_to_file(self, tmp_path):
        out = tmp_path / "ring.json"
        runner = CliRunner()
        result = runner.invoke(cli, ["ring-info", "--ring", LAMBDA, "--out", str(out)])
        assert result.exit_code == 0
        assert json.loads(out.read_text())["payload"]["rank"] == 3

    def test_bad_ring_exits_with_input_error(self):
        runner = CliRunner()
        result = runner.invoke(cli, ["ring-info", "--ring", "kind=padic;p=3"])
        assert result.exit_code == EXIT_INPUT_ERROR
        assert "unknown ring kind" in result.output

    def test_missing_group_file(self, tmp_path):
        runner = CliRunner()
        missing = str(tmp_path / "absent.grp")
        result = runner.invoke(cli, ["pink", "--ring", LAMBDA, "--group", missing])
        assert result.exit_code == EXIT_INPUT_ERROR
        assert "does not exist" in result.output

    def test_cap_flag(self, tmp_path):
        group = tmp_path / "gamma_t.grp"
        group.write_text(GAMMA_T)
        runner = CliRunner()
        result = runner.invoke(
            cli, ["pink", "--ring", LAMBDA, "--group", str(group), "--cap", "10"]
        )
        assert result.exit_code == EXIT_INPUT_ERROR
        assert "--cap" in result.output

    def test_no_regular_element_is_a_verification_failure(self, tmp_path):
        group = tmp_path / "gamma_t.grp"
        group.write_text(GAMMA_T)
        runner = CliRunner()
        result = runner.invoke(cli, ["fullness", "--ring", LAMBDA, "--group", str(group)])
        assert result.exit_code == EXIT_VERIFICATION_FAILED
        assert "stage=teichmuller_matrix_limit" in result.output

    def test_qexp_eigenvalue(self):
        runner = CliRunner()
        args = ["qexp", "--eta", "1^24", "--precision", "20", "--op", "eigenvalue", "--n", "3"]
        result = runner.invoke(cli, args)
        assert result.exit_code == 0
        assert json.loads(result.stdout)["payload"]["eigenvalue"] == "252"

    def test_shallow_truncation_reports_nilpotent_ideals(self, tmp_path):
        group = tmp_path / "gamma_t_b2.grp"
        group.write_text("1,T;0,1\n1,0;T,1\n1+T,0;0,1-T\n")
        runner = CliRunner()
        args = [
            "fullness",
            "--ring",
            "kind=trunc_iwasawa;p=3;a=1;b=2",
            "--group",
            str(group),
            "--j",
            "1,0;0,2",
        ]
        result = runner.invoke(cli, args)
        assert result.exit_code == EXIT_VERIFICATION_FAILED
        assert "stage=nilpotent_ideals" in result.output
