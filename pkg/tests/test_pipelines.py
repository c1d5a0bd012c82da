"""Tests for runtime limits, pipelines and the concurrent job runner."""

import pytest

from hida_fullness.core.config import CAP_ENV_VAR, Limits
from hida_fullness.core.pipelines import parse_eta_factors, run_job
from hida_fullness.core.runner import PipelineRunner
from hida_fullness.errors import BadInput
from hida_fullness.exporters.json_export import JSONLinesReportExporter, dumps
from hida_fullness.models.job import Command, JobConfig, JobStatus

LAMBDA = "kind=trunc_iwasawa;p=3;a=1;b=3"

GAMMA_T = """\
# Γ(T) over F_3[T]/(T^3)
1,T;0,1
1,0;T,1
1+T,0;0,1-T+T^2
"""


@pytest.fixture
def gamma_file(tmp_path):
    path = tmp_path / "gamma_t.grp"
    path.write_text(GAMMA_T)
    return path


# ═══════════════════════════════════════════
# Limits Tests
# ═══════════════════════════════════════════


class TestLimits:
    def test_flag_wins(self):
        limits = Limits.resolve(cap=500, env={CAP_ENV_VAR: "10"})
        assert limits.enumeration_cap == 500

    def test_environment_variable(self):
        assert Limits.resolve(env={CAP_ENV_VAR: "1234"}).enumeration_cap == 1234

    def test_default(self):
        assert Limits.resolve(env={}) == Limits()

    def test_bad_environment_value(self):
        with pytest.raises(BadInput, match=CAP_ENV_VAR):
            Limits.resolve(env={CAP_ENV_VAR: "lots"})

    def test_nonpositive_cap(self):
        with pytest.raises(BadInput, match="enumeration_cap"):
            Limits.resolve(cap=0)

    def test_with_search_cap(self):
        assert Limits().with_search_cap(7).search_cap == 7


# ═══════════════════════════════════════════
# Pipeline Tests
# ═══════════════════════════════════════════


class TestPipelines:
    def test_eta_factors(self):
        assert parse_eta_factors("4^2, 8^2") == [(4, 2), (8, 2)]
        assert parse_eta_factors("2") == [(2, 1)]
        with pytest.raises(BadInput, match="d\\^e"):
            parse_eta_factors("a^2")

    def test_ring_info(self):
        report = run_job(JobConfig(command=Command.RING_INFO, ring=LAMBDA), Limits())
        assert report.ok
        assert report.payload["size"] == 27
        assert [i["size"] for i in report.payload["ideals"]] == [1, 3, 9, 27]
        assert report.payload["automorphisms"][0] == "id"

    def test_bad_ring_is_an_error_report(self):
        report = run_job(JobConfig(command=Command.RING_INFO, ring="kind=padic;p=3"), Limits())
        assert report.status == JobStatus.ERROR.value
        assert "unknown ring kind" in report.error

    def test_pink(self, gamma_file):
        config = JobConfig(command=Command.PINK, ring=LAMBDA, group=gamma_file, options={"depth": 1})
        report = run_job(config, Limits())
        assert report.ok
        assert report.payload["group"]["order"] == 729
        assert report.payload["pink_theorem"]["orders"]["H_1"] == 729

    def test_cap_exceeded_is_an_error_report(self, gamma_file):
        config = JobConfig(command=Command.PINK, ring=LAMBDA, group=gamma_file)
        report = run_job(config, Limits(enumeration_cap=10))
        assert report.status == JobStatus.ERROR.value
        assert "--cap" in report.error

    def test_eigenvalue_of_delta(self):
        options = {"eta": "1^24", "precision": 20, "op": "eigenvalue", "n": 2}
        report = run_job(JobConfig(command=Command.QEXP, options=options), Limits())
        assert report.payload["eigenvalue"] == "-24"

    def test_unknown_operation(self):
        options = {"eta": "1^24", "precision": 20, "op": "laplace"}
        report = run_job(JobConfig(command=Command.QEXP, options=options), Limits())
        assert report.status == JobStatus.ERROR.value

    def test_twist_detect_cm_form(self):
        options = {"eta": "4^2,8^2", "precision": 100}
        report = run_job(JobConfig(command=Command.TWIST_DETECT, options=options), Limits())
        assert report.ok
        assert report.payload["cm_flag"] is True
        assert report.payload["form"]["level"] == 32

    def test_selftest_is_not_a_pipeline(self):
        with pytest.raises(BadInput):
            run_job(JobConfig(command=Command.SELFTEST), Limits())


# ═══════════════════════════════════════════
# Runner Tests
# ═══════════════════════════════════════════


def _jobs():
    return [
        JobConfig(command=Command.RING_INFO, ring=LAMBDA),
        JobConfig(command=Command.RING_INFO, ring="kind=finite_field;q=9"),
        JobConfig(command=Command.QEXP, options={"eta": "1^24", "precision": 30, "op": "hecke"}),
        JobConfig(command=Command.RING_INFO, ring="kind=padic;p=3"),
    ]


class TestPipelineRunner:
    @pytest.mark.asyncio
    async def test_reports_in_input_order(self):
        runner = PipelineRunner(workers=3)
        reports = await runner.run(_jobs())
        assert [r.command for r in reports] == ["ring-info", "ring-info", "qexp", "ring-info"]
        assert runner.stats["ok"] == 3
        assert runner.stats["error"] == 1

    @pytest.mark.asyncio
    async def test_output_independent_of_workers(self):
        serial = await PipelineRunner(workers=1).run(_jobs())
        parallel = await PipelineRunner(workers=4).run(_jobs())
        assert [dumps(r) for r in serial] == [dumps(r) for r in parallel]

    @pytest.mark.asyncio
    async def test_exporters_receive_reports(self, tmp_path):
        outfile = tmp_path / "reports.jsonl"
        runner = PipelineRunner(exporters=[JSONLinesReportExporter(output_path=outfile)])
        await runner.run(_jobs()[:2])
        assert len(outfile.read_text().splitlines()) == 2

    @pytest.mark.asyncio
    async def test_missing_input_fails_before_running(self, tmp_path):
        runner = PipelineRunner()
        job = JobConfig(command=Command.PINK, ring=LAMBDA, group=tmp_path / "absent.grp")
        with pytest.raises(BadInput, match="does not exist"):
            await runner.run([job])
