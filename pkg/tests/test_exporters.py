"""Tests for job models and report exporters."""

import json
import tempfile
from pathlib import Path

import pytest

from hida_fullness.errors import BadInput
from hida_fullness.exporters import get_exporter
from hida_fullness.exporters.base import ReportExporter
from hida_fullness.exporters.json_export import (
    JSONLinesReportExporter,
    JSONReportExporter,
    dumps,
)
from hida_fullness.models import REPORT_SCHEMA_VERSION, Command, JobConfig, JobReport, JobStatus


@pytest.fixture
def sample_report():
    return JobReport(
        command="pink",
        payload={"orders": {"H_1": 729, "L_1": 729}, "contained_in_h1": True},
    )


# ═══════════════════════════════════════════
# JobReport Model Tests
# ═══════════════════════════════════════════


class TestJobReport:
    def test_to_dict(self, sample_report):
        d = sample_report.to_dict()
        assert d["command"] == "pink"
        assert d["status"] == "ok"
        assert d["schema_version"] == REPORT_SCHEMA_VERSION
        assert d["payload"]["orders"]["H_1"] == 729

    def test_from_dict(self, sample_report):
        report = JobReport.from_dict(sample_report.to_dict())
        assert report == sample_report
        assert report.ok

    def test_failed_report(self):
        report = JobReport(
            command="fullness",
            status=JobStatus.FAILED.value,
            error="not contained",
            stage="confirm_containment",
        )
        assert not report.ok
        assert JobReport.from_dict(report.to_dict()).stage == "confirm_containment"

    def test_dumps_is_sorted(self, sample_report):
        text = dumps(sample_report, indent=None)
        assert text.index('"command"') < text.index('"payload"')
        assert text.index('"H_1"') < text.index('"L_1"')


# ═══════════════════════════════════════════
# JobConfig Tests
# ═══════════════════════════════════════════


class TestJobConfig:
    def test_inline_ring_text(self):
        config = JobConfig(command=Command.RING_INFO, ring="kind=zmod;p=3")
        config.validate()
        assert config.ring_text() == "kind=zmod;p=3"

    def test_ring_file_text(self, tmp_path):
        spec = tmp_path / "lambda.ring"
        spec.write_text("kind=zmod\np=3\n")
        config = JobConfig(command=Command.RING_INFO, ring=str(spec))
        config.validate()
        assert config.ring_text() == "kind=zmod\np=3\n"

    def test_missing_ring(self):
        with pytest.raises(BadInput, match="needs --ring"):
            JobConfig(command=Command.PINK).ring_text()

    def test_missing_input_file(self, tmp_path):
        config = JobConfig(command=Command.PINK, group=tmp_path / "absent.grp")
        with pytest.raises(BadInput, match="does not exist"):
            config.validate()

    def test_caps_and_workers(self):
        with pytest.raises(BadInput, match="caps"):
            JobConfig(command=Command.PINK, enumeration_cap=0).validate()
        with pytest.raises(BadInput, match="--workers"):
            JobConfig(command=Command.PINK, workers=0).validate()


# ═══════════════════════════════════════════
# JSON Exporter Tests
# ═══════════════════════════════════════════


class TestJSONExporter:
    @pytest.mark.asyncio
    async def test_exports_json_file(self, sample_report):
        with tempfile.TemporaryDirectory() as tmpdir:
            outfile = Path(tmpdir) / "reports" / "pink.json"
            exporter = JSONReportExporter(output_path=outfile)
            await exporter.export(sample_report)
            await exporter.finalize()

            assert outfile.exists()
            data = json.loads(outfile.read_text())
            assert data["command"] == "pink"
            assert data["payload"]["contained_in_h1"] is True

    @pytest.mark.asyncio
    async def test_numbered_siblings(self, sample_report):
        with tempfile.TemporaryDirectory() as tmpdir:
            outfile = Path(tmpdir) / "pink.json"
            exporter = JSONReportExporter(output_path=outfile)
            await exporter.export(sample_report)
            await exporter.export(sample_report)
            assert exporter.count == 2
            assert (Path(tmpdir) / "pink.1.json").exists()

    @pytest.mark.asyncio
    async def test_output_is_deterministic(self, sample_report):
        with tempfile.TemporaryDirectory() as tmpdir:
            first, second = Path(tmpdir) / "a.json", Path(tmpdir) / "b.json"
            for path in (first, second):
                exporter = JSONReportExporter(output_path=path)
                await exporter.export(sample_report)
            assert first.read_bytes() == second.read_bytes()


# ═══════════════════════════════════════════
# JSON Lines Exporter Tests
# ═══════════════════════════════════════════


class TestJSONLinesExporter:
    @pytest.mark.asyncio
    async def test_one_line_per_report(self, sample_report):
        with tempfile.TemporaryDirectory() as tmpdir:
            outfile = Path(tmpdir) / "reports.jsonl"
            exporter = JSONLinesReportExporter(output_path=outfile)
            await exporter.export(sample_report)
            await exporter.export(JobReport(command="qexp"))
            await exporter.finalize()

            lines = outfile.read_text().splitlines()
            assert len(lines) == 2
            assert json.loads(lines[1])["command"] == "qexp"


# ═══════════════════════════════════════════
# Factory Tests
# ═══════════════════════════════════════════


class TestFactory:
    def test_known_formats(self, tmp_path):
        json_exporter = get_exporter("json", str(tmp_path / "r.json"))
        jsonl_exporter = get_exporter("jsonl", str(tmp_path / "r.jsonl"))
        assert isinstance(json_exporter, JSONReportExporter)
        assert isinstance(jsonl_exporter, ReportExporter)

    def test_unknown_format(self, tmp_path):
        with pytest.raises(ValueError, match="Unknown export format"):
            get_exporter("sqlite", str(tmp_path / "r.db"))
