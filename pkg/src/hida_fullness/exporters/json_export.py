"""
JSON Exporters — sorted-keys UTF-8 reports, byte-identical across runs.

``JSONReportExporter`` writes one document per report (a single report goes
to the target file itself, several go to ``<stem>.<n>.json``);
``JSONLinesReportExporter`` appends one line per report.
"""

import json
import logging
from pathlib import Path

import aiofiles

from hida_fullness.models.job import JobReport

logger = logging.getLogger(__name__)


def dumps(report: JobReport, indent: int | None = 2) -> str:
    return json.dumps(report.to_dict(), indent=indent, sort_keys=True, ensure_ascii=False)


class JSONReportExporter:
    """Exports each JobReport as a pretty-printed JSON document."""

    def __init__(self, output_path: Path):
        self.output_path = output_path
        self.output_path.parent.mkdir(parents=True, exist_ok=True)
        self.count = 0

    def _target(self) -> Path:
        if self.count == 0:
            return self.output_path
        return self.output_path.with_name(f"{self.output_path.stem}.{self.count}.json")

    async def export(self, report: JobReport) -> None:
        filepath = self._target()
        async with aiofiles.open(filepath, "w", encoding="utf-8") as f:
            await f.write(dumps(report) + "\n")
        self.count += 1
        logger.debug(f"[JSON] Exported {report.command} report to {filepath}")

    async def finalize(self) -> None:
        logger.info(f"[JSON] Export complete: {self.count} reports written next to {self.output_path}")


class JSONLinesReportExporter:
    """Appends each JobReport as one compact line."""

    def __init__(self, output_path: Path):
        self.output_path = output_path
        self.output_path.parent.mkdir(parents=True, exist_ok=True)
        self.output_path.write_text("", encoding="utf-8")
        self.count = 0

    async def export(self, report: JobReport) -> None:
        async with aiofiles.open(self.output_path, "a", encoding="utf-8") as f:
            await f.write(dumps(report, indent=None) + "\n")
        self.count += 1
        logger.debug(f"[JSONL] Appended {report.command} report")

    async def finalize(self) -> None:
        logger.info(f"[JSONL] Export complete: {self.count} reports in {self.output_path}")
