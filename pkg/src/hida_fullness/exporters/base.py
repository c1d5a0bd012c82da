"""
Exporter Protocol — where finished JobReports go.
"""

from __future__ import annotations

from typing import Protocol, runtime_checkable

from hida_fullness.models.job import JobReport


@runtime_checkable
class ReportExporter(Protocol):
    """
    A sink for JobReports.

    The runner hands over reports in job order, whatever the worker count,
    so an exporter that writes them as it receives them produces the same
    bytes for ``--workers 1`` and ``--workers 8``.
    """

    count: int

    async def export(self, report: JobReport) -> None: ...

    async def finalize(self) -> None:
        """Flush and log a summary once the last report is in."""
        ...
