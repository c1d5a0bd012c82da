"""
Pipeline Runner — fans independent jobs out over worker threads.

Jobs are pure, so they run concurrently under an ``asyncio.Semaphore`` bounded
by ``--workers``; reports come back (and are exported) in input order, which
keeps output byte-identical for any worker count.
"""

import asyncio
import logging
import time
from collections.abc import Sequence

from rich.console import Console
from rich.progress import (
    BarColumn,
    Progress,
    SpinnerColumn,
    TaskProgressColumn,
    TextColumn,
    TimeElapsedColumn,
)

from hida_fullness.core.config import Limits
from hida_fullness.core.pipelines import run_job
from hida_fullness.exporters.base import ReportExporter
from hida_fullness.models.job import JobConfig, JobReport

logger = logging.getLogger(__name__)


class PipelineRunner:
    """
    Runs a batch of JobConfigs and hands the reports to the exporters.
    """

    def __init__(
        self,
        limits: Limits | None = None,
        exporters: list[ReportExporter] | None = None,
        workers: int = 1,
        console: Console | None = None,
        show_progress: bool = False,
    ):
        self.limits = limits or Limits()
        self.exporters = exporters or []
        self.workers = max(workers, 1)
        self.console = console or Console(stderr=True)
        self.show_progress = show_progress
        self.stats = {"ok": 0, "failed": 0, "error": 0, "elapsed": 0.0}

    async def run(self, jobs: Sequence[JobConfig]) -> list[JobReport]:
        start = time.time()
        for job in jobs:
            job.validate()
        logger.info(f"Running {len(jobs)} jobs on {self.workers} workers.")

        reports = await self._execute(jobs)

        for report in reports:
            self.stats[report.status] += 1
            for exporter in self.exporters:
                await exporter.export(report)
        for exporter in self.exporters:
            try:
                await exporter.finalize()
            except OSError as e:
                logger.error(f"Exporter finalization error: {e}")

        self.stats["elapsed"] = time.time() - start
        logger.info(
            f"Done: {self.stats['ok']} ok, {self.stats['failed']} failed, "
            f"{self.stats['error']} errors in {self.stats['elapsed']:.2f}s"
        )
        return reports

    async def _execute(self, jobs: Sequence[JobConfig]) -> list[JobReport]:
        sem = asyncio.Semaphore(self.workers)

        async def run_one(job: JobConfig) -> JobReport:
            async with sem:
                return await asyncio.to_thread(run_job, job, self.limits)

        if not self.show_progress:
            return list(await asyncio.gather(*(run_one(job) for job in jobs)))

        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            TaskProgressColumn(),
            TimeElapsedColumn(),
            console=self.console,
        ) as progress:
            task_id = progress.add_task("[green]Running jobs...[/green]", total=len(jobs))

            async def tracked(job: JobConfig) -> JobReport:
                report = await run_one(job)
                progress.advance(task_id)
                return report

            return list(await asyncio.gather(*(tracked(job) for job in jobs)))
