"""Job models."""

from hida_fullness.models.job import REPORT_SCHEMA_VERSION, Command, JobConfig, JobReport, JobStatus

__all__ = ["REPORT_SCHEMA_VERSION", "Command", "JobConfig", "JobReport", "JobStatus"]
