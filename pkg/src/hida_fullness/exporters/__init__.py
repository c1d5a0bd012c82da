"""Report writers."""

from hida_fullness.exporters.base import ReportExporter
from hida_fullness.exporters.json_export import JSONLinesReportExporter, JSONReportExporter


def get_exporter(format_name: str, output_path: str) -> ReportExporter:
    """Factory function to create an exporter by format name."""
    from pathlib import Path

    out = Path(output_path)
    match format_name:
        case "json":
            return JSONReportExporter(output_path=out)
        case "jsonl":
            return JSONLinesReportExporter(output_path=out)
        case _:
            raise ValueError(f"Unknown export format: {format_name!r}. Use 'json' or 'jsonl'.")


__all__ = ["ReportExporter", "JSONReportExporter", "JSONLinesReportExporter", "get_exporter"]
