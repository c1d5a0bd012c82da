"""
hida-fullness - desk-scale images of Galois representations for Hida families.

Exact arithmetic on truncated Iwasawa algebras, Pink-Lie towers of p-subgroups
of SL_2, fullness certificates, Goursat and obstruction group theory, and
Hecke/twist machinery on q-expansions.
"""

__version__ = "1.0.0"


def __getattr__(name: str):
    """Lazy import for the heavy entry points."""
    if name == "PipelineRunner":
        from hida_fullness.core.runner import PipelineRunner

        return PipelineRunner
    if name == "JobReport":
        from hida_fullness.models.job import JobReport

        return JobReport
    if name == "HidaFullnessError":
        from hida_fullness.errors import HidaFullnessError

        return HidaFullnessError
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = ["PipelineRunner", "JobReport", "HidaFullnessError", "__version__"]
