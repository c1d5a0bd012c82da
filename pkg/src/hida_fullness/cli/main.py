"""
hida-fullness CLI — desk-scale images of Galois representations for Hida families.

Usage:
    hida-fullness ring-info --ring "kind=trunc_iwasawa, p=3, a=1, b=3"
    hida-fullness pink --ring ring.txt --group gamma_m.txt --out pink.json
    hida-fullness fullness --ring ring.txt --group gamma_m.txt --j "1,0;0,8"
    hida-fullness twist-detect --eta "4^2,8^2" --precision 200
    hida-fullness selftest
"""

import asyncio
import logging
import sys
from collections.abc import Callable
from pathlib import Path
from typing import Any

import click

from hida_fullness import __version__

EXIT_INPUT_ERROR = 1
EXIT_VERIFICATION_FAILED = 2


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )


def _fail(message: str, stage: str | None = None, code: int = EXIT_INPUT_ERROR) -> None:
    suffix = f" [stage={stage}]" if stage else ""
    click.echo(f"error: {message}{suffix}", err=True)
    sys.exit(code)


def common_options(func: Callable[..., Any]) -> Callable[..., Any]:
    """Flags shared by every pipeline command."""
    options = [
        click.option("--cap", type=int, default=None, help="Enumeration cap (env IFL_CAP)."),
        click.option("--search-cap", type=int, default=None, help="Search-space cap."),
        click.option("--workers", "-w", type=int, default=1, help="Concurrent jobs."),
        click.option(
            "--out", "-o", type=click.Path(), default=None, help="Report file (stdout if unset)."
        ),
        click.option(
            "--format",
            "-f",
            "fmt",
            type=click.Choice(["json", "jsonl"]),
            default="json",
            help="Report format.",
        ),
        click.option("--verbose", "-v", is_flag=True, help="Enable verbose logging."),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _run(command: str, jobs: list[dict], cap, search_cap, workers, out, fmt) -> None:
    """Build JobConfigs, run them, write reports and map outcomes to exit codes."""
    from hida_fullness.core.config import Limits
    from hida_fullness.core.runner import PipelineRunner
    from hida_fullness.errors import HidaFullnessError
    from hida_fullness.exporters import get_exporter
    from hida_fullness.exporters.json_export import dumps
    from hida_fullness.models.job import Command, JobConfig, JobStatus

    try:
        limits = Limits.resolve(cap)
        if search_cap is not None:
            limits = limits.with_search_cap(search_cap)
        configs = [
            JobConfig(
                Command(command),
                enumeration_cap=limits.enumeration_cap,
                search_cap=limits.search_cap,
                workers=workers,
                out=Path(out) if out else None,
                **job,
            )
            for job in jobs
        ]
        exporters = [get_exporter(fmt, out)] if out else []
        runner = PipelineRunner(limits, exporters, workers)
        reports = asyncio.run(runner.run(configs))
    except HidaFullnessError as e:
        _fail(str(e), e.stage)
        return

    if not out:
        for report in reports:
            click.echo(dumps(report, indent=None if fmt == "jsonl" else 2))

    for report in reports:
        if report.status == JobStatus.ERROR.value:
            _fail(report.error or "unknown error", report.stage, EXIT_INPUT_ERROR)
        if report.status == JobStatus.FAILED.value:
            _fail(report.error or "verification failed", report.stage, EXIT_VERIFICATION_FAILED)


@click.group()
@click.version_option(version=__version__, package_name="hida-fullness")
def cli():
    """hida-fullness — Pink towers, fullness certificates and self-twists at desk scale."""
    pass


@cli.command("ring-info")
@click.option("--ring", "-r", required=True, help="Ring spec file or inline key=value text.")
@common_options
def ring_info(ring, cap, search_cap, workers, out, fmt, verbose):
    """Summarize a coefficient ring: size, ideals, automorphisms."""
    _configure_logging(verbose)
    _run("ring-info", [{"ring": ring}], cap, search_cap, workers, out, fmt)


@cli.command()
@click.option("--ring", "-r", required=True, help="Ring spec file or inline key=value text.")
@click.option(
    "--group", "-g", multiple=True, required=True, type=click.Path(), help="Generator file(s)."
)
@click.option("--depth", "-d", type=int, default=3, help="Tower depth checked.")
@common_options
def pink(ring, group, depth, cap, search_cap, workers, out, fmt, verbose):
    """Pink tower L_1, C, L_n, M_n, H_n and the Pink theorem check."""
    _configure_logging(verbose)
    jobs = [{"ring": ring, "group": Path(g), "options": {"depth": depth}} for g in group]
    _run("pink", jobs, cap, search_cap, workers, out, fmt)


@cli.command()
@click.option("--ring", "-r", required=True, help="Ring spec file or inline key=value text.")
@click.option(
    "--group", "-g", multiple=True, required=True, type=click.Path(), help="Generator file(s)."
)
@click.option("--j", "j_matrix", default=None, help="Normalizing diagonal matrix 'a,0;0,d'.")
@click.option("--element", default=None, help="Element whose Teichmüller limit gives j.")
@click.option("--layer", type=int, default=1, help="Tower layer fed to the eigensplit.")
@common_options
def fullness(ring, group, j_matrix, element, layer, cap, search_cap, workers, out, fmt, verbose):
    """Extract a fullness certificate a_0 with Γ(a_0) ⊆ G."""
    _configure_logging(verbose)
    options = {"j": j_matrix, "element": element, "layer": layer}
    jobs = [{"ring": ring, "group": Path(g), "options": options} for g in group]
    _run("fullness", jobs, cap, search_cap, workers, out, fmt)


@cli.command()
@click.option("--ring", "-r", required=True, help="Ring spec file or inline key=value text.")
@click.option(
    "--group", "-g", multiple=True, required=True, type=click.Path(), help="Product generators."
)
@click.option("--merzljakov", is_flag=True, help="Search the Merzljakov form of the isomorphism.")
@common_options
def goursat(ring, group, merzljakov, cap, search_cap, workers, out, fmt, verbose):
    """Goursat decomposition of a subgroup of a product."""
    _configure_logging(verbose)
    options = {"merzljakov": merzljakov}
    jobs = [{"ring": ring, "group": Path(g), "options": options} for g in group]
    _run("goursat", jobs, cap, search_cap, workers, out, fmt)


@cli.command()
@click.option("--ring", "-r", required=True, help="Finite field spec.")
@click.option("--table", "-t", required=True, type=click.Path(), help="Cayley table CSV of G.")
@click.option("--rep", required=True, type=click.Path(), help="Representation of H ⊴ G.")
@click.option("--cross-check", is_flag=True, help="Confirm by exhaustive extension search.")
@common_options
def obstruction(ring, table, rep, cross_check, cap, search_cap, workers, out, fmt, verbose):
    """Obstruction to extending a representation of H ⊴ G."""
    _configure_logging(verbose)
    job = {
        "ring": ring,
        "inputs": {"table": Path(table), "rep": Path(rep)},
        "options": {"cross_check": cross_check},
    }
    _run("obstruction", [job], cap, search_cap, workers, out, fmt)


def _form_job(ring, qexp, eta, precision, options: dict, inputs: dict | None = None) -> dict:
    return {
        "ring": ring,
        "qexp": Path(qexp) if qexp else None,
        "inputs": inputs or {},
        "options": {"eta": eta, "precision": precision, **options},
    }


@cli.command()
@click.option("--qexp", "-q", type=click.Path(), default=None, help="q-expansion CSV.")
@click.option("--eta", default=None, help="Eta product instead of a CSV, e.g. '1^24'.")
@click.option("--precision", type=int, default=200, help="Precision for --eta.")
@click.option("--ring", "-r", default=None, help="Coefficient ring (default Q).")
@click.option(
    "--op",
    type=click.Choice(["info", "hecke", "u", "v", "eigenvalue", "ordinarity", "twist", "fM"]),
    default="info",
    help="Operation to apply.",
)
@click.option("--n", "n", type=int, default=2, help="Index of the operator (n, ℓ or p).")
@click.option("--character", type=click.Path(), default=None, help="Twist character file.")
@click.option("--level-m", type=int, default=None, help="Target level for twist or fM.")
@common_options
def qexp(
    qexp,
    eta,
    precision,
    ring,
    op,
    n,
    character,
    level_m,
    cap,
    search_cap,
    workers,
    out,
    fmt,
    verbose,
):
    """Hecke, U, V, twist and f_M operators on a truncated q-expansion."""
    _configure_logging(verbose)
    inputs = {"character": Path(character)} if character else {}
    options = {"op": op, "n": n, "level_m": level_m}
    job = _form_job(ring, qexp, eta, precision, options, inputs)
    _run("qexp", [job], cap, search_cap, workers, out, fmt)


@cli.command("twist-detect")
@click.option("--qexp", "-q", type=click.Path(), default=None, help="q-expansion CSV.")
@click.option("--eta", default=None, help="Eta product instead of a CSV, e.g. '4^2,8^2'.")
@click.option("--precision", type=int, default=200, help="Precision for --eta.")
@click.option("--ring", "-r", default=None, help="Coefficient ring (default Q).")
@click.option("--moduli-bound", type=int, default=8, help="Largest twist conductor.")
@click.option("--primes", type=int, default=25, help="Number of primes checked.")
@common_options
def twist_detect(
    qexp,
    eta,
    precision,
    ring,
    moduli_bound,
    primes,
    cap,
    search_cap,
    workers,
    out,
    fmt,
    verbose,
):
    """Detect conjugate self-twists (σ, η) of a q-expansion."""
    _configure_logging(verbose)
    options = {"moduli_bound": moduli_bound, "primes": primes}
    job = _form_job(ring, qexp, eta, precision, options)
    _run("twist-detect", [job], cap, search_cap, workers, out, fmt)


@cli.command()
@click.option("--cap", type=int, default=None, help="Enumeration cap (env IFL_CAP).")
@click.option("--only", multiple=True, type=int, help="Run only these criteria.")
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose logging.")
def selftest(cap, only, verbose):
    """Run the bundled acceptance suite."""
    from hida_fullness.core.config import Limits
    from hida_fullness.core.selftest import Verdict, print_results, run_selftest
    from hida_fullness.errors import HidaFullnessError

    _configure_logging(verbose)
    try:
        limits = Limits.resolve(cap)
    except HidaFullnessError as e:
        _fail(str(e))
        return
    results = run_selftest(limits, list(only) or None)
    print_results(results)
    failed = [r for r in results if r.verdict is Verdict.FAIL]
    if failed:
        names = ", ".join(f"{r.number} ({r.name})" for r in failed)
        _fail(f"selftest failed: {names}", code=EXIT_VERIFICATION_FAILED)


if __name__ == "__main__":
    cli()
