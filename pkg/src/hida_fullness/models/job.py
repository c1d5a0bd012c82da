"""
Job Models — what the CLI asks for and what it writes back.
"""

from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path

from hida_fullness.errors import BadInput

REPORT_SCHEMA_VERSION = "1.0.0"


class Command(Enum):
    """Pipelines reachable from the command line."""

    RING_INFO = "ring-info"
    PINK = "pink"
    FULLNESS = "fullness"
    GOURSAT = "goursat"
    OBSTRUCTION = "obstruction"
    QEXP = "qexp"
    TWIST_DETECT = "twist-detect"
    SELFTEST = "selftest"


class JobStatus(Enum):
    OK = "ok"
    FAILED = "failed"
    ERROR = "error"


@dataclass
class JobConfig:
    """One pipeline invocation: inputs, caps and where the report goes."""

    command: Command
    ring: str | None = None
    group: Path | None = None
    qexp: Path | None = None
    inputs: dict[str, Path] = field(default_factory=dict)
    options: dict[str, object] = field(default_factory=dict)
    enumeration_cap: int = 2_000_000
    search_cap: int = 100_000
    workers: int = 1
    out: Path | None = None

    def validate(self) -> None:
        """
        Raises:
            BadInput: a nonpositive cap or worker count, or a missing input file.
        """
        if self.enumeration_cap < 1 or self.search_cap < 1:
            raise BadInput("caps must be positive")
        if self.workers < 1:
            raise BadInput("--workers must be at least 1")
        paths = [self.group, self.qexp, *self.inputs.values()]
        for path in paths:
            if path is not None and not path.is_file():
                raise BadInput(f"input file {path} does not exist")
        if self.ring is not None and "=" not in self.ring and not Path(self.ring).is_file():
            raise BadInput(f"ring file {self.ring} does not exist")

    def ring_text(self) -> str:
        """The ring spec: inline ``key=value`` text or the contents of a file."""
        if self.ring is None:
            raise BadInput(f"{self.command.value} needs --ring")
        if "=" in self.ring:
            return self.ring
        return Path(self.ring).read_text()


@dataclass
class JobReport:
    """Result of one job; ``payload`` is the command-specific JSON body."""

    command: str
    status: str = JobStatus.OK.value
    payload: dict = field(default_factory=dict)
    error: str | None = None
    stage: str | None = None
    schema_version: str = REPORT_SCHEMA_VERSION

    @property
    def ok(self) -> bool:
        return self.status == JobStatus.OK.value

    def to_dict(self) -> dict:
        """Serialize to JSON-compatible dictionary."""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "JobReport":
        """Deserialize from dictionary."""
        return cls(
            command=data["command"],
            status=data.get("status", JobStatus.OK.value),
            payload=data.get("payload", {}),
            error=data.get("error"),
            stage=data.get("stage"),
            schema_version=data.get("schema_version", REPORT_SCHEMA_VERSION),
        )
