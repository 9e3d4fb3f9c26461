"""Structured failure reports for the embedding pipelines."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

__all__ = ["EmbeddingFailed", "FailureReport", "inequality"]


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(round(x, 12))
    return str(x)


def inequality(lhs, op: str, rhs, label: str = "") -> str:
    """Render a violated condition as ``"lhs op rhs"`` with numbers, e.g. ``"|missing| = 7 <= 5"``."""
    prefix = f"{label} = " if label else ""
    return f"{prefix}{_fmt(lhs)} {op} {_fmt(rhs)}"


@dataclass
class FailureReport:
    """Which stage failed, the violated condition, and what is needed to replay it."""

    stage: str
    reason: str
    violated: list[str] = field(default_factory=list)
    seed: int | None = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> "FailureReport":
        return cls(**doc)

    def tagged(self, outer_stage: str) -> "FailureReport":
        return FailureReport(f"{outer_stage}/{self.stage}", self.reason, list(self.violated), self.seed, dict(self.details))

    def __str__(self) -> str:
        tail = f" [{'; '.join(self.violated)}]" if self.violated else ""
        return f"{self.stage}: {self.reason}{tail}"


class EmbeddingFailed(RuntimeError):
    """Raised by pipeline stages; carries the :class:`FailureReport`."""

    def __init__(self, report: FailureReport):
        super().__init__(str(report))
        self.report = report
