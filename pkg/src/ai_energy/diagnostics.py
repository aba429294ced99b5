"""Non-fatal conditions collected during a run."""

from __future__ import annotations

import logging
from dataclasses import dataclass

log = logging.getLogger("ai_energy")


@dataclass(frozen=True)
class Diagnostic:
    """A non-fatal condition worth surfacing in the run output."""

    stage: str
    subject: str
    message: str

    def __str__(self) -> str:
        return f"[{self.stage}] {self.subject}: {self.message}"


def note(diagnostics: list | None, stage: str, subject: str, message: str) -> None:
    d = Diagnostic(stage, subject, message)
    log.warning("%s", d)
    if diagnostics is not None:
        diagnostics.append(d)
