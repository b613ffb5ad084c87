"""Verdict records shared by the sequence, matrix and shift classifiers."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Iterable


class Status(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    BOUNDARY = "boundary"
    ERROR = "error"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a depth-limited check.

    ``holds`` and ``boundary`` are both non-failing (``bool(v)`` is true);
    ``boundary`` means some tested quantity sat exactly on zero (exact backend)
    or inside the tolerance band (approximate backend).  A failing verdict
    always carries a witness that re-evaluation reproduces.  ``error`` marks a
    check that could not be evaluated (its witness holds the message); it is
    not a pass.
    """

    status: Status
    depth: int | None = None
    witness: dict[str, Any] | None = None
    notes: tuple[str, ...] = field(default=())
    details: dict[str, Any] | None = field(default=None, compare=False)

    def __bool__(self) -> bool:
        return self.status in (Status.HOLDS, Status.BOUNDARY)

    @property
    def holds(self) -> bool:
        return bool(self)

    @classmethod
    def combine(cls, verdicts: Iterable["Verdict"], depth: int | None = None) -> "Verdict":
        """First failure wins; otherwise boundary if any part is boundary."""
        boundary = None
        notes: list[str] = []
        for v in verdicts:
            notes.extend(n for n in v.notes if n not in notes)
            if v.status in (Status.FAILS, Status.ERROR):
                return cls(v.status, depth if depth is not None else v.depth, v.witness, tuple(notes))
            if v.status is Status.BOUNDARY and boundary is None:
                boundary = v
        if boundary is not None:
            return cls(Status.BOUNDARY, depth, boundary.witness, tuple(notes))
        return cls(Status.HOLDS, depth, None, tuple(notes))


def status_from_sign(sign: int) -> Status:
    if sign > 0:
        return Status.HOLDS
    if sign < 0:
        return Status.FAILS
    return Status.BOUNDARY


def error_verdict(exc: Exception, depth: int | None = None) -> Verdict:
    return Verdict(Status.ERROR, depth, {"error": f"{type(exc).__name__}: {exc}"})
