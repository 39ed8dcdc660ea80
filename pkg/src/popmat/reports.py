"""Solver result container shared by the one- and two-sided solvers."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class PopularityReport:
    """Outcome of a popularity solve.

    `status` is "solution" or "none-exists" (infeasible inputs raise
    instead).  `certificate` carries the reduction artifacts needed to
    re-check the answer; `verification` is the rival-by-rival transcript,
    with `complete` false when the transcript was cut off by a budget.
    """

    status: str
    solution: frozenset | None
    certificate: dict = field(default_factory=dict)
    verification: list = field(default_factory=list)
    complete: bool = True

    @property
    def found(self) -> bool:
        return self.status == "solution"
