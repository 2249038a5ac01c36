"""Run configuration and the letter budget.

The budget counts letters materialized by word-producing operations.  It is a
truncation guard, not a correctness condition: when it runs out the sweep
stops early and reports itself incomplete.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BudgetExceeded

DEFAULT_BUDGET = 10**7
MIN_BUDGET = 10**4

# Fraction of the total budget a single level may plan to spend.  Levels whose
# estimated cost exceeds this are processed in the cheap trivial-match-only
# mode, which keeps default runs fast and deterministic.
LEVEL_FRACTION = 16


class Budget:
    """Mutable letter counter with a hard limit."""

    def __init__(self, limit=DEFAULT_BUDGET):
        self.limit = int(limit)
        self.used = 0

    @property
    def remaining(self) -> int:
        return max(0, self.limit - self.used)

    def charge(self, n) -> None:
        self.used += n
        if self.used > self.limit:
            raise BudgetExceeded(
                f"letter budget exhausted ({self.used} > {self.limit})"
            )

    def can_afford(self, n) -> bool:
        return self.used + n <= self.limit


@dataclass
class RunConfig:
    """Options for a full sweep.  max_k defaults to 4N - 4 at run time."""

    max_k: int | None = None
    early_exit: bool = False
    budget: int = DEFAULT_BUDGET
    json_path: str | None = None
    dot_path: str | None = None

    def __post_init__(self):
        if self.max_k is not None and self.max_k < 1:
            raise ValueError("max_k must be at least 1")
        if self.budget < MIN_BUDGET:
            raise ValueError(f"budget must be at least {MIN_BUDGET}")

    def level_cap(self) -> int:
        return max(MIN_BUDGET, self.budget // LEVEL_FRACTION)

    def make_budget(self) -> Budget:
        return Budget(self.budget)


def resolved_max_k(config, rank) -> int:
    if config.max_k is not None:
        return config.max_k
    return max(1, 4 * rank - 4)
