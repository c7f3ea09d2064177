"""Resource budgets for the elimination and real-solving engines.

Exact elimination can blow up; every potentially unbounded loop in the
package consumes one of these ceilings and raises BudgetExceededError
instead of degrading silently or guessing.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace


class BudgetExceededError(Exception):
    """A configured resource ceiling was hit; the result so far is unusable."""


@dataclass(frozen=True)
class Budget:
    max_chains: int = 4096          # live + emitted chains per decomposition
    max_steps: int = 500_000        # task-engine steps per decomposition
    max_coeff_bits: int = 65536     # per-coefficient numerator/denominator bits
    refine_rounds: int = 256        # bisection rounds per isolating box
    max_samples: int = 60           # free-variable sampling attempts
    max_projection_depth: int = 10  # border-polynomial recursion depth

    def scaled(self, factor: float) -> "Budget":
        return replace(
            self,
            max_chains=int(self.max_chains * factor),
            max_steps=int(self.max_steps * factor),
            max_samples=max(4, int(self.max_samples * factor)),
        )


PRESETS = {
    "desk": Budget(),
    "ci": Budget(max_chains=1024, max_steps=120_000, max_samples=24),
    "long": Budget(max_chains=16384, max_steps=4_000_000, max_coeff_bits=262144,
                   max_samples=200, max_projection_depth=16),
}


def budget_from_env(default: str = "desk") -> Budget:
    name = os.environ.get("LIEISO_BUDGET_PRESET", default).strip().lower()
    if name not in PRESETS:
        raise ValueError(f"unknown budget preset {name!r}; choose from {sorted(PRESETS)}")
    return PRESETS[name]
