"""Instance container shared by the generators, file format, and scenarios."""

from __future__ import annotations

from dataclasses import dataclass, field

from stablemax.objectives import Objective, validate_objective
from stablemax.systems import IndependenceSystem


@dataclass
class Instance:
    system: IndependenceSystem
    objective: Objective
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.system.ground_size != self.objective.ground_size:
            raise ValueError(
                f"system ground size {self.system.ground_size} != "
                f"objective ground size {self.objective.ground_size}"
            )

    def validate(self) -> None:
        """Check the objective is monotone submodular (desk-scale grounds)."""
        report = validate_objective(self.objective)
        if not report.ok:
            raise ValueError(f"objective fails validation: {report}")
