"""Self-certifying bound reports and their JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

UNITS_CAPACITY = "log|F|"
UNITS_DOF = "dof"
LABEL_CAPACITY = "sum-capacity bound"
LABEL_DOF = "DoF bound (almost all gains)"


@dataclass(frozen=True)
class LayerTerm:
    """One hop's contribution ``rank(Ω[j];Ωᶜ[j+1]) + rank(Θ[j];Θᶜ[j+1]) - rank(Θ[j];Ωᶜ[j+1])``."""

    layer: int
    omega_term: int
    theta_term: int
    cross_term: int

    @property
    def value(self) -> int:
        return self.omega_term + self.theta_term - self.cross_term

    def to_dict(self) -> dict:
        return {"layer": self.layer, "omega": self.omega_term, "theta": self.theta_term,
                "cross": self.cross_term, "value": self.value}


@dataclass
class BoundReport:
    value: int | None
    units: str
    label: str
    method: str
    witness: dict[str, Any]
    terms: list = field(default_factory=list)
    stats: dict[str, Any] = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.value is not None

    def terms_total(self) -> int:
        return sum(t.value for t in self.terms)

    def to_dict(self) -> dict:
        return {
            "bound": self.value,
            "units": self.units,
            "label": self.label,
            "method": self.method,
            "witness": self.witness,
            "terms": [t.to_dict() if hasattr(t, "to_dict") else t for t in self.terms],
            "stats": self.stats,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_text(self) -> str:
        lines = [f"{self.label}: {self.value if self.found else 'none found'}"
                 f" [{self.units}] via {self.method}"]
        for k, v in self.witness.items():
            lines.append(f"  {k}: {v}")
        for t in self.terms:
            if isinstance(t, LayerTerm):
                lines.append(f"  hop {t.layer}: {t.omega_term} + {t.theta_term} - {t.cross_term}"
                             f" = {t.value}")
        return "\n".join(lines)
