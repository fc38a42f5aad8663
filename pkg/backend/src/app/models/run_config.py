from pathlib import Path
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from app.core.config import settings
from app.core.mixer_constants import QaoaDefaults, SelectionDefaults, SimulationDefaults

Command = Literal[
    "synth", "cost-table", "stats", "khot", "multikhot", "product",
    "maxcut-demo", "emit-circuit", "validate",
]


class RunConfig(BaseModel):
    """Parsed command-line invocation; the seed is copied into every output"""
    command: Command
    input: Optional[Path] = None
    output: Optional[Path] = None
    detail_output: Optional[Path] = None
    plan: Optional[Path] = None
    instance: Optional[Path] = None

    n: Optional[int] = Field(default=None, ge=1)
    k: Optional[int] = Field(default=None, ge=0)
    k1: Optional[int] = Field(default=None, ge=0)
    k2: Optional[int] = Field(default=None, ge=0)
    sizes: List[int] = Field(default_factory=list)
    trials: int = Field(default=100, ge=1)
    seed: int = Field(default_factory=lambda: settings.seed)

    restrict: bool = True
    selection: Literal["exact", "greedy"] = SelectionDefaults.EXACT
    chain_order: Literal["input", "sorted"] = "sorted"
    beta: float = 0.5
    depths: List[int] = Field(default_factory=lambda: list(QaoaDefaults.DEPTHS))
    method: Literal["pauli", "expm", "circuit"] = SimulationDefaults.EVOLUTION_METHODS[0]
    corrupt: bool = False

    @field_validator("sizes")
    @classmethod
    def check_sizes(cls, value: List[int]) -> List[int]:
        if any(size < 1 for size in value):
            raise ValueError("sizes must be positive")
        return value

    @field_validator("depths")
    @classmethod
    def check_depths(cls, value: List[int]) -> List[int]:
        if any(depth < 0 for depth in value):
            raise ValueError("depths must be non-negative")
        return value

    @model_validator(mode="after")
    def check_weight_range(self) -> "RunConfig":
        if self.k1 is not None and self.k2 is not None and self.k1 > self.k2:
            raise ValueError(f"k1={self.k1} exceeds k2={self.k2}")
        return self
