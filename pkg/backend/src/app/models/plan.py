from fractions import Fraction
from typing import List, Optional

from pydantic import BaseModel, Field, computed_field, field_validator


def format_coefficient(value: Fraction) -> str:
    """'num' for integers, 'num/2^m' for dyadic fractions, else 'num/den'."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    exponent = value.denominator.bit_length() - 1
    if value.denominator == 1 << exponent:
        return f"{value.numerator}/2^{exponent}"
    return f"{value.numerator}/{value.denominator}"


def parse_coefficient(text: str) -> Fraction:
    text = text.strip()
    if "/" not in text:
        return Fraction(int(text))
    numerator, denominator = text.split("/", 1)
    if denominator.startswith("2^"):
        return Fraction(int(numerator), 1 << int(denominator[2:]))
    return Fraction(int(numerator), int(denominator))


class ProjectorTermDocument(BaseModel):
    """One signed term of a (restricted) projector"""
    coefficient: str = Field(description="Exact coefficient, 'num' / 'num/2^m' / 'num/den'")
    pauli: str = Field(description="Signed Pauli string, e.g. '-IZZIZ'")

    @field_validator("coefficient")
    @classmethod
    def check_coefficient(cls, value: str) -> str:
        try:
            parse_coefficient(value)
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"invalid coefficient {value!r}: {e}")
        return value


class CandidateDocument(BaseModel):
    """Serialized mixer candidate lX·P"""
    logical_x: str = Field(description="X-type Pauli body of lX, e.g. 'XXXII'")
    projector: List[ProjectorTermDocument] = Field(description="Projector terms in canonical order")
    edges: List[List[str]] = Field(default_factory=list, description="Covered feasible pairs as bitstrings")
    cost: int = Field(ge=0, description="CX count of the mixer term")
    provenance: str = Field(description="unrestricted, subgroup or kernel")
    kind: str = Field(description="orbit, edge, pair, xy or single_x")
    generators: Optional[List[str]] = Field(default=None, description="Stabilizer generators of the projector group")
    bridges: List[List[int]] = Field(default_factory=list, description="Hamming-weight pairs bridged")

    @field_validator("edges")
    @classmethod
    def check_edges(cls, value: List[List[str]]) -> List[List[str]]:
        for edge in value:
            if len(edge) != 2:
                raise ValueError(f"edge {edge} must list exactly two states")
        return value


class PlanDocument(BaseModel):
    """Complete mixer plan file"""
    n: int = Field(ge=1, description="Qubit count")
    feasible: List[str] = Field(description="Feasible states in input order")
    total_cost: int = Field(ge=0)
    seed: Optional[int] = None
    candidates: List[CandidateDocument] = Field(default_factory=list)

    @computed_field
    @property
    def candidate_count(self) -> int:
        return len(self.candidates)
