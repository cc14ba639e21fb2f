from pydantic import BaseModel, Field, model_validator
from typing import List, Optional, Tuple
from enum import Enum


class CoxeterFamily(str, Enum):
    A = "A"
    I2 = "I2"


class MonoidKind(str, Enum):
    classical = "classical"
    dual = "dual"


class ViolationKind(str, Enum):
    missing_identity = "MissingIdentity"
    associativity = "AssociativityViolation"
    cancellation = "CancellationViolation"
    partial_order = "NotAPartialOrder"
    lattice = "NotALattice"
    divisor_mismatch = "DivisorMismatch"
    complement = "ComplementNotUnique"
    atom_mismatch = "AtomMismatch"
    sigma = "SigmaViolation"


class GermFile(BaseModel):
    """On-disk germ: simple names, Δ and the sparse product table"""
    name: str = Field(..., description="Germ label, e.g. 'classical A2'")
    simples: List[str] = Field(..., description="Simple names; must contain '1'")
    delta: str = Field(..., description="Name of the Garside element Δ")
    atoms: Optional[List[str]] = Field(None, description="Atoms, cross-checked against the derived ones")
    product: List[Tuple[str, str, str]] = Field(
        default_factory=list,
        description="Triples [a, b, c] asserting a·b = c; identity products are implicit",
    )


class Violation(BaseModel):
    """One failed germ axiom with a concrete witness"""
    kind: ViolationKind
    witness: List[str] = Field(default_factory=list, description="Offending simple names (and side, if any)")
    message: str = Field("", description="Human-readable explanation")


class CoxeterSpec(BaseModel):
    """Coxeter system accepted by the builders: A_n (n = rank) or I2(m) (m = rank)"""
    family: CoxeterFamily
    rank: int = Field(..., description="n for A_n, m for I2(m)")

    @model_validator(mode="after")
    def _check_rank(self) -> "CoxeterSpec":
        if self.family == CoxeterFamily.A and self.rank < 1:
            raise ValueError(f"A_n needs n >= 1, got {self.rank}")
        if self.family == CoxeterFamily.I2 and self.rank < 3:
            raise ValueError(f"I2(m) needs m >= 3, got {self.rank}")
        return self

    @property
    def label(self) -> str:
        if self.family == CoxeterFamily.A:
            return f"A{self.rank}"
        return f"I2({self.rank})"
