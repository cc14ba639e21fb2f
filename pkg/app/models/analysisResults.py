from pydantic import BaseModel, Field, field_validator
from typing import Dict, List, Optional
from enum import Enum

from .germFile import Violation


class HomologyGroup(BaseModel):
    """Finitely generated abelian group Z^rank ⊕ Z/d_1 ⊕ ⋯ with d_1 | d_2 | ⋯"""
    dimension: int = Field(..., description="Degree (reduced poset homology starts at -1)")
    rank: int = Field(..., ge=0, description="Free rank")
    torsion: List[int] = Field(default_factory=list, description="Torsion coefficients, each dividing the next")

    @field_validator("torsion")
    @classmethod
    def _divisibility_chain(cls, torsion: List[int]) -> List[int]:
        for d in torsion:
            if d < 2:
                raise ValueError(f"torsion coefficients must be >= 2, got {d}")
        for d, e in zip(torsion, torsion[1:]):
            if e % d:
                raise ValueError(f"torsion {torsion} is not a divisibility chain")
        return torsion

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def is_torsion_free(self) -> bool:
        return not self.torsion

    def render(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


class GermSummary(BaseModel):
    name: str
    simples: int
    atoms: List[str]
    delta: str
    delta_norm: int
    sigma_order: int


class ValidationReport(BaseModel):
    """Result of validating a germ file"""
    valid: bool
    summary: Optional[GermSummary] = None
    violations: List[Violation] = Field(default_factory=list)


class ElementResult(BaseModel):
    """An element rendered in the CLI word syntax"""
    input: List[str] = Field(default_factory=list, description="Operands as given")
    result: str = Field(..., description="Canonical normal form, e.g. 's.t@2'")
    letters: List[str] = Field(default_factory=list, description="Prefix letters of the result")
    exp: int = Field(0, description="Δ-exponent of the result")


class EqualityResult(BaseModel):
    left: str
    right: str
    equal: bool


class NormResult(BaseModel):
    element: str
    norm: int
    word_length: Optional[int] = None


class CellCount(BaseModel):
    dimension: int
    count: int


class CellReport(BaseModel):
    germ: str
    counts: List[CellCount]
    euler_characteristic: int
    cells: Optional[Dict[int, List[List[str]]]] = Field(None, description="Cells per dimension, when listed")


class HomologyReport(BaseModel):
    germ: str
    kind: str = Field(..., description="homology, cohomology or abelianization")
    groups: List[HomologyGroup]
    euler_characteristic: Optional[int] = None


class PosetReport(BaseModel):
    """Order-complex homology of one divisor poset"""
    label: str = Field(..., description="'proper' or 'avoid(μ)'")
    mu: Optional[str] = None
    size: int
    elements: List[str] = Field(default_factory=list)
    empty: bool = False
    top_degree: int = Field(..., description="Dimension of the order complex (-1 if empty)")
    groups: List[HomologyGroup] = Field(default_factory=list, description="Reduced (co)homology from degree -1")
    nonzero_degrees: List[int] = Field(default_factory=list)
    torsion_free: bool = True


class Verdict(str, Enum):
    yes = "yes"
    inconclusive = "inconclusive"


class DualityVerdict(BaseModel):
    is_duality: Verdict
    n: Optional[int] = Field(None, description="Duality dimension when the verdict is yes")
    reason: str
    offending: Optional[str] = Field(None, description="Label of the poset that blocked the verdict")
    posets: List[PosetReport]


class EndConnectivityVerdict(BaseModel):
    verdict: Verdict
    n: Optional[int] = Field(None, description="Largest n with all reduced homology vanishing in degrees <= n")
    conclusion: Optional[str] = None
    reason: str
    offending: Optional[str] = None
    posets: List[PosetReport]


class LinkReport(BaseModel):
    vertex: str
    right_front: str
    right_front_complement: str
    descending: PosetReport
    ascending: PosetReport


class DimensionReport(BaseModel):
    germ: str
    delta_norm: int
    top_cell_dimension: int
    top_nonzero_cohomology: int = Field(..., description="Largest k with H^k != 0; a lower bound for cd")


class GeodesicReport(BaseModel):
    source: str
    target: str
    distance: int
    labels: List[str] = Field(default_factory=list, description="Edge labels b_1, ..., b_n")
    path: List[str] = Field(default_factory=list, description="Coset representatives along the geodesic")
    profile: Optional[List[str]] = Field(None, description="down/up per edge")


class CenterReport(BaseModel):
    radius: int
    centers: List[str]
    search_radius: int = Field(..., description="r0 used to bound the candidate region")
    candidates: int


class SubgroupRecord(BaseModel):
    mu: str
    j: int
    t: int
    order: int
    type: int = Field(..., description="1: cyclic ⟨μΔ^j⟩; 2: product with ⟨Δ^k⟩")
    k: Optional[int] = None
    generator: str


class SubgroupTable(BaseModel):
    germ: str
    sigma_order: int
    records: List[SubgroupRecord]
    torsion_exponent: int


class TamenessSample(BaseModel):
    n: int
    norm: int


class TamenessReport(BaseModel):
    germ: str
    samples: List[TamenessSample]
    constant: str = Field(..., description="max norm(Δ^n)/n as an exact fraction")
    delta_norm: int


class TranslationEstimate(BaseModel):
    element: str
    n_max: int
    estimate: str = Field(..., description="min word_length(g^n)/n as an exact fraction")
    minimizing_n: int
    word_lengths: List[int]
    lower_bound: Optional[str] = Field(None, description="1/(c·||Δ||) when a tameness constant is supplied")


class OrbitRadii(BaseModel):
    element: str
    radii: List[int]


class QuotientOrder(BaseModel):
    element: str
    order: Optional[int] = Field(None, description="Order in G/⟨Δ^m⟩, if found within the limit")
    limit: int


class ToolInfo(BaseModel):
    """Builders and the settings that bound computations"""
    builders: List[str]
    families: List[str]
    node_budget: int
    max_rank: int
    max_dihedral_m: int
    worker_threads: int
    max_processing_seconds: float
