"""
Pydantic models for abelorbits reports, tables and CLI input
"""
from pydantic import BaseModel, Field, model_validator
from typing import Any, Optional

from .roots import NilradicalId, RootSystemType, abelian_nilradicals, nilradical_from_string

class VerificationReport(BaseModel):
    """One JSON-lines record of the verify harness"""
    check: str = Field(description="Check name, e.g. 'conjecture' or 'lengths'")
    family: str = Field(pattern="^[ABCD]$")
    rank: int = Field(ge=1)
    nilradical: Optional[str] = Field(None, description="Nilradical id such as 'B3:m_e3-e2'")
    status: str = Field(pattern="^(pass|fail)$")
    counterexample: Optional[dict[str, Any]] = Field(
        None, description="Offending labels, expected vs actual, and a 'replay' entry"
    )
    millis: int = Field(ge=0, description="Wall time of the check in milliseconds")
    details: Optional[dict[str, Any]] = Field(None, description="Counts and notes for passing checks")

    @property
    def passed(self) -> bool:
        return self.status == "pass"

class PosetDocument(BaseModel):
    """JSON form of an OrbitPoset"""
    nilradical: str
    order: str
    labels: list[str]
    dims: list[int]
    covers: list[list[int]] = Field(description="Hasse edges as [lower, upper] label indices")

class OrbitRow(BaseModel):
    """One row of the enumerate table"""
    label: str
    cardinality: int = Field(description="#(S), number of roots")
    arcs: int = Field(description="|S|, number of arcs of the symmetric link pattern")
    involution: str
    length_sigma: int
    length_conjugate: int
    dimension: int
    coadjoint_dimension: int
    matrix: Optional[list[str]] = Field(None, description="Rows of the representative matrix, with --matrices")

class LengthRow(BaseModel):
    """One row of the lengths table"""
    roots: str
    arcs: int
    a: int
    c: int
    r: int
    b: int
    formula: int
    brute_force: int
    verdict: str = Field(pattern="^(ok|mismatch)$")

_FORMATS = {
    "enumerate": ("tsv", "json"),
    "poset": ("dot", "json"),
    "lengths": ("tsv", "ascii", "json"),
    "verify": ("json",),
    "replay": ("json",),
}

class CliConfig(BaseModel):
    """Validated arguments of one CLI invocation"""
    command: str = Field(pattern="^(enumerate|poset|verify|lengths|replay)$")
    family: Optional[str] = Field(None, pattern="^[ABCD]$")
    rank: Optional[int] = Field(None, ge=1, le=12)
    nilradical: Optional[str] = Field(None, description="Deleted simple root, e.g. 'e3-e2', '2e1', 'e2+e1'")
    format: Optional[str] = Field(None, pattern="^(json|tsv|dot|ascii)$")
    out: Optional[str] = None
    max_rank_bruhat_oracle: Optional[int] = Field(None, ge=1, le=6)
    order: str = Field(default="geometric", pattern="^(geometric|bruhat|overlay)$")
    check: str = Field(default="all", pattern="^(all|lengths|conjecture|witnesses|coadjoint|bruhat)$")
    workers: Optional[int] = Field(None, ge=1, le=64)
    matrices: bool = False
    inject_fault: bool = False
    report: Optional[str] = None
    line: Optional[int] = Field(None, ge=1)

    class Config:
        json_schema_extra = {
            "example": {
                "command": "poset",
                "family": "D",
                "rank": 4,
                "nilradical": "e4-e3",
                "format": "dot",
                "order": "overlay"
            }
        }

    @model_validator(mode="after")
    def check_command(self) -> "CliConfig":
        if self.command in ("enumerate", "poset", "lengths"):
            if self.family is None or self.rank is None:
                raise ValueError(f"{self.command} needs --family and --rank")
        if self.command in ("enumerate", "poset") and self.family == "D" and self.rank < 3:
            raise ValueError("nilradicals of D need rank >= 3")
        if self.command == "lengths" and self.family == "D" and self.rank < 2:
            raise ValueError("D needs rank >= 2")
        if self.command == "replay" and not self.report:
            raise ValueError("replay needs --report")
        if (self.family is None) != (self.rank is None) and self.command == "verify":
            raise ValueError("verify scoping needs both --family and --rank, or neither")

        allowed = _FORMATS[self.command]
        if self.format is None:
            self.format = allowed[0]
        elif self.format not in allowed:
            raise ValueError(f"{self.command} writes {', '.join(allowed)}, not {self.format}")

        if self.nilradical is not None:
            if self.family is None:
                raise ValueError("--nilradical needs --family and --rank")
            # raises RootSystemError (a ValueError) for a non-abelian or unknown selector
            nilradical_from_string(self.root_system(), self.nilradical)
        return self

    def root_system(self) -> RootSystemType:
        return RootSystemType(self.family, self.rank)

    def nilradical_id(self) -> NilradicalId:
        """The selected nilradical; without --nilradical, the last one in simple-root order"""
        t = self.root_system()
        if self.nilradical is not None:
            return nilradical_from_string(t, self.nilradical)
        return abelian_nilradicals(t)[-1]
