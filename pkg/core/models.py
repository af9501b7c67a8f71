# core/models.py
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from core.expressions import (
    CharCondition, RankCondition, parse_char_condition, parse_rank_condition,
)
from core.rootsys import Weight, WeightFormatError, parse_weight

Expr = Union[int, str]


class SearchConfig(BaseModel):
    """Parameters of the semisimple eigenspace search."""
    max_prime_order: int = Field(7, ge=2, description="Largest prime order swept")
    max_block_shapes: int = Field(0, ge=0, description="Cap on exponent tuples per prime (0 = no cap)")
    witness_catalog_only: bool = Field(False, description="Skip the sweep and evaluate catalog witnesses only")
    generic_modulus: int = Field(10007, ge=2, description="Prime standing in for generic witness entries")
    chunk_size: int = Field(4096, ge=1, description="Rows per numpy evaluation batch")


class _Conditioned(BaseModel):
    """Record restricted by a rank condition and a characteristic condition."""
    family: Literal["A", "B", "C", "D"] = Field(..., description="Classical family")
    ranks: str = Field("l>=1", description="Rank condition, e.g. 'l>=3' or '4<=l<=13'")
    chars: str = Field("p>=0", description="Characteristic condition, e.g. 'p!=2' or 'p=3'")

    @property
    def rank_condition(self) -> RankCondition:
        return parse_rank_condition(self.ranks)

    @property
    def char_condition(self) -> CharCondition:
        return parse_char_condition(self.chars)

    def applies(self, family: str, rank: int, p: int) -> bool:
        return (self.family == family and self.rank_condition.matches(rank)
                and self.char_condition.matches(p))


class CharacterTerm(BaseModel):
    """Dominant weight with a multiplicity expression."""
    weight: str = Field(..., description="Weight, e.g. 'om1' or '0'")
    mult: Expr = Field(1, description="Multiplicity expression in l and p")


class TensorFactor(BaseModel):
    """Factor of a Steinberg tensor product."""
    weight: str = Field(..., description="Restricted weight of the factor")
    twist: int = Field(0, ge=0, description="Number of Frobenius twists")


class UnipotentRecipe(BaseModel):
    """Fixed-space recipe for a root element class on a module."""
    model_config = ConfigDict(populate_by_name=True)

    root_class: Literal["alpha_1", "alpha_ell"] = Field(..., alias="class", description="Root element class")
    constructions: Dict[str, int] = Field(default_factory=dict,
                                          description="Signed constructions on the natural module")
    offset: Expr = Field(0, description="Expression subtracted from the construction fixed dims")
    fixed: Optional[Expr] = Field(None, description="Transcribed fixed-space dimension")
    exact: bool = Field(True, description="Whether the recipe is an equality")

    @model_validator(mode="after")
    def _check_source(self):
        if self.fixed is None and not self.constructions:
            raise ValueError("Unipotent recipe needs constructions or a fixed expression")
        return self


class ModuleRecord(_Conditioned):
    """Catalog data for L(lambda) over a range of ranks and characteristics."""
    weight: str = Field(..., description="Highest weight")
    dim: Optional[Expr] = Field(None, description="Dimension expression")
    irreducible: bool = Field(False, description="Weyl module is irreducible")
    subtract: List[CharacterTerm] = Field(default_factory=list,
                                          description="Composition factors removed from the Weyl character")
    orbits: List[CharacterTerm] = Field(default_factory=list, description="Explicit dominant multiplicities")
    tensor: List[TensorFactor] = Field(default_factory=list, description="Steinberg tensor factors")
    unipotent: List[UnipotentRecipe] = Field(default_factory=list, description="Root element recipes")
    note: Optional[str] = Field(None, description="Provenance")

    @model_validator(mode="after")
    def _check_character(self):
        given = [bool(self.irreducible), bool(self.subtract), bool(self.orbits), bool(self.tensor)]
        if sum(given) > 1:
            raise ValueError(f"Record for {self.weight} gives more than one character description")
        return self

    def has_character(self) -> bool:
        return self.irreducible or bool(self.subtract) or bool(self.orbits) or bool(self.tensor)

    def highest(self, rank: int) -> Optional[Weight]:
        try:
            return parse_weight(self.weight, rank)
        except WeightFormatError:
            return None

    def matches(self, family: str, rank: int, highest: Weight, p: int) -> bool:
        return self.applies(family, rank, p) and self.highest(rank) == tuple(highest)

    def expressions(self) -> List[Expr]:
        """Every expression field of the record, for load-time validation."""
        exprs: List[Expr] = [] if self.dim is None else [self.dim]
        exprs += [term.mult for term in self.subtract + self.orbits]
        for recipe in self.unipotent:
            exprs.append(recipe.offset)
            if recipe.fixed is not None:
                exprs.append(recipe.fixed)
        return exprs


class WitnessBlock(BaseModel):
    exponent: Expr = Field(..., description="Exponent expression of the diagonal entry")
    size: Expr = Field(..., description="Number of repetitions")


class WitnessRecord(_Conditioned):
    """Transcribed maximizing semisimple element, diagonal in the standard coordinates."""
    label: str = Field(..., description="Human readable description")
    modulus: Expr = Field(..., description="Order of the root of unity, or 'generic'")
    blocks: List[WitnessBlock] = Field(..., description="Diagonal blocks")

    def expressions(self) -> List[Expr]:
        exprs: List[Expr] = [] if self.modulus == "generic" else [self.modulus]
        for block in self.blocks:
            exprs += [block.exponent, block.size]
        return exprs


class Erratum(BaseModel):
    """Corrected value of one printed table entry over a range of ranks and characteristics."""
    column: Literal["max_s", "max_u", "nu"] = Field(..., description="Corrected column")
    rank: str = Field("l>=1", description="Rank condition")
    char: str = Field("p>=0", description="Characteristic condition")
    value: Expr = Field(..., description="Corrected value")
    printed: Expr = Field(..., description="Value as printed in the table")
    evidence: str = Field(..., description="Computation supporting the correction")

    def applies(self, column: str, rank: int, p: int) -> bool:
        return (self.column == column and parse_rank_condition(self.rank).matches(rank)
                and parse_char_condition(self.char).matches(p))


class TableRow(BaseModel):
    """One printed row of a golden table."""
    weight: str = Field(..., description="Highest weight")
    rank: str = Field("l>=1", description="Rank condition")
    char: str = Field("p>=0", description="Characteristic condition")
    max_s: Expr = Field(..., description="Expected max_s, optionally prefixed by <= or >=")
    max_u: Expr = Field(..., description="Expected max_u, optionally prefixed by <= or >=")
    nu: Expr = Field(..., description="Expected nu, optionally prefixed by <= or >=")
    twisted: bool = Field(False, description="Row admits a non-restricted weight")
    nu_equal_when: Optional[str] = Field(None, description="Characteristic condition under which nu is '='")
    errata: List[Erratum] = Field(default_factory=list, description="Corrections of printed entries")
    note: Optional[str] = Field(None, description="Footnote")

    def erratum(self, column: str, rank: int, p: int) -> Optional[Erratum]:
        """First correction of a column that applies at rank and p, if any."""
        return next((e for e in self.errata if e.applies(column, rank, p)), None)

    def expressions(self) -> List[Expr]:
        exprs: List[Expr] = [self.max_s, self.max_u, self.nu]
        for erratum in self.errata:
            exprs += [erratum.value, erratum.printed]
        return exprs


class TableSpec(BaseModel):
    table: int = Field(..., ge=1, le=4)
    family: Literal["A", "B", "C", "D"]
    rows: List[TableRow]


class ColumnCheck(BaseModel):
    column: str
    relation: str = Field("=", description="'=', '<=' or '>='")
    expected: Optional[int] = None
    computed: Optional[int] = None
    status: str = Field(..., description="pass, fail, meets, respects, violates or unsupported")
    message: Optional[str] = None
    printed: Optional[int] = Field(None, description="Printed table value when the expected value is a correction")

    @property
    def failed(self) -> bool:
        return self.status in ("fail", "violates")


class NuResult(BaseModel):
    """nu_G(V) together with the two maxima it is computed from."""
    family: str
    rank: int
    weight: List[int]
    weight_label: str
    p: int
    dim_v: int
    max_s: Optional[int] = None
    max_s_witness: Optional[str] = None
    max_s_eigenvalue: Optional[str] = None
    max_u: Optional[int] = None
    max_u_witness: Optional[str] = None
    nu: Optional[int] = None
    bound_s_lambda: Optional[int] = None
    flags: Dict[str, Any] = Field(default_factory=dict)
    errors: Dict[str, str] = Field(default_factory=dict)


class CellReport(BaseModel):
    """Comparison of one (row, rank, characteristic) cell against its table."""
    cell_id: str
    table: int
    family: str
    rank: int
    p: int
    weight: str
    status: str = Field(..., description="pass, erratum, fail, unsupported or error")
    checks: List[ColumnCheck] = Field(default_factory=list)
    error: Optional[str] = None
    result: Optional[NuResult] = None


class OracleCaseResult(BaseModel):
    """Outcome of one oracle cross-check case."""
    case_id: str
    family: str
    rank: int
    construction: str
    p: int
    element: str
    status: str = Field(..., description="match, mismatch, skipped or error")
    expected: Dict[str, int] = Field(default_factory=dict, description="Formula-path dimensions")
    observed: Dict[str, int] = Field(default_factory=dict, description="Oracle dimensions")
    message: Optional[str] = None
