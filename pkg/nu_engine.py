# nu_engine.py
import asyncio
import re
import time
import uuid
from dataclasses import dataclass
from datetime import datetime
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from config.catalog import Catalog, CatalogError
from config.config import Config
from core.bounds import s_lambda as subsystem_bound
from core.character import (
    MalformedCharacter, ModuleSpec, NotRestricted, UnknownModularDim,
    irreducible_character, irreducible_dim,
)
from core.expressions import (
    ExpressionError, evaluate, parse_char_condition, parse_rank_condition, split_relation,
)
from core.models import CellReport, ColumnCheck, NuResult, OracleCaseResult, TableRow, TableSpec
from core.oracle import check_case, parse_cases
from core.rootsys import Family, FamilyRank, InvalidRank, NotDominant, Weight, WeightFormatError, format_weight
from core.semisimple import ConfigError, SymbolicUnsupported, max_eigenspace_semisimple
from core.unipotent import OracleRequired, Unsupported, max_fixed_space_unipotent
from utils.file_utils import FileUtils
from utils.logger import clear_context, get_cell_logger, get_logger, log_exception, set_context
from utils.reporting import Reporter

logger = get_logger(__name__)

COLUMNS = ("max_s", "max_u", "nu")
CELL_STATUSES = ("pass", "erratum", "fail", "unsupported", "error")

# Errors that turn a column or a cell into 'unsupported' rather than a failure
KNOWN_ERRORS = (
    UnknownModularDim, Unsupported, OracleRequired, SymbolicUnsupported, ConfigError,
    MalformedCharacter, NotRestricted, InvalidRank, NotDominant, WeightFormatError,
    ExpressionError,
)


class NotApplicable(ValueError):
    """Raised when an operation does not apply to the given group, weight or characteristic."""
    pass


class DimensionGuard(ValueError):
    """Raised when a module exceeds the configured dimension limit."""
    pass


@dataclass(frozen=True)
class IsogenyTranslation:
    """
    C-side counterpart of a B-module in characteristic 2.

    ``factors`` lists (weight, twists) of the Steinberg tensor product
    L(d_l om_l) (x) L(sum d_i om_i)^(2) when both parts are non-zero.
    """
    rank: int
    b_weight: Weight
    c_weight: Weight
    factors: Tuple[Tuple[Weight, int], ...]

    @property
    def c_spec(self) -> ModuleSpec:
        return ModuleSpec.parse(FamilyRank(Family.C, self.rank), self.c_weight, 2)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rank": self.rank,
            "b_weight": format_weight(self.b_weight),
            "c_weight": format_weight(self.c_weight),
            "factors": [{"weight": format_weight(w), "twist": t} for w, t in self.factors],
        }


def translate_b_to_c(rank: int, weight: Sequence[int], p: int = 2) -> IsogenyTranslation:
    """
    Translate a 2-restricted B-weight through the exceptional isogeny.

    sum d_i om_i^B corresponds to 2 sum_{i<l} d_i om_i^C + d_l om_l^C.

    Args:
        rank: Rank l >= 3
        weight: B-weight coordinates
        p: Characteristic (must be 2)

    Returns:
        IsogenyTranslation

    Raises:
        NotApplicable: If p != 2 or the weight is not 2-restricted
    """
    if p != 2:
        raise NotApplicable(f"The B/C isogeny translation needs p=2, got p={p}")
    FamilyRank(Family.B, rank)
    weight = tuple(int(c) for c in weight)
    if len(weight) != rank:
        raise WeightFormatError(f"Weight {weight} has wrong length for B{rank}")
    if any(c not in (0, 1) for c in weight):
        raise NotApplicable(f"Weight {weight} is not 2-restricted")

    short_part = tuple(0 for _ in weight[:-1]) + (weight[-1],)
    long_part = tuple(weight[:-1]) + (0,)
    c_weight = tuple(2 * c for c in long_part[:-1]) + (weight[-1],)

    factors: List[Tuple[Weight, int]] = []
    if any(short_part):
        factors.append((short_part, 0))
    if any(long_part):
        factors.append((long_part, 1))
    return IsogenyTranslation(rank, weight, c_weight, tuple(factors) if len(factors) > 1 else ())


def cell_identifier(table: int, fr: FamilyRank, weight: str, p: int) -> str:
    """Cell id such as T2-C3-om3-p2."""
    token = re.sub(r"[^A-Za-z0-9]+", "_", weight).strip("_") or "0"
    return f"T{table}-{fr}-{token}-p{p}"


def compare(column: str, relation: str, expected: int, computed: Optional[int],
            message: Optional[str] = None) -> ColumnCheck:
    """
    Classify a computed value against a table entry.

    '=' entries pass or fail. For '<=' and '>=' entries the value meets the
    bound (equal), respects it (strictly inside) or violates it.
    """
    if computed is None:
        return ColumnCheck(column=column, relation=relation, expected=expected,
                           status="unsupported", message=message)
    if relation == "=":
        status = "pass" if computed == expected else "fail"
    elif computed == expected:
        status = "meets"
    elif (relation == "<=" and computed < expected) or (relation == ">=" and computed > expected):
        status = "respects"
    else:
        status = "violates"
    return ColumnCheck(column=column, relation=relation, expected=expected, computed=computed, status=status)


class NuEngine:
    """Computes nu_G(V) and verifies the golden tables."""

    def __init__(self, config_path: Optional[str] = None,
                 overrides: Optional[Dict[Tuple[str, ...], Any]] = None):
        """
        Initialize the engine.

        Args:
            config_path: Path to configuration file
            overrides: Configuration values keyed by their key path
        """
        self.run_id = f"run_{datetime.now().strftime('%Y%m%d_%H%M%S')}_{uuid.uuid4().hex[:8]}"
        set_context(run_id=self.run_id)

        self.config = Config(config_path)
        for keys, value in (overrides or {}).items():
            self.config.set(value, *keys)

        self.catalog = Catalog(self.config.get("catalog", "catalog_dir", default="data/catalog"),
                               self.config.get("catalog", "tables_dir", default="data/tables"))
        self.reporter = Reporter(self.config.get("output", default={}))
        self.search = self.config.search_config()
        self.max_dim = int(self.config.get("limits", "max_dim", default=5000))

        logger.info(f"NuEngine initialized with run ID: {self.run_id}")

    def shutdown(self) -> None:
        clear_context()
        logger.info("NuEngine shut down")

    # Single modules

    def s_lambda(self, fr: FamilyRank, weight: Sequence[int]) -> int:
        """Subsystem bound s_lambda; a lower bound for nu in type A only."""
        return subsystem_bound(fr, tuple(weight))

    def compute_nu(self, spec: ModuleSpec, strict: bool = True) -> NuResult:
        """
        Compute nu_G(V) = dim V - max(max_s, max_u).

        B-modules in characteristic 2 are computed on the C side through the
        exceptional isogeny.

        Args:
            spec: Module specification
            strict: Raise on unsupported components instead of recording them

        Returns:
            NuResult

        Raises:
            NotApplicable: For the trivial module
            DimensionGuard: If dim V exceeds limits.max_dim
            UnknownModularDim, Unsupported: In strict mode, with the module in the message
        """
        if not any(spec.highest):
            raise NotApplicable(f"{spec} is the trivial module")

        if spec.fr.family == Family.B and spec.p == 2:
            translation = translate_b_to_c(spec.fr.rank, spec.highest, 2)
            logger.info(f"{spec} computed as {translation.c_spec} through the isogeny")
            result = self.compute_nu(translation.c_spec, strict)
            return result.model_copy(update={
                "family": "B",
                "rank": spec.fr.rank,
                "weight": list(spec.highest),
                "weight_label": format_weight(spec.highest),
                "flags": {**result.flags, "isogeny": translation.to_dict()},
            })

        try:
            dim_v = irreducible_dim(spec, self.catalog)
        except UnknownModularDim as e:
            raise UnknownModularDim(f"{spec}: {str(e)}") from e
        if dim_v > self.max_dim:
            raise DimensionGuard(f"dim L({format_weight(spec.highest)}) = {dim_v} exceeds max_dim={self.max_dim}")

        result = NuResult(
            family=spec.fr.family.value,
            rank=spec.fr.rank,
            weight=list(spec.highest),
            weight_label=format_weight(spec.highest),
            p=spec.p,
            dim_v=dim_v,
        )
        started = time.time()

        char = None
        try:
            char = irreducible_character(spec, self.catalog)
            if char.dim != dim_v:
                result.flags["character-mismatch"] = True
                logger.warning(f"Character of {spec} has dimension {char.dim}, catalog says {dim_v}")
                raise UnknownModularDim(f"Character total {char.dim} disagrees with dim {dim_v}")
        except KNOWN_ERRORS as e:
            if strict:
                raise type(e)(f"{spec}: {str(e)}") from e
            result.errors["max_s"] = str(e)
            result.errors["max_u"] = str(e)
            char = None

        if char is not None:
            try:
                semisimple = max_eigenspace_semisimple(
                    spec, self.search, char, self.catalog.witnesses_for(spec.fr, spec.p))
                result.max_s = semisimple.max_dim
                result.max_s_witness = str(semisimple.witness)
                result.max_s_eigenvalue = str(semisimple.eigenvalue)
                result.flags["max_s_source"] = semisimple.source
            except KNOWN_ERRORS as e:
                if strict:
                    raise type(e)(f"{spec}: {str(e)}") from e
                result.errors["max_s"] = str(e)

            try:
                unipotent = max_fixed_space_unipotent(spec, self.catalog)
                result.max_u = unipotent.max_dim
                result.max_u_witness = str(unipotent.witness)
                result.flags["max_u_exact"] = unipotent.exact
                result.flags["max_u_routes"] = {w: c.route for w, c in unipotent.classes.items()}
            except KNOWN_ERRORS as e:
                if strict:
                    raise type(e)(f"{spec}: {str(e)}") from e
                result.errors["max_u"] = str(e)

        try:
            result.bound_s_lambda = self.s_lambda(spec.fr, spec.highest)
        except KNOWN_ERRORS as e:
            result.errors["bound_s_lambda"] = str(e)

        if result.max_s is not None and result.max_u is not None:
            result.nu = dim_v - max(result.max_s, result.max_u)
            result.flags["lower_bound_only"] = not result.flags.get("max_u_exact", True)
            if result.bound_s_lambda is not None and result.nu < result.bound_s_lambda:
                result.flags["below_s_lambda"] = True
                log = logger.warning if spec.fr.family == Family.A else logger.debug
                log(f"nu={result.nu} below s_lambda={result.bound_s_lambda} for {spec}")

        logger.info(f"{spec}: dim={dim_v} max_s={result.max_s} max_u={result.max_u} nu={result.nu} "
                    f"({time.time() - started:.2f}s)")
        return result

    # Golden tables

    def evaluate_cell(self, table: int, row: TableRow, rank: int, p: int) -> CellReport:
        """
        Compute one (row, rank, characteristic) cell and compare it with the table.

        Known errors make the cell 'unsupported'; they are never raised.
        Entries with a recorded erratum are compared against the corrected
        value. A passing cell with at least one corrected entry is reported
        as 'erratum'.
        """
        family = self.catalog.table(table).family
        fr = FamilyRank(Family(family), rank)
        cell_id = cell_identifier(table, fr, row.weight, p)
        set_context(run_id=self.run_id, cell_id=cell_id)
        cell_logger = get_cell_logger(__name__, self.run_id, cell_id)
        base = dict(cell_id=cell_id, table=table, family=family, rank=rank, p=p, weight=row.weight)

        try:
            spec = ModuleSpec.parse(fr, row.weight, p)
            if spec.twisted and not row.twisted:
                raise NotRestricted(f"{row.weight} is not {p}-restricted")
            result = self.compute_nu(spec, strict=False)
        except (DimensionGuard, NotApplicable) + KNOWN_ERRORS as e:
            cell_logger.info(f"Cell {cell_id} unsupported: {str(e)}")
            return CellReport(**base, status="unsupported", error=str(e))

        checks = []
        for column in COLUMNS:
            relation, expr = split_relation(getattr(row, column))
            if column == "nu" and row.nu_equal_when and parse_char_condition(row.nu_equal_when).matches(p):
                relation = "="
            erratum = row.erratum(column, rank, p)
            if erratum is not None:
                relation, expr = "=", erratum.value
            expected = evaluate(expr, rank, p)
            computed = getattr(result, column)
            message = result.errors.get(column)
            if column == "nu" and computed is None:
                message = "; ".join(result.errors.values()) or None
            check = compare(column, relation, expected, computed, message)
            if erratum is not None:
                check.printed = evaluate(split_relation(erratum.printed)[1], rank, p)
                check.message = message or erratum.evidence
            checks.append(check)

        if any(check.failed for check in checks):
            status = "fail"
            cell_logger.warning(f"Cell {cell_id} failed: " + ", ".join(
                f"{c.column} expected {c.relation}{c.expected} got {c.computed}" for c in checks if c.failed))
        elif checks[-1].status == "unsupported":
            status = "unsupported"
        elif any(check.printed is not None for check in checks):
            status = "erratum"
            cell_logger.info(f"Cell {cell_id} matches corrected entries: " + ", ".join(
                f"{c.column} {c.expected} (printed {c.printed})" for c in checks if c.printed is not None))
        else:
            status = "pass"
        cell_logger.info(f"Cell {cell_id}: {status}")
        return CellReport(**base, status=status, checks=checks, result=result)

    def plan_cells(self, tables: Optional[Iterable[int]] = None, max_rank: Optional[int] = None,
                   chars: Optional[Sequence[int]] = None) -> List[Tuple[int, TableRow, int, int]]:
        """
        Enumerate the (table, row, rank, p) cells of the acceptance grid.

        Args:
            tables: Table numbers (all loaded tables when None)
            max_rank: Upper bound on the rank
            chars: Characteristics replacing the configured grid

        Returns:
            List of cells in table, row, rank, characteristic order
        """
        loaded = self.catalog.load_tables()
        selected = sorted(loaded) if tables is None else [t for t in tables if t in loaded]
        cells = []
        for table_id in selected:
            spec: TableSpec = loaded[table_id]
            grid = self.config.table_grid(table_id)
            ranks = [r for r in grid["ranks"] if max_rank is None or r <= max_rank]
            grid_chars = list(chars) if chars is not None else grid["chars"]
            for row in spec.rows:
                rank_condition = parse_rank_condition(row.rank)
                char_condition = parse_char_condition(row.char)
                for rank in ranks:
                    if not rank_condition.matches(rank):
                        continue
                    for p in grid_chars:
                        if char_condition.matches(p):
                            cells.append((table_id, row, rank, p))
        return cells

    def _run_cell(self, table: int, row: TableRow, rank: int, p: int) -> CellReport:
        try:
            return self.evaluate_cell(table, row, rank, p)
        finally:
            clear_context()
            set_context(run_id=self.run_id)

    async def verify_tables(self, tables: Optional[Iterable[int]] = None, max_rank: Optional[int] = None,
                            chars: Optional[Sequence[int]] = None) -> List[CellReport]:
        """
        Verify the golden tables over the acceptance grid.

        Cells run concurrently in worker threads, bounded by
        processing.max_concurrent. The report is sorted by cell id.

        Returns:
            List of CellReport
        """
        try:
            cells = self.plan_cells(tables, max_rank, chars)
        except CatalogError as e:
            log_exception(e, __name__)
            raise

        logger.info(f"Verifying {len(cells)} cells with run ID: {self.run_id}")
        max_concurrent = self.config.get("processing", "max_concurrent", default=4)
        semaphore = asyncio.Semaphore(max_concurrent)

        async def run(cell):
            async with semaphore:
                return await asyncio.to_thread(self._run_cell, *cell)

        outcomes = await asyncio.gather(*(run(cell) for cell in cells), return_exceptions=True)

        reports: List[CellReport] = []
        for (table_id, row, rank, p), outcome in zip(cells, outcomes):
            if isinstance(outcome, Exception):
                fr = FamilyRank(Family(self.catalog.table(table_id).family), rank)
                cell_id = cell_identifier(table_id, fr, row.weight, p)
                logger.error(f"Cell {cell_id} failed with error: {str(outcome)}")
                reports.append(CellReport(cell_id=cell_id, table=table_id, family=fr.family.value, rank=rank,
                                          p=p, weight=row.weight, status="error", error=str(outcome)))
            else:
                reports.append(outcome)
        reports.sort(key=lambda r: r.cell_id)

        self._generate_reports(reports)
        counts = {s: sum(1 for r in reports if r.status == s) for s in CELL_STATUSES}
        logger.info(f"Table verification completed: {counts}")
        return reports

    def _generate_reports(self, reports: List[CellReport]) -> None:
        try:
            if not reports:
                logger.warning("No cells to report")
                return
            self.reporter.save_cells(reports, self.run_id)
            self.reporter.save_results([r.result for r in reports if r.result is not None], self.run_id)
            self.reporter.generate_statistics(reports, self.run_id)
            self.reporter.generate_summary_report(self.run_id)
        except Exception as e:
            logger.error(f"Error generating reports: {str(e)}")

    # Oracle

    async def oracle_check(self, case_ids: Optional[Sequence[str]] = None) -> List[OracleCaseResult]:
        """
        Cross-check the formula path against explicit matrices.

        Args:
            case_ids: Case identifiers to run (all cases when None)

        Returns:
            List of OracleCaseResult in case-file order
        """
        lines = FileUtils.load_case_lines(self.config.get("catalog", "cases_file",
                                                          default="data/cases/oracle_cases.txt"))
        cases = parse_cases(lines)
        if case_ids:
            wanted = set(case_ids)
            missing = wanted - {c.case_id for c in cases}
            if missing:
                raise NotApplicable(f"Unknown oracle cases: {', '.join(sorted(missing))}")
            cases = [c for c in cases if c.case_id in wanted]

        max_dim = int(self.config.get("limits", "oracle_max_dim", default=3000))
        semaphore = asyncio.Semaphore(self.config.get("processing", "max_concurrent", default=4))

        def run_case(case):
            set_context(run_id=self.run_id, cell_id=case.case_id)
            try:
                return check_case(case, max_dim)
            finally:
                clear_context()

        async def run(case):
            async with semaphore:
                return await asyncio.to_thread(run_case, case)

        outcomes = await asyncio.gather(*(run(case) for case in cases), return_exceptions=True)
        results: List[OracleCaseResult] = []
        for case, outcome in zip(cases, outcomes):
            if isinstance(outcome, Exception):
                logger.error(f"Oracle case {case.case_id} failed with error: {str(outcome)}")
                results.append(OracleCaseResult(
                    case_id=case.case_id, family=case.fr.family.value, rank=case.fr.rank,
                    construction=case.construction, p=case.p, element=case.element,
                    status="error", message=str(outcome)))
            else:
                results.append(outcome)

        self.reporter.save_oracle_results(results, self.run_id)
        counts = {s: sum(1 for r in results if r.status == s) for s in ("match", "mismatch", "skipped", "error")}
        logger.info(f"Oracle cross-check completed: {counts}")
        return results
