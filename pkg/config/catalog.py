# config/catalog.py
"""
Module catalog, witness catalog and golden tables.

The catalog is passed to the character and unipotent layers, which only rely
on ``find_modules(spec)``. Instances hash by identity so they can take part
in cached computations.
"""
import os
from typing import Dict, Iterable, List, Optional, Type, TypeVar

from pydantic import BaseModel, ValidationError

from core.character import ModuleSpec
from core.expressions import (
    ExpressionError, parse_char_condition, parse_expression, parse_rank_condition, split_relation,
)
from core.models import Expr, ModuleRecord, TableSpec, WitnessRecord
from core.rootsys import FamilyRank
from utils.file_utils import FileUtils
from utils.logger import get_logger

logger = get_logger(__name__)

MODULES_FILE = "modules.yaml"
WITNESSES_FILE = "witnesses.yaml"
TABLE_FILE_PATTERN = "table{}.yaml"
ALLOWED_SYMBOLS = {"l", "p"}

R = TypeVar("R", bound=BaseModel)


class CatalogError(ValueError):
    """Raised when a catalog or table file is malformed."""
    pass


def check_expressions(exprs: Iterable[Expr], where: str) -> None:
    """
    Parse every expression of a record.

    Args:
        exprs: Expressions, each optionally prefixed by a relation
        where: Location used in the error message

    Raises:
        CatalogError: If an expression does not parse or uses symbols other than l and p
    """
    for expr in exprs:
        if isinstance(expr, int):
            continue
        try:
            parsed = parse_expression(split_relation(expr)[1])
        except ExpressionError as e:
            raise CatalogError(f"{where}: {str(e)}")
        unknown = {str(s) for s in getattr(parsed, "free_symbols", ())} - ALLOWED_SYMBOLS
        if unknown:
            raise CatalogError(f"{where}: expression '{expr}' uses unknown symbols {sorted(unknown)}")


def check_conditions(rank: str, char: str, where: str) -> None:
    try:
        parse_rank_condition(rank)
        parse_char_condition(char)
    except ExpressionError as e:
        raise CatalogError(f"{where}: {str(e)}")


class Catalog:
    """YAML-backed catalog of module data, witness elements and golden tables."""

    def __init__(self, catalog_dir: str, tables_dir: Optional[str] = None):
        """
        Initialize the catalog.

        Args:
            catalog_dir: Directory holding modules.yaml and witnesses.yaml
            tables_dir: Directory holding table1.yaml ... table4.yaml
        """
        self.catalog_dir = catalog_dir
        self.tables_dir = tables_dir
        self.modules: List[ModuleRecord] = self._load_records(
            os.path.join(catalog_dir, MODULES_FILE), "modules", ModuleRecord)
        self.witnesses: List[WitnessRecord] = self._load_records(
            os.path.join(catalog_dir, WITNESSES_FILE), "witnesses", WitnessRecord)
        self._tables: Optional[Dict[int, TableSpec]] = None
        self._module_cache: Dict[ModuleSpec, List[ModuleRecord]] = {}

        logger.info(f"Catalog loaded: {len(self.modules)} module records, "
                    f"{len(self.witnesses)} witness records from {catalog_dir}")

    @staticmethod
    def _load_records(path: str, key: str, model: Type[R]) -> List[R]:
        data = FileUtils.load_yaml(path)
        if data is None:
            logger.warning(f"No {key} loaded from {path}")
            return []
        entries = data.get(key, []) if isinstance(data, dict) else data
        if not isinstance(entries, list):
            raise CatalogError(f"'{key}' in {path} must be a list")

        records = []
        for n, entry in enumerate(entries):
            try:
                record = model(**entry)
            except (ValidationError, TypeError) as e:
                raise CatalogError(f"Invalid entry #{n} in {path}: {str(e)}")
            where = f"Entry #{n} in {path}"
            check_conditions(record.ranks, record.chars, where)
            check_expressions(record.expressions(), where)
            records.append(record)
        return records

    def find_modules(self, spec: ModuleSpec) -> List[ModuleRecord]:
        """
        Records describing L(spec.highest) for spec's group and characteristic.

        Args:
            spec: Module specification

        Returns:
            Matching records in file order
        """
        if spec not in self._module_cache:
            fr = spec.fr
            self._module_cache[spec] = [
                record for record in self.modules
                if record.matches(fr.family.value, fr.rank, spec.highest, spec.p)
            ]
        return self._module_cache[spec]

    def witnesses_for(self, fr: FamilyRank, p: int = 0) -> List[WitnessRecord]:
        """Witness records applying to a group in characteristic p."""
        return [w for w in self.witnesses if w.applies(fr.family.value, fr.rank, p)]

    def load_tables(self) -> Dict[int, TableSpec]:
        """
        Load the golden tables.

        Returns:
            Mapping from table number to TableSpec

        Raises:
            CatalogError: If a table file is malformed
        """
        if self._tables is not None:
            return self._tables
        if not self.tables_dir:
            raise CatalogError("No tables directory configured")

        tables: Dict[int, TableSpec] = {}
        for table_id in range(1, 5):
            path = os.path.join(self.tables_dir, TABLE_FILE_PATTERN.format(table_id))
            data = FileUtils.load_yaml(path)
            if data is None:
                continue
            try:
                spec = TableSpec(**data)
            except (ValidationError, TypeError) as e:
                raise CatalogError(f"Invalid table file {path}: {str(e)}")
            if spec.table != table_id:
                raise CatalogError(f"{path} declares table {spec.table}")
            for n, row in enumerate(spec.rows):
                where = f"Row #{n} ({row.weight}) in {path}"
                check_conditions(row.rank, row.char, where)
                for erratum in row.errata:
                    check_conditions(erratum.rank, erratum.char, where)
                if row.nu_equal_when:
                    check_conditions("l>=1", row.nu_equal_when, where)
                check_expressions(row.expressions(), where)
            tables[table_id] = spec
            logger.debug(f"Table {table_id}: {len(spec.rows)} rows")

        self._tables = tables
        return tables

    def table(self, table_id: int) -> TableSpec:
        """Single golden table; raises CatalogError when missing."""
        tables = self.load_tables()
        if table_id not in tables:
            raise CatalogError(f"Table {table_id} is not available in {self.tables_dir}")
        return tables[table_id]
