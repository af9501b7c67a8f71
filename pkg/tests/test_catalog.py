# tests/test_catalog.py
import pytest
import yaml

from config.catalog import Catalog, CatalogError
from config.config import Config
from core.character import ModuleSpec, UnknownModularDim, irreducible_character, weyl_dim
from core.expressions import evaluate, parse_char_condition, parse_rank_condition, split_relation
from core.rootsys import FamilyRank, parse_weight

from tests.conftest import CATALOG_DIR

MAX_CHECKED_DIM = 3000


def spec(label, weight, p):
    fr = FamilyRank.parse(label)
    return ModuleSpec(fr, parse_weight(weight, fr.rank), p)


def test_catalog_loads(catalog):
    assert len(catalog.modules) > 20
    assert {record.family for record in catalog.modules} == {"A", "B", "C", "D"}
    assert len(catalog.witnesses) == 8


def test_find_modules_respects_conditions(catalog):
    records = catalog.find_modules(spec("A3", "om1+oml", 2))
    assert any(record.unipotent for record in records)
    assert any(record.subtract for record in records)
    generic = catalog.find_modules(spec("A3", "om1+oml", 5))
    assert all(not record.unipotent for record in generic)


def test_find_modules_caches(catalog):
    key = spec("C3", "om2", 3)
    assert catalog.find_modules(key) is catalog.find_modules(key)


def test_witnesses_for(catalog):
    assert len(catalog.witnesses_for(FamilyRank.parse("A5"))) == 2
    assert len(catalog.witnesses_for(FamilyRank.parse("A1"))) == 1
    labels = [w.label for w in catalog.witnesses_for(FamilyRank.parse("B3"), 2)]
    assert "reflection -1 on a 2l-dimensional subspace" in labels


def test_tables(catalog):
    tables = catalog.load_tables()
    assert sorted(tables) == [1, 2, 3, 4]
    assert [tables[n].family for n in (1, 2, 3, 4)] == ["A", "C", "B", "D"]
    assert catalog.table(2).family == "C"
    assert len(catalog.table(1).rows) == 10


def test_missing_table(tmp_path):
    empty = Catalog(CATALOG_DIR, str(tmp_path))
    with pytest.raises(CatalogError, match="Table 3"):
        empty.table(3)


def test_no_tables_dir():
    with pytest.raises(CatalogError):
        Catalog(CATALOG_DIR).load_tables()


def test_table_declaring_wrong_number(tmp_path):
    (tmp_path / "table1.yaml").write_text(yaml.safe_dump({"table": 2, "family": "A", "rows": []}))
    with pytest.raises(CatalogError, match="declares table 2"):
        Catalog(CATALOG_DIR, str(tmp_path)).load_tables()


def test_invalid_module_entry(tmp_path):
    (tmp_path / "modules.yaml").write_text(yaml.safe_dump({"modules": [{"family": "E", "weight": "om1"}]}))
    with pytest.raises(CatalogError, match="Invalid entry #0"):
        Catalog(str(tmp_path))


def test_record_with_two_character_descriptions(tmp_path):
    entry = {"family": "A", "weight": "om1", "irreducible": True, "orbits": [{"weight": "om1"}]}
    (tmp_path / "modules.yaml").write_text(yaml.safe_dump({"modules": [entry]}))
    with pytest.raises(CatalogError):
        Catalog(str(tmp_path))


def test_empty_catalog_dir(tmp_path):
    empty = Catalog(str(tmp_path))
    assert empty.modules == [] and empty.witnesses == []


@pytest.mark.parametrize("table_id", [1, 2, 3, 4])
def test_table_expressions_evaluate_on_grid(catalog, table_id):
    table = catalog.table(table_id)
    grid = Config().table_grid(table_id)
    evaluated = 0
    for row in table.rows:
        rank_ok = parse_rank_condition(row.rank)
        char_ok = parse_char_condition(row.char)
        for rank in grid["ranks"]:
            for p in grid["chars"]:
                if not (rank_ok.matches(rank) and char_ok.matches(p)):
                    continue
                for column in (row.max_s, row.max_u, row.nu):
                    relation, expression = split_relation(column)
                    assert relation in ("=", "<=", ">=")
                    assert evaluate(expression, rank, p) >= 0
                evaluated += 1
    assert evaluated > 0


FAMILY_TABLES = {"A": 1, "C": 2, "B": 3, "D": 4}


def catalog_grid(catalog):
    """(record, spec) for every catalog record over its family's acceptance grid."""
    config = Config()
    for record in catalog.modules:
        grid = config.table_grid(FAMILY_TABLES[record.family])
        for rank in grid["ranks"]:
            highest = record.highest(rank)
            if highest is None:
                continue
            fr = FamilyRank.parse(f"{record.family}{rank}")
            for p in grid["chars"]:
                if record.applies(record.family, rank, p):
                    yield record, ModuleSpec.parse(fr, highest, p)


def test_catalog_expressions_evaluate_on_grid(catalog):
    evaluated = 0
    for record, module in catalog_grid(catalog):
        for expression in record.expressions():
            assert isinstance(evaluate(expression, module.fr.rank, module.p), int)
            evaluated += 1
    for witness in catalog.witnesses:
        for rank in (2, 3, 4, 5):
            if witness.rank_condition.matches(rank):
                for expression in witness.expressions():
                    evaluate(expression, rank, 0)
    assert evaluated > 100


def test_catalog_dimensions_match_characters(catalog):
    checked = 0
    for record, module in catalog_grid(catalog):
        if record.dim is None:
            continue
        dim = evaluate(record.dim, module.fr.rank, module.p)
        weyl = weyl_dim(module.fr, module.highest)
        if weyl > MAX_CHECKED_DIM:
            continue
        label = f"{module} ({record.weight}, {record.ranks}, {record.chars})"
        if module.p == 0:
            assert dim == weyl, label
        elif record.has_character():
            try:
                character = irreducible_character(module, catalog)
            except UnknownModularDim:
                continue
            assert character.dim == dim, label
        else:
            assert 0 < dim <= weyl, label
        checked += 1
    assert checked > 100


def test_unquoted_flow_expression_is_rejected(tmp_path):
    (tmp_path / "modules.yaml").write_text(
        "modules:\n"
        "  - family: A\n"
        "    weight: om1+oml\n"
        "    ranks: l>=2\n"
        "    subtract:\n"
        "      - {weight: \"0\", mult: e(p,l+1)}\n"
    )
    with pytest.raises(CatalogError, match="Entry #0"):
        Catalog(str(tmp_path))


def test_quoted_flow_expression_loads(tmp_path):
    (tmp_path / "modules.yaml").write_text(
        "modules:\n"
        "  - family: A\n"
        "    weight: om1+oml\n"
        "    ranks: l>=2\n"
        "    subtract:\n"
        "      - {weight: \"0\", mult: \"e(p,l+1)\"}\n"
    )
    record = Catalog(str(tmp_path)).modules[0]
    assert record.subtract[0].mult == "e(p,l+1)"


def test_unknown_symbol_in_witness_is_rejected(tmp_path):
    entry = {"family": "A", "label": "bad", "modulus": 3, "blocks": [{"exponent": 1, "size": "k-1"}]}
    (tmp_path / "witnesses.yaml").write_text(yaml.safe_dump({"witnesses": [entry]}))
    with pytest.raises(CatalogError, match="unknown symbols"):
        Catalog(str(tmp_path))


def test_invalid_record_condition_is_rejected(tmp_path):
    entry = {"family": "A", "weight": "om1", "ranks": "l>>3", "irreducible": True}
    (tmp_path / "modules.yaml").write_text(yaml.safe_dump({"modules": [entry]}))
    with pytest.raises(CatalogError, match="rank condition"):
        Catalog(str(tmp_path))


def test_table_with_unparseable_expression(tmp_path):
    row = {"weight": "om1", "max_s": "<= binom(l,3", "max_u": "l", "nu": 1}
    (tmp_path / "table1.yaml").write_text(yaml.safe_dump({"table": 1, "family": "A", "rows": [row]}))
    with pytest.raises(CatalogError, match="Row #0"):
        Catalog(CATALOG_DIR, str(tmp_path)).load_tables()


def test_table_errata_are_well_formed(catalog):
    errata = [e for n in (1, 2, 3, 4) for row in catalog.table(n).rows for e in row.errata]
    assert len(errata) == 9
    for erratum in errata:
        assert erratum.value != erratum.printed
        assert erratum.evidence
