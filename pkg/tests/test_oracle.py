# tests/test_oracle.py
import numpy as np
import pytest
from sympy import isprime

from core.oracle import (
    FieldUnavailable, MatrixModel, TooLarge, build_model, check_case, eigenspace_dim, field_primes,
    parse_case_line, parse_cases, root_of_unity,
)
from core.rootsys import FamilyRank
from core.semisimple import TorusClass
from utils.file_utils import FileUtils

from tests.conftest import CASES_FILE


def fr(label):
    return FamilyRank.parse(label)


def test_field_primes():
    primes = field_primes(3, 10)
    assert primes == [13, 19]
    assert all(isprime(q) and q % 3 == 1 for q in primes)


def test_root_of_unity():
    zeta = root_of_unity(4, 13)
    assert pow(zeta, 4, 13) == 1
    assert pow(zeta, 2, 13) != 1
    with pytest.raises(FieldUnavailable):
        root_of_unity(5, 13)


def test_build_model_limits():
    with pytest.raises(TooLarge):
        build_model(fr("A4"), "sym3", 0, max_dim=20)
    with pytest.raises(FieldUnavailable):
        build_model(fr("A2"), "natural", 3, order=3)
    model = build_model(fr("A2"), "natural", 0, order=3)
    assert model.q % 3 == 1 and model.q > 3


@pytest.mark.parametrize("label, which", [
    ("B3", "alpha_1"), ("B3", "alpha_ell"), ("C3", "alpha_1"), ("C3", "alpha_ell"), ("D4", "alpha_1"),
])
def test_root_elements_preserve_the_form(label, which):
    model = MatrixModel(fr(label), "natural", 7, 7)
    assert model.preserves_form(model.root_element(which))


def test_torus_elements_preserve_the_form():
    model = MatrixModel(fr("C3"), "natural", 13, 0)
    g, _ = model.torus_element(TorusClass(fr("C3"), (1, 2, 0), 4))
    assert model.preserves_form(g)
    assert eigenspace_dim(model, g, 1) == 2


def test_parse_case_line():
    case = parse_case_line("a2-nat-t3 A2 natural 0 torus:1,2,0/3  # comment")
    assert case.case_id == "a2-nat-t3"
    assert case.torus.exponents == (1, 2, 0)
    assert parse_case_line("# only a comment") is None
    assert parse_case_line("   ") is None
    root = parse_case_line("c3-root C3 wedge2 2 root:alpha_ell")
    assert root.which == "alpha_ell" and root.torus is None


@pytest.mark.parametrize("line", [
    "bad A2 natural 0 torus:1,1/3",
    "bad A2 natural 0 torus:1,1,0/3",
    "bad A2 cube 0 root:alpha_1",
    "bad A2 natural zero root:alpha_1",
])
def test_malformed_case_lines(line):
    with pytest.raises(ValueError):
        parse_case_line(line)


def test_case_file_parses():
    cases = parse_cases(FileUtils.load_case_lines(CASES_FILE))
    assert len(cases) >= 40
    assert len({case.case_id for case in cases}) == len(cases)
    assert {case.fr.family.value for case in cases} == {"A", "B", "C", "D"}
    assert {case.p for case in cases} == {0, 2, 3, 5, 7}


def test_torus_case_matches():
    result = check_case(parse_case_line("t A2 natural 0 torus:1,2,0/3"))
    assert result.status == "match"
    assert result.expected == {"0": 1, "1": 1, "2": 1}


def test_root_case_matches():
    result = check_case(parse_case_line("r A2 natural 0 root:alpha_1"))
    assert result.status == "match"
    assert result.expected == {"fixed": 2, "max_block": 2}


def test_root_case_in_positive_characteristic():
    result = check_case(parse_case_line("r A3 tensor_nat_dual 2 root:alpha_1"))
    assert result.status == "match"
    assert result.observed == {"fixed": 10, "max_block": 2}


def test_oversized_case_is_skipped():
    result = check_case(parse_case_line("big A4 sym3 0 root:alpha_1"), max_dim=10)
    assert result.status == "skipped"


def test_eigenspace_dim_of_identity():
    model = MatrixModel(fr("A2"), "natural", 7, 7)
    assert eigenspace_dim(model, np.eye(3, dtype=np.int64), 1) == 3
    assert eigenspace_dim(model, np.eye(3, dtype=np.int64), 2) == 0
