# tests/test_levi.py
import pytest

from core.character import freudenthal_character
from core.levi import (
    NotSelfDual, check_level_duality, closed_form_max_level, decompose_level, level_decompose, max_level,
)
from core.rootsys import FamilyRank


def fr(label):
    return FamilyRank.parse(label)


@pytest.mark.parametrize("label, weight, i", [
    ("A3", (1, 0, 0), 1),
    ("A4", (0, 1, 1, 0), 1),
    ("B3", (1, 1, 0), 1),
    ("B4", (0, 0, 0, 1), 1),
    ("C3", (0, 0, 1), 1),
    ("C3", (0, 0, 1), 3),
    ("C4", (1, 0, 1, 0), 4),
    ("D5", (1, 0, 0, 1, 0), 1),
])
def test_closed_forms_match_root_expansion(label, weight, i):
    assert closed_form_max_level(fr(label), weight, i) == max_level(fr(label), weight, i)


def test_closed_form_missing():
    assert closed_form_max_level(fr("D4"), (0, 1, 0, 0), 2) is None


def test_max_level_index_range():
    with pytest.raises(ValueError):
        max_level(fr("A3"), (1, 0, 0), 4)


def test_spin_like_levels_of_c3():
    char = freudenthal_character(fr("C3"), (0, 0, 1))
    dec = level_decompose(char, 1)
    assert dec.max_level == 2
    assert dec.dims() == [5, 4, 5]
    assert check_level_duality(dec)


def test_level_zero_is_levi_highest_weight_module():
    char = freudenthal_character(fr("C3"), (0, 0, 1))
    dec = level_decompose(char, 1)
    assert decompose_level(dec.levels[0]) == {(0, 1): 1}


def test_natural_module_levels():
    char = freudenthal_character(fr("A4"), (1, 0, 0, 0))
    dec = level_decompose(char, 1)
    assert dec.dims() == [1, 4]


def test_duality_needs_self_dual_module():
    char = freudenthal_character(fr("A2"), (1, 0))
    with pytest.raises(NotSelfDual):
        check_level_duality(level_decompose(char, 1))
