# tests/test_bounds.py
import pytest

from core.bounds import (
    Subsystem, full_subsystem, r_psi, s_lambda, short_root_count, weyl_group_order,
)
from core.rootsys import FamilyRank, NotDominant


def fr(label):
    return FamilyRank.parse(label)


@pytest.mark.parametrize("kind, n, order", [("A", 2, 6), ("BC", 3, 48), ("D", 4, 192), ("A", 0, 1)])
def test_weyl_group_order(kind, n, order):
    assert weyl_group_order(kind, n) == order


@pytest.mark.parametrize("label, count", [("A3", 12), ("B3", 6), ("C3", 12), ("D4", 24)])
def test_short_root_count(label, count):
    assert short_root_count(fr(label)) == count


def test_components():
    assert Subsystem.of_weight(fr("B3"), (1, 0, 0)).components == (("BC", 2),)
    assert Subsystem.of_weight(fr("D4"), (0, 1, 0, 0)).components == (("A", 1),) * 3
    assert Subsystem.of_weight(fr("D5"), (1, 0, 0, 0, 0)).components == (("D", 4),)
    assert Subsystem.of_weight(fr("A5"), (0, 0, 1, 0, 0)).components == (("A", 2), ("A", 2))


def test_r_psi_of_full_subsystem_vanishes():
    assert r_psi(fr("C4"), full_subsystem(fr("C4"))) == 0


@pytest.mark.parametrize("rank", [2, 3, 4, 5, 6])
def test_fundamental_weight_of_type_a(rank):
    # r for omega_2 is l - 1
    sub = Subsystem.of_weight(fr(f"A{rank}"), (0, 1) + (0,) * (rank - 2))
    assert r_psi(fr(f"A{rank}"), sub) == rank - 1


@pytest.mark.parametrize("rank", [2, 3, 4, 5, 6])
def test_s_lambda_natural_module_of_type_a(rank):
    assert s_lambda(fr(f"A{rank}"), (1,) + (0,) * (rank - 1)) == 1


@pytest.mark.parametrize("rank", [3, 4, 5])
def test_s_lambda_cube_of_natural_of_type_a(rank):
    assert s_lambda(fr(f"A{rank}"), (3,) + (0,) * (rank - 1)) == (rank * rank + rank + 2) // 2


def test_s_lambda_requires_dominant_weight():
    with pytest.raises(NotDominant):
        s_lambda(fr("A2"), (-1, 1))
