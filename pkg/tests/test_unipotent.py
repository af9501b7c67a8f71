# tests/test_unipotent.py
import pytest

from core.character import ModuleSpec
from core.rootsys import FamilyRank
from core.unipotent import (
    JordanType, RootElementSpec, Unsupported, class_fixed_space, construction_jordan, fixed_dim,
    jordan_functor, jordan_tensor, max_fixed_space_unipotent, required_classes, root_element_on_natural,
    sl2_index, sl2_string_blocks, wedge2_fixed_dim_char2, wedge2_single_block_char2,
)


def fr(label):
    return FamilyRank.parse(label)


def test_wedge2_single_block_char2():
    assert wedge2_single_block_char2(6) == [8, 6, 1]
    assert wedge2_single_block_char2(4) == [4, 2]
    assert wedge2_single_block_char2(3) == [3]
    assert wedge2_single_block_char2(1) == []


@pytest.mark.parametrize("i", range(2, 13))
def test_wedge2_char2_blocks_and_fixed_dim(i):
    blocks = wedge2_single_block_char2(i)
    assert sum(blocks) == i * (i - 1) // 2
    assert len(blocks) == wedge2_fixed_dim_char2(i) == i // 2


def test_sl2_string_blocks():
    assert sl2_string_blocks([1, -1, 1, -1, 0]).blocks == (2, 2, 1)
    assert sl2_string_blocks([2, 0, -2]).blocks == (3,)
    with pytest.raises(ValueError):
        sl2_string_blocks([2, 2, 0])


def test_sl2_index_swaps_for_type_b():
    assert sl2_index(fr("B3"), "alpha_1") == 3
    assert sl2_index(fr("B3"), "alpha_ell") == 1
    assert sl2_index(fr("C3"), "alpha_1") == 1
    assert sl2_index(fr("C3"), "alpha_ell") == 3
    with pytest.raises(ValueError):
        sl2_index(fr("C3"), "alpha_2")


@pytest.mark.parametrize("label, which, p, blocks", [
    ("A3", "alpha_1", 0, (2, 1, 1)),
    ("B3", "alpha_1", 3, (3, 1, 1, 1, 1)),
    ("B3", "alpha_1", 2, (2, 1, 1, 1, 1, 1)),
    ("B3", "alpha_ell", 0, (2, 2, 1, 1, 1)),
    ("C3", "alpha_ell", 0, (2, 1, 1, 1, 1)),
    ("C3", "alpha_1", 0, (2, 2, 1, 1)),
    ("D4", "alpha_1", 2, (2, 2, 1, 1, 1, 1)),
])
def test_root_element_on_natural(label, which, p, blocks):
    assert root_element_on_natural(RootElementSpec(fr(label), which), p).blocks == blocks


@pytest.mark.parametrize("p, blocks", [(0, (3, 1)), (2, (2, 2)), (3, (3, 1))])
def test_jordan_tensor(p, blocks):
    j2 = JordanType((2,), p)
    assert jordan_tensor(j2, j2).blocks == blocks


def test_jordan_types_need_same_characteristic():
    with pytest.raises(ValueError):
        jordan_tensor(JordanType((2,), 0), JordanType((2,), 2))


def test_functors_with_trivial_blocks():
    a = JordanType((2, 1, 1))
    assert jordan_functor("wedge2", a).blocks == (2, 2, 1, 1)
    assert jordan_functor("sym2", a).blocks == (3, 2, 2, 1, 1, 1)
    assert jordan_functor("wedge3", a).dim == 4
    assert jordan_functor("sym3", a).dim == 20


def test_construction_jordan_fixed_dims():
    # Sym^3 of the long root element on the natural module of C_l fixes binom(2l+1, 3)
    assert fixed_dim(construction_jordan(fr("C3"), "sym3", "alpha_ell", 0)) == 35
    assert fixed_dim(construction_jordan(fr("A3"), "wedge2", "alpha_1", 0)) == 4
    assert construction_jordan(fr("A2"), "natural*natural", "alpha_1", 0).blocks == (3, 2, 2, 1, 1)


def test_required_classes():
    assert required_classes(fr("A4"), 2) == (("alpha_1",), ())
    assert required_classes(fr("D4"), 0) == (("alpha_1",), ())
    assert required_classes(fr("B3"), 3) == (("alpha_ell",), ("alpha_1",))
    assert required_classes(fr("C3"), 2) == (("alpha_ell", "alpha_1"), ())
    assert required_classes(fr("C3"), 5) == (("alpha_ell",), ("alpha_1",))


def test_natural_module_of_type_a():
    space = class_fixed_space(ModuleSpec(fr("A3"), (1, 0, 0), 0), "alpha_1")
    assert space.fixed_dim == 3
    assert space.route == "sl2"
    assert space.exact


def test_trivial_module():
    assert class_fixed_space(ModuleSpec(fr("A3"), (0, 0, 0), 0), "alpha_1").fixed_dim == 1


def test_short_class_on_spin_like_module_of_c3_in_char_2(catalog):
    spec = ModuleSpec(fr("C3"), (0, 0, 1), 2)
    short = class_fixed_space(spec, "alpha_1", catalog)
    long = class_fixed_space(spec, "alpha_ell", catalog)
    assert short.route == "isogeny"
    assert short.fixed_dim == 6
    assert long.route == "sl2"
    assert long.fixed_dim == 4
    assert max_fixed_space_unipotent(spec, catalog).max_dim == 6


def test_steinberg_splitting(catalog):
    space = class_fixed_space(ModuleSpec.parse(fr("A2"), "2om1", 2), "alpha_1", catalog)
    assert space.route == "steinberg"
    assert space.fixed_dim == 2


def test_unsupported_without_catalog():
    spec = ModuleSpec(fr("A3"), (2, 2, 0), 3)
    with pytest.raises(Unsupported):
        class_fixed_space(spec, "alpha_1")
