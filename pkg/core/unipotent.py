# core/unipotent.py
"""
Jordan types of root elements.

Jordan types are computed on the natural module, pushed through tensor,
exterior and symmetric powers, and read off irreducible characters when the
restriction to the root SL2 is semisimple. Outside these regimes single
blocks are handled by explicit nilpotent matrices over F_p.

Class labels follow the table convention: ``alpha_1`` and ``alpha_ell``
name the classes of x_{alpha_1}(1) and x_{alpha_l}(1), except that for type
B ``alpha_1`` is the short class (J_3 on the natural module) and
``alpha_ell`` the long class (J_2^2 there).
"""
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from core.character import (
    Character, ModuleSpec, UnknownModularDim, freudenthal_character, irreducible_character,
)
from core.expressions import evaluate
from core.levi import level_decompose
from core.linalg import (
    jordan_block, jordan_blocks_of_unipotent, kron_mod, sym_power_matrix, wedge_power_matrix,
)
from core.rootsys import Family, FamilyRank, classical_root_system, parse_weight
from utils.logger import get_logger

logger = get_logger(__name__)

ROOT_CLASSES = ("alpha_1", "alpha_ell")

# Largest functor dimension handled with explicit matrices
EXPLICIT_MAX_DIM = 1024


class OracleRequired(RuntimeError):
    """Raised when a Jordan type lies outside every implemented regime."""
    pass


class Unsupported(LookupError):
    """Raised when no route computes the fixed space of a root element on a module."""
    pass


@dataclass(frozen=True)
class JordanType:
    """Partition of Jordan block sizes of a unipotent element in characteristic p."""
    blocks: Tuple[int, ...]
    p: int = 0

    def __post_init__(self):
        blocks = tuple(sorted((int(b) for b in self.blocks), reverse=True))
        if any(b <= 0 for b in blocks):
            raise ValueError(f"Jordan blocks must be positive: {blocks}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_counts(cls, counts: Mapping[int, int], p: int = 0) -> "JordanType":
        blocks = []
        for size, count in counts.items():
            if count < 0:
                raise ValueError(f"Negative block count {count} for size {size}")
            blocks.extend([size] * count)
        return cls(tuple(blocks), p)

    @classmethod
    def trivial(cls, n: int, p: int = 0) -> "JordanType":
        return cls(tuple([1] * n), p)

    @property
    def dim(self) -> int:
        return sum(self.blocks)

    def counts(self) -> Counter:
        return Counter(self.blocks)

    def __add__(self, other: "JordanType") -> "JordanType":
        _same_characteristic(self, other)
        return JordanType(self.blocks + other.blocks, self.p)

    def repeat(self, m: int) -> "JordanType":
        return JordanType(self.blocks * m, self.p)

    def __str__(self) -> str:
        return "[" + ",".join(str(b) for b in self.blocks) + "]"


def _same_characteristic(a: JordanType, b: JordanType) -> None:
    if a.p != b.p:
        raise ValueError(f"Jordan types in characteristics {a.p} and {b.p}")


@dataclass(frozen=True)
class RootElementSpec:
    """Root element class representative x_alpha(1) on a classical group."""
    fr: FamilyRank
    which: str

    def __post_init__(self):
        if self.which not in ROOT_CLASSES:
            raise ValueError(f"Unknown root element class: {self.which}")

    @property
    def sl2_index(self) -> int:
        """1-based Bourbaki index of the simple root whose root subgroup represents the class."""
        return sl2_index(self.fr, self.which)

    def __str__(self) -> str:
        return f"x_{self.which}(1)"


def sl2_index(fr: FamilyRank, which: str) -> int:
    if which not in ROOT_CLASSES:
        raise ValueError(f"Unknown root element class: {which}")
    first = which == "alpha_1"
    if fr.family == Family.B:
        first = not first
    return 1 if first else fr.rank


def root_element_on_natural(re: RootElementSpec, p: int = 0) -> JordanType:
    """
    Jordan type of the root element on the natural module.

    Args:
        re: Root element class
        p: Characteristic

    Returns:
        JordanType
    """
    fr, n = re.fr, re.fr.natural_dim
    if fr.family == Family.A:
        return JordanType((2,) + (1,) * (n - 2), p)
    if fr.family == Family.B:
        if re.which == "alpha_1":
            if p == 2:
                # x_{e_l}(1) fixes the radical of the form
                return JordanType((2,) + (1,) * (n - 2), p)
            return JordanType((3,) + (1,) * (n - 3), p)
        return JordanType((2, 2) + (1,) * (n - 4), p)
    if fr.family == Family.C and re.which == "alpha_ell":
        return JordanType((2,) + (1,) * (n - 2), p)
    return JordanType((2, 2) + (1,) * (n - 4), p)


# SL2 string model

def sl2_string_blocks(pairings: Iterable[int], p: int = 0) -> JordanType:
    """
    Jordan type of x_alpha(1) on a module that is semisimple for the root SL2.

    Args:
        pairings: <mu, alpha^vee> for every weight, with multiplicity

    Returns:
        JordanType with count(w) - count(w + 2) blocks of size w + 1
    """
    counts = Counter(abs(n) for n in pairings)
    signed = Counter(pairings)
    blocks: Dict[int, int] = {}
    top = max(counts, default=-1)
    for w in range(top + 1):
        m = signed.get(w, 0) - signed.get(w + 2, 0)
        if m < 0:
            raise ValueError(f"Pairings do not form SL2 strings at weight {w}")
        if m:
            blocks[w + 1] = m
    return JordanType.from_counts(blocks, p)


def in_sl2_regime(pairings: Iterable[int], p: int) -> bool:
    return p == 0 or all(abs(n) <= p - 1 for n in pairings)


def character_pairings(char: Character, index: int) -> List[int]:
    """Pairings of all weights (with multiplicity) with the 1-based simple coroot."""
    out: List[int] = []
    for weight, mult in char.entries:
        out.extend([weight[index - 1]] * mult)
    return out


# Single blocks

_FUNCTORS = ("wedge2", "wedge3", "sym2", "sym3")


def _functor_weights(kind: str, weights: Sequence[int]) -> List[int]:
    k = int(kind[-1])
    chooser = combinations if kind.startswith("wedge") else combinations_with_replacement
    return [sum(c) for c in chooser(weights, k)]


def _functor_dim(kind: str, n: int) -> int:
    k = int(kind[-1])
    return math.comb(n, k) if kind.startswith("wedge") else math.comb(n + k - 1, k)


def wedge2_single_block_char2(i: int) -> List[int]:
    """
    Blocks of the wedge square of a single Jordan block of size i in characteristic 2.

    With q the power of 2 such that q/2 < i <= q, the wedge square of V_i is
    the wedge square of V_{q-i} plus (i - q/2 - 1) copies of V_q plus V_{3q/2 - i}.
    """
    if i <= 1:
        return []
    q = 1 << (i - 1).bit_length()
    blocks = wedge2_single_block_char2(q - i)
    blocks.extend([q] * (i - q // 2 - 1))
    blocks.append(3 * q // 2 - i)
    return sorted(blocks, reverse=True)


def wedge2_fixed_dim_char2(i: int) -> int:
    """Fixed-space dimension of a single block of size i on the wedge square in characteristic 2."""
    return i // 2


@lru_cache(maxsize=None)
def _single_block_functor(kind: str, i: int, p: int) -> Tuple[int, ...]:
    if kind not in _FUNCTORS:
        raise ValueError(f"Unknown functor: {kind}")
    if _functor_dim(kind, i) == 0:
        return ()
    weights = _functor_weights(kind, [i - 1 - 2 * t for t in range(i)])
    if (p == 0 or i <= p) and in_sl2_regime(weights, p):
        return sl2_string_blocks(weights, p).blocks
    if p == 2 and kind == "wedge2":
        return tuple(wedge2_single_block_char2(i))
    if _functor_dim(kind, i) > EXPLICIT_MAX_DIM:
        raise OracleRequired(f"{kind} of J_{i} in characteristic {p} exceeds the explicit-matrix limit")
    if p == 0:
        raise OracleRequired(f"{kind} of J_{i} in characteristic 0 needs the string model")
    k = int(kind[-1])
    builder = wedge_power_matrix if kind.startswith("wedge") else sym_power_matrix
    matrix = builder(jordan_block(i), k, p)
    return tuple(jordan_blocks_of_unipotent(matrix, p))


@lru_cache(maxsize=None)
def _block_tensor(m: int, n: int, p: int) -> Tuple[int, ...]:
    if min(m, n) == 1:
        return (max(m, n),) * min(m, n)
    if p == 0 or m + n - 1 <= p:
        # Clebsch-Gordan
        return tuple(range(m + n - 1, abs(m - n), -2))
    if m * n > EXPLICIT_MAX_DIM:
        raise OracleRequired(f"J_{m} (x) J_{n} in characteristic {p} exceeds the explicit-matrix limit")
    return tuple(jordan_blocks_of_unipotent(kron_mod(jordan_block(m), jordan_block(n), p), p))


# Functors on Jordan types

def jordan_tensor(a: JordanType, b: JordanType) -> JordanType:
    """
    Jordan type of a tensor product.

    Raises:
        OracleRequired: If a block pair exceeds the explicit-matrix limit
    """
    _same_characteristic(a, b)
    blocks: List[int] = []
    for (m, cm), (n, cn) in ((x, y) for x in a.counts().items() for y in b.counts().items()):
        blocks.extend(_block_tensor(min(m, n), max(m, n), a.p) * (cm * cn))
    return JordanType(tuple(blocks), a.p)


def _split(a: JordanType) -> Tuple[List[int], int]:
    nontrivial = [b for b in a.blocks if b > 1]
    return nontrivial, a.blocks.count(1)


def _power_of_blocks(kind: str, blocks: List[int], p: int) -> JordanType:
    if not blocks:
        return JordanType((), p)
    first = JordanType((blocks[0],), p)
    head = JordanType(_single_block_functor(kind, blocks[0], p), p)
    if len(blocks) == 1:
        return head
    rest = JordanType(tuple(blocks[1:]), p)
    if kind == "wedge2":
        return head + jordan_tensor(first, rest) + _power_of_blocks("wedge2", blocks[1:], p)
    if kind == "sym2":
        return head + jordan_tensor(first, rest) + _power_of_blocks("sym2", blocks[1:], p)
    lower = "wedge2" if kind == "wedge3" else "sym2"
    return (head
            + jordan_tensor(JordanType(_single_block_functor(lower, blocks[0], p), p), rest)
            + jordan_tensor(first, _power_of_blocks(lower, blocks[1:], p))
            + _power_of_blocks(kind, blocks[1:], p))


def jordan_functor(kind: str, a: JordanType) -> JordanType:
    """
    Jordan type of wedge2, wedge3, sym2 or sym3 applied to a module.

    Trivial blocks are grouped: for m trivial blocks T and the rest N,
    the wedge square is wedge2(N) + N^m + T^C(m,2), and similarly for the
    other functors.
    """
    nontrivial, m = _split(a)
    p = a.p
    N = JordanType(tuple(nontrivial), p)
    if kind == "wedge2":
        return (_power_of_blocks("wedge2", nontrivial, p) + N.repeat(m)
                + JordanType.trivial(math.comb(m, 2), p))
    if kind == "sym2":
        return (_power_of_blocks("sym2", nontrivial, p) + N.repeat(m)
                + JordanType.trivial(math.comb(m + 1, 2), p))
    if kind == "wedge3":
        return (_power_of_blocks("wedge3", nontrivial, p)
                + _power_of_blocks("wedge2", nontrivial, p).repeat(m)
                + N.repeat(math.comb(m, 2))
                + JordanType.trivial(math.comb(m, 3), p))
    if kind == "sym3":
        return (_power_of_blocks("sym3", nontrivial, p)
                + _power_of_blocks("sym2", nontrivial, p).repeat(m)
                + N.repeat(math.comb(m + 1, 2))
                + JordanType.trivial(math.comb(m + 2, 3), p))
    raise ValueError(f"Unknown functor: {kind}")


def jordan_wedge2(a: JordanType) -> JordanType:
    return jordan_functor("wedge2", a)


def fixed_dim(a: JordanType) -> int:
    """dim ker(u - 1): the number of blocks."""
    return len(a.blocks)


def filtration_bound(levels: Iterable[int]) -> int:
    """Sum of the fixed dimensions on the successive quotients of a filtration."""
    return sum(levels)


def construction_jordan(fr: FamilyRank, construction: str, which: str, p: int) -> JordanType:
    """
    Jordan type of a root element on a construction over the natural module.

    Args:
        fr: Family and rank
        construction: natural, wedge2, wedge3, sym2, sym3, tensor_nat_dual or a product 'a*b'
        which: Root element class
        p: Characteristic
    """
    if "*" in construction:
        parts = construction.split("*")
        result = construction_jordan(fr, parts[0], which, p)
        for part in parts[1:]:
            result = jordan_tensor(result, construction_jordan(fr, part, which, p))
        return result
    nat = root_element_on_natural(RootElementSpec(fr, which), p)
    if construction == "natural":
        return nat
    if construction == "tensor_nat_dual":
        return jordan_tensor(nat, nat)
    return jordan_functor(construction, nat)


def levi_fixed_dims(char: Character, i: int, root_index: int, p: int = 0) -> List[int]:
    """
    Fixed dimensions of x_{alpha_r}(1), r != i, on each alpha_i-level of a character.

    Raises:
        OracleRequired: If a level is outside the SL2 string regime
    """
    if root_index == i:
        raise ValueError("The root element must lie in the Levi factor")
    dec = level_decompose(char, i)
    local = root_index if root_index < i else root_index - 1
    dims = []
    for j, level in enumerate(dec.levels):
        pairings = character_pairings(level, local)
        if not in_sl2_regime(pairings, p):
            raise OracleRequired(f"Level {j} is outside the SL2 string regime in characteristic {p}")
        dims.append(fixed_dim(sl2_string_blocks(pairings, p)))
    return dims


# Fixed spaces on irreducible modules

@dataclass(frozen=True)
class ClassFixedSpace:
    """Fixed space of one root element class on L(lambda)."""
    which: str
    fixed_dim: int
    jordan: Optional[JordanType]
    exact: bool
    route: str


@dataclass(frozen=True)
class UnipotentMax:
    max_dim: int
    witness: RootElementSpec
    exact: bool
    classes: Dict[str, ClassFixedSpace] = field(default_factory=dict)


def required_classes(fr: FamilyRank, p: int) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    """
    Root element classes that realize the maximal fixed space.

    Returns:
        Tuple (required, optional) of class labels
    """
    if fr.family in (Family.A, Family.D):
        return ("alpha_1",), ()
    if fr.family == Family.B:
        return ("alpha_ell",), ("alpha_1",)
    if p == 2:
        return ("alpha_ell", "alpha_1"), ()
    return ("alpha_ell",), ("alpha_1",)


def _records(spec: ModuleSpec, catalog) -> list:
    return [] if catalog is None else catalog.find_modules(spec)


def _sl2_route(spec: ModuleSpec, which: str, catalog) -> Optional[ClassFixedSpace]:
    try:
        char = irreducible_character(spec, catalog)
    except UnknownModularDim:
        return None
    pairings = character_pairings(char, sl2_index(spec.fr, which))
    if not in_sl2_regime(pairings, spec.p):
        return None
    jordan = sl2_string_blocks(pairings, spec.p)
    return ClassFixedSpace(which, fixed_dim(jordan), jordan, True, "sl2")


def _isogeny_route(spec: ModuleSpec, which: str) -> Optional[ClassFixedSpace]:
    fr = spec.fr
    spin = tuple([0] * (fr.rank - 1) + [1])
    if not (fr.family == Family.C and spec.p == 2 and which == "alpha_1" and spec.highest == spin):
        return None
    # The short root elements of Sp_2l act on L(omega_l) as the long ones of Spin_2l+1 on the spin module
    b_system = classical_root_system(Family.B, fr.rank)
    pairings = character_pairings(freudenthal_character(b_system, spin), 1)
    jordan = sl2_string_blocks(pairings, spec.p)
    return ClassFixedSpace(which, fixed_dim(jordan), jordan, True, "isogeny")


def _tensor_route(spec: ModuleSpec, which: str, catalog) -> Optional[ClassFixedSpace]:
    for record in _records(spec, catalog):
        if not record.tensor:
            continue
        result = None
        exact = True
        for factor in record.tensor:
            weight = parse_weight(factor.weight, spec.fr.rank)
            part = class_fixed_space(ModuleSpec(spec.fr, weight, spec.p), which, catalog)
            if part.jordan is None:
                return None
            exact = exact and part.exact
            result = part.jordan if result is None else jordan_tensor(result, part.jordan)
        return ClassFixedSpace(which, fixed_dim(result), result, exact, "tensor")
    return None


def _recipe_route(spec: ModuleSpec, which: str, catalog) -> Optional[ClassFixedSpace]:
    rank, p = spec.fr.rank, spec.p
    for record in _records(spec, catalog):
        for recipe in record.unipotent:
            if recipe.root_class != which:
                continue
            if recipe.fixed is not None:
                value = evaluate(recipe.fixed, rank, p)
            else:
                value = sum(
                    coeff * fixed_dim(construction_jordan(spec.fr, name, which, p))
                    for name, coeff in recipe.constructions.items()
                ) - evaluate(recipe.offset, rank, p)
            return ClassFixedSpace(which, value, None, recipe.exact, "recipe")
    return None


def class_fixed_space(spec: ModuleSpec, which: str, catalog=None) -> ClassFixedSpace:
    """
    Fixed space of a root element class on L(lambda).

    Routes, in order: Steinberg splitting of non-restricted weights, the SL2
    string model, tensor product records, the C/B isogeny in characteristic 2
    and catalog recipes.

    Raises:
        Unsupported: If no route applies
    """
    return _class_fixed_space(spec, which, catalog)


@lru_cache(maxsize=1024)
def _class_fixed_space(spec: ModuleSpec, which: str, catalog) -> ClassFixedSpace:
    fr, p = spec.fr, spec.p
    if not any(spec.highest):
        return ClassFixedSpace(which, 1, JordanType((1,), p), True, "trivial")

    if not spec.is_restricted:
        restricted = tuple(c % p for c in spec.highest)
        rest = tuple(c // p for c in spec.highest)
        low = _class_fixed_space(ModuleSpec(fr, restricted, p), which, catalog)
        high = _class_fixed_space(ModuleSpec(fr, rest, p, twisted=True), which, catalog)
        if low.jordan is None or high.jordan is None:
            raise Unsupported(f"No Jordan type for the Steinberg factors of {spec}")
        jordan = jordan_tensor(low.jordan, high.jordan)
        return ClassFixedSpace(which, fixed_dim(jordan), jordan, low.exact and high.exact, "steinberg")

    for route in (
        lambda: _sl2_route(spec, which, catalog),
        lambda: _tensor_route(spec, which, catalog),
        lambda: _isogeny_route(spec, which),
        lambda: _recipe_route(spec, which, catalog),
    ):
        try:
            found = route()
        except OracleRequired as e:
            logger.debug(f"Route skipped for {spec} {which}: {str(e)}")
            found = None
        if found is not None:
            logger.debug(f"{which} on {spec}: fixed dim {found.fixed_dim} via {found.route}")
            return found
    raise Unsupported(f"No route computes x_{which}(1) on {spec}")


def max_fixed_space_unipotent(spec: ModuleSpec, catalog=None) -> UnipotentMax:
    """
    Maximal fixed-space dimension over root element classes.

    Args:
        spec: Module specification
        catalog: Module catalog (tensor records and recipes)

    Returns:
        UnipotentMax with the first maximizing class as witness

    Raises:
        Unsupported: If a required class cannot be computed
    """
    required, optional = required_classes(spec.fr, spec.p)
    classes: Dict[str, ClassFixedSpace] = {}
    for which in required:
        classes[which] = class_fixed_space(spec, which, catalog)
    for which in optional:
        try:
            classes[which] = class_fixed_space(spec, which, catalog)
        except Unsupported as e:
            logger.debug(f"Optional class {which} skipped for {spec}: {str(e)}")
    best = max(classes.values(), key=lambda c: c.fixed_dim)
    exact = all(classes[w].exact for w in required)
    return UnipotentMax(
        max_dim=best.fixed_dim,
        witness=RootElementSpec(spec.fr, best.which),
        exact=exact,
        classes=classes,
    )
