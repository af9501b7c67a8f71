# core/character.py
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from sympy import isprime

from core.expressions import evaluate
from core.rootsys import (
    FamilyRank, NotDominant, RootSystem, Weight, WeightFormatError,
    build_root_system, format_weight, parse_weight,
)
from utils.logger import get_logger

logger = get_logger(__name__)


class MalformedCharacter(ValueError):
    """Raised when a weight multiset is not a valid character."""
    pass


class Mismatch(ValueError):
    """Raised when characters over different root systems are combined."""
    pass


class UnknownModularDim(LookupError):
    """Raised when the modular character of L(lambda) is not known."""
    pass


class NotRestricted(ValueError):
    """Raised when a highest weight is not p-restricted."""
    pass


@dataclass(frozen=True)
class Character:
    """Finite multiset of weights with positive multiplicities."""
    root_system: RootSystem
    entries: Tuple[Tuple[Weight, int], ...]

    @classmethod
    def from_mapping(cls, root_system: RootSystem, mapping: Mapping[Weight, int]) -> "Character":
        """
        Build a character, dropping zero multiplicities.

        Raises:
            MalformedCharacter: On negative multiplicities or wrong weight length
        """
        items = []
        for weight, mult in mapping.items():
            if len(weight) != root_system.rank:
                raise MalformedCharacter(f"Weight {weight} does not match rank {root_system.rank}")
            if mult < 0:
                raise MalformedCharacter(f"Negative multiplicity {mult} at weight {weight}")
            if mult:
                items.append((tuple(int(c) for c in weight), int(mult)))
        items.sort(reverse=True)
        return cls(root_system=root_system, entries=tuple(items))

    @cached_property
    def mapping(self) -> Dict[Weight, int]:
        return dict(self.entries)

    @property
    def dim(self) -> int:
        return sum(m for _, m in self.entries)

    def multiplicity(self, weight: Weight) -> int:
        return self.mapping.get(tuple(weight), 0)

    def weights(self) -> List[Weight]:
        return [w for w, _ in self.entries]

    def dual(self) -> "Character":
        return Character.from_mapping(self.root_system, {tuple(-c for c in w): m for w, m in self.entries})

    def dominant_part(self) -> Dict[Weight, int]:
        return {w: m for w, m in self.entries if all(c >= 0 for c in w)}

    def _check(self, other: "Character") -> None:
        if self.root_system != other.root_system:
            raise Mismatch("Characters live over different root systems")

    def __add__(self, other: "Character") -> "Character":
        self._check(other)
        total = defaultdict(int, self.mapping)
        for w, m in other.entries:
            total[w] += m
        return Character.from_mapping(self.root_system, total)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class ModuleSpec:
    """
    Query object: L(highest) for a classical group in characteristic p.

    ``twisted`` admits non-restricted highest weights, read through the
    Steinberg tensor product theorem.
    """
    fr: FamilyRank
    highest: Weight
    p: int = 0
    twisted: bool = False

    def __post_init__(self):
        object.__setattr__(self, "highest", tuple(int(c) for c in self.highest))
        if len(self.highest) != self.fr.rank:
            raise WeightFormatError(f"Weight {self.highest} has wrong length for {self.fr}")
        if any(c < 0 for c in self.highest):
            raise NotDominant(f"Weight {self.highest} is not dominant")
        if self.p < 0 or (self.p > 0 and not isprime(self.p)):
            raise ValueError(f"Characteristic must be 0 or a prime, got {self.p}")
        if not self.twisted and not self.is_restricted:
            raise NotRestricted(f"Weight {self.highest} is not {self.p}-restricted")

    @property
    def is_restricted(self) -> bool:
        return self.p == 0 or all(c < self.p for c in self.highest)

    @property
    def label(self) -> str:
        return f"{self.fr}:{format_weight(self.highest)}:p{self.p}"

    @classmethod
    def parse(cls, fr: FamilyRank, weight, p: int = 0) -> "ModuleSpec":
        highest = parse_weight(weight, fr.rank)
        restricted = p == 0 or all(c < p for c in highest)
        return cls(fr, highest, p, twisted=not restricted)

    def __str__(self) -> str:
        return self.label


def weyl_dim(fr: FamilyRank, weight: Weight) -> int:
    """Characteristic-zero dimension of L(weight)."""
    return build_root_system(fr).weyl_dim(tuple(weight))


def _dominant_weights(rs: RootSystem, highest: Weight) -> List[Weight]:
    """Dominant weights below highest, ordered by depth (highest first)."""
    found = {highest}
    order = [highest]
    frontier = [highest]
    while frontier:
        next_frontier = []
        for mu in frontier:
            for root in rs.positive_roots_as_weights:
                nu = tuple(a - b for a, b in zip(mu, root))
                if all(c >= 0 for c in nu) and nu not in found:
                    found.add(nu)
                    next_frontier.append(nu)
        order.extend(next_frontier)
        frontier = next_frontier

    def depth(mu):
        return sum(rs.simple_coords(tuple(a - b for a, b in zip(highest, mu))))

    return sorted(order, key=lambda mu: (depth(mu), tuple(-c for c in mu)))


@lru_cache(maxsize=256)
def dominant_multiplicities(rs: RootSystem, highest: Weight) -> Tuple[Tuple[Weight, int], ...]:
    """
    Freudenthal recursion for the dominant weight multiplicities of L(highest) in characteristic 0.

    Args:
        rs: Root system
        highest: Dominant highest weight

    Returns:
        Tuple of (dominant weight, multiplicity), highest first
    """
    highest = tuple(highest)
    if not rs.is_dominant(highest):
        raise NotDominant(f"Weight {highest} is not dominant")
    dominant = _dominant_weights(rs, highest)
    mult: Dict[Weight, int] = {highest: 1}
    rho = rs.rho
    shifted = tuple(a + b for a, b in zip(highest, rho))
    top = rs.inner(shifted, shifted)
    roots = rs.positive_roots_as_weights
    conj_cache: Dict[Weight, Weight] = {}

    def lookup(weight: Weight) -> int:
        dom = conj_cache.get(weight)
        if dom is None:
            dom = rs.dominant_conjugate(weight)
            conj_cache[weight] = dom
        return mult.get(dom, 0)

    for mu in dominant[1:]:
        total = Fraction(0)
        for root, root_vec in zip(roots, rs.positive_roots):
            k = 1
            while True:
                nu = tuple(a + k * b for a, b in zip(mu, root))
                m = lookup(nu)
                if m == 0:
                    break
                total += m * rs.root_inner(root_vec, nu)
                k += 1
        mu_shifted = tuple(a + b for a, b in zip(mu, rho))
        denom = top - rs.inner(mu_shifted, mu_shifted)
        value = 2 * total / denom
        if value.denominator != 1:
            raise ArithmeticError(f"Non-integral multiplicity {value} at {mu} for {highest}")
        mult[mu] = int(value)
    return tuple((mu, mult[mu]) for mu in dominant if mult[mu] > 0)


def character_from_dominant(rs: RootSystem, dominant: Iterable[Tuple[Weight, int]]) -> Character:
    """Expand dominant multiplicities to the full Weyl-invariant character."""
    mapping: Dict[Weight, int] = defaultdict(int)
    for mu, m in dominant:
        for w in rs.weyl_orbit(mu):
            mapping[w] += m
    return Character.from_mapping(rs, mapping)


def freudenthal_character(fr_or_rs, weight: Weight) -> Character:
    """
    Full characteristic-zero character of L(weight).

    Args:
        fr_or_rs: FamilyRank or RootSystem (Levi subsystems)
        weight: Dominant highest weight

    Returns:
        Character whose dimension equals the Weyl dimension
    """
    rs = fr_or_rs if isinstance(fr_or_rs, RootSystem) else build_root_system(fr_or_rs)
    return _weyl_character(rs, tuple(weight))


@lru_cache(maxsize=256)
def _weyl_character(rs: RootSystem, weight: Weight) -> Character:
    return character_from_dominant(rs, dominant_multiplicities(rs, weight))


def subdominant_weights(fr: FamilyRank, weight: Weight) -> List[Weight]:
    """Dominant weights mu with weight - mu a nonnegative integer combination of simple roots."""
    rs = build_root_system(fr)
    weight = tuple(weight)
    if not rs.is_dominant(weight):
        raise NotDominant(f"Weight {weight} is not dominant")
    return _dominant_weights(rs, weight)


def is_minuscule(fr: FamilyRank, weight: Weight) -> bool:
    return len(subdominant_weights(fr, weight)) == 1


def in_lowest_alcove(fr: FamilyRank, weight: Weight, p: int) -> bool:
    """<weight + rho, beta^vee> <= p for every positive root beta."""
    rs = build_root_system(fr)
    shifted = tuple(c + 1 for c in weight)
    return all(rs.coroot_pairing(shifted, k) <= p for k in range(len(rs.positive_roots)))


# Functors on characters

def _combine(rs: RootSystem, terms: List[Tuple[int, Dict[Weight, int]]], divisor: int) -> Character:
    total: Dict[Weight, int] = defaultdict(int)
    for coeff, mapping in terms:
        for w, m in mapping.items():
            total[w] += coeff * m
    result = {}
    for w, m in total.items():
        if m % divisor:
            raise MalformedCharacter(f"Plethysm produced non-integral multiplicity at {w}")
        if m:
            result[w] = m // divisor
    return Character.from_mapping(rs, result)


def _product(a: Mapping[Weight, int], b: Mapping[Weight, int]) -> Dict[Weight, int]:
    out: Dict[Weight, int] = defaultdict(int)
    for wa, ma in a.items():
        for wb, mb in b.items():
            out[tuple(x + y for x, y in zip(wa, wb))] += ma * mb
    return out


def _adams(a: Mapping[Weight, int], k: int) -> Dict[Weight, int]:
    return {tuple(k * c for c in w): m for w, m in a.items()}


def tensor(a: Character, b: Character) -> Character:
    """Tensor product of characters."""
    a._check(b)
    return Character.from_mapping(a.root_system, _product(a.mapping, b.mapping))


def frobenius_twist(a: Character, q: int) -> Character:
    """Character of the q-th power Frobenius twist (weights multiplied by q)."""
    return Character.from_mapping(a.root_system, _adams(a.mapping, q))


def wedge(k: int, a: Character) -> Character:
    """Exterior power k = 2 or 3, through Adams operations."""
    chi = a.mapping
    if k == 2:
        return _combine(a.root_system, [(1, _product(chi, chi)), (-1, _adams(chi, 2))], 2)
    if k == 3:
        square = _product(chi, chi)
        return _combine(
            a.root_system,
            [(1, _product(square, chi)), (-3, _product(chi, _adams(chi, 2))), (2, _adams(chi, 3))],
            6,
        )
    raise ValueError(f"Exterior power {k} not supported")


def sym(k: int, a: Character) -> Character:
    """Symmetric power k = 2 or 3, through Adams operations."""
    chi = a.mapping
    if k == 2:
        return _combine(a.root_system, [(1, _product(chi, chi)), (1, _adams(chi, 2))], 2)
    if k == 3:
        square = _product(chi, chi)
        return _combine(
            a.root_system,
            [(1, _product(square, chi)), (3, _product(chi, _adams(chi, 2))), (2, _adams(chi, 3))],
            6,
        )
    raise ValueError(f"Symmetric power {k} not supported")


def natural_character(fr: FamilyRank) -> Character:
    return freudenthal_character(fr, tuple([1] + [0] * (fr.rank - 1)))


CONSTRUCTIONS = ("natural", "wedge2", "wedge3", "sym2", "sym3", "tensor_nat_dual")


def construction_character(fr: FamilyRank, construction: str) -> Character:
    """
    Formal character of a construction on the natural module.

    Args:
        fr: Family and rank
        construction: One of CONSTRUCTIONS

    Returns:
        Character of the construction
    """
    nat = natural_character(fr)
    if construction == "natural":
        return nat
    if construction == "wedge2":
        return wedge(2, nat)
    if construction == "wedge3":
        return wedge(3, nat)
    if construction == "sym2":
        return sym(2, nat)
    if construction == "sym3":
        return sym(3, nat)
    if construction == "tensor_nat_dual":
        return tensor(nat, nat.dual())
    raise ValueError(f"Unknown construction: {construction}")


# Modular characters

def _catalog_records(spec: ModuleSpec, catalog) -> list:
    if catalog is None:
        return []
    return catalog.find_modules(spec)


def irreducible_character(spec: ModuleSpec, catalog=None) -> Character:
    """
    Character of L(lambda) in characteristic p.

    Resolution order: characteristic 0, Steinberg splitting of non-restricted
    weights, catalog records, then minuscule or lowest-alcove weights, which
    are irreducible Weyl modules.

    Args:
        spec: Module specification
        catalog: Object with a find_modules(spec) method, or None

    Returns:
        Character of the irreducible module

    Raises:
        UnknownModularDim: If no rule applies
    """
    return _irreducible_character(spec, catalog)


@lru_cache(maxsize=512)
def _irreducible_character(spec: ModuleSpec, catalog) -> Character:
    fr = spec.fr
    if spec.p == 0:
        return freudenthal_character(fr, spec.highest)

    if not spec.is_restricted:
        restricted = tuple(c % spec.p for c in spec.highest)
        rest = tuple(c // spec.p for c in spec.highest)
        low = _irreducible_character(ModuleSpec(fr, restricted, spec.p), catalog)
        high = _irreducible_character(ModuleSpec(fr, rest, spec.p, twisted=True), catalog)
        return tensor(low, frobenius_twist(high, spec.p))

    for record in _catalog_records(spec, catalog):
        if record.has_character():
            logger.debug(f"Character of {spec} from catalog record '{record.weight}'")
            return _character_from_record(spec, record, catalog)

    if is_minuscule(fr, spec.highest) or in_lowest_alcove(fr, spec.highest, spec.p):
        return freudenthal_character(fr, spec.highest)

    raise UnknownModularDim(f"No modular character data for {spec}")


def _character_from_record(spec: ModuleSpec, record, catalog) -> Character:
    fr, rank, p = spec.fr, spec.fr.rank, spec.p
    rs = build_root_system(fr)
    if record.irreducible:
        return freudenthal_character(fr, spec.highest)
    if record.orbits:
        dominant = []
        for term in record.orbits:
            mult = evaluate(term.mult, rank, p)
            if mult:
                dominant.append((parse_weight(term.weight, rank), mult))
        return character_from_dominant(rs, dominant)
    if record.tensor:
        result = None
        for factor in record.tensor:
            weight = parse_weight(factor.weight, rank)
            factor_char = _irreducible_character(ModuleSpec(fr, weight, p), catalog)
            if factor.twist:
                factor_char = frobenius_twist(factor_char, p ** factor.twist)
            result = factor_char if result is None else tensor(result, factor_char)
        return result
    mapping = defaultdict(int, freudenthal_character(fr, spec.highest).mapping)
    for term in record.subtract:
        mult = evaluate(term.mult, rank, p)
        if not mult:
            continue
        lower = parse_weight(term.weight, rank)
        if lower == spec.highest:
            raise MalformedCharacter(f"Catalog record for {spec} subtracts its own highest weight")
        factor = _irreducible_character(ModuleSpec(fr, lower, p), catalog)
        for w, m in factor.entries:
            mapping[w] -= mult * m
    return Character.from_mapping(rs, mapping)


def catalog_dim(spec: ModuleSpec, catalog=None) -> Optional[int]:
    """Catalog dimension expression evaluated for spec, if any."""
    for record in _catalog_records(spec, catalog):
        if record.dim is not None:
            return evaluate(record.dim, spec.fr.rank, spec.p)
    return None


def irreducible_dim(spec: ModuleSpec, catalog=None) -> int:
    """
    Dimension of L(lambda) in characteristic p.

    The catalog value is authoritative when listed; otherwise the dimension of
    irreducible_character is used.

    Raises:
        UnknownModularDim: For uncataloged genuinely modular cases
    """
    if spec.p == 0:
        return weyl_dim(spec.fr, spec.highest)
    if not spec.is_restricted:
        restricted = tuple(c % spec.p for c in spec.highest)
        rest = tuple(c // spec.p for c in spec.highest)
        return (irreducible_dim(ModuleSpec(spec.fr, restricted, spec.p), catalog)
                * irreducible_dim(ModuleSpec(spec.fr, rest, spec.p, twisted=True), catalog))
    listed = catalog_dim(spec, catalog)
    if listed is not None:
        return listed
    return irreducible_character(spec, catalog).dim
