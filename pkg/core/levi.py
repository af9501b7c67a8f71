# core/levi.py
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from core.character import Character, MalformedCharacter, freudenthal_character
from core.rootsys import (
    Family, FamilyRank, RootSystem, Weight,
    expand_over_simple_roots, w0_image,
)
from utils.logger import get_logger

logger = get_logger(__name__)


class InconsistentLevel(ValueError):
    """Raised when a level does not decompose into Levi Weyl characters."""
    pass


class NotSelfDual(ValueError):
    """Raised when level duality is requested for a module that is not self-dual."""
    pass


@lru_cache(maxsize=None)
def levi_root_system(rs: RootSystem, i: int) -> RootSystem:
    """
    Root system of [L_i, L_i], the Levi factor for the simple roots other than alpha_i.

    Args:
        rs: Ambient root system
        i: 1-based index of the removed simple root

    Returns:
        Levi root system (possibly reducible)
    """
    keep = [k for k in range(rs.rank) if k != i - 1]
    cartan = tuple(tuple(rs.cartan[a][b] for b in keep) for a in keep)
    norms = tuple(rs.norms[k] for k in keep)
    return RootSystem(cartan=cartan, norms=norms)


def restrict_weight(weight: Weight, i: int) -> Weight:
    """Restriction to the Levi torus: drop the i-th fundamental coordinate."""
    return tuple(weight[:i - 1]) + tuple(weight[i:])


def max_level(fr: FamilyRank, highest: Weight, i: int) -> int:
    """
    Maximal alpha_i-level e_i(lambda): the alpha_i-coefficient of lambda - w0(lambda).

    Args:
        fr: Family and rank
        highest: Highest weight lambda
        i: 1-based simple root index

    Returns:
        e_i(lambda)
    """
    if not 1 <= i <= fr.rank:
        raise ValueError(f"Simple root index {i} out of range for {fr}")
    diff = tuple(a - b for a, b in zip(highest, w0_image(fr, highest)))
    value = expand_over_simple_roots(fr, diff)[i - 1]
    if value.denominator != 1:
        raise ArithmeticError(f"Non-integral level {value} for {highest}")
    return int(value)


def closed_form_max_level(fr: FamilyRank, highest: Weight, i: int) -> Optional[int]:
    """Closed forms of e_1 for all families and e_l for type C; None elsewhere."""
    d = highest
    rank = fr.rank
    if i == 1:
        if fr.family == Family.A:
            return sum(d)
        if fr.family == Family.B:
            return 2 * sum(d[:rank - 1]) + d[rank - 1]
        if fr.family == Family.C:
            return 2 * sum(d)
        return 2 * sum(d[:rank - 2]) + d[rank - 2] + d[rank - 1]
    if i == rank and fr.family == Family.C:
        return sum(j * d[j - 1] for j in range(1, rank + 1))
    return None


@dataclass(frozen=True)
class LevelDecomposition:
    """Restriction of a character to [L_i, L_i], graded by alpha_i-level."""
    fr: FamilyRank
    highest: Weight
    i: int
    levels: Tuple[Character, ...]

    @property
    def max_level(self) -> int:
        return len(self.levels) - 1

    def dims(self) -> List[int]:
        return [level.dim for level in self.levels]


def level_decompose(char: Character, i: int, highest: Optional[Weight] = None) -> LevelDecomposition:
    """
    Partition a character by the alpha_i-coordinate of lambda - mu.

    Args:
        char: Full character of L(lambda) over a classical root system
        i: 1-based simple root index
        highest: lambda; defaults to the highest weight of the character

    Returns:
        LevelDecomposition with e_i(lambda) + 1 levels

    Raises:
        MalformedCharacter: If a weight lies outside the lambda-cone
    """
    rs = char.root_system
    fr = rs.family_rank
    if fr is None:
        raise MalformedCharacter("Level decomposition needs a classical root system")
    if highest is None:
        highest = max(char.dominant_part(), key=lambda w: (sum(rs.simple_coords(w)), w))
    highest = tuple(highest)
    top = max_level(fr, highest, i)
    levi = levi_root_system(rs, i)
    buckets: List[Dict[Weight, int]] = [defaultdict(int) for _ in range(top + 1)]
    for weight, mult in char.entries:
        coords = rs.simple_coords(tuple(a - b for a, b in zip(highest, weight)))
        if any(c.denominator != 1 or c < 0 for c in coords):
            raise MalformedCharacter(f"Weight {weight} is not below {highest}")
        level = int(coords[i - 1])
        if level > top:
            raise MalformedCharacter(f"Weight {weight} has level {level} above e_{i} = {top}")
        buckets[level][restrict_weight(weight, i)] += mult
    levels = tuple(Character.from_mapping(levi, bucket) for bucket in buckets)
    return LevelDecomposition(fr=fr, highest=highest, i=i, levels=levels)


def decompose_level(level: Character) -> Dict[Weight, int]:
    """
    Greedy highest-weight stripping of a level into Levi Weyl characters.

    The maximal weight is taken by height over the Levi simple roots, ties
    broken by the lexicographically largest coordinates.

    Args:
        level: Character over a Levi root system

    Returns:
        Mapping of Levi dominant highest weights to multiplicities

    Raises:
        InconsistentLevel: On a negative remainder
    """
    rs = level.root_system
    remaining = dict(level.mapping)
    factors: Dict[Weight, int] = {}
    while remaining:
        top = max(remaining, key=lambda w: (sum(rs.simple_coords(w), Fraction(0)), w))
        mult = remaining[top]
        if not rs.is_dominant(top):
            raise InconsistentLevel(f"Maximal weight {top} is not dominant")
        factors[top] = factors.get(top, 0) + mult
        for weight, m in freudenthal_character(rs, top).entries:
            value = remaining.get(weight, 0) - mult * m
            if value < 0:
                raise InconsistentLevel(f"Negative remainder at {weight} after stripping {top}")
            if value:
                remaining[weight] = value
            else:
                remaining.pop(weight, None)
    return factors


def check_level_duality(dec: LevelDecomposition) -> bool:
    """
    Check that level e - j is the dual of level j for every j.

    Raises:
        NotSelfDual: If w0(lambda) != -lambda
    """
    if w0_image(dec.fr, dec.highest) != tuple(-c for c in dec.highest):
        raise NotSelfDual(f"L({dec.highest}) is not self-dual for {dec.fr}")
    top = dec.max_level
    for j, level in enumerate(dec.levels):
        if dec.levels[top - j].mapping != level.dual().mapping:
            logger.debug(f"Level {j} and level {top - j} are not dual")
            return False
    return True
