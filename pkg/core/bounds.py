# core/bounds.py
"""Lower bounds s_lambda from standard subsystems of the simple roots."""
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import FrozenSet, List, Tuple

from core.character import subdominant_weights
from core.rootsys import Family, FamilyRank, NotDominant, Weight, build_root_system
from utils.logger import get_logger

logger = get_logger(__name__)


def weyl_group_order(kind: str, n: int) -> int:
    """Order of the Weyl group of an irreducible component of type kind ('A', 'BC', 'D')."""
    if n == 0:
        return 1
    if kind == "A":
        return math.factorial(n + 1)
    if kind == "BC":
        return 2 ** n * math.factorial(n)
    return 2 ** (n - 1) * math.factorial(n)


def root_count(kind: str, n: int) -> int:
    """Number of roots of an irreducible component of type kind."""
    if kind == "A":
        return n * (n + 1)
    if kind == "BC":
        return 2 * n * n
    return 2 * n * (n - 1)


def short_root_count(fr: FamilyRank) -> int:
    """|Phi_s|; every root counts as short in the simply laced types."""
    rank = fr.rank
    if fr.family == Family.B:
        return 2 * rank
    if fr.family == Family.C:
        return 2 * rank * (rank - 1)
    return root_count("A" if fr.family == Family.A else "D", rank)


@dataclass(frozen=True)
class Subsystem:
    """Standard subsystem spanned by the simple roots with the given 1-based indices."""
    fr: FamilyRank
    simple_root_subset: FrozenSet[int]

    @classmethod
    def of_weight(cls, fr: FamilyRank, weight: Weight) -> "Subsystem":
        """Psi(weight) = <alpha_i : a_i = 0>."""
        return cls(fr, frozenset(i for i, c in enumerate(weight, start=1) if c == 0))

    @cached_property
    def components(self) -> Tuple[Tuple[str, int], ...]:
        """Irreducible components of the sub-Dynkin diagram as (kind, rank)."""
        cartan = build_root_system(self.fr).cartan
        nodes = sorted(self.simple_root_subset)
        seen = set()
        found: List[Tuple[str, int]] = []
        for start in nodes:
            if start in seen:
                continue
            component = []
            stack = [start]
            seen.add(start)
            while stack:
                node = stack.pop()
                component.append(node)
                for other in nodes:
                    if other not in seen and cartan[node - 1][other - 1] != 0:
                        seen.add(other)
                        stack.append(other)
            degrees = [
                sum(1 for b in component if b != a and cartan[a - 1][b - 1] != 0)
                for a in component
            ]
            double = any(cartan[a - 1][b - 1] == -2 for a in component for b in component)
            if max(degrees, default=0) >= 3:
                kind = "D"
            elif double:
                kind = "BC"
            else:
                kind = "A"
            found.append((kind, len(component)))
        return tuple(sorted(found))

    @property
    def weyl_order(self) -> int:
        return math.prod(weyl_group_order(kind, n) for kind, n in self.components)

    @property
    def num_roots(self) -> int:
        return sum(root_count(kind, n) for kind, n in self.components)


def full_subsystem(fr: FamilyRank) -> Subsystem:
    return Subsystem(fr, frozenset(range(1, fr.rank + 1)))


def r_psi(fr: FamilyRank, sub: Subsystem) -> Fraction:
    """
    r_Psi = |W : W(Psi)| * |Phi \\ Psi| / (2 |Phi_s|).

    Args:
        fr: Family and rank
        sub: Standard subsystem

    Returns:
        Exact value of r_Psi
    """
    whole = full_subsystem(fr)
    index = Fraction(whole.weyl_order, sub.weyl_order)
    outside = whole.num_roots - sub.num_roots
    return index * outside / (2 * short_root_count(fr))


def s_lambda(fr: FamilyRank, weight: Weight) -> int:
    """
    Sum of r_Psi(mu) over the dominant weights mu below weight.

    The sum is rounded up. For type A it is a lower bound for nu. For
    types B, C and D it is advisory only: the engine records nu below it in
    flags["below_s_lambda"] and nothing else depends on it (B_l omega_1 has
    s_lambda = 2l-1 and nu = 1).

    Raises:
        NotDominant: If weight is not dominant
    """
    weight = tuple(weight)
    if any(c < 0 for c in weight):
        raise NotDominant(f"Weight {weight} is not dominant")
    total = sum((r_psi(fr, Subsystem.of_weight(fr, mu)) for mu in subdominant_weights(fr, weight)), Fraction(0))
    if total.denominator != 1:
        logger.debug(f"s_lambda for {fr} {weight} is {total}, rounded up")
    return math.ceil(total)
