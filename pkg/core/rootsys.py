# core/rootsys.py
"""Root systems of classical types in fundamental-weight coordinates.

Weights are integer tuples over the fundamental weights, roots are integer
tuples over the simple roots. The Cartan matrix follows the convention
``cartan[i][j] = <alpha_i, alpha_j^vee>``, so row ``i`` is ``alpha_i`` written
over the fundamental weights. Labelling is Bourbaki's.
"""
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, List, Optional, Tuple

from sympy import Matrix

from utils.logger import get_logger

logger = get_logger(__name__)

Weight = Tuple[int, ...]
RootVector = Tuple[int, ...]


class InvalidRank(ValueError):
    """Raised when a rank is outside the bounds of its family."""
    pass


class NotDominant(ValueError):
    """Raised when a dominant weight is required."""
    pass


class WeightFormatError(ValueError):
    """Raised when a weight cannot be parsed or has the wrong length."""
    pass


class Family(str, Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"


MIN_RANK = {Family.A: 1, Family.B: 3, Family.C: 2, Family.D: 4}


@dataclass(frozen=True)
class FamilyRank:
    """A classical family together with its rank."""
    family: Family
    rank: int

    def __post_init__(self):
        try:
            object.__setattr__(self, "family", Family(self.family))
        except ValueError:
            raise InvalidRank(f"Unknown family: {self.family}")
        if not isinstance(self.rank, int) or self.rank < MIN_RANK[self.family]:
            raise InvalidRank(
                f"Rank {self.rank} out of bounds for type {self.family.value} "
                f"(minimum {MIN_RANK[self.family]})"
            )

    @classmethod
    def parse(cls, text: str) -> "FamilyRank":
        """Parse a label such as 'C3'."""
        match = re.match(r"^\s*([ABCD])\s*(\d+)\s*$", text)
        if not match:
            raise InvalidRank(f"Invalid family/rank label: '{text}'")
        return cls(Family(match.group(1)), int(match.group(2)))

    @property
    def natural_dim(self) -> int:
        """Dimension of the natural module."""
        if self.family == Family.A:
            return self.rank + 1
        if self.family == Family.B:
            return 2 * self.rank + 1
        return 2 * self.rank

    def __str__(self) -> str:
        return f"{self.family.value}{self.rank}"


def cartan_matrix(family: Family, rank: int) -> Tuple[Tuple[int, ...], ...]:
    """
    Build the Cartan matrix of a classical type without rank validation.

    Args:
        family: Classical family
        rank: Rank (at least 2 for B/C, 3 for D)

    Returns:
        Cartan matrix as a tuple of rows
    """
    family = Family(family)
    a = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        a[i][i] = 2
    if family == Family.D:
        for i in range(rank - 2):
            a[i][i + 1] = a[i + 1][i] = -1
        a[rank - 3][rank - 1] = a[rank - 1][rank - 3] = -1
    else:
        for i in range(rank - 1):
            a[i][i + 1] = a[i + 1][i] = -1
        if family == Family.B:
            a[rank - 2][rank - 1] = -2
        elif family == Family.C:
            a[rank - 1][rank - 2] = -2
    return tuple(tuple(row) for row in a)


def half_norms(family: Family, rank: int) -> Tuple[Fraction, ...]:
    """Half squared lengths of the simple roots (1 for roots of type A length)."""
    norms = [Fraction(1)] * rank
    if family == Family.B:
        norms[-1] = Fraction(1, 2)
    elif family == Family.C:
        norms[-1] = Fraction(2)
    return tuple(norms)


@dataclass(frozen=True)
class RootSystem:
    """
    Root datum given by a Cartan matrix and simple root lengths.

    Works for any (possibly reducible or empty) finite type Cartan matrix, so
    Levi subsystems are RootSystems as well. ``family_rank`` is set only for
    the full classical systems.
    """
    cartan: Tuple[Tuple[int, ...], ...]
    norms: Tuple[Fraction, ...]
    family_rank: Optional[FamilyRank] = None

    @property
    def rank(self) -> int:
        return len(self.cartan)

    @cached_property
    def cartan_inverse(self) -> Tuple[Tuple[Fraction, ...], ...]:
        """Row i expands omega_i over the simple roots."""
        if self.rank == 0:
            return ()
        inverse = Matrix(self.cartan).inv()
        return tuple(
            tuple(Fraction(int(inverse[i, j].p), int(inverse[i, j].q)) for j in range(self.rank))
            for i in range(self.rank)
        )

    def simple_coords(self, weight: Weight) -> Tuple[Fraction, ...]:
        """Coefficients of a weight over the simple roots."""
        inv = self.cartan_inverse
        return tuple(
            sum((weight[i] * inv[i][j] for i in range(self.rank)), Fraction(0))
            for j in range(self.rank)
        )

    def root_to_weight(self, root: RootVector) -> Weight:
        """Write a root-lattice vector over the fundamental weights."""
        return tuple(
            sum(root[j] * self.cartan[j][i] for j in range(self.rank))
            for i in range(self.rank)
        )

    def inner(self, mu: Weight, nu: Weight) -> Fraction:
        """Invariant form, normalized so that roots of type A have squared length 2."""
        coords = self.simple_coords(mu)
        return sum((coords[j] * self.norms[j] * nu[j] for j in range(self.rank)), Fraction(0))

    def root_inner(self, root: RootVector, weight: Weight) -> Fraction:
        return sum((root[j] * self.norms[j] * weight[j] for j in range(self.rank)), Fraction(0))

    @cached_property
    def positive_roots(self) -> Tuple[RootVector, ...]:
        """Positive roots over the simple roots, sorted by height then coordinates."""
        n = self.rank
        simple = [tuple(1 if k == j else 0 for k in range(n)) for j in range(n)]
        roots = set(simple)
        layer = list(simple)
        while layer:
            next_layer = []
            for beta in layer:
                for i in range(n):
                    pairing = sum(beta[j] * self.cartan[j][i] for j in range(n))
                    down = 0
                    lowered = list(beta)
                    while True:
                        lowered[i] -= 1
                        if tuple(lowered) in roots:
                            down += 1
                        else:
                            break
                    if down - pairing > 0:
                        up = list(beta)
                        up[i] += 1
                        up = tuple(up)
                        if up not in roots:
                            roots.add(up)
                            next_layer.append(up)
            layer = next_layer
        return tuple(sorted(roots, key=lambda r: (sum(r), r)))

    @cached_property
    def positive_roots_as_weights(self) -> Tuple[Weight, ...]:
        return tuple(self.root_to_weight(r) for r in self.positive_roots)

    @cached_property
    def root_norms(self) -> Tuple[Fraction, ...]:
        """Squared lengths of the positive roots."""
        return tuple(
            self.root_inner(r, w) for r, w in zip(self.positive_roots, self.positive_roots_as_weights)
        )

    def coroot_pairing(self, weight: Weight, index: int) -> Fraction:
        """<weight, beta^vee> for the positive root with the given index."""
        root = self.positive_roots[index]
        return 2 * self.root_inner(root, weight) / self.root_norms[index]

    @property
    def rho(self) -> Weight:
        return tuple([1] * self.rank)

    @property
    def highest_root(self) -> RootVector:
        return self.positive_roots[-1] if self.positive_roots else ()

    def is_dominant(self, weight: Weight) -> bool:
        return all(c >= 0 for c in weight)

    def reflect(self, weight: Weight, i: int) -> Weight:
        """Simple reflection s_i (0-based index)."""
        c = weight[i]
        if c == 0:
            return tuple(weight)
        row = self.cartan[i]
        return tuple(weight[k] - c * row[k] for k in range(self.rank))

    def dominant_conjugate(self, weight: Weight) -> Weight:
        current = tuple(weight)
        while True:
            for i, c in enumerate(current):
                if c < 0:
                    current = self.reflect(current, i)
                    break
            else:
                return current

    def weyl_orbit(self, weight: Weight) -> List[Weight]:
        """All Weyl conjugates of a weight."""
        start = self.dominant_conjugate(weight)
        seen = {start}
        stack = [start]
        while stack:
            current = stack.pop()
            for i, c in enumerate(current):
                if c > 0:
                    image = self.reflect(current, i)
                    if image not in seen:
                        seen.add(image)
                        stack.append(image)
        return sorted(seen, reverse=True)

    def weyl_dim(self, weight: Weight) -> int:
        """Weyl dimension formula."""
        if not self.is_dominant(weight):
            raise NotDominant(f"Weight {weight} is not dominant")
        shifted = tuple(w + 1 for w in weight)
        value = Fraction(1)
        for root in self.positive_roots:
            value *= self.root_inner(root, shifted) / self.root_inner(root, self.rho)
        if value.denominator != 1:
            raise ArithmeticError(f"Non-integral Weyl dimension for {weight}: {value}")
        return int(value)


@lru_cache(maxsize=None)
def classical_root_system(family: Family, rank: int) -> RootSystem:
    """Root system of a classical type without the rank-bound check (used for isogenies)."""
    family = Family(family)
    fr = None
    if rank >= MIN_RANK[family]:
        fr = FamilyRank(family, rank)
    return RootSystem(cartan=cartan_matrix(family, rank), norms=half_norms(family, rank), family_rank=fr)


def build_root_system(fr: FamilyRank) -> RootSystem:
    """
    Build the full root datum of a classical group.

    Args:
        fr: Family and rank (validated on construction)

    Returns:
        RootSystem with positive roots sorted by height
    """
    if not isinstance(fr, FamilyRank):
        raise InvalidRank(f"Expected FamilyRank, got {fr!r}")
    return classical_root_system(fr.family, fr.rank)


def pairing(weight: Weight, coroot_index: int) -> int:
    """<weight, alpha_i^vee> for a 1-based simple coroot index."""
    return weight[coroot_index - 1]


def w0_image(fr: FamilyRank, weight: Weight) -> Weight:
    """
    Image of a weight under the longest Weyl group element.

    Args:
        fr: Family and rank
        weight: Weight in fundamental coordinates

    Returns:
        w0(weight)
    """
    negated = tuple(-c for c in weight)
    if fr.family == Family.A:
        return tuple(reversed(negated))
    if fr.family == Family.D and fr.rank % 2 == 1:
        return negated[:-2] + (negated[-1], negated[-2])
    return negated


def expand_over_simple_roots(fr: FamilyRank, weight: Weight) -> Tuple[Fraction, ...]:
    """Exact coefficients c_i with weight = sum c_i alpha_i."""
    return build_root_system(fr).simple_coords(weight)


@lru_cache(maxsize=None)
def fundamental_weights_epsilon(fr: FamilyRank) -> Tuple[Tuple[Fraction, ...], ...]:
    """Fundamental weights in the standard coordinates of the natural module's diagonal torus."""
    n = fr.rank + 1 if fr.family == Family.A else fr.rank
    half = Fraction(1, 2)
    rows = []
    for i in range(1, fr.rank + 1):
        row = [Fraction(1) if k < i else Fraction(0) for k in range(n)]
        if fr.family == Family.B and i == fr.rank:
            row = [half] * n
        elif fr.family == Family.D and i == fr.rank:
            row = [half] * n
        elif fr.family == Family.D and i == fr.rank - 1:
            row = [half] * (n - 1) + [-half]
        rows.append(tuple(row))
    return tuple(rows)


@lru_cache(maxsize=None)
def simple_roots_epsilon(fr: FamilyRank) -> Tuple[Tuple[int, ...], ...]:
    """Simple roots in the standard coordinates."""
    n = fr.rank + 1 if fr.family == Family.A else fr.rank
    rows = []
    for i in range(fr.rank):
        row = [0] * n
        if i < n - 1 and not (fr.family != Family.A and i == fr.rank - 1):
            row[i], row[i + 1] = 1, -1
        if i == fr.rank - 1:
            if fr.family == Family.B:
                row = [0] * n
                row[-1] = 1
            elif fr.family == Family.C:
                row = [0] * n
                row[-1] = 2
            elif fr.family == Family.D:
                row = [0] * n
                row[-2], row[-1] = 1, 1
        rows.append(tuple(row))
    return tuple(rows)


def to_epsilon(fr: FamilyRank, weight: Weight) -> Tuple[Fraction, ...]:
    """Weight in standard coordinates."""
    basis = fundamental_weights_epsilon(fr)
    n = len(basis[0])
    return tuple(sum((weight[i] * basis[i][k] for i in range(fr.rank)), Fraction(0)) for k in range(n))


_TERM_RE = re.compile(r"^(\d*)om(?:(\d+)|(l)|\(l-(\d+)\))$")


def parse_weight(text, rank: int) -> Weight:
    """
    Parse a weight written as 'om1+2om3', 'oml', 'om(l-1)', '0' or '0,1,0'.

    Args:
        text: Weight text or sequence of integers
        rank: Rank used for length and for 'l'

    Returns:
        Weight tuple of length rank
    """
    if isinstance(text, (list, tuple)):
        coords = tuple(int(c) for c in text)
    else:
        text = str(text).replace(" ", "").strip("()")
        if "," in text:
            try:
                coords = tuple(int(c) for c in text.split(","))
            except ValueError:
                raise WeightFormatError(f"Invalid weight coordinates: '{text}'")
        elif text == "0":
            coords = tuple([0] * rank)
        else:
            values = [0] * rank
            for term in text.split("+"):
                match = _TERM_RE.match(term)
                if not match:
                    raise WeightFormatError(f"Invalid weight term '{term}' in '{text}'")
                coeff = int(match.group(1)) if match.group(1) else 1
                if match.group(2):
                    index = int(match.group(2))
                elif match.group(3):
                    index = rank
                else:
                    index = rank - int(match.group(4))
                if not 1 <= index <= rank:
                    raise WeightFormatError(f"Index {index} out of range in '{text}' for rank {rank}")
                values[index - 1] += coeff
            coords = tuple(values)
    if len(coords) != rank:
        raise WeightFormatError(f"Weight {coords} has length {len(coords)}, expected {rank}")
    return coords


def format_weight(weight: Weight) -> str:
    """Inverse of parse_weight for display ('om1+2om3' or '0')."""
    terms = []
    for i, c in enumerate(weight, start=1):
        if c == 1:
            terms.append(f"om{i}")
        elif c != 0:
            terms.append(f"{c}om{i}")
    return "+".join(terms) if terms else "0"
