# core/semisimple.py
"""
Eigenspaces of non-central semisimple elements on a character.

A torus element is recorded by the exponents of its diagonal entries on the
natural module as powers of a primitive M-th root of unity. Only the values
of the simple roots matter for eigenspace dimensions, so the search reads
the value of a weight mu from the simple-root coordinates of lambda - mu.
"""
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from sympy import primerange

from core.character import Character, ModuleSpec
from core.expressions import evaluate
from core.models import SearchConfig, WitnessRecord
from core.rootsys import (
    Family, FamilyRank, Weight, build_root_system, simple_roots_epsilon, to_epsilon,
)
from utils.logger import get_logger

logger = get_logger(__name__)


class SymbolicUnsupported(ValueError):
    """Raised when a torus element without a concrete root-of-unity order is evaluated."""
    pass


class ConfigError(ValueError):
    """Raised when the search configuration leaves nothing to evaluate."""
    pass


@dataclass(frozen=True)
class TorusClass:
    """
    Diagonal torus element diag(zeta^t_1, ...) with zeta a primitive modulus-th root of unity.

    For A the exponents are the l+1 diagonal entries. For B, C and D they are
    the first l entries; the remaining ones are their inverses (and 1 in the
    middle for B).
    """
    fr: FamilyRank
    exponents: Tuple[int, ...]
    modulus: Optional[int]
    label: str = ""

    def __post_init__(self):
        expected = self.fr.rank + 1 if self.fr.family == Family.A else self.fr.rank
        if len(self.exponents) != expected:
            raise ValueError(f"{self.fr} torus element needs {expected} exponents, got {len(self.exponents)}")
        if self.modulus is not None:
            if self.modulus < 1:
                raise ValueError(f"Invalid modulus {self.modulus}")
            object.__setattr__(self, "exponents", tuple(int(t) % self.modulus for t in self.exponents))

    @classmethod
    def from_blocks(cls, fr: FamilyRank, blocks: Sequence[Tuple[int, int]], modulus: Optional[int],
                    label: str = "") -> "TorusClass":
        """Build from (exponent, size) blocks."""
        exponents: List[int] = []
        for exponent, size in blocks:
            if size < 0:
                raise ValueError(f"Negative block size {size}")
            exponents.extend([exponent] * size)
        return cls(fr, tuple(exponents), modulus, label)

    @property
    def blocks(self) -> List[Tuple[int, int]]:
        """Runs of equal exponents as (exponent, size)."""
        out: List[Tuple[int, int]] = []
        for t in self.exponents:
            if out and out[-1][0] == t:
                out[-1] = (t, out[-1][1] + 1)
            else:
                out.append((t, 1))
        return out

    def root_values(self) -> Tuple[int, ...]:
        """Exponents of alpha_1(s), ..., alpha_l(s)."""
        if self.modulus is None:
            raise SymbolicUnsupported(f"Torus element '{self.label}' has no concrete order")
        roots = simple_roots_epsilon(self.fr)
        return tuple(sum(r * t for r, t in zip(row, self.exponents)) % self.modulus for row in roots)

    def __str__(self) -> str:
        body = ",".join(str(t) for t in self.exponents)
        order = "?" if self.modulus is None else str(self.modulus)
        return self.label or f"diag({body})/{order}"


def evaluate_weight(s: TorusClass, mu: Weight) -> Fraction:
    """
    Exponent of mu(s) as a residue modulo s.modulus.

    Spin weights give half-integral exponents, which stand for a square root
    fixed by the lift of s to the simply connected group.

    Raises:
        SymbolicUnsupported: If s has no concrete order
    """
    if s.modulus is None:
        raise SymbolicUnsupported(f"Torus element '{s.label}' has no concrete order")
    coords = to_epsilon(s.fr, tuple(mu))
    value = sum((c * t for c, t in zip(coords, s.exponents)), Fraction(0))
    return value % s.modulus


def eigen_multiset(char: Character, s: TorusClass) -> Dict[Fraction, int]:
    """
    Group the weights of a character by their value on s.

    Returns:
        Mapping from eigenvalue exponent to multiplicity
    """
    out: Dict[Fraction, int] = defaultdict(int)
    for weight, mult in char.entries:
        out[evaluate_weight(s, weight)] += mult
    return dict(out)


def is_central(s: TorusClass) -> bool:
    """True iff every simple root is trivial on s."""
    return not any(s.root_values())


def central_level_scalar(spec: ModuleSpec, i: int, j: int) -> int:
    """
    Exponent e(j) such that the cocharacter of Z(L_i) acts on level j as c^e(j).

    The cocharacter is the smallest multiple d of the fundamental coweight
    omega_i^vee that is integral on the weight lattice, so e(j) = d (c_i(lambda) - j).
    """
    rs = build_root_system(spec.fr)
    column = [row[i - 1] for row in rs.cartan_inverse]
    d = 1
    for entry in column:
        d = d * entry.denominator // math.gcd(d, entry.denominator)
    top = rs.simple_coords(spec.highest)[i - 1]
    value = d * (top - j)
    if value.denominator != 1:
        raise ArithmeticError(f"Non-integral central scalar {value}")
    return int(value)


# Search

def _canonical_exponents(fr: FamilyRank, r: int) -> Tuple[int, Iterator[Tuple[int, ...]]]:
    """Modulus and exponent tuples covering every homomorphism of order r up to the Weyl group."""
    rank = fr.rank
    if fr.family == Family.A:
        return r, ((0,) + combo for combo in combinations_with_replacement(range(r), rank))
    if fr.family == Family.B:
        return r, combinations_with_replacement(range(r // 2 + 1), rank)
    if r == 2:
        # Exponents modulo 4 of equal parity
        def even_odd():
            yield from (tuple(2 * c for c in combo) for combo in combinations_with_replacement((0, 1), rank))
            yield (1,) * rank
            if fr.family == Family.D:
                yield (1,) * (rank - 1) + (3,)
        return 4, even_odd()

    def absolute():
        for combo in combinations_with_replacement(range((r - 1) // 2 + 1), rank):
            yield combo
            if fr.family == Family.D and 0 not in combo:
                yield combo[:-1] + (r - combo[-1],)
    return r, absolute()


def _level_matrix(char: Character, highest: Weight) -> Tuple[np.ndarray, np.ndarray]:
    rs = char.root_system
    rows, mults = [], []
    for weight, mult in char.entries:
        coords = rs.simple_coords(tuple(a - b for a, b in zip(highest, weight)))
        if any(c.denominator != 1 for c in coords):
            raise ValueError(f"Weight {weight} is not in the root lattice coset of {highest}")
        rows.append([int(c) for c in coords])
        mults.append(mult)
    return np.array(rows, dtype=np.int64), np.array(mults, dtype=np.int64)


@dataclass(frozen=True)
class SemisimpleMax:
    max_dim: int
    witness: TorusClass
    eigenvalue: Fraction
    source: str


def _best_rows(root_values: np.ndarray, coords: np.ndarray, mults: np.ndarray, modulus: int,
               chunk_size: int) -> Tuple[int, int, int]:
    """Best (dimension, row, value) over the rows of root_values; first maximum wins."""
    if coords.shape[0] == 0:
        return 0, -1, -1
    best = (-1, -1, -1)
    for start in range(0, root_values.shape[0], chunk_size):
        chunk = root_values[start:start + chunk_size]
        values = (chunk @ coords.T) % modulus
        offsets = (np.arange(chunk.shape[0], dtype=np.int64) * modulus)[:, None]
        counts = np.bincount(
            (values + offsets).ravel(),
            weights=np.tile(mults, chunk.shape[0]),
            minlength=chunk.shape[0] * modulus,
        ).reshape(chunk.shape[0], modulus)
        per_row = counts.max(axis=1)
        row = int(np.argmax(per_row))
        if per_row[row] > best[0]:
            best = (int(per_row[row]), start + row, int(np.argmax(counts[row])))
    return best


def _witness_torus(record: WitnessRecord, fr: FamilyRank, search: SearchConfig) -> Optional[TorusClass]:
    rank = fr.rank
    if record.modulus == "generic":
        modulus = search.generic_modulus
    else:
        modulus = evaluate(record.modulus, rank, 0)
    blocks = [(evaluate(b.exponent, rank, 0), evaluate(b.size, rank, 0)) for b in record.blocks]
    try:
        s = TorusClass.from_blocks(fr, blocks, modulus, record.label)
    except ValueError as e:
        logger.warning(f"Witness '{record.label}' does not fit {fr}: {str(e)}")
        return None
    if fr.family == Family.A and sum(s.exponents) % modulus:
        logger.debug(f"Witness '{record.label}' skipped: determinant is not 1")
        return None
    return s


def max_eigenspace_semisimple(spec: ModuleSpec, search: SearchConfig, char: Character,
                              witnesses: Sequence[WitnessRecord] = ()) -> SemisimpleMax:
    """
    Largest eigenspace of a non-central semisimple element on a character.

    Sweeps every prime order r <= search.max_prime_order with r != p, then the
    catalog witnesses. The first maximum found wins.

    Args:
        spec: Module specification (highest weight and characteristic)
        search: Search parameters
        char: Character of L(lambda) in characteristic p
        witnesses: Catalog witness records for the family

    Returns:
        SemisimpleMax with witness element and eigenvalue exponent

    Raises:
        ConfigError: If nothing was evaluated
    """
    fr, p = spec.fr, spec.p
    coords, mults = _level_matrix(char, spec.highest)
    simple = np.array(simple_roots_epsilon(fr), dtype=np.int64)
    best: Optional[SemisimpleMax] = None
    evaluated = 0

    def consider(dim: int, s: TorusClass, weight_index: int, source: str):
        nonlocal best
        if best is None or dim > best.max_dim:
            value = Fraction(0)
            if weight_index >= 0:
                for k, (weight, _) in enumerate(char.entries):
                    rel = int(-(coords[k] @ np.array(s.root_values(), dtype=np.int64))) % s.modulus
                    if rel == weight_index:
                        value = evaluate_weight(s, weight)
                        break
            best = SemisimpleMax(dim, s, value, source)

    if not search.witness_catalog_only:
        for r in primerange(2, search.max_prime_order + 1):
            if r == p:
                continue
            modulus, candidates = _canonical_exponents(fr, r)
            tuples = list(candidates)
            if search.max_block_shapes:
                tuples = tuples[:search.max_block_shapes]
            if not tuples:
                continue
            exps = np.array(tuples, dtype=np.int64)
            root_values = (exps @ simple.T) % modulus
            keep = np.any(root_values != 0, axis=1)
            exps, root_values = exps[keep], root_values[keep]
            if not len(exps):
                continue
            evaluated += len(exps)
            # Negated coordinates give the exponent of mu(s) relative to lambda(s)
            dim, row, value = _best_rows((-root_values) % modulus, coords, mults, modulus, search.chunk_size)
            if row >= 0:
                s = TorusClass(fr, tuple(int(t) for t in exps[row]), modulus)
                consider(dim, s, value, f"sweep:r={r}")

    for record in witnesses:
        s = _witness_torus(record, fr, search)
        if s is None:
            continue
        if p and math.gcd(s.modulus, p) > 1:
            logger.debug(f"Witness '{record.label}' skipped: order divisible by p={p}")
            continue
        if is_central(s):
            continue
        evaluated += 1
        root_values = np.array([s.root_values()], dtype=np.int64)
        dim, _, value = _best_rows((-root_values) % s.modulus, coords, mults, s.modulus, 1)
        consider(dim, s, value, "witness")

    if best is None or evaluated == 0:
        raise ConfigError(f"Semisimple search for {spec} evaluated no non-central element")
    logger.debug(f"max_s for {spec}: {best.max_dim} at {best.witness} ({best.source})")
    return best
