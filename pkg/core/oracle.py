# core/oracle.py
"""
Brute-force eigenspace dimensions from explicit matrices over prime fields.

The natural module uses the basis e_1..e_l, (e_0 for B), f_l..f_1 with the
symplectic or orthogonal form pairing e_i with f_i. Characteristic-0 values
are computed over two primes q = 1 mod N larger than the dimension, and the
two results must agree.
"""
import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime, primitive_root
from tenacity import retry, retry_if_exception_type, stop_after_attempt

from core.character import CONSTRUCTIONS, construction_character
from core.linalg import (
    MAX_MODULUS, inverse_mod_p, jordan_blocks_of_unipotent, kron_mod, row_echelon_rank,
    sym_power_matrix, wedge_power_matrix,
)
from core.models import OracleCaseResult
from core.rootsys import Family, FamilyRank
from core.semisimple import TorusClass, eigen_multiset
from core.unipotent import construction_jordan, fixed_dim
from utils.logger import get_logger

logger = get_logger(__name__)

DEFAULT_MAX_DIM = 3000


class TooLarge(ValueError):
    """Raised when a construction exceeds the oracle dimension cap."""
    pass


class FieldUnavailable(ValueError):
    """Raised when no prime field carries the required roots of unity."""
    pass


class RankDisagreement(ArithmeticError):
    """Raised when two primes give different characteristic-0 ranks."""
    pass


def construction_dim(fr: FamilyRank, construction: str) -> int:
    n = fr.natural_dim
    dims = {
        "natural": n,
        "wedge2": comb(n, 2),
        "wedge3": comb(n, 3),
        "sym2": comb(n + 1, 2),
        "sym3": comb(n + 2, 3),
        "tensor_nat_dual": n * n,
    }
    if construction not in dims:
        raise ValueError(f"Unknown construction: {construction}")
    return dims[construction]


def field_primes(modulus: int, minimum: int, count: int = 2, skip: int = 0) -> List[int]:
    """
    Primes q = 1 mod modulus with q > minimum.

    Args:
        modulus: Required order of roots of unity
        minimum: Exclusive lower bound for q
        count: Number of primes returned
        skip: Number of qualifying primes passed over first

    Raises:
        FieldUnavailable: If the primes exceed the supported modulus range
    """
    found: List[int] = []
    k = max(1, minimum // modulus)
    while len(found) < count + skip:
        q = k * modulus + 1
        if q >= MAX_MODULUS:
            raise FieldUnavailable(f"No prime q = 1 mod {modulus} above {minimum} below {MAX_MODULUS}")
        if q > minimum and isprime(q):
            found.append(q)
        k += 1
    return found[skip:]


def root_of_unity(order: int, q: int) -> int:
    """A primitive order-th root of unity in F_q."""
    if (q - 1) % order:
        raise FieldUnavailable(f"F_{q} has no primitive {order}-th root of unity")
    return pow(int(primitive_root(q)), (q - 1) // order, q)


@dataclass
class MatrixModel:
    """A classical group acting on a construction over its natural module, over F_q."""
    fr: FamilyRank
    construction: str
    q: int
    p: int

    @property
    def natural_dim(self) -> int:
        return self.fr.natural_dim

    @property
    def dim(self) -> int:
        return construction_dim(self.fr, self.construction)

    def gram(self) -> Optional[np.ndarray]:
        """Gram matrix of the defining form on the natural module (None for A)."""
        n, rank = self.natural_dim, self.fr.rank
        if self.fr.family == Family.A:
            return None
        G = np.zeros((n, n), dtype=np.int64)
        if self.fr.family == Family.C:
            for i in range(1, rank + 1):
                G[i - 1, n - i] = 1
                G[n - i, i - 1] = self.q - 1
            return G
        for i in range(n):
            G[i, n - 1 - i] = 1
        return G

    def preserves_form(self, g: np.ndarray) -> bool:
        G = self.gram()
        if G is None:
            return True
        image = (g.T % self.q) @ G % self.q @ (g % self.q) % self.q
        return bool(np.array_equal(image, G))

    def torus_element(self, s: TorusClass) -> Tuple[np.ndarray, int]:
        """Diagonal matrix of s on the natural module and the root of unity used."""
        if s.modulus is None:
            raise FieldUnavailable("Symbolic torus elements have no matrix")
        zeta = root_of_unity(s.modulus, self.q)
        powers = [pow(zeta, t, self.q) for t in s.exponents]
        if self.fr.family == Family.A:
            diagonal = powers
        else:
            inverses = [pow(x, self.q - 2, self.q) for x in powers]
            middle = [1] if self.fr.family == Family.B else []
            diagonal = powers + middle + list(reversed(inverses))
        return np.diag(np.array(diagonal, dtype=np.int64)), zeta

    def root_element(self, which: str) -> np.ndarray:
        """Matrix of the root element class representative on the natural module."""
        n, rank, q = self.natural_dim, self.fr.rank, self.q
        u = np.eye(n, dtype=np.int64)
        family = self.fr.family
        if family == Family.A:
            u[0, 1] = 1
        elif family == Family.C and which == "alpha_ell":
            u[0, n - 1] = 1
        elif family == Family.B and which == "alpha_1":
            # x_{e_l}(1) with B(e_0, e_0) = 1
            u[rank - 1, rank] = 2
            u[rank, rank + 1] = q - 2
            u[rank - 1, rank + 1] = q - 2
        else:
            u[0, 1] = 1
            u[n - 2, n - 1] = q - 1
        return u % q

    def lift(self, g: np.ndarray) -> np.ndarray:
        """Matrix of a natural-module element on the construction."""
        q = self.q
        if self.construction == "natural":
            return g % q
        if self.construction in ("wedge2", "wedge3"):
            return wedge_power_matrix(g, int(self.construction[-1]), q)
        if self.construction in ("sym2", "sym3"):
            return sym_power_matrix(g, int(self.construction[-1]), q)
        return kron_mod(g, inverse_mod_p(g, q).T, q)


def build_model(fr: FamilyRank, construction: str, p_target: int, order: int = 1,
                max_dim: int = DEFAULT_MAX_DIM, skip: int = 0) -> MatrixModel:
    """
    Matrix model over F_p, or over a prime q = 1 mod order above the dimension when p_target = 0.

    Raises:
        TooLarge: If the construction exceeds max_dim
        FieldUnavailable: If F_p lacks the roots of unity of the given order
    """
    if construction not in CONSTRUCTIONS:
        raise ValueError(f"Unknown construction: {construction}")
    dim = construction_dim(fr, construction)
    if dim > max_dim:
        raise TooLarge(f"{construction} of {fr} has dimension {dim} > {max_dim}")
    if p_target:
        if (p_target - 1) % order:
            raise FieldUnavailable(f"F_{p_target} has no primitive {order}-th root of unity")
        return MatrixModel(fr, construction, p_target, p_target)
    q = field_primes(order, max(dim, order), count=1, skip=skip)[0]
    return MatrixModel(fr, construction, q, 0)


def eigenspace_dim(model: MatrixModel, element: np.ndarray, eigenvalue: int) -> int:
    """n - rank(element - eigenvalue * I) over F_q."""
    n = element.shape[0]
    shifted = (element - eigenvalue * np.eye(n, dtype=np.int64)) % model.q
    return n - row_echelon_rank(shifted, model.q)


class TwoPrimeOracle:
    """Runs a characteristic-0 computation over two primes and requires agreement."""

    def __init__(self, fr: FamilyRank, construction: str, order: int, max_dim: int = DEFAULT_MAX_DIM):
        self.fr = fr
        self.construction = construction
        self.order = order
        self.max_dim = max_dim
        self.attempts = 0

    @retry(stop=stop_after_attempt(3), retry=retry_if_exception_type(RankDisagreement), reraise=True)
    def run(self, compute: Callable[[MatrixModel], Dict[str, int]]) -> Dict[str, int]:
        skip = 2 * self.attempts
        self.attempts += 1
        first = build_model(self.fr, self.construction, 0, self.order, self.max_dim, skip=skip)
        second = build_model(self.fr, self.construction, 0, self.order, self.max_dim, skip=skip + 1)
        a, b = compute(first), compute(second)
        if a != b:
            logger.warning(f"Rank disagreement over F_{first.q} and F_{second.q}: {a} != {b}")
            raise RankDisagreement(f"F_{first.q} and F_{second.q} disagree for {self.construction} of {self.fr}")
        return a


def run_oracle(fr: FamilyRank, construction: str, p: int, order: int,
               compute: Callable[[MatrixModel], Dict[str, int]], max_dim: int = DEFAULT_MAX_DIM) -> Dict[str, int]:
    if p:
        return compute(build_model(fr, construction, p, order, max_dim))
    return TwoPrimeOracle(fr, construction, order, max_dim).run(compute)


# Cases

@dataclass(frozen=True)
class OracleCase:
    case_id: str
    fr: FamilyRank
    construction: str
    p: int
    element: str
    torus: Optional[TorusClass] = None
    which: Optional[str] = None


_CASE_RE = re.compile(
    r"^(?P<id>\S+)\s+(?P<fr>[ABCD]\d+)\s+(?P<construction>\w+)\s+(?P<p>\d+)\s+"
    r"(?:torus:(?P<exps>-?\d+(?:,-?\d+)*)/(?P<mod>\d+)|root:(?P<which>alpha_1|alpha_ell))\s*$"
)


def parse_case_line(line: str) -> Optional[OracleCase]:
    """
    Parse one case line; blank lines and comments give None.

    Raises:
        ValueError: On malformed lines
    """
    text = line.split("#", 1)[0].strip()
    if not text:
        return None
    match = _CASE_RE.match(text)
    if not match:
        raise ValueError(f"Malformed oracle case line: '{line.strip()}'")
    fr = FamilyRank.parse(match.group("fr"))
    construction = match.group("construction")
    if construction not in CONSTRUCTIONS:
        raise ValueError(f"Unknown construction '{construction}' in case {match.group('id')}")
    element = text.split()[-1]
    if match.group("which"):
        return OracleCase(match.group("id"), fr, construction, int(match.group("p")), element,
                          which=match.group("which"))
    exponents = tuple(int(t) for t in match.group("exps").split(","))
    modulus = int(match.group("mod"))
    if fr.family == Family.A and sum(exponents) % modulus:
        raise ValueError(f"Case {match.group('id')}: diagonal entries must have product 1")
    torus = TorusClass(fr, exponents, modulus)
    return OracleCase(match.group("id"), fr, construction, int(match.group("p")), element, torus=torus)


def parse_cases(lines: Sequence[str]) -> List[OracleCase]:
    return [case for case in (parse_case_line(line) for line in lines) if case is not None]


def _torus_expected(case: OracleCase) -> Dict[Fraction, int]:
    char = construction_character(case.fr, case.construction)
    return eigen_multiset(char, case.torus)


def check_case(case: OracleCase, max_dim: int = DEFAULT_MAX_DIM) -> OracleCaseResult:
    """
    Compare the formula path with the oracle for one case.

    Torus cases compare every eigenvalue multiplicity; root cases compare the
    fixed-space dimension and the Jordan type.
    """
    base = dict(case_id=case.case_id, family=case.fr.family.value, rank=case.fr.rank,
                construction=case.construction, p=case.p, element=case.element)
    try:
        if case.torus is not None:
            expected_raw = _torus_expected(case)
            if any(value.denominator != 1 for value in expected_raw):
                raise FieldUnavailable("Half-integral eigenvalue exponents")
            expected = {str(int(k)): v for k, v in expected_raw.items()}

            def compute(model: MatrixModel) -> Dict[str, int]:
                g, zeta = model.torus_element(case.torus)
                lifted = model.lift(g)
                return {k: eigenspace_dim(model, lifted, pow(zeta, int(k), model.q)) for k in expected}

            observed = run_oracle(case.fr, case.construction, case.p, case.torus.modulus, compute, max_dim)
        else:
            jordan = construction_jordan(case.fr, case.construction, case.which, case.p)
            expected = {"fixed": fixed_dim(jordan), "max_block": max(jordan.blocks)}

            def compute(model: MatrixModel) -> Dict[str, int]:
                lifted = model.lift(model.root_element(case.which))
                blocks = jordan_blocks_of_unipotent(lifted, model.q)
                return {"fixed": len(blocks), "max_block": max(blocks)}

            observed = run_oracle(case.fr, case.construction, case.p, 1, compute, max_dim)
    except (TooLarge, FieldUnavailable) as e:
        return OracleCaseResult(**base, status="skipped", message=str(e))
    except Exception as e:
        logger.error(f"Oracle case {case.case_id} failed: {str(e)}")
        return OracleCaseResult(**base, status="error", message=str(e))
    status = "match" if observed == expected else "mismatch"
    if status == "mismatch":
        logger.warning(f"Oracle mismatch for {case.case_id}: expected {expected}, observed {observed}")
    return OracleCaseResult(**base, status=status, expected=expected, observed=observed)


def cross_check(cases: Sequence[OracleCase], max_dim: int = DEFAULT_MAX_DIM) -> List[OracleCaseResult]:
    """Run every case; mismatches and failures become report rows."""
    return [check_case(case, max_dim) for case in cases]
