# core/expressions.py
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

from sympy import Function, Integer, Symbol, binomial, sympify
from sympy.core.sympify import SympifyError

from utils.logger import get_logger

logger = get_logger(__name__)

L = Symbol("l", integer=True, positive=True)
P = Symbol("p", integer=True, nonnegative=True)


class ExpressionError(ValueError):
    """Raised when a catalog or table expression cannot be parsed or evaluated."""
    pass


def epsilon(m: int, n: int) -> int:
    """
    Divisibility indicator.

    Args:
        m: Divisor (0 divides only 0)
        n: Dividend

    Returns:
        1 if m divides n, 0 otherwise
    """
    if m == 0:
        return 1 if n == 0 else 0
    return 1 if n % m == 0 else 0


class Eps(Function):
    """Symbolic epsilon, evaluated as soon as both arguments are integers."""

    @classmethod
    def eval(cls, m, n):
        if m.is_Integer and n.is_Integer:
            return Integer(epsilon(int(m), int(n)))
        return None


_NAMESPACE = {"l": L, "p": P, "e": Eps, "binom": binomial}


@lru_cache(maxsize=None)
def parse_expression(text: str):
    """
    Parse an expression in l, p, e(m,n) and binom(n,k).

    Args:
        text: Expression text, e.g. "2*l**2-3*l+4-e(p,2*l+1)"

    Returns:
        sympy expression
    """
    try:
        return sympify(str(text), locals=_NAMESPACE)
    except (SympifyError, SyntaxError, TypeError) as e:
        raise ExpressionError(f"Cannot parse expression '{text}': {str(e)}")


def evaluate(text, rank: int, p: int = 0) -> int:
    """
    Evaluate an expression at a given rank and characteristic.

    Args:
        text: Expression text or integer
        rank: Value substituted for l
        p: Value substituted for p

    Returns:
        Integer value

    Raises:
        ExpressionError: If the value is not an integer
    """
    if isinstance(text, int):
        return text
    value = parse_expression(str(text)).subs({L: rank, P: p})
    if not value.is_Integer:
        raise ExpressionError(f"Expression '{text}' is not an integer at l={rank}, p={p}: {value}")
    return int(value)


_RELATION_RE = re.compile(r"^\s*(<=|>=|=)?\s*(.+?)\s*$")


def split_relation(text) -> Tuple[str, str]:
    """
    Split an optional leading relation from a table expression.

    Args:
        text: e.g. "<= binom(l,3)+2" or "l"

    Returns:
        Tuple (relation, expression) with relation one of '=', '<=', '>='
    """
    match = _RELATION_RE.match(str(text))
    if not match:
        raise ExpressionError(f"Empty table expression: '{text}'")
    return match.group(1) or "=", match.group(2)


@dataclass(frozen=True)
class CharCondition:
    """Characteristic condition such as p>=0, p!=2,3 or p=7."""
    op: str
    values: Tuple[int, ...]
    text: str

    def matches(self, p: int) -> bool:
        if self.op == ">=":
            return p == 0 or p >= self.values[0]
        if self.op == "!=":
            return p not in self.values
        return p in self.values

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class RankCondition:
    """Rank condition such as l>=3, l=4 or 4<=l<=13."""
    low: int
    high: Optional[int]
    text: str

    def matches(self, rank: int) -> bool:
        if rank < self.low:
            return False
        return self.high is None or rank <= self.high

    def __str__(self) -> str:
        return self.text


_CHAR_RE = re.compile(r"^p\s*(>=|!=|==|=)\s*(\d+(?:\s*,\s*\d+)*)$")
_RANK_RE = re.compile(r"^(?:(\d+)\s*<=\s*)?l\s*(>=|<=|==|=)\s*(\d+)$")


@lru_cache(maxsize=None)
def parse_char_condition(text: str) -> CharCondition:
    """
    Parse a characteristic condition.

    Args:
        text: Condition text

    Returns:
        CharCondition
    """
    match = _CHAR_RE.match(str(text).replace(" ", ""))
    if not match:
        raise ExpressionError(f"Invalid characteristic condition: '{text}'")
    op = "=" if match.group(1) in ("=", "==") else match.group(1)
    values = tuple(int(v) for v in match.group(2).split(","))
    return CharCondition(op=op, values=values, text=str(text))


@lru_cache(maxsize=None)
def parse_rank_condition(text: str) -> RankCondition:
    """
    Parse a rank condition.

    Args:
        text: Condition text

    Returns:
        RankCondition
    """
    match = _RANK_RE.match(str(text).replace(" ", ""))
    if not match:
        raise ExpressionError(f"Invalid rank condition: '{text}'")
    lower, op, bound = match.group(1), match.group(2), int(match.group(3))
    if lower is not None:
        if op != "<=":
            raise ExpressionError(f"Invalid rank range: '{text}'")
        return RankCondition(low=int(lower), high=bound, text=str(text))
    if op == ">=":
        return RankCondition(low=bound, high=None, text=str(text))
    if op == "<=":
        return RankCondition(low=1, high=bound, text=str(text))
    return RankCondition(low=bound, high=bound, text=str(text))
