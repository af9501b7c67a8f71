# tests/test_expressions.py
import pytest

from core.expressions import (
    ExpressionError, epsilon, evaluate, parse_char_condition, parse_rank_condition, split_relation,
)


@pytest.mark.parametrize("m, n, expected", [
    (0, 0, 1),
    (0, 3, 0),
    (3, 6, 1),
    (2, 5, 0),
    (7, 0, 1),
])
def test_epsilon(m, n, expected):
    assert epsilon(m, n) == expected


def test_evaluate_with_epsilon():
    assert evaluate("2*l**2-3*l+4-e(p,2*l+1)", 3, 7) == 12
    assert evaluate("2*l**2-3*l+4-e(p,2*l+1)", 3, 5) == 13


def test_evaluate_epsilon_in_characteristic_zero():
    # e(0, n) is 1 only for n = 0
    assert evaluate("e(p,l+1)", 3, 0) == 0
    assert evaluate("e(p,l-3)", 3, 0) == 1


def test_evaluate_binom_and_rationals():
    assert evaluate("binom(l+1,3)", 4) == 10
    assert evaluate("(l**3+2*l)/3", 4) == 24
    assert evaluate(17, 4) == 17


def test_evaluate_non_integer():
    with pytest.raises(ExpressionError):
        evaluate("l/2", 3)


def test_parse_error():
    with pytest.raises(ExpressionError):
        evaluate("2*l+", 3)


def test_split_relation():
    assert split_relation("<= binom(l,3)+2") == ("<=", "binom(l,3)+2")
    assert split_relation(">=8*(l-1)**2") == (">=", "8*(l-1)**2")
    assert split_relation(5) == ("=", "5")


def test_char_conditions():
    assert parse_char_condition("p!=2,3").matches(5)
    assert not parse_char_condition("p!=2,3").matches(3)
    assert parse_char_condition("p>=0").matches(0)
    assert parse_char_condition("p>=0").matches(7)
    assert parse_char_condition("p>=5").matches(0)
    assert not parse_char_condition("p>=5").matches(3)
    assert parse_char_condition("p=3").matches(3)
    assert not parse_char_condition("p=3").matches(0)
    assert parse_char_condition("p=3,5").matches(5)


def test_rank_conditions():
    window = parse_rank_condition("4<=l<=13")
    assert window.matches(4) and window.matches(13)
    assert not window.matches(3) and not window.matches(14)
    assert not parse_rank_condition("l>=3").matches(2)
    assert parse_rank_condition("l=4").matches(4)
    assert not parse_rank_condition("l=4").matches(5)


@pytest.mark.parametrize("text", ["q>2", "p<3", "l>"])
def test_invalid_conditions(text):
    with pytest.raises(ExpressionError):
        if text.startswith("l"):
            parse_rank_condition(text)
        else:
            parse_char_condition(text)
