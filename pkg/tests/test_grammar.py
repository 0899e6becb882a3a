from fractions import Fraction as F

import pytest

from kmbench import measures as M
from kmbench.grammar import SpecError, parse_any, parse_measure, parse_product, parse_rate, parse_rational


def test_bernoulli_and_markov():
    assert parse_measure("bernoulli(1/3)").mass("1") == F(1, 3)
    m = parse_measure("markov1(1/2; 3/4,1/4,1/2,1/2)")
    assert m.mass("00") == F(3, 8)


def test_mixture_and_atoms():
    m = parse_measure("mixture([bernoulli(1/4), bernoulli(1/2), bernoulli(3/4)]; [1/3, 1/3, 1/3])")
    assert m.mass("1") == F(1, 2)
    uniform_alpha = parse_measure("mixture([bernoulli(1/4), bernoulli(3/4)])")
    assert uniform_alpha.mass("11") == F(5, 16)
    atoms = parse_measure("atoms([0: 1/4, 1/2: 3/4])")
    assert atoms.mass("1") == F(3, 4)


def test_products():
    assert parse_product("interleave(markov1(1/2; 3/4,1/4,1/2,1/2))").mass2("0", "0") == F(3, 8)
    assert parse_product("product(bernoulli(1/2), bernoulli(1/3))").mass2("1", "1") == F(1, 6)
    assert parse_product("noisy_copy(1/2; 1/8)").mass2("1", "0") == F(1, 16)
    assert parse_product("bayes_uniform()").mass2("11", "") == F(1, 3)
    assert parse_product(" bayes( atoms([1/4: 1]) ) ").mass2("1", "") == F(1, 4)


def test_rationals_and_rates():
    assert parse_rational("3/4") == F(3, 4)
    assert parse_rational(2) == 2
    assert parse_rate("identity")(5) == 5
    assert parse_rate("n")(5) == 5
    assert parse_rate("zero")(5) == 0
    assert parse_rate("const(3)")(5) == 3
    assert parse_rate("scaled(1/2)")(5) == 2


@pytest.mark.parametrize(
    "text,col",
    [
        ("bernoulli(1/3", 14),
        ("bernouli(1/3)", 1),
        ("bernoulli(3/2)", 1),
        ("bernoulli(1/3) x", 16),
        ("markov1(1/2; 3/4,1/4,1/2)", 25),
        ("bernoulli(0.5)", 12),
    ],
)
def test_errors_carry_column(text, col):
    with pytest.raises(SpecError) as e:
        parse_any(text)
    assert e.value.pos + 1 == col
    assert f"column {col}" in str(e.value)


def test_kind_mismatch():
    with pytest.raises(SpecError):
        parse_measure("bayes_uniform()")
    with pytest.raises(SpecError):
        parse_product("bernoulli(1/2)")
    with pytest.raises(SpecError):
        parse_measure("mixture([interleave(bernoulli(1/2)), bernoulli(1/2)])")
    with pytest.raises(SpecError):
        parse_rate("sqrt")
    with pytest.raises(SpecError):
        parse_product("bayes(bernoulli(1/3))")


def test_parsed_mixture_is_finite_state():
    m = parse_measure("mixture([bernoulli(1/4), bernoulli(3/4)])")
    assert isinstance(m, M.FiniteStateMeasure)
