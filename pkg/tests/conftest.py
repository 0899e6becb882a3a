import sys
from fractions import Fraction as F

import pytest

from kmbench import measures as M

# exact rationals in traces easily exceed the default int->str digit cap
sys.set_int_max_str_digits(0)

MARKOV = M.markov1(F(1, 2), [[F(3, 4), F(1, 4)], [F(1, 2), F(1, 2)]])
BERN13 = M.bernoulli(F(1, 3))
UNIFORM = M.bernoulli(F(1, 2))
FAMILY3 = M.ModelFamily([M.bernoulli(F(1, 4)), M.bernoulli(F(1, 2)), M.bernoulli(F(3, 4))])
MIXTURE3 = M.mixture(FAMILY3)


@pytest.fixture
def markov():
    return MARKOV


@pytest.fixture
def bern13():
    return BERN13


@pytest.fixture
def uniform():
    return UNIFORM
