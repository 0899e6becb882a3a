from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kmbench import coder as C
from kmbench import measures as M
from kmbench.coder import Interval

from _oracles import neg_log2_bounds
from conftest import BERN13, MARKOV, MIXTURE3, UNIFORM

MEASURES = {"bernoulli": BERN13, "markov": MARKOV, "mixture": MIXTURE3}
IDENTITY = M.RateFunction.identity()
RATES = {
    "identity": IDENTITY,
    "zero": M.RateFunction.zero(),
    "half": M.RateFunction.scaled(F(1, 2)),
    "double": M.RateFunction.scaled(2),
    "offset": M.RateFunction(lambda n: n + 1, "n+1"),
}
PAIRS = {
    "interleave": M.interleave(MARKOV),
    "independent": M.independent_product(BERN13, MARKOV),
    "noisy": M.noisy_copy(F(1, 3), F(1, 8)),
    "bayes": M.bernoulli_bayes(UNIFORM),
}


def grid_cells(g, nmax):
    for n in range(nmax + 1):
        for x in M.all_strings(n):
            for y in M.all_strings(g(n)):
                yield x, y


def test_examples():
    assert C.interval_of(UNIFORM, "01") == Interval(F(1, 4), F(1, 2))
    assert C.interval_of(BERN13, "1") == Interval(F(2, 3), F(1))
    assert C.encode(BERN13, "1") == "11"
    assert C.decode(BERN13, "11") == "1"
    assert C.decode(BERN13, "1111") == "11"
    assert C.encode(UNIFORM, "0110") == "0110"
    assert C.encode_pair(M.independent_product(UNIFORM, UNIFORM), IDENTITY, "1", "0") == "10"
    assert C.decode_pair(M.independent_product(UNIFORM, UNIFORM), IDENTITY, "10") == ("1", "0")


def test_shortest_codeword():
    assert C.shortest_codeword(Interval(F(0), F(1))) == ""
    assert C.shortest_codeword(Interval(F(1, 3), F(2, 3))) == "011"
    assert C.shortest_codeword(Interval(F(2, 3), F(1))) == "11"
    assert C.dyadic_interval("101") == Interval(F(5, 8), F(6, 8))


@pytest.mark.parametrize("name", MEASURES)
def test_round_trip_and_bounds(name):
    m = MEASURES[name]
    for n in range(9):
        for x in M.all_strings(n):
            p = C.encode(m, x)
            assert C.decode(m, p).startswith(x)
            lo, hi = neg_log2_bounds(m.mass(x))
            assert lo <= len(p) <= hi + 2


@pytest.mark.parametrize("name", MEASURES)
def test_kraft_and_prefix_free(name):
    m = MEASURES[name]
    for n in range(9):
        codes = [C.encode(m, x) for x in M.all_strings(n)]
        assert sum(F(1, 2 ** len(p)) for p in codes) <= 1
        for a in codes:
            for b in codes:
                assert a == b or not b.startswith(a)


def test_codelengths_trace_matches_encode():
    x = "0110100111010"
    lens = C.codelengths(MARKOV, x)
    assert lens == [len(C.encode(MARKOV, x[:n])) for n in range(len(x) + 1)]


def test_decode_monotone():
    progs = [p for n in range(11) for p in M.all_strings(n)]
    out = {p: C.decode(BERN13, p) for p in progs}
    for p in progs:
        if len(p) < 10:
            for b in "01":
                assert out[p + b].startswith(out[p])


def test_decode_max_length():
    assert C.decode(UNIFORM, "0110", max_length=2) == "01"
    assert C.decode(UNIFORM, "", max_length=3) == ""


def test_decode_stops_at_zero_mass():
    m = M.bernoulli(F(0))
    # only 000... has mass; the decoder does not invent forced symbols
    assert C.decode(m, "") == ""
    assert C.decode(m, "", max_length=4) == "0000"


def test_encode_zero_mass_raises():
    with pytest.raises(C.CodingError):
        C.encode(M.bernoulli(F(0)), "1")


@pytest.mark.parametrize("rate", RATES)
@pytest.mark.parametrize("pair", PAIRS)
def test_pair_round_trip_and_bounds(pair, rate):
    pm, g = PAIRS[pair], RATES[rate]
    gc = C.GridCoder(pm, g)
    for x, y in grid_cells(g, 3):
        w = pm.mass2(x, y)
        if w == 0:
            continue
        p = gc.encode_pair(x, y)
        dx, dy = gc.decode_pair(p)
        assert dx.startswith(x) and dy.startswith(y)
        lo, hi = neg_log2_bounds(w)
        assert lo <= len(p) <= hi + 2


@pytest.mark.parametrize("rate", RATES)
def test_pair_kraft_per_level(rate):
    pm, g = PAIRS["interleave"], RATES[rate]
    gc = C.GridCoder(pm, g)
    for n in range(4):
        total = sum(F(1, 2 ** len(gc.encode_pair(x, y))) for x in M.all_strings(n) for y in M.all_strings(g(n)))
        assert total <= 1


def test_pair_cells_partition_unit_interval():
    for g in RATES.values():
        gc = C.GridCoder(PAIRS["interleave"], g)
        for n in range(3):
            ivs = sorted(gc.interval(x, y) for x in M.all_strings(n) for y in M.all_strings(g(n)))
            assert ivs[0].lo == 0 and ivs[-1].hi == 1
            for a, b in zip(ivs, ivs[1:]):
                assert a.hi == b.lo


def test_off_grid_rejected():
    with pytest.raises(C.CodingError):
        C.GridCoder(PAIRS["interleave"], IDENTITY).encode_pair("01", "0")


def test_cond_next_examples():
    assert C.cond_next(PAIRS["bayes"], M.RateFunction.zero(), "", "") == F(1, 2)
    with pytest.raises(C.CodingError, match="insufficient"):
        C.cond_next(PAIRS["bayes"], IDENTITY, "", "")


@pytest.mark.parametrize("rate", ["identity", "zero", "offset"])
@pytest.mark.parametrize("pair", PAIRS)
def test_cond_round_trip(pair, rate):
    pm, g = PAIRS[pair], RATES[rate]
    for n in range(5):
        for x in M.all_strings(n):
            for y in M.all_strings(g(n)):
                try:
                    p = C.encode_cond(pm, g, x, y)
                except C.CodingError:
                    continue
                assert C.decode_cond(pm, g, p, y).startswith(x)


def test_cond_ignores_y_on_independent_products():
    pm = PAIRS["independent"]
    for x in M.all_strings(6):
        for y in ("000000", "101101"):
            assert C.encode_cond(pm, IDENTITY, x, y) == C.encode(BERN13, x)


@pytest.mark.parametrize("pair", ["interleave", "noisy", "independent"])
def test_conditional_subadditivity(pair):
    pm = PAIRS[pair]
    my = pm.marginal_y()
    worst = max(
        len(C.encode_pair(pm, IDENTITY, x, y)) - len(C.encode_cond(pm, IDENTITY, x, y)) - len(C.encode(my, y))
        for x, y in grid_cells(IDENTITY, 5)
        if pm.mass2(x, y)
    )
    assert worst <= 4


def test_cond_decoder_waits_for_condition():
    pm = PAIRS["noisy"]
    p = C.encode_cond(pm, IDENTITY, "0110", "0110")
    # identity rate: decoding x_i needs y_i, so two condition bits cap the output at two symbols
    assert len(C.decode_cond(pm, IDENTITY, p, "01")) <= 2
    assert C.decode_cond(pm, IDENTITY, p, "0110").startswith("0110")


@settings(max_examples=60, deadline=None)
@given(st.text("01", max_size=12), st.text("01", max_size=4))
def test_decode_monotone_random(p, ext):
    assert C.decode(MARKOV, p + ext).startswith(C.decode(MARKOV, p))


@settings(max_examples=60, deadline=None)
@given(st.text("01", max_size=8), st.text("01", max_size=3), st.text("01", max_size=6), st.text("01", max_size=3))
def test_decode_cond_jointly_monotone_random(p, pe, y, ye):
    pm = PAIRS["interleave"]
    a = C.decode_cond(pm, IDENTITY, p, y)
    b = C.decode_cond(pm, IDENTITY, p + pe, y + ye)
    assert b.startswith(a)
